"""
Input schemas for the command line.

Every JSON file the CLI reads is validated here before any computation.
Numbers travel as exact strings (``"3"``, ``"-1/2"``); conversion into ring
elements happens in the ``to_*`` methods once the model is known.
"""

from fractions import Fraction
from typing import Any, Dict, List, Literal, Optional, Type, TypeVar

from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

from algebra.coefficients import CoefficientModel, parse_model
from algebra.series import BasisTag, TruncatedSeries
from algebra.weights import TailDescriptor, Weight, WeightMatrix
from utils.error_handling import AmiceKitError, SchemaError

SpecT = TypeVar('SpecT', bound=BaseModel)


def parse_rational(value: Any) -> str:
    """Accept ``"p/q"``, integer strings and plain integers; return the normalised string."""
    if isinstance(value, bool):
        raise ValueError("booleans are not numbers")
    if isinstance(value, int):
        return str(value)
    if not isinstance(value, str):
        raise ValueError("expected an exact rational string such as '3' or '-1/2'")
    try:
        return str(Fraction(value.strip()))
    except (ValueError, ZeroDivisionError):
        raise ValueError(f"'{value}' is not an exact rational")


class _Spec(BaseModel):
    model_config = ConfigDict(extra='forbid')


class WeightSpec(_Spec):
    kind: Literal['geometric', 'table'] = 'geometric'
    ratio: str
    prefix: List[str] = Field(default_factory=list)

    normalise_ratio = field_validator('ratio', mode='before')(parse_rational)

    @field_validator('prefix', mode='before')
    @classmethod
    def normalise_prefix(cls, value):
        return [parse_rational(v) for v in value]

    def to_weight(self) -> Weight:
        if self.kind == 'geometric':
            return Weight.geometric(Fraction(self.ratio))
        return Weight.table([Fraction(v) for v in self.prefix], Fraction(self.ratio))


class WeightMatrixSpec(_Spec):
    na: bool = False
    rows: List[WeightSpec] = Field(default_factory=list)
    preset: Optional[Literal['unit_disk', 'whole_line']] = None
    count: Optional[int] = Field(default=None, ge=1)

    @model_validator(mode='after')
    def rows_or_preset(self):
        if self.preset is None and not self.rows:
            raise ValueError("give either 'rows' or a 'preset' with 'count'")
        if self.preset is not None and (self.rows or self.count is None):
            raise ValueError("a preset takes 'count' and no explicit 'rows'")
        return self

    def to_matrix(self) -> WeightMatrix:
        if self.preset == 'unit_disk':
            return WeightMatrix.unit_disk(self.count, self.na)
        if self.preset == 'whole_line':
            return WeightMatrix.whole_line(self.count, self.na)
        return WeightMatrix(tuple(row.to_weight() for row in self.rows), self.na)


class TailSpec(_Spec):
    model_config = ConfigDict(extra='forbid', populate_by_name=True)

    start: int = Field(ge=0)
    bound: str = Field(alias='C')
    ratio: str = Field(alias='r')
    degree: int = Field(default=0, ge=0)
    exact: bool = False

    normalise_numbers = field_validator('bound', 'ratio', mode='before')(parse_rational)

    def to_tail(self) -> TailDescriptor:
        return TailDescriptor(self.start, Fraction(self.bound), Fraction(self.ratio),
                              self.degree, self.exact)


class _ModelSpec(_Spec):
    model: str

    @field_validator('model')
    @classmethod
    def known_model(cls, value):
        try:
            parse_model(value)
        except AmiceKitError as e:
            raise ValueError(e.message)
        return value

    def coefficient_model(self) -> CoefficientModel:
        return parse_model(self.model)


class SeriesSpec(_ModelSpec):
    basis: BasisTag = BasisTag.MONOMIAL
    coeffs: List[str] = Field(default_factory=list)
    order: Optional[int] = Field(default=None, ge=0)
    tail: Optional[TailSpec] = None

    @field_validator('coeffs', mode='before')
    @classmethod
    def normalise_coeffs(cls, value):
        return [parse_rational(v) for v in value]

    @model_validator(mode='after')
    def tail_needs_order(self):
        if self.tail is not None and self.order is None:
            raise ValueError("a tail certificate needs a truncation 'order'")
        return self

    def to_series(self) -> TruncatedSeries:
        model = self.coefficient_model()
        coeffs = tuple(model.parse(c) for c in self.coeffs)
        tail = self.tail.to_tail() if self.tail is not None else None
        return TruncatedSeries(model, self.basis, coeffs, self.order, tail)


class TableSpec(_ModelSpec):
    values: List[str] = Field(min_length=1)

    @field_validator('values', mode='before')
    @classmethod
    def normalise_values(cls, value):
        return [parse_rational(v) for v in value]

    def ring_values(self) -> list:
        model = self.coefficient_model()
        return [model.parse(v) for v in self.values]


class MomentsSpec(_ModelSpec):
    moments: List[str] = Field(default_factory=list)
    tail: Optional[TailSpec] = None
    finite_support: bool = False

    @field_validator('moments', mode='before')
    @classmethod
    def normalise_moments(cls, value):
        return [parse_rational(v) for v in value]

    def ring_values(self) -> list:
        model = self.coefficient_model()
        return [model.parse(v) for v in self.moments]


def _location(loc) -> str:
    return '.'.join(str(part) for part in loc) or '<root>'


def load_spec(spec_cls: Type[SpecT], payload: Dict[str, Any]) -> SpecT:
    """Validate ``payload``; failures become ``SchemaError`` naming the dotted field path."""
    try:
        return spec_cls.model_validate(payload)
    except ValidationError as e:
        first = e.errors()[0]
        where = _location(first.get('loc', ()))
        raise SchemaError(f"{where}: {first.get('msg', 'invalid value')}", field=where)
