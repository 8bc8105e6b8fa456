"""
Coefficient rings with exact norms.

Five models are provided: integers with the trivial norm (``Z-trivial``),
rationals with the supremum of the trivial and all p-adic norms (``Q-na``),
rationals with one p-adic norm (``Qp:<p>``), rationals with the absolute value
(``Q-arch``) and p-adic integers at fixed relative precision (``Zp:<p>:<prec>``).
Every norm lands in ``NormValue``: an exact nonnegative rational or +inf.
"""

import logging
from abc import ABC, abstractmethod
from dataclasses import dataclass
from fractions import Fraction
from functools import total_ordering
from itertools import product
from typing import Iterable, List, Sequence, Union

from sympy import factorint, isprime, multiplicity

from models.core import AxiomReport, AxiomViolation
from utils.error_handling import DomainError, PrecisionError

logger = logging.getLogger(__name__)


@total_ordering
class NormValue:
    """Exact nonnegative rational or +inf. ``0 * inf`` is 0."""

    __slots__ = ('value', 'infinite')

    def __init__(self, value: Union[int, Fraction] = 0, infinite: bool = False):
        if infinite:
            value = Fraction(0)
        else:
            value = Fraction(value)
            if value < 0:
                raise DomainError(f"norm values are nonnegative, got {value}")
        object.__setattr__(self, 'value', value)
        object.__setattr__(self, 'infinite', bool(infinite))

    def __setattr__(self, name, value):
        raise AttributeError("NormValue is immutable")

    @classmethod
    def inf(cls) -> 'NormValue':
        return cls(infinite=True)

    @classmethod
    def zero(cls) -> 'NormValue':
        return cls(0)

    @classmethod
    def coerce(cls, other) -> 'NormValue':
        if isinstance(other, NormValue):
            return other
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return cls(other)
        raise TypeError(f"cannot compare NormValue with {type(other).__name__}")

    @property
    def is_finite(self) -> bool:
        return not self.infinite

    def __add__(self, other) -> 'NormValue':
        other = NormValue.coerce(other)
        if self.infinite or other.infinite:
            return NormValue.inf()
        return NormValue(self.value + other.value)

    __radd__ = __add__

    def __mul__(self, other) -> 'NormValue':
        other = NormValue.coerce(other)
        if (not self.infinite and self.value == 0) or (not other.infinite and other.value == 0):
            return NormValue(0)
        if self.infinite or other.infinite:
            return NormValue.inf()
        return NormValue(self.value * other.value)

    __rmul__ = __mul__

    def __pow__(self, exponent: int) -> 'NormValue':
        if exponent < 0:
            raise DomainError("negative powers of norm values are not defined")
        if exponent == 0:
            return NormValue(1)
        if self.infinite:
            return NormValue.inf()
        return NormValue(self.value ** exponent)

    def __eq__(self, other) -> bool:
        try:
            other = NormValue.coerce(other)
        except TypeError:
            return NotImplemented
        return self.infinite == other.infinite and self.value == other.value

    def __lt__(self, other) -> bool:
        other = NormValue.coerce(other)
        if self.infinite:
            return False
        if other.infinite:
            return True
        return self.value < other.value

    def __hash__(self):
        return hash((self.value, self.infinite))

    def __str__(self) -> str:
        return 'inf' if self.infinite else str(self.value)

    def __repr__(self) -> str:
        return f"NormValue({self})"


def sup_norm(values: Iterable[NormValue]) -> NormValue:
    """Supremum of norm values; the empty supremum is 0."""
    result = NormValue(0)
    for value in values:
        if value > result:
            result = value
    return result


def _valuation(n: int, p: int) -> int:
    return int(multiplicity(p, abs(n)))


def fraction_valuation(q: Union[int, Fraction], p: int) -> int:
    """p-adic valuation of a nonzero rational."""
    q = Fraction(q)
    if q == 0:
        raise DomainError("valuation of 0 is infinite")
    return _valuation(q.numerator, p) - _valuation(q.denominator, p)


# p-adic elements ----------------------------------------------------------------

@dataclass(frozen=True)
class PadicElement:
    """
    ``p**valuation * unit`` with ``unit`` known modulo ``p**precision``.

    ``precision`` is relative. The zero marker has ``unit == 0`` and
    ``precision == 0``; its ``valuation`` is the absolute precision to which
    the element is known to vanish.
    """
    p: int
    valuation: int
    unit: int
    precision: int

    def __post_init__(self):
        if self.unit == 0:
            if self.precision != 0:
                raise DomainError("the p-adic zero marker carries no relative precision")
        else:
            if self.precision < 1:
                raise DomainError("nonzero p-adic elements need relative precision >= 1")
            if self.unit % self.p == 0:
                raise DomainError(f"p-adic unit {self.unit} is divisible by {self.p}")
            if not 0 < self.unit < self.p ** self.precision:
                raise DomainError("p-adic unit must be reduced modulo p**precision")

    @property
    def absolute_precision(self) -> int:
        return self.valuation + self.precision

    def is_zero(self) -> bool:
        return self.unit == 0

    @classmethod
    def zero_marker(cls, p: int, absolute_precision: int) -> 'PadicElement':
        return cls(p, absolute_precision, 0, 0)

    @classmethod
    def normalize(cls, p: int, shift: int, mantissa: int, absolute_precision: int) -> 'PadicElement':
        """Element ``p**shift * mantissa`` known modulo ``p**absolute_precision``."""
        room = absolute_precision - shift
        if room <= 0:
            return cls.zero_marker(p, absolute_precision)
        mantissa %= p ** room
        if mantissa == 0:
            return cls.zero_marker(p, absolute_precision)
        v = _valuation(mantissa, p)
        relative = room - v
        return cls(p, shift + v, (mantissa // p ** v) % p ** relative, relative)

    @classmethod
    def from_int(cls, n: int, p: int, precision: int) -> 'PadicElement':
        if n == 0:
            return cls.zero_marker(p, precision)
        v = _valuation(n, p)
        return cls(p, v, (n // p ** v) % p ** precision, precision)

    @classmethod
    def from_fraction(cls, q: Union[int, Fraction], p: int, precision: int) -> 'PadicElement':
        q = Fraction(q)
        if q.denominator == 1:
            return cls.from_int(q.numerator, p, precision)
        if q == 0:
            return cls.zero_marker(p, precision)
        vn = _valuation(q.numerator, p)
        vd = _valuation(q.denominator, p)
        modulus = p ** precision
        num_unit = q.numerator // p ** vn
        den_unit = q.denominator // p ** vd
        unit = (num_unit * pow(den_unit, -1, modulus)) % modulus
        return cls(p, vn - vd, unit, precision)

    def _check_prime(self, other: 'PadicElement'):
        if not isinstance(other, PadicElement) or other.p != self.p:
            raise DomainError(f"cannot combine a {self.p}-adic element with {other!r}")

    def __add__(self, other: 'PadicElement') -> 'PadicElement':
        self._check_prime(other)
        absolute = min(self.absolute_precision, other.absolute_precision)
        shift = min(self.valuation, other.valuation)
        mantissa = (self.unit * self.p ** (self.valuation - shift)
                    + other.unit * self.p ** (other.valuation - shift))
        return PadicElement.normalize(self.p, shift, mantissa, absolute)

    def __neg__(self) -> 'PadicElement':
        if self.is_zero():
            return self
        return PadicElement(self.p, self.valuation, (-self.unit) % self.p ** self.precision,
                            self.precision)

    def __sub__(self, other: 'PadicElement') -> 'PadicElement':
        self._check_prime(other)
        return self + (-other)

    def __mul__(self, other: 'PadicElement') -> 'PadicElement':
        self._check_prime(other)
        valuation = self.valuation + other.valuation
        if self.is_zero() or other.is_zero():
            return PadicElement.zero_marker(self.p, valuation)
        precision = min(self.precision, other.precision)
        modulus = self.p ** precision
        return PadicElement(self.p, valuation, (self.unit * other.unit) % modulus, precision)

    def inverse(self) -> 'PadicElement':
        if self.is_zero():
            raise PrecisionError(
                f"cannot invert an element known only to vanish modulo {self.p}^{self.valuation}",
                achievable_precision=self.valuation)
        modulus = self.p ** self.precision
        return PadicElement(self.p, -self.valuation, pow(self.unit, -1, modulus), self.precision)

    def __truediv__(self, other: 'PadicElement') -> 'PadicElement':
        self._check_prime(other)
        return self * other.inverse()

    def with_absolute_precision(self, absolute: int) -> 'PadicElement':
        """Reduce to at most the given absolute precision."""
        if absolute >= self.absolute_precision:
            return self
        if self.is_zero():
            return PadicElement.zero_marker(self.p, absolute)
        return PadicElement.normalize(self.p, self.valuation, self.unit, absolute)

    def agrees_with(self, other: 'PadicElement') -> bool:
        """True when the two elements are congruent at their common precision."""
        return (self - other).is_zero()

    def representative(self) -> Fraction:
        """The rational ``p**valuation * unit``."""
        if self.is_zero():
            return Fraction(0)
        return Fraction(self.p) ** self.valuation * self.unit

    def __str__(self) -> str:
        big_o = f"O({self.p}^{self.absolute_precision})"
        if self.is_zero():
            return big_o
        return f"{self.representative()} + {big_o}"


RingElement = Union[int, Fraction, PadicElement]


# coefficient models ------------------------------------------------------------

class CoefficientModel(ABC):
    """A coefficient ring with its norm and archimedean flag."""

    @property
    @abstractmethod
    def name(self) -> str:
        """Identifier used in configuration and JSON (e.g. ``Qp:3``)."""

    @property
    def is_nonarchimedean(self) -> bool:
        return True

    @abstractmethod
    def coerce(self, x) -> RingElement:
        """Return ``x`` as an element of this carrier or raise ``DomainError``."""

    @abstractmethod
    def norm(self, x) -> NormValue:
        pass

    def contains(self, x) -> bool:
        try:
            self.coerce(x)
        except DomainError:
            return False
        return True

    def zero(self) -> RingElement:
        return self.from_int(0)

    def one(self) -> RingElement:
        return self.from_int(1)

    def from_int(self, n: int) -> RingElement:
        return self.coerce(n)

    def from_fraction(self, q: Union[int, Fraction]) -> RingElement:
        return self.coerce(Fraction(q))

    def add(self, x, y) -> RingElement:
        return self.coerce(x) + self.coerce(y)

    def sub(self, x, y) -> RingElement:
        return self.coerce(x) - self.coerce(y)

    def mul(self, x, y) -> RingElement:
        return self.coerce(x) * self.coerce(y)

    def neg(self, x) -> RingElement:
        return -self.coerce(x)

    def is_zero(self, x) -> bool:
        return self.coerce(x) == 0

    def eq(self, x, y) -> bool:
        return self.coerce(x) == self.coerce(y)

    def sum(self, values: Iterable) -> RingElement:
        total = self.zero()
        for value in values:
            total = self.add(total, value)
        return total

    def parse(self, text: str) -> RingElement:
        try:
            value = Fraction(str(text).strip())
        except (ValueError, ZeroDivisionError):
            raise DomainError(f"'{text}' is not an exact rational", field='value')
        return self.from_fraction(value)

    def format(self, x) -> str:
        return str(self.coerce(x))

    def __str__(self) -> str:
        return self.name


def _rational(x) -> Fraction:
    if isinstance(x, bool) or not isinstance(x, (int, Fraction)):
        raise DomainError(f"{x!r} is not an exact rational")
    return Fraction(x)


@dataclass(frozen=True)
class TrivialIntegers(CoefficientModel):
    """The integers with the trivial norm."""

    @property
    def name(self) -> str:
        return 'Z-trivial'

    def coerce(self, x) -> int:
        if isinstance(x, Fraction) and x.denominator == 1:
            return x.numerator
        if isinstance(x, bool) or not isinstance(x, int):
            raise DomainError(f"{x!r} is not an element of {self.name}")
        return x

    def norm(self, x) -> NormValue:
        return NormValue(0 if self.coerce(x) == 0 else 1)


@dataclass(frozen=True)
class SupRationals(CoefficientModel):
    """Rationals normed by the supremum of the trivial norm and every p-adic norm."""

    @property
    def name(self) -> str:
        return 'Q-na'

    def coerce(self, x) -> Fraction:
        return _rational(x)

    def norm(self, x) -> NormValue:
        x = self.coerce(x)
        if x == 0:
            return NormValue(0)
        # primes dividing the numerator give norms below 1 and never win
        best = Fraction(1)
        for prime, exponent in factorint(x.denominator).items():
            best = max(best, Fraction(prime) ** exponent)
        return NormValue(best)


@dataclass(frozen=True)
class PAdicRationals(CoefficientModel):
    """Rationals with the p-adic norm ``p**(-v_p(x))``."""
    p: int

    def __post_init__(self):
        if not isprime(self.p):
            raise DomainError(f"{self.p} is not prime", field='p')

    @property
    def name(self) -> str:
        return f'Qp:{self.p}'

    def coerce(self, x) -> Fraction:
        return _rational(x)

    def norm(self, x) -> NormValue:
        x = self.coerce(x)
        if x == 0:
            return NormValue(0)
        return NormValue(Fraction(self.p) ** -fraction_valuation(x, self.p))


@dataclass(frozen=True)
class ArchimedeanRationals(CoefficientModel):
    """Rationals with the absolute value."""

    @property
    def name(self) -> str:
        return 'Q-arch'

    @property
    def is_nonarchimedean(self) -> bool:
        return False

    def coerce(self, x) -> Fraction:
        return _rational(x)

    def norm(self, x) -> NormValue:
        return NormValue(abs(self.coerce(x)))


@dataclass(frozen=True)
class TruncatedPAdicIntegers(CoefficientModel):
    """p-adic integers carried at a fixed relative precision."""
    p: int
    precision: int

    def __post_init__(self):
        if not isprime(self.p):
            raise DomainError(f"{self.p} is not prime", field='p')
        if self.precision < 1:
            raise DomainError("p-adic precision must be positive", field='precision')

    @property
    def name(self) -> str:
        return f'Zp:{self.p}:{self.precision}'

    def coerce(self, x) -> PadicElement:
        if isinstance(x, PadicElement):
            if x.p != self.p:
                raise DomainError(f"{x.p}-adic element is not in {self.name}")
            if not x.is_zero() and x.valuation < 0:
                raise DomainError(f"{x} has negative valuation, not in {self.name}")
            return x
        if isinstance(x, (int, Fraction)) and not isinstance(x, bool):
            return self.from_fraction(x)
        raise DomainError(f"{x!r} is not an element of {self.name}")

    def from_int(self, n: int) -> PadicElement:
        return PadicElement.from_int(n, self.p, self.precision)

    def from_fraction(self, q) -> PadicElement:
        q = Fraction(q)
        if q != 0 and fraction_valuation(q, self.p) < 0:
            raise DomainError(f"{q} is not a {self.p}-adic integer")
        return PadicElement.from_fraction(q, self.p, self.precision)

    def is_zero(self, x) -> bool:
        return self.coerce(x).is_zero()

    def eq(self, x, y) -> bool:
        return self.coerce(x).agrees_with(self.coerce(y))

    def norm(self, x) -> NormValue:
        x = self.coerce(x)
        if x.is_zero():
            return NormValue(0)
        return NormValue(Fraction(self.p) ** -x.valuation)


def parse_model(text: str) -> CoefficientModel:
    """Build a model from its identifier string."""
    text = str(text).strip()
    simple = {
        'Z-trivial': TrivialIntegers,
        'Q-na': SupRationals,
        'Q-arch': ArchimedeanRationals,
    }
    if text in simple:
        return simple[text]()

    parts = text.split(':')
    try:
        if parts[0] == 'Qp' and len(parts) == 2:
            return PAdicRationals(int(parts[1]))
        if parts[0] == 'Zp' and len(parts) == 3:
            return TruncatedPAdicIntegers(int(parts[1]), int(parts[2]))
    except ValueError:
        pass
    raise DomainError(f"unknown coefficient model '{text}'", field='model')


def norm(model: CoefficientModel, x) -> NormValue:
    """Norm of ``x`` in ``model``; carrier mismatch raises ``DomainError``."""
    return model.norm(x)


# binomial coefficients ----------------------------------------------------------

def exact_binomial(a: Union[int, Fraction], n: int) -> Fraction:
    """``a(a-1)...(a-n+1)/n!`` as an exact rational."""
    result = Fraction(1)
    for i in range(n):
        result = result * (Fraction(a) - i) / (i + 1)
    return result


def binomial_coefficients(model: CoefficientModel, a, count: int) -> List[RingElement]:
    """
    ``binom(a, n)`` for ``n < count`` in ``model``.

    Exact for integer or rational ``a``. For a ``PadicElement`` the falling
    product is divided by ``n!`` at working precision; a coefficient known to no
    positive absolute precision raises ``PrecisionError`` naming its index.
    """
    if not isinstance(a, PadicElement):
        values = []
        current = Fraction(1)
        for n in range(count):
            values.append(model.from_fraction(current))
            current = current * (Fraction(a) - n) / (n + 1)
        return values

    if not isinstance(model, TruncatedPAdicIntegers):
        raise DomainError(f"p-adic exponent is not an element of {model.name}")
    a = model.coerce(a)
    p = a.p
    guard = a.absolute_precision + count + 1
    values = [model.one()]
    numerator = PadicElement.from_int(1, p, guard)
    factorial = 1
    for n in range(1, count):
        numerator = numerator * (a - PadicElement.from_int(n - 1, p, guard))
        factorial *= n
        coefficient = numerator / PadicElement.from_int(factorial, p, guard)
        if coefficient.absolute_precision <= 0 or (
                not coefficient.is_zero() and coefficient.valuation < 0):
            raise PrecisionError(
                f"binom(a, {n}) is not determined at the working precision of {model.name}",
                index=n)
        values.append(coefficient)
    return values


# ring morphisms -----------------------------------------------------------------

MORPHISM_KINDS = ('IntToZp', 'QnaToQp', 'IntToQ', 'Identity')


@dataclass(frozen=True)
class RingMorphism:
    """A canonical contracting morphism between two coefficient models."""
    source: CoefficientModel
    target: CoefficientModel
    kind: str

    def __post_init__(self):
        expected = {
            'IntToZp': (TrivialIntegers, TruncatedPAdicIntegers),
            'QnaToQp': (SupRationals, PAdicRationals),
            'IntToQ': (TrivialIntegers, SupRationals),
        }
        if self.kind == 'Identity':
            if self.source != self.target:
                raise DomainError("identity morphism needs equal source and target")
            return
        if self.kind not in expected:
            raise DomainError(f"unknown morphism kind '{self.kind}'", field='kind')
        source_type, target_type = expected[self.kind]
        if not isinstance(self.source, source_type) or not isinstance(self.target, target_type):
            raise DomainError(
                f"{self.kind} maps {source_type.__name__} to {target_type.__name__}, "
                f"got {self.source.name} -> {self.target.name}")

    @classmethod
    def int_to_zp(cls, p: int, precision: int) -> 'RingMorphism':
        return cls(TrivialIntegers(), TruncatedPAdicIntegers(p, precision), 'IntToZp')

    @classmethod
    def qna_to_qp(cls, p: int) -> 'RingMorphism':
        return cls(SupRationals(), PAdicRationals(p), 'QnaToQp')

    @classmethod
    def int_to_q(cls) -> 'RingMorphism':
        return cls(TrivialIntegers(), SupRationals(), 'IntToQ')

    @classmethod
    def identity(cls, model: CoefficientModel) -> 'RingMorphism':
        return cls(model, model, 'Identity')

    def apply(self, x) -> RingElement:
        x = self.source.coerce(x)
        if self.kind == 'Identity':
            return x
        return self.target.from_fraction(Fraction(x))

    def __str__(self) -> str:
        return f"{self.kind}({self.source.name} -> {self.target.name})"


def parse_morphism(text: str) -> RingMorphism:
    """``IntToZp:<p>:<prec>``, ``QnaToQp:<p>``, ``IntToQ`` or ``Identity:<model>``."""
    parts = str(text).strip().split(':')
    try:
        if parts[0] == 'IntToZp' and len(parts) == 3:
            return RingMorphism.int_to_zp(int(parts[1]), int(parts[2]))
        if parts[0] == 'QnaToQp' and len(parts) == 2:
            return RingMorphism.qna_to_qp(int(parts[1]))
        if parts[0] == 'IntToQ' and len(parts) == 1:
            return RingMorphism.int_to_q()
        if parts[0] == 'Identity' and len(parts) >= 2:
            return RingMorphism.identity(parse_model(':'.join(parts[1:])))
    except ValueError:
        pass
    raise DomainError(f"unknown morphism '{text}'", field='morphism')


def apply_morphism(m: RingMorphism, x) -> RingElement:
    return m.apply(x)


# axiom checks -------------------------------------------------------------------

def check_ring_axioms(model: CoefficientModel, samples: Sequence) -> AxiomReport:
    """Check the norm axioms of ``model`` on all samples and sample pairs."""
    if not samples:
        raise DomainError("axiom check needs at least one sample")
    elements = [model.coerce(x) for x in samples]
    report = AxiomReport(model=model.name, sample_count=len(elements))

    one_norm = model.norm(model.one())
    if one_norm > 1:
        report.violations.append(AxiomViolation('unit_norm', (model.format(model.one()),),
                                                f"norm(1) = {one_norm}"))

    for x in elements:
        zero_norm = model.norm(x) == 0
        if zero_norm != model.is_zero(x):
            report.violations.append(AxiomViolation('definiteness', (model.format(x),),
                                                    f"norm = {model.norm(x)}"))

    multiplicative = isinstance(model, PAdicRationals)
    if not model.is_nonarchimedean:
        report.skipped.append('ultrametric')
    if not multiplicative:
        report.skipped.append('multiplicativity')

    for x, y in product(elements, repeat=2):
        nx, ny = model.norm(x), model.norm(y)
        pair = (model.format(x), model.format(y))
        n_sum = model.norm(model.add(x, y))
        n_prod = model.norm(model.mul(x, y))
        if n_sum > nx + ny:
            report.violations.append(AxiomViolation('triangle', pair, f"{n_sum} > {nx + ny}"))
        if model.is_nonarchimedean and n_sum > max(nx, ny):
            report.violations.append(AxiomViolation('ultrametric', pair,
                                                    f"{n_sum} > {max(nx, ny)}"))
        if n_prod > nx * ny:
            report.violations.append(AxiomViolation('submultiplicativity', pair,
                                                    f"{n_prod} > {nx * ny}"))
        if multiplicative and n_prod != nx * ny:
            report.violations.append(AxiomViolation('multiplicativity', pair,
                                                    f"{n_prod} != {nx * ny}"))

    if report.violations:
        logger.warning(f"{len(report.violations)} axiom violations in {model.name}")
    return report


def check_morphism_contracting(m: RingMorphism, samples: Sequence) -> AxiomReport:
    """Check unit, additivity, multiplicativity and contraction of ``m`` on samples."""
    if not samples:
        raise DomainError("morphism check needs at least one sample")
    elements = [m.source.coerce(x) for x in samples]
    report = AxiomReport(model=str(m), sample_count=len(elements))
    target = m.target

    if not target.eq(m.apply(m.source.one()), target.one()):
        report.violations.append(AxiomViolation('unit', ('1',), 'apply(1) != 1'))
    for x in elements:
        if m.target.norm(m.apply(x)) > m.source.norm(x):
            report.violations.append(AxiomViolation('contracting', (m.source.format(x),),
                                                    'norm increased'))
    for x, y in product(elements, repeat=2):
        pair = (m.source.format(x), m.source.format(y))
        if not target.eq(m.apply(m.source.add(x, y)), target.add(m.apply(x), m.apply(y))):
            report.violations.append(AxiomViolation('additive', pair, 'apply(x+y) mismatch'))
        if not target.eq(m.apply(m.source.mul(x, y)), target.mul(m.apply(x), m.apply(y))):
            report.violations.append(AxiomViolation('multiplicative', pair,
                                                    'apply(xy) mismatch'))
    return report
