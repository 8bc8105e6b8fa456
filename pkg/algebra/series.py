"""
Truncated series in four tagged bases.

A ``TruncatedSeries`` is either an exact polynomial (``order is None``, finite
support) or a truncation whose coefficients are valid for indices below
``order``, optionally with a tail certificate for the rest. Arithmetic never
reads past a valid index and every result records its own valid order.
"""

import logging
from dataclasses import dataclass
from enum import Enum
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from algebra.coefficients import CoefficientModel, NormValue, RingElement, TrivialIntegers, sup_norm
from algebra.weights import TailDescriptor, Weight, weighted_l1_norm, weighted_linf_norm
from models.core import BoundReport
from utils.error_handling import CertificateError, DomainError, InsufficientDataError

logger = logging.getLogger(__name__)


class BasisTag(Enum):
    """Basis of a series: ``s**n``, ``binom(x, n)``, ``(1+s)**n`` or the indicator of ``{n}``."""
    MONOMIAL = 'monomial'
    MAHLER = 'mahler'
    GROUPLIKE = 'grouplike'
    INDICATOR = 'indicator'

    @property
    def side(self) -> str:
        """``series`` for power series bases, ``functions`` for bases of functions on N."""
        if self in (BasisTag.MONOMIAL, BasisTag.GROUPLIKE):
            return 'series'
        return 'functions'


def _min_order(*orders: Optional[int]) -> Optional[int]:
    finite = [order for order in orders if order is not None]
    return min(finite) if finite else None


@dataclass(frozen=True)
class TruncatedSeries:
    model: CoefficientModel
    basis: BasisTag
    coeffs: Tuple[RingElement, ...]
    order: Optional[int] = None
    tail: Optional[TailDescriptor] = None

    def __post_init__(self):
        coeffs = [self.model.coerce(c) for c in self.coeffs]
        if self.order is None:
            if self.tail is not None:
                raise DomainError("a polynomial carries no tail certificate", field='tail')
            while coeffs and self.model.is_zero(coeffs[-1]):
                coeffs.pop()
        else:
            if self.order < 0:
                raise DomainError("truncation order must be nonnegative", field='order')
            if len(coeffs) > self.order:
                coeffs = coeffs[:self.order]
            coeffs.extend(self.model.zero() for _ in range(self.order - len(coeffs)))
            if self.tail is not None and self.tail.start > self.order:
                raise DomainError(
                    f"tail starts at {self.tail.start}, beyond truncation order {self.order}",
                    field='tail')
        object.__setattr__(self, 'coeffs', tuple(coeffs))

    # constructors

    @classmethod
    def polynomial(cls, model: CoefficientModel, coeffs: Sequence,
                   basis: BasisTag = BasisTag.MONOMIAL) -> 'TruncatedSeries':
        return cls(model, basis, tuple(coeffs))

    @classmethod
    def truncated(cls, model: CoefficientModel, coeffs: Sequence, order: Optional[int] = None,
                  tail: Optional[TailDescriptor] = None,
                  basis: BasisTag = BasisTag.MONOMIAL) -> 'TruncatedSeries':
        return cls(model, basis, tuple(coeffs), len(coeffs) if order is None else order, tail)

    @classmethod
    def monomial(cls, model: CoefficientModel, n: int,
                 basis: BasisTag = BasisTag.MONOMIAL) -> 'TruncatedSeries':
        """The n-th basis vector of ``basis``."""
        return cls(model, basis, tuple([model.zero()] * n + [model.one()]))

    @classmethod
    def zero(cls, model: CoefficientModel, basis: BasisTag = BasisTag.MONOMIAL) -> 'TruncatedSeries':
        return cls(model, basis, ())

    @classmethod
    def one(cls, model: CoefficientModel, basis: BasisTag = BasisTag.MONOMIAL) -> 'TruncatedSeries':
        if basis is BasisTag.INDICATOR:
            raise DomainError("the constant 1 has infinite support in the indicator basis")
        return cls.monomial(model, 0, basis)

    # inspection

    @property
    def is_polynomial(self) -> bool:
        return self.order is None

    @property
    def degree(self) -> int:
        """Degree of a polynomial; -1 for zero."""
        if not self.is_polynomial:
            raise DomainError("a truncated series has no degree")
        return len(self.coeffs) - 1

    def coefficient(self, n: int) -> RingElement:
        if n < len(self.coeffs):
            return self.coeffs[n]
        if self.order is None:
            return self.model.zero()
        raise InsufficientDataError(f"coefficient {n} lies beyond truncation order {self.order}")

    def coefficients_below(self, n: int) -> List[RingElement]:
        return [self.coefficient(k) for k in range(n)]

    def valid_below(self, n: int) -> bool:
        return self.order is None or n <= self.order

    def agrees_with(self, other: 'TruncatedSeries', order: Optional[int] = None) -> bool:
        """Coefficientwise equality on the common valid range (and below ``order``)."""
        if self.model != other.model or self.basis != other.basis:
            return False
        limit = _min_order(self.order, other.order, order)
        if limit is None:
            limit = max(len(self.coeffs), len(other.coeffs))
        return all(self.model.eq(self.coefficient(n), other.coefficient(n)) for n in range(limit))

    def truncate(self, order: int) -> 'TruncatedSeries':
        if self.order is None and len(self.coeffs) <= order:
            return self
        tail = self.tail if self.tail is not None and self.tail.start <= order else None
        return TruncatedSeries(self.model, self.basis, self.coeffs[:order],
                               min(order, self.order if self.order is not None else order), tail)

    def as_polynomial(self) -> 'TruncatedSeries':
        """Forget the truncation: the finite series of the known coefficients."""
        return TruncatedSeries(self.model, self.basis, self.coeffs)

    def with_basis(self, basis: BasisTag) -> 'TruncatedSeries':
        return TruncatedSeries(self.model, basis, self.coeffs, self.order, self.tail)

    def to_dict(self) -> Dict:
        payload = {
            'model': self.model.name,
            'basis': self.basis.value,
            'coeffs': [self.model.format(c) for c in self.coeffs],
        }
        if self.order is not None:
            payload['order'] = self.order
        if self.tail is not None:
            payload['tail'] = self.tail.to_dict()
        return payload


def _require_same_model(*series: TruncatedSeries):
    models = {s.model for s in series}
    if len(models) > 1:
        raise DomainError(f"series over different models: {sorted(m.name for m in models)}")


def _require_basis(F: TruncatedSeries, *bases: BasisTag):
    if F.basis not in bases:
        names = ', '.join(b.value for b in bases)
        raise DomainError(f"operation needs a series in basis {names}, got {F.basis.value}",
                          field='basis')


def _cauchy(model: CoefficientModel, a: Sequence, b: Sequence, limit: Optional[int]) -> List:
    length = len(a) + len(b) - 1 if a and b else 0
    if limit is not None:
        length = min(length, limit)
    result = []
    for n in range(length):
        total = model.zero()
        for k in range(max(0, n - len(b) + 1), min(n, len(a) - 1) + 1):
            total = model.add(total, model.mul(a[k], b[n - k]))
        result.append(total)
    return result


def multiply(F: TruncatedSeries, G: TruncatedSeries) -> TruncatedSeries:
    """Cauchy product; exact, valid below the smaller truncation order."""
    _require_same_model(F, G)
    _require_basis(F, BasisTag.MONOMIAL, BasisTag.GROUPLIKE)
    if F.basis != G.basis:
        raise DomainError("cannot multiply series in different bases", field='basis')
    order = _min_order(F.order, G.order)
    coeffs = _cauchy(F.model, F.coeffs, G.coeffs, order)
    return TruncatedSeries(F.model, F.basis, tuple(coeffs), order)


def add(F: TruncatedSeries, G: TruncatedSeries) -> TruncatedSeries:
    _require_same_model(F, G)
    if F.basis != G.basis:
        raise DomainError("cannot add series in different bases", field='basis')
    order = _min_order(F.order, G.order)
    length = max(len(F.coeffs), len(G.coeffs)) if order is None else order
    coeffs = [F.model.add(F.coefficient(n), G.coefficient(n)) for n in range(length)]
    tail = None
    for left, right in ((F, G), (G, F)):
        if left.tail is not None and right.is_polynomial and len(right.coeffs) <= left.tail.start:
            tail = left.tail
    return TruncatedSeries(F.model, F.basis, tuple(coeffs), order, tail)


def scale(F: TruncatedSeries, c: RingElement) -> TruncatedSeries:
    coeffs = tuple(F.model.mul(c, a) for a in F.coeffs)
    tail = F.tail
    if tail is not None:
        tail = tail.scaled(F.model.norm(c).value)
    return TruncatedSeries(F.model, F.basis, coeffs, F.order, tail)


def negate(F: TruncatedSeries) -> TruncatedSeries:
    return scale(F, F.model.neg(F.model.one()))


def compose(F: TruncatedSeries, G: TruncatedSeries) -> TruncatedSeries:
    """``F(G(s))`` by Horner's rule; ``G`` must have zero constant term."""
    _require_same_model(F, G)
    _require_basis(F, BasisTag.MONOMIAL)
    _require_basis(G, BasisTag.MONOMIAL)
    if G.order == 0 or not G.model.is_zero(G.coefficient(0)):
        raise DomainError("inner series of a composition needs zero constant term")
    model = F.model
    order = _min_order(F.order, G.order)
    result: List = []
    for a in reversed(F.coeffs):
        result = _cauchy(model, result, G.coeffs, order)
        if result:
            result[0] = model.add(result[0], a)
        elif order != 0:
            result = [model.coerce(a)]
    return TruncatedSeries(model, BasisTag.MONOMIAL, tuple(result), order)


def geometric_inverse(N: int, model: CoefficientModel = None) -> TruncatedSeries:
    """``(1+s)**-1 - 1 = -s + s**2 - ...`` truncated at order ``N`` with its exact tail."""
    if N < 1:
        raise DomainError("order must be at least 1", field='order')
    model = model or TrivialIntegers()
    coeffs = [model.zero()] + [model.from_int((-1) ** n) for n in range(1, N)]
    return TruncatedSeries(model, BasisTag.MONOMIAL, tuple(coeffs), N,
                           TailDescriptor(start=N, bound=1, ratio=1, exact=True))


def certified_coeffs(F: TruncatedSeries):
    """Known coefficients and tail; a truncation without a certificate has no norm."""
    if not F.is_polynomial and F.tail is None:
        raise CertificateError(
            f"series truncated at order {F.order} has no tail certificate; its norm is unknown",
            field='tail')
    return list(F.coeffs), F.tail


def ps_norm(F: TruncatedSeries, rho) -> NormValue:
    """Norm in the power series grading with weights ``rho**n``."""
    _require_basis(F, BasisTag.MONOMIAL)
    coeffs, tail = certified_coeffs(F)
    return weighted_l1_norm(coeffs, tail, Weight.geometric(rho), F.model)


def bs_norm(f: TruncatedSeries, rho) -> NormValue:
    """Norm in the binomial series grading: ``sup_n |a_n| rho**n``."""
    _require_basis(f, BasisTag.MAHLER)
    coeffs, tail = certified_coeffs(f)
    return weighted_linf_norm(coeffs, tail, Weight.geometric(rho), f.model)


def substitute(F: TruncatedSeries, a: RingElement) -> RingElement:
    """Evaluate a polynomial in the monomial basis at a ring element."""
    _require_basis(F, BasisTag.MONOMIAL)
    if not F.is_polynomial:
        raise CertificateError("only polynomials can be evaluated at a point")
    model = F.model
    value = model.zero()
    for c in reversed(F.coeffs):
        value = model.add(model.mul(value, a), c)
    return value


def point_bound_check(F: TruncatedSeries, a: RingElement, rho) -> BoundReport:
    """``|F(a)| <= ||F||_rho`` for a point ``a`` of the closed disk of radius ``rho``."""
    if F.model.norm(a) > NormValue.coerce(rho):
        raise DomainError(f"|a| = {F.model.norm(a)} exceeds the radius {rho}", field='a')
    value = F.model.norm(substitute(F, a))
    bound = ps_norm(F, rho)
    return BoundReport('point_evaluation', value, bound, value <= bound, value == bound)


# tensor square ------------------------------------------------------------------

@dataclass(frozen=True)
class BiTruncatedSeries:
    """
    Sparse element of the tensor square on ``(i, j)``.

    An entry is valid when ``i, j < order`` and ``i + j < degree_bound``; ``None``
    for either limit means no restriction from it.
    """
    model: CoefficientModel
    entries: Tuple[Tuple[int, int, RingElement], ...]
    order: Optional[int] = None
    degree_bound: Optional[int] = None
    basis: BasisTag = BasisTag.MONOMIAL

    def __post_init__(self):
        merged: Dict[Tuple[int, int], RingElement] = {}
        for i, j, c in self.entries:
            if not self.is_valid(i, j):
                continue
            merged[(i, j)] = self.model.add(merged.get((i, j), self.model.zero()), c)
        cleaned = tuple((i, j, c) for (i, j), c in sorted(merged.items())
                        if not self.model.is_zero(c))
        object.__setattr__(self, 'entries', cleaned)

    @classmethod
    def from_dict(cls, model: CoefficientModel, values: Dict[Tuple[int, int], RingElement],
                  order: Optional[int] = None, degree_bound: Optional[int] = None,
                  basis: BasisTag = BasisTag.MONOMIAL) -> 'BiTruncatedSeries':
        return cls(model, tuple((i, j, c) for (i, j), c in values.items()), order, degree_bound, basis)

    def is_valid(self, i: int, j: int) -> bool:
        if self.order is not None and (i >= self.order or j >= self.order):
            return False
        return self.degree_bound is None or i + j < self.degree_bound

    def coefficient(self, i: int, j: int) -> RingElement:
        if not self.is_valid(i, j):
            raise InsufficientDataError(f"entry ({i}, {j}) lies outside the valid region")
        for a, b, c in self.entries:
            if (a, b) == (i, j):
                return c
        return self.model.zero()

    def as_dict(self) -> Dict[Tuple[int, int], RingElement]:
        return {(i, j): c for i, j, c in self.entries}

    def agrees_with(self, other: 'BiTruncatedSeries') -> bool:
        """Equality on the region where both are valid."""
        if self.model != other.model:
            return False
        mine, theirs = self.as_dict(), other.as_dict()
        for key in set(mine) | set(theirs):
            if not (self.is_valid(*key) and other.is_valid(*key)):
                continue
            if not self.model.eq(mine.get(key, self.model.zero()), theirs.get(key, self.model.zero())):
                return False
        return True

    def to_dict(self) -> Dict:
        payload = {
            'model': self.model.name,
            'basis': self.basis.value,
            'entries': [{'i': i, 'j': j, 'c': self.model.format(c)} for i, j, c in self.entries],
        }
        if self.order is not None:
            payload['order'] = self.order
        if self.degree_bound is not None:
            payload['degree_bound'] = self.degree_bound
        return payload


def tensor(F: TruncatedSeries, G: TruncatedSeries) -> BiTruncatedSeries:
    """The elementary tensor ``F (x) G``."""
    _require_same_model(F, G)
    if F.basis != G.basis:
        raise DomainError("tensor factors must share a basis", field='basis')
    model = F.model
    order = _min_order(F.order, G.order)
    values = {(i, j): model.mul(a, b)
              for i, a in enumerate(F.coeffs) for j, b in enumerate(G.coeffs)}
    return BiTruncatedSeries.from_dict(model, values, order, None, F.basis)


def tensor_norm(T: BiTruncatedSeries, rho1, rho2) -> NormValue:
    """Projective norm on the weighted tensor square: sum (or max) of ``|c_ij| rho1**i rho2**j``."""
    w1, w2 = Weight.geometric(rho1), Weight.geometric(rho2)
    terms: Iterable[NormValue] = [T.model.norm(c) * (w1(i) * w2(j)) for i, j, c in T.entries]
    if T.model.is_nonarchimedean:
        return sup_norm(terms)
    return sum(terms, NormValue(0))
