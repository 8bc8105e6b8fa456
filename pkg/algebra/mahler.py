"""
Finite-difference calculus on functions N -> R.

Functions appear either as finite tables ``f(0..M)`` or as series in the
Mahler basis ``binom(x, n)`` (possibly tail-certified); ``mahler_expand`` and
``evaluate`` translate between the two. The binomial transform relating the
monomial and group-like bases is held as exact numpy object matrices.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np

from algebra.coefficients import (
    CoefficientModel, NormValue, PAdicRationals, PadicElement, RingElement,
    TruncatedPAdicIntegers, binomial_coefficients, exact_binomial,
)
from algebra.series import BasisTag, TruncatedSeries, bs_norm
from algebra.weights import TailDescriptor, power_geometric_sup
from config.settings import settings
from models.core import BoundReport, MahlerMembershipReport
from utils.error_handling import (
    CertificateError, DomainError, InsufficientDataError, PrecisionError,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class FunctionTable:
    """Values ``f(0), ..., f(M)`` of a function on the naturals."""
    model: CoefficientModel
    values: Tuple[RingElement, ...]

    def __post_init__(self):
        if not self.values:
            raise DomainError("a function table needs at least one value", field='values')
        object.__setattr__(self, 'values', tuple(self.model.coerce(v) for v in self.values))

    @property
    def last_index(self) -> int:
        """M, the largest tabulated argument."""
        return len(self.values) - 1

    def to_dict(self) -> dict:
        return {'model': self.model.name, 'values': [self.model.format(v) for v in self.values]}


# binomial transform --------------------------------------------------------------

@dataclass(frozen=True)
class TransformMatrix:
    """Upper triangular ``binom(j, i)`` (or its signed inverse) as an object array."""
    size: int
    inverse: bool
    entries: np.ndarray

    def __hash__(self):
        return hash((self.size, self.inverse))

    def __eq__(self, other):
        return (isinstance(other, TransformMatrix) and self.size == other.size
                and np.array_equal(self.entries, other.entries))

    def __matmul__(self, other: 'TransformMatrix') -> np.ndarray:
        return self.entries.dot(other.entries)


def binomial_matrix(size: int, inverse: bool = False) -> TransformMatrix:
    """``beta[i, j] = binom(j, i)``; the inverse carries the sign ``(-1)**(j - i)``."""
    if size < 0:
        raise DomainError("matrix size must be nonnegative", field='size')
    entries = np.zeros((size, size), dtype=object)
    for j in range(size):
        for i in range(j + 1):
            sign = (-1) ** (j - i) if inverse else 1
            entries[i, j] = sign * comb(j, i)
    return TransformMatrix(size, inverse, entries)


def identity_matrix(size: int) -> np.ndarray:
    entries = np.zeros((size, size), dtype=object)
    for i in range(size):
        entries[i, i] = 1
    return entries


def _apply_matrix(matrix: np.ndarray, vector: Sequence, model: Optional[CoefficientModel]) -> List:
    if model is None:
        if not len(vector):
            return []
        product = matrix.dot(np.array([Fraction(v) for v in vector], dtype=object))
        return [int(x) if x.denominator == 1 else x for x in product]
    result = []
    for i in range(matrix.shape[0]):
        terms = (model.mul(model.from_int(int(matrix[i, j])), vector[j])
                 for j in range(matrix.shape[1]) if matrix[i, j] != 0)
        result.append(model.sum(terms))
    return result


def binomial_transform(v: Sequence, direction: str = 'forward',
                       model: Optional[CoefficientModel] = None) -> List:
    """
    ``(beta v)_i = sum_j binom(j, i) v_j`` (``forward``) or the signed inverse.
    Plain integers and rationals are transformed exactly; pass ``model`` for
    ring elements such as p-adic values.
    """
    if direction not in ('forward', 'inverse'):
        raise DomainError(f"unknown transform direction '{direction}'", field='direction')
    matrix = binomial_matrix(len(v), inverse=direction == 'inverse')
    return _apply_matrix(matrix.entries, list(v), model)


# finite differences --------------------------------------------------------------

def fdiff_table(t: FunctionTable) -> FunctionTable:
    """``(Delta f)(n) = f(n+1) - f(n)`` on the tabulated range."""
    if t.last_index < 1:
        raise DomainError("a single value has no finite difference", field='values')
    model = t.model
    return FunctionTable(model, tuple(model.sub(t.values[n + 1], t.values[n])
                                      for n in range(t.last_index)))


def fdiff_k_at_zero(t: FunctionTable, k: int) -> RingElement:
    """``Delta**k f(0) = sum_i (-1)**(k-i) binom(k, i) f(i)``."""
    if k < 0:
        raise DomainError("difference order must be a natural number", field='k')
    if k > t.last_index:
        raise InsufficientDataError(
            f"Delta^{k} f(0) needs f(0..{k}) but the table stops at {t.last_index}")
    model = t.model
    return model.sum(model.mul(model.from_int((-1) ** (k - i) * comb(k, i)), t.values[i])
                     for i in range(k + 1))


def _shift_tail(tail: Optional[TailDescriptor]) -> Optional[TailDescriptor]:
    if tail is None:
        return None
    # (n+2)**d <= 2**d (n+1)**d
    return TailDescriptor(max(tail.start - 1, 0), tail.bound * tail.ratio * 2 ** tail.degree,
                          tail.ratio, tail.degree)


def fdiff_series(f: TruncatedSeries) -> TruncatedSeries:
    """Delta on a series: a coefficient shift in the Mahler basis."""
    model = f.model
    order = None if f.order is None else max(f.order - 1, 0)
    if f.basis is BasisTag.MAHLER:
        return TruncatedSeries(model, f.basis, f.coeffs[1:], order, _shift_tail(f.tail))
    if f.basis is BasisTag.INDICATOR:
        length = len(f.coeffs) if order is None else order
        values = [model.sub(f.coefficient(n + 1), f.coefficient(n)) for n in range(length)]
        return TruncatedSeries(model, f.basis, tuple(values), order)
    raise DomainError("finite differences act on functions, not power series", field='basis')


def shift(f: TruncatedSeries) -> TruncatedSeries:
    """The translate ``x -> f(x+1)``, i.e. ``f + Delta f``."""
    if f.basis is not BasisTag.MAHLER:
        raise DomainError("shift needs a Mahler series", field='basis')
    model = f.model
    order = None if f.order is None else max(f.order - 1, 0)
    length = len(f.coeffs) if order is None else order
    values = [model.add(f.coefficient(n), f.coefficient(n + 1)) for n in range(length)]
    tail = None
    if f.tail is not None:
        tail = TailDescriptor(max(f.tail.start - 1, 0),
                              f.tail.bound * (1 + f.tail.ratio * 2 ** f.tail.degree),
                              f.tail.ratio, f.tail.degree)
    return TruncatedSeries(model, f.basis, tuple(values), order, tail)


def fdiff_bound_check(f: TruncatedSeries, rho) -> BoundReport:
    """``||Delta f||_rho <= ||f||_rho / rho`` in the binomial grading."""
    rho = Fraction(rho)
    value = bs_norm(fdiff_series(f), rho)
    bound = bs_norm(f, rho) * (1 / rho)
    return BoundReport('fdiff', value, bound, value <= bound, value == bound)


# expansion and evaluation --------------------------------------------------------

def mahler_expand(t: FunctionTable) -> TruncatedSeries:
    """Mahler coefficients ``Delta**n f(0)``, valid below order ``M + 1``."""
    model = t.model
    coeffs = [t.values[0]]
    row = list(t.values)
    while len(row) > 1:
        row = [model.sub(row[n + 1], row[n]) for n in range(len(row) - 1)]
        coeffs.append(row[0])
    return TruncatedSeries(model, BasisTag.MAHLER, tuple(coeffs), len(coeffs))


def _finite_support(f: TruncatedSeries) -> bool:
    return f.is_polynomial or (f.tail is not None and f.tail.is_zero)


def evaluate(f: TruncatedSeries, n: int) -> RingElement:
    """``f(n) = sum_{k <= n} a_k binom(n, k)``."""
    if n < 0:
        raise DomainError("evaluate takes a natural number; use mahler_antipode for -n", field='n')
    model = f.model
    if f.basis is BasisTag.INDICATOR:
        return f.coefficient(n)
    if f.basis is not BasisTag.MAHLER:
        raise DomainError("evaluation needs a Mahler or indicator series", field='basis')
    if not _finite_support(f) and n >= f.order:
        raise InsufficientDataError(
            f"f({n}) needs Mahler coefficients up to {n}; truncation order is {f.order}")
    top = min(n, len(f.coeffs) - 1)
    return model.sum(model.mul(model.from_int(comb(n, k)), f.coeffs[k]) for k in range(top + 1))


def _default_order(f: TruncatedSeries, order: Optional[int]) -> int:
    if order is None:
        order = f.order if f.order is not None else settings.DEFAULT_TRUNCATION_ORDER
    if f.order is not None:
        order = min(order, f.order)
    return order


def change_basis(f: TruncatedSeries, to: BasisTag, order: Optional[int] = None) -> TruncatedSeries:
    """
    Re-express ``f`` in another basis on the same side of the duality.

    Monomial and group-like bases are related by the binomial transform and
    need polynomial input. Mahler and indicator bases are related by lower
    triangular matrices; the result is valid below ``order`` (default: the
    input's order, or the configured default truncation order).
    """
    if f.basis is to:
        return f
    if f.basis.side != to.side:
        raise DomainError(
            f"{f.basis.value} -> {to.value} crosses the duality; use the pairing instead",
            field='basis')
    model = f.model

    if f.basis.side == 'series':
        if not f.is_polynomial:
            raise DomainError("monomial/group-like conversion needs a polynomial", field='order')
        direction = 'forward' if to is BasisTag.MONOMIAL else 'inverse'
        coeffs = binomial_transform(list(f.coeffs), direction, model)
        return TruncatedSeries(model, to, tuple(coeffs))

    order = _default_order(f, order)
    if to is BasisTag.INDICATOR:
        # f(k) = sum_{n <= k} binom(k, n) a_n
        values = [model.sum(model.mul(model.from_int(comb(k, n)), f.coefficient(n))
                            for n in range(min(k, len(f.coeffs) - 1) + 1))
                  for k in range(order)]
    else:
        # a_n = sum_{k <= n} (-1)**(n-k) binom(n, k) f(k)
        values = [model.sum(model.mul(model.from_int((-1) ** (n - k) * comb(n, k)),
                                      f.coefficient(k))
                            for k in range(min(n, len(f.coeffs) - 1) + 1))
                  for n in range(order)]
    return TruncatedSeries(model, to, tuple(values), order)


# membership and p-adic evaluation -------------------------------------------------

def classify_membership(f: TruncatedSeries) -> MahlerMembershipReport:
    """Polynomial verdict, certified dbs radius ``1/r`` from a tail, or undecidable."""
    if f.basis is not BasisTag.MAHLER:
        raise DomainError("classification needs a Mahler series", field='basis')
    model = f.model
    nonzero = [n for n, c in enumerate(f.coeffs) if not model.is_zero(c)]
    degree = nonzero[-1] if nonzero else -1

    if _finite_support(f) or (f.tail is not None and f.tail.ratio == 0):
        return MahlerMembershipReport('polynomial', degree=degree, radius=NormValue.inf(),
                                      exact_radius=True, detail="finitely many nonzero Delta^n f(0)")
    if f.tail is None:
        logger.warning("Mahler series without tail certificate cannot be classified")
        return MahlerMembershipReport('undecidable',
                                      detail=f"no certificate beyond order {f.order}")
    radius = NormValue(1 / f.tail.ratio)
    detail = f"member of dbs(sigma) for every sigma < {radius}"
    if f.tail.exact:
        detail += f"; not a member for sigma >= {radius}"
    return MahlerMembershipReport('certified', degree=None, radius=radius,
                                  exact_radius=f.tail.exact, detail=detail)


def _padic_prime(model: CoefficientModel) -> int:
    if isinstance(model, (PAdicRationals, TruncatedPAdicIntegers)):
        return model.p
    raise CertificateError(f"{model.name} carries no p-adic norm to certify convergence",
                           field='model')


def certified_precision(tail: Optional[TailDescriptor], order: int, p: int) -> Optional[int]:
    """
    Largest ``t`` with every coefficient beyond ``order`` bounded by ``p**-t``;
    ``None`` when the remainder vanishes and no limit applies.
    """
    if tail is None or tail.is_zero:
        return None
    bound = tail.bound * power_geometric_sup(tail.degree, tail.ratio, max(order, tail.start))
    if not bound.is_finite:
        raise CertificateError("tail certificate does not decay; the series does not converge",
                               field='tail')
    if bound.value == 0:
        return None
    return -ceil_log(bound.value, p)


def ceil_log(value: Fraction, p: int) -> int:
    """Smallest ``e`` with ``p**e >= value``, for a positive rational."""
    e = 0
    while Fraction(p) ** e < value:
        e += 1
    while Fraction(p) ** (e - 1) >= value:
        e -= 1
    return e


def _as_padic(x: Union[RingElement, int], p: int, guard: int) -> PadicElement:
    if isinstance(x, PadicElement):
        return x
    return PadicElement.from_fraction(Fraction(x), p, guard)


def padic_evaluate(f: TruncatedSeries, a, target_precision: Optional[int] = None) -> PadicElement:
    """
    ``sum_k a_k binom(a, k)`` for ``a`` in Z_p, with certified absolute
    precision at least ``target_precision``; uses ``|binom(a, k)|_p <= 1``.
    """
    if f.basis is not BasisTag.MAHLER:
        raise DomainError("p-adic evaluation needs a Mahler series", field='basis')
    if target_precision is None:
        target_precision = settings.PADIC_TARGET_PRECISION
    p = _padic_prime(f.model)
    if not _finite_support(f) and f.tail is None:
        raise CertificateError(f"series truncated at {f.order} carries no decay certificate",
                               field='tail')

    count = len(f.coeffs)
    limit = None if _finite_support(f) else certified_precision(f.tail, f.order, p)
    if limit is not None and limit < target_precision:
        raise PrecisionError(
            f"certificate only guarantees precision {limit} < {target_precision}",
            achievable_precision=limit)

    guard = target_precision + count + 1
    if isinstance(a, PadicElement):
        binomials = binomial_coefficients(TruncatedPAdicIntegers(p, max(a.precision, 1)), a, count)
    else:
        if Fraction(a).denominator != 1:
            raise DomainError("the evaluation point must be a p-adic integer", field='a')
        binomials = [PadicElement.from_fraction(exact_binomial(a, k), p, guard)
                     for k in range(count)]

    total = PadicElement.zero_marker(p, guard)
    for coefficient, binomial in zip(f.coeffs, binomials):
        total = total + _as_padic(coefficient, p, guard) * binomial
    if limit is not None:
        total = total.with_absolute_precision(limit)
    if total.absolute_precision < target_precision:
        raise PrecisionError(
            f"working precision only reaches {total.absolute_precision} < {target_precision}",
            achievable_precision=total.absolute_precision)
    return total
