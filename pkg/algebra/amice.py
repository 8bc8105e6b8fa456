"""
Distributions through their Amice transforms.

A distribution is stored as the monomial series ``sum mu_n s**n`` of its
Mahler moments ``mu_n``; pairing it with a Mahler series integrates the
function. Power moments come from Stirling numbers of the second kind, and
the Kubota-Leopoldt distribution ``log(1+s)/s`` has the Bernoulli numbers as
its power moments.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb, factorial
from typing import List, Optional, Sequence, Tuple

from algebra.coefficients import (
    ArchimedeanRationals, CoefficientModel, NormValue, RingElement, RingMorphism,
    SupRationals, TrivialIntegers,
)
from algebra.hopf import grouplike_from_exponent
from algebra.mahler import change_basis
from algebra.series import (
    BasisTag, BiTruncatedSeries, TruncatedSeries, multiply,
)
from algebra.weights import TailDescriptor, power_geometric_sum, power_geometric_sup
from models.core import BaseChangeReport, PairingValue
from utils.error_handling import (
    CertificateError, DomainError, InsufficientDataError, InvariantError,
)
from utils.logging_config import ErrorContext

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Distribution(TruncatedSeries):
    """A monomial series read as the moments ``mu_n = integral of binom(x, n)``."""

    def __post_init__(self):
        if self.basis is not BasisTag.MONOMIAL:
            raise DomainError("a distribution is a monomial series", field='basis')
        super().__post_init__()

    @classmethod
    def from_series(cls, F: TruncatedSeries) -> 'Distribution':
        return cls(F.model, BasisTag.MONOMIAL, F.coeffs, F.order, F.tail)

    def moment(self, n: int) -> RingElement:
        """``mu_n``."""
        try:
            return self.coefficient(n)
        except InsufficientDataError:
            raise InsufficientDataError(f"moment {n} needs order > {n}, have {self.order}")


# pairing ------------------------------------------------------------------------

def _finite(F: TruncatedSeries) -> bool:
    return F.is_polynomial or (F.tail is not None and F.tail.is_zero)


def _factor_bound(F: TruncatedSeries, n: int) -> Fraction:
    if F.order is None or n < F.order:
        return F.model.norm(F.coefficient(n)).value
    return F.tail.bound_at(n)


def _pairing_error(xi: TruncatedSeries, f: TruncatedSeries, start: int) -> NormValue:
    """Bound on ``sum_{n >= start} |xi_n a_n|`` (a supremum for non-archimedean models)."""
    model = xi.model
    if xi.tail is None or f.tail is None:
        raise CertificateError("pairing of two truncated series needs both tail certificates",
                               field='tail')
    joint = max(xi.order, f.order)
    terms = [NormValue(_factor_bound(xi, n) * _factor_bound(f, n)) for n in range(start, joint)]
    degree = xi.tail.degree + f.tail.degree
    ratio = xi.tail.ratio * f.tail.ratio
    constant = xi.tail.bound * f.tail.bound
    if model.is_nonarchimedean:
        # the sum converges only when the terms tend to zero
        if constant > 0 and ratio >= 1:
            raise CertificateError("tail certificates do not force the terms to zero",
                                   field='tail')
        rest = constant * power_geometric_sup(degree, ratio, joint)
        return max(terms + [rest])
    rest = constant * power_geometric_sum(degree, ratio, joint)
    return sum(terms, NormValue(0)) + rest


def pairing(xi: TruncatedSeries, f: TruncatedSeries) -> PairingValue:
    """
    ``<xi, f> = sum_n xi_n a_n`` for ``xi`` on the series side and ``f`` in the
    Mahler basis. Exact when either side has finite support; otherwise the
    truncated sum is returned with a certified error bound.
    """
    if xi.model != f.model:
        raise DomainError(f"pairing across models {xi.model.name} and {f.model.name}")
    if xi.basis is BasisTag.GROUPLIKE:
        xi = change_basis(xi, BasisTag.MONOMIAL)
    if xi.basis is not BasisTag.MONOMIAL or f.basis is not BasisTag.MAHLER:
        raise DomainError("pairing takes a monomial series and a Mahler series", field='basis')
    model = xi.model

    if _finite(xi) or _finite(f):
        support = min(len(F.coeffs) for F in (xi, f) if _finite(F))
        for F in (xi, f):
            if not F.valid_below(support):
                raise InsufficientDataError(
                    f"pairing needs {support} coefficients but a factor is truncated at {F.order}")
        value = model.sum(model.mul(xi.coefficient(n), f.coefficient(n)) for n in range(support))
        return PairingValue(value, NormValue(0), True)

    known = min(xi.order, f.order)
    value = model.sum(model.mul(xi.coeffs[n], f.coeffs[n]) for n in range(known))
    error = _pairing_error(xi, f, known)
    if not error.is_finite:
        raise CertificateError("tail certificates do not make the pairing converge", field='tail')
    return PairingValue(value, error, error == 0)


def tensor_pairing(T: BiTruncatedSeries, U: BiTruncatedSeries) -> RingElement:
    """``sum T_ij U_ij``; every nonzero entry of either side must be valid on the other."""
    if T.model != U.model:
        raise DomainError(f"pairing across models {T.model.name} and {U.model.name}")
    if T.basis is not BasisTag.MONOMIAL or U.basis is not BasisTag.MAHLER:
        raise DomainError("tensor pairing takes monomial against Mahler tensors", field='basis')
    model = T.model
    left, right = T.as_dict(), U.as_dict()
    for key in left:
        if not U.is_valid(*key):
            raise InsufficientDataError(f"entry {key} lies outside the Mahler tensor's valid region")
    for key in right:
        if not T.is_valid(*key):
            raise InsufficientDataError(f"entry {key} lies outside the series tensor's valid region")
    return model.sum(model.mul(c, right[key]) for key, c in left.items() if key in right)


# distributions ------------------------------------------------------------------

def amice_transform(moments: Sequence, model: CoefficientModel,
                    tail: Optional[TailDescriptor] = None,
                    finite_support: bool = False) -> Distribution:
    """
    The distribution with the given Mahler moments, valid below ``len(moments)``
    unless ``finite_support`` declares every later moment zero.
    """
    if not moments or finite_support:
        if tail is not None:
            raise DomainError("a finitely supported distribution carries no tail", field='tail')
        return Distribution(model, BasisTag.MONOMIAL, tuple(moments))
    return Distribution(model, BasisTag.MONOMIAL, tuple(moments), len(moments), tail)


def dirac(a, N: int, model: CoefficientModel) -> Distribution:
    """Point mass at ``a``: moments ``binom(a, n)``, i.e. ``(1+s)**a``."""
    return Distribution.from_series(grouplike_from_exponent(a, N, model))


def convolve(mu: Distribution, nu: Distribution) -> Distribution:
    """Product of Amice transforms."""
    return Distribution.from_series(multiply(mu, nu))


# power moments ------------------------------------------------------------------

@dataclass(frozen=True)
class StirlingTable:
    """``S(n, k)`` for ``n, k <= bound`` from ``S(n,k) = k S(n-1,k) + S(n-1,k-1)``."""
    bound: int
    rows: Tuple[Tuple[int, ...], ...]

    @classmethod
    def build(cls, bound: int) -> 'StirlingTable':
        if bound < 0:
            raise DomainError("Stirling table bound must be nonnegative", field='bound')
        rows = [(1,)]
        for n in range(1, bound + 1):
            previous = rows[-1]
            row = [0] * (n + 1)
            for k in range(1, n + 1):
                stay = k * previous[k] if k < len(previous) else 0
                row[k] = stay + previous[k - 1]
            rows.append(tuple(row))
        table = cls(bound, tuple(rows))
        table.validate()
        return table

    def __call__(self, n: int, k: int) -> int:
        if n > self.bound:
            raise InsufficientDataError(f"S({n}, {k}) exceeds the table bound {self.bound}")
        row = self.rows[n]
        return row[k] if 0 <= k < len(row) else 0

    def validate(self):
        """``x**n = sum_k S(n,k) k! binom(x,k)`` at ``x = 0..n``."""
        for n in range(self.bound + 1):
            for x in range(n + 1):
                expansion = sum(self(n, k) * factorial(k) * comb(x, k) for k in range(n + 1))
                if expansion != x ** n:
                    raise InvariantError(f"Stirling expansion of x^{n} fails at x = {x}")


@lru_cache(maxsize=8)
def stirling_table(bound: int) -> StirlingTable:
    return StirlingTable.build(bound)


def power_moment(mu: Distribution, n: int) -> RingElement:
    """``integral of x**n = sum_{k <= n} S(n,k) k! mu_k``."""
    if n < 0:
        raise DomainError("moment index must be a natural number", field='n')
    if not mu.valid_below(n + 1):
        raise InsufficientDataError(f"power moment {n} needs order > {n}, have {mu.order}")
    model = mu.model
    table = stirling_table(n)
    return model.sum(model.mul(model.from_int(table(n, k) * factorial(k)), mu.coefficient(k))
                     for k in range(n + 1))


# Kubota-Leopoldt and Bernoulli ---------------------------------------------------

def _harmonic_tail(model: CoefficientModel, start: int) -> TailDescriptor:
    # |1/(n+1)| is at most 1 archimedean, at most n+1 for the non-archimedean models
    if model.is_nonarchimedean:
        return TailDescriptor(start, 1, 1, degree=1)
    return TailDescriptor(start, 1, 1)


def _require_rational_model(model: CoefficientModel):
    if isinstance(model, TrivialIntegers):
        raise DomainError(f"{model.name} does not contain 1/2", field='model')


def log_one_plus(N: int, model: CoefficientModel = None) -> TruncatedSeries:
    """``log(1+s) = sum (-1)**(n+1) s**n / n`` modulo ``s**N``."""
    model = model or SupRationals()
    _require_rational_model(model)
    if N < 1:
        raise DomainError("order must be at least 1", field='N')
    coeffs = [model.zero()] + [model.from_fraction(Fraction((-1) ** (n + 1), n))
                               for n in range(1, N)]
    return TruncatedSeries.truncated(model, coeffs, N, _harmonic_tail(model, N))


def kubota_leopoldt(N: int, model: CoefficientModel = None) -> Distribution:
    """``log(1+s)/s``: moments ``(-1)**n / (n+1)`` for ``n < N``."""
    model = model or SupRationals()
    _require_rational_model(model)
    if N < 1:
        raise DomainError("order must be at least 1", field='N')
    coeffs = [model.from_fraction(Fraction((-1) ** n, n + 1)) for n in range(N)]
    return Distribution(model, BasisTag.MONOMIAL, tuple(coeffs), N, _harmonic_tail(model, N))


def bernoulli_by_recurrence(n: int) -> Fraction:
    """``B_n`` from ``sum_{k <= m} binom(m+1, k) B_k = 0``; ``B_1 = -1/2``."""
    if n < 0:
        raise DomainError("Bernoulli index must be a natural number", field='n')
    values: List[Fraction] = [Fraction(1)]
    for m in range(1, n + 1):
        values.append(-sum(comb(m + 1, k) * values[k] for k in range(m)) / (m + 1))
    return values[n]


def bernoulli(n: int) -> Fraction:
    """The n-th power moment of the Kubota-Leopoldt distribution."""
    if n < 1:
        raise DomainError("bernoulli needs n >= 1", field='n')
    with ErrorContext(logger, 'bernoulli', n=n):
        value = Fraction(power_moment(kubota_leopoldt(n + 1, ArchimedeanRationals()), n))
        expected = bernoulli_by_recurrence(n)
        if value != expected:
            raise InvariantError(f"moment B_{n} = {value} disagrees with recurrence {expected}")
    return value


# base change --------------------------------------------------------------------

def base_change_series(f: TruncatedSeries, m: RingMorphism) -> TruncatedSeries:
    """Coefficientwise image; contracting morphisms keep the tail certificate."""
    if f.model != m.source:
        raise DomainError(f"series lives over {f.model.name}, morphism starts at {m.source.name}",
                          field='model')
    tail = None
    if f.tail is not None:
        tail = TailDescriptor(f.tail.start, f.tail.bound, f.tail.ratio, f.tail.degree)
    coeffs = tuple(m.apply(c) for c in f.coeffs)
    if isinstance(f, Distribution):
        return Distribution(m.target, f.basis, coeffs, f.order, tail)
    return TruncatedSeries(m.target, f.basis, coeffs, f.order, tail)


def base_change_commutes(xi: TruncatedSeries, f: TruncatedSeries,
                         m: RingMorphism) -> BaseChangeReport:
    """Map-then-pair against pair-then-map for finitely supported inputs."""
    if not (_finite(xi) or _finite(f)):
        raise CertificateError("base change commutation is checked on finite-support inputs")
    target = m.target
    mapped = m.apply(pairing(xi, f).value)
    paired = pairing(base_change_series(xi, m), base_change_series(f, m)).value
    commutes = target.eq(mapped, paired)
    if not commutes:
        logger.warning(f"base change along {m} does not commute: {mapped} vs {paired}")
    return BaseChangeReport(str(m), target.format(mapped), target.format(paired), commutes)
