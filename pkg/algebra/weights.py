"""
Koethe weights, weight matrices and nuclearity.

A ``Weight`` is an exact positive sequence: a finite table prefix followed by
a geometric continuation (a pure geometric weight has an empty prefix). A
``WeightMatrix`` is an increasing chain of weights. Infinite sequences are
described by a finite prefix of coefficients plus a ``TailDescriptor``
bounding every later coefficient by ``C * (n+1)**d * r**n``.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple, Union

from algebra.coefficients import CoefficientModel, NormValue, sup_norm
from config.settings import settings
from models.core import BoundReport, MemberReport
from utils.error_handling import DomainError, PreconditionError, ValidationResult

logger = logging.getLogger(__name__)

Rational = Union[int, Fraction]


@dataclass(frozen=True)
class Weight:
    """
    ``rho(n) = prefix[n]`` for ``n < len(prefix)``, then
    ``prefix[-1] * ratio**(n - len(prefix) + 1)``; with no prefix, ``ratio**n``.

    Ratio 0 is accepted for geometric weights only, as the degenerate row
    ``(1, 0, 0, ...)``.
    """
    ratio: Fraction
    prefix: Tuple[Fraction, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, 'ratio', Fraction(self.ratio))
        object.__setattr__(self, 'prefix', tuple(Fraction(v) for v in self.prefix))
        if self.ratio < 0:
            raise DomainError(f"weight ratio must be nonnegative, got {self.ratio}", field='ratio')
        if self.prefix and self.ratio == 0:
            raise DomainError("table weights need a positive continuation ratio", field='ratio')
        for index, value in enumerate(self.prefix):
            if value <= 0:
                raise DomainError(f"weight values must be positive, got {value}",
                                  field=f'prefix.{index}')

    @classmethod
    def geometric(cls, ratio: Rational) -> 'Weight':
        return cls(Fraction(ratio))

    @classmethod
    def table(cls, prefix: Sequence[Rational], ratio: Rational) -> 'Weight':
        if not prefix:
            raise DomainError("table weight needs a nonempty prefix", field='prefix')
        return cls(Fraction(ratio), tuple(Fraction(v) for v in prefix))

    @property
    def is_geometric(self) -> bool:
        return not self.prefix

    @property
    def is_degenerate(self) -> bool:
        return self.ratio == 0

    @property
    def tail_start(self) -> int:
        """First index from which ``rho(n) == tail_constant * ratio**n``."""
        return len(self.prefix)

    @property
    def tail_constant(self) -> Fraction:
        if not self.prefix:
            return Fraction(1)
        return self.prefix[-1] / self.ratio ** (len(self.prefix) - 1)

    def __call__(self, n: int) -> Fraction:
        if n < 0:
            raise DomainError(f"weights are indexed by naturals, got {n}")
        if n < len(self.prefix):
            return self.prefix[n]
        if not self.prefix:
            return self.ratio ** n
        return self.prefix[-1] * self.ratio ** (n - len(self.prefix) + 1)

    def reciprocal(self) -> 'Weight':
        if self.is_degenerate:
            raise DomainError("a degenerate weight has no reciprocal")
        return Weight(1 / self.ratio, tuple(1 / v for v in self.prefix))

    def to_dict(self) -> dict:
        if self.is_geometric:
            return {'kind': 'geometric', 'ratio': str(self.ratio)}
        return {'kind': 'table', 'prefix': [str(v) for v in self.prefix],
                'ratio': str(self.ratio)}


@dataclass(frozen=True)
class TailDescriptor:
    """
    Certificate ``|a_n| <= bound * (n+1)**degree * ratio**n`` for ``n >= start``.

    With ``exact`` set the inequality is an equality for every such ``n``,
    which is what allows a divergence verdict.
    """
    start: int
    bound: Fraction
    ratio: Fraction
    degree: int = 0
    exact: bool = False

    def __post_init__(self):
        object.__setattr__(self, 'bound', Fraction(self.bound))
        object.__setattr__(self, 'ratio', Fraction(self.ratio))
        if self.start < 0:
            raise DomainError("tail start must be a natural number", field='start')
        if self.bound < 0 or self.ratio < 0:
            raise DomainError("tail bound and ratio must be nonnegative", field='tail')
        if self.degree < 0:
            raise DomainError("tail degree must be a natural number", field='degree')

    @property
    def is_zero(self) -> bool:
        return self.bound == 0

    def bound_at(self, n: int) -> Fraction:
        return self.bound * (n + 1) ** self.degree * self.ratio ** n

    def scaled(self, factor: Rational) -> 'TailDescriptor':
        return TailDescriptor(self.start, self.bound * Fraction(factor), self.ratio,
                              self.degree, self.exact)

    def to_dict(self) -> dict:
        payload = {'start': self.start, 'C': str(self.bound), 'r': str(self.ratio)}
        if self.degree:
            payload['degree'] = self.degree
        if self.exact:
            payload['exact'] = True
        return payload


# closed forms -------------------------------------------------------------------

def eulerian_row(d: int) -> List[int]:
    """Eulerian numbers A(d, k) for k < max(d, 1)."""
    row = [1]
    for m in range(1, d + 1):
        row = [(k + 1) * (row[k] if k < len(row) else 0)
               + (m - k) * (row[k - 1] if 0 < k <= len(row) else 0)
               for k in range(m)]
    return row


def power_geometric_sum(d: int, q: Fraction, start: int = 0) -> NormValue:
    """``sum_{n >= start} (n+1)**d * q**n`` in closed form; +inf when ``q >= 1``."""
    q = Fraction(q)
    if q >= 1:
        return NormValue.inf()
    numerator = sum(Fraction(a) * q ** k for k, a in enumerate(eulerian_row(d)))
    total = numerator / (1 - q) ** (d + 1)
    head = sum(Fraction(n + 1) ** d * q ** n for n in range(start))
    return NormValue(total - head)


def power_geometric_sup(d: int, q: Fraction, start: int = 0) -> NormValue:
    """``sup_{n >= start} (n+1)**d * q**n``; +inf when the terms do not stay bounded."""
    q = Fraction(q)
    if q > 1 or (q == 1 and d > 0):
        return NormValue.inf()

    def past_peak(n: int) -> bool:
        # term n+1 <= term n; monotone in n
        return Fraction(n + 2, n + 1) ** d * q <= 1

    low, high = start, max(start, 1)
    while not past_peak(high):
        low, high = high, 2 * high
    while low < high:
        middle = (low + high) // 2
        if past_peak(middle):
            high = middle
        else:
            low = middle + 1
    return NormValue(Fraction(low + 1) ** d * q ** low)


def _quotient(numerator: Fraction, denominator: Fraction) -> NormValue:
    if denominator == 0:
        return NormValue(0) if numerator == 0 else NormValue.inf()
    return NormValue(numerator / denominator)


def _ratio_tail(sigma: Weight, rho: Weight) -> Tuple[int, Fraction, Optional[Fraction]]:
    """``(M, c, q)`` with ``sigma(n)/rho(n) = c * q**n`` for ``n >= M``; ``q`` None if undefined."""
    start = max(sigma.tail_start, rho.tail_start, 1 if rho.is_degenerate else 0)
    if rho.is_degenerate:
        return start, Fraction(0), None
    return start, sigma.tail_constant / rho.tail_constant, sigma.ratio / rho.ratio


def ratio_sum(sigma: Weight, rho: Weight) -> NormValue:
    """Closed form of ``sum_n sigma(n) / rho(n)``."""
    start, constant, q = _ratio_tail(sigma, rho)
    head = NormValue(0)
    for n in range(start):
        head = head + _quotient(sigma(n), rho(n))
    if q is None:
        # rho vanishes from ``start`` on
        return head if sigma.is_degenerate else NormValue.inf()
    return head + constant * power_geometric_sum(0, q, start)


def sup_ratio(sigma: Weight, rho: Weight) -> NormValue:
    """``sup_n sigma(n) / rho(n)``; finite exactly when the inclusion is bounded."""
    start, constant, q = _ratio_tail(sigma, rho)
    head = sup_norm(_quotient(sigma(n), rho(n)) for n in range(start))
    if q is None:
        return head if sigma.is_degenerate else NormValue.inf()
    return max(head, constant * power_geometric_sup(0, q, start))


def ratio_tends_to_zero(sigma: Weight, rho: Weight) -> bool:
    _, _, q = _ratio_tail(sigma, rho)
    if q is None:
        return sigma.is_degenerate
    return q < 1


def partial_ratio_sum(sigma: Weight, rho: Weight, terms: int) -> Fraction:
    """Exact ``sum_{n < terms} sigma(n) / rho(n)``."""
    total = Fraction(0)
    for n in range(terms):
        value = _quotient(sigma(n), rho(n))
        if not value.is_finite:
            raise DomainError(f"term {n} of the ratio sum is infinite")
        total += value.value
    return total


def terms_for_tolerance(sigma: Weight, rho: Weight, tolerance: Rational) -> int:
    """Least K with ``ratio_sum - partial_ratio_sum(K) <= tolerance * ratio_sum``."""
    closed = ratio_sum(sigma, rho)
    if not closed.is_finite:
        raise PreconditionError("ratio sum diverges; no partial sum approximates it")
    target = Fraction(tolerance) * closed.value
    partial = Fraction(0)
    terms = 0
    while closed.value - partial > target:
        partial += _quotient(sigma(terms), rho(terms)).value
        terms += 1
    return terms


def tensor_power_ratio_sum(sigma: Weight, rho: Weight, k: int) -> NormValue:
    """Ratio sum of the k-fold tensor power of the inclusion: ``ratio_sum**k``."""
    if k < 1:
        raise DomainError("tensor power must be at least 1", field='k')
    return ratio_sum(sigma, rho) ** k


def is_nuclear_inclusion(sigma: Weight, rho: Weight, na: bool) -> bool:
    """
    Whether the inclusion of the sigma-weighted space into the rho-weighted one
    is nuclear. Raises ``PreconditionError`` when it is not even bounded.
    """
    bound = sup_ratio(sigma, rho)
    if not bound.is_finite:
        raise PreconditionError(
            "inclusion is not bounded: sup sigma(n)/rho(n) is infinite", field='sigma')
    if na:
        return ratio_tends_to_zero(sigma, rho)
    return ratio_sum(sigma, rho).is_finite


# weight matrices ----------------------------------------------------------------

@dataclass(frozen=True)
class WeightMatrix:
    """A chain of weights ``rho_0 < rho_1 < ...`` with the model's archimedean flag."""
    rows: Tuple[Weight, ...]
    na: bool = False

    def __post_init__(self):
        object.__setattr__(self, 'rows', tuple(self.rows))
        if not self.rows:
            raise DomainError("weight matrix needs at least one row", field='rows')

    @classmethod
    def unit_disk(cls, count: int, na: bool = False) -> 'WeightMatrix':
        """Rows ``(1 - 1/(j+1))**n``: the open unit disk."""
        return cls(tuple(Weight.geometric(1 - Fraction(1, j + 1)) for j in range(count)), na)

    @classmethod
    def whole_line(cls, count: int, na: bool = False) -> 'WeightMatrix':
        """Rows ``(j+1)**n``: the disk of infinite radius."""
        return cls(tuple(Weight.geometric(j + 1) for j in range(count)), na)

    def check_domination(self, window_factor: Optional[int] = None) -> ValidationResult:
        """
        Strict eventual domination between consecutive rows, decided on the
        geometric continuation; table prefixes are also compared on the window
        ``n <= window_factor * rows`` and disagreements there are warnings.
        """
        if window_factor is None:
            window_factor = settings.DOMINATION_WINDOW_FACTOR
        window = window_factor * len(self.rows)
        result = ValidationResult(is_valid=True)
        for j, (lower, upper) in enumerate(zip(self.rows, self.rows[1:])):
            start = max(lower.tail_start, upper.tail_start)
            lower_tail = lower.tail_constant * lower.ratio ** start
            upper_tail = upper.tail_constant * upper.ratio ** start
            if lower.ratio > upper.ratio or (lower.ratio == upper.ratio and lower_tail >= upper_tail):
                result.add_error(f"row {j} is not eventually dominated by row {j + 1}")
                continue
            if lower.is_geometric and upper.is_geometric:
                continue
            for n in range(min(window, start) + 1):
                if lower(n) >= upper(n):
                    result.warnings.append(f"rows {j},{j + 1}: rho_{j}({n}) >= rho_{j + 1}({n})")
        return result

    def to_dict(self) -> dict:
        return {'rows': [row.to_dict() for row in self.rows], 'na': self.na}


def is_nuclear_matrix(W: WeightMatrix) -> bool:
    """Every consecutive inclusion is nuclear; unbounded pairs count as not nuclear."""
    for j, (lower, upper) in enumerate(zip(W.rows, W.rows[1:])):
        try:
            if not is_nuclear_inclusion(lower, upper, W.na):
                return False
        except PreconditionError:
            logger.warning(f"rows {j},{j + 1} do not even give a bounded inclusion")
            return False
    return True


# weighted norms -----------------------------------------------------------------

def _weighted_terms(coeffs: Sequence, rho: Weight, model: CoefficientModel) -> List[NormValue]:
    return [model.norm(a) * rho(n) for n, a in enumerate(coeffs)]


def _tail_region(coeffs: Sequence, tail: TailDescriptor, rho: Weight):
    known = len(coeffs)
    if tail.start > known:
        raise DomainError(
            f"tail starts at {tail.start} but only {known} coefficients are known", field='tail')
    start = max(known, rho.tail_start)
    gap = [NormValue(tail.bound_at(n) * rho(n)) for n in range(known, start)]
    return start, gap


def _tail_sum(coeffs, tail, rho) -> NormValue:
    start, gap = _tail_region(coeffs, tail, rho)
    if tail.is_zero:
        return NormValue(0)
    total = sum(gap, NormValue(0))
    q = tail.ratio * rho.ratio
    return total + tail.bound * rho.tail_constant * power_geometric_sum(tail.degree, q, start)


def _tail_sup(coeffs, tail, rho) -> NormValue:
    start, gap = _tail_region(coeffs, tail, rho)
    if tail.is_zero:
        return NormValue(0)
    q = tail.ratio * rho.ratio
    return max(sup_norm(gap), tail.bound * rho.tail_constant * power_geometric_sup(tail.degree, q, start))


def weighted_l1_norm(coeffs: Sequence, tail: Optional[TailDescriptor], rho: Weight,
                     model: CoefficientModel) -> NormValue:
    """
    Norm in the contracting coproduct with weight ``rho``: the sum of
    ``|a_n| rho(n)`` (archimedean) or the sup of the null sequence (non-archimedean).
    Exact without a tail; with one, a certified upper bound, +inf unless the tail
    decays strictly faster than ``1/rho``.
    """
    prefix = _weighted_terms(coeffs, rho, model)
    if model.is_nonarchimedean:
        value = sup_norm(prefix)
        if tail is not None and not tail.is_zero:
            if tail.ratio * rho.ratio >= 1:
                return NormValue.inf()
            value = max(value, _tail_sup(coeffs, tail, rho))
        return value
    value = sum(prefix, NormValue(0))
    if tail is not None:
        value = value + _tail_sum(coeffs, tail, rho)
    return value


def weighted_linf_norm(coeffs: Sequence, tail: Optional[TailDescriptor], rho: Weight,
                       model: CoefficientModel) -> NormValue:
    """Norm in the contracting product: ``sup_n |a_n| rho(n)``, certified through the tail."""
    value = sup_norm(_weighted_terms(coeffs, rho, model))
    if tail is not None:
        value = max(value, _tail_sup(coeffs, tail, rho))
    return value


def _tail_diverges(tail: Optional[TailDescriptor], weight: Weight, test: str) -> bool:
    if tail is None or not tail.exact or tail.is_zero:
        return False
    q = tail.ratio * weight.ratio
    if test == 'linf':
        return q > 1 or (q == 1 and tail.degree > 0)
    return q >= 1


def _row_norm(coeffs, tail, weight: Optional[Weight], model, test) -> NormValue:
    if weight is None:
        # reciprocal of a degenerate row: only sequences supported at 0 survive
        supported_at_zero = all(model.is_zero(a) for a in coeffs[1:])
        if supported_at_zero and (tail is None or tail.is_zero):
            return model.norm(coeffs[0]) if coeffs else NormValue(0)
        return NormValue.inf()
    if test == 'linf':
        return weighted_linf_norm(coeffs, tail, weight, model)
    return weighted_l1_norm(coeffs, tail, weight, model)


def membership(coeffs: Sequence, tail: Optional[TailDescriptor], W: WeightMatrix,
               space: str, model: CoefficientModel, test: str = 'l1') -> MemberReport:
    """
    Classify a sequence against ``lambda`` (finite for every row, weights rho_j)
    or ``kappa`` (finite for some row, weights 1/rho_j). ``test`` selects the
    summable (``l1``) or bounded (``linf``) condition per row.
    """
    if space not in ('lambda', 'kappa'):
        raise DomainError(f"unknown sequence space '{space}'", field='space')
    if test not in ('l1', 'linf'):
        raise DomainError(f"unknown membership test '{test}'", field='test')
    validity = W.check_domination()
    if not validity.is_valid:
        raise PreconditionError("; ".join(validity.errors), field='rows')

    coeffs = [model.coerce(a) for a in coeffs]
    norms: List[NormValue] = []
    diverging: List[int] = []
    unsettled: List[int] = []
    for j, row in enumerate(W.rows):
        if space == 'kappa':
            weight = None if row.is_degenerate else row.reciprocal()
        else:
            weight = row
        value = _row_norm(coeffs, tail, weight, model, test)
        norms.append(value)
        if value.is_finite:
            if space == 'kappa':
                return MemberReport('member', space, witness=j, row_norms=norms,
                                    evidence=f"finite norm {value} for row {j}")
            continue
        if weight is None or _tail_diverges(tail, weight, test):
            diverging.append(j)
        else:
            unsettled.append(j)

    if space == 'lambda':
        if not diverging and not unsettled:
            return MemberReport('member', space, row_norms=norms,
                                evidence="finite norm for every row")
        if diverging:
            return MemberReport('non-member', space, witness=diverging[0], row_norms=norms,
                                evidence=f"norm diverges for row {diverging[0]}")
        logger.warning(f"tail certificate cannot settle row {unsettled[0]}")
        return MemberReport('undecidable', space, witness=unsettled[0], row_norms=norms,
                            evidence=f"tail certificate too weak for row {unsettled[0]}")

    if not unsettled:
        return MemberReport('non-member', space, row_norms=norms,
                            evidence="norm diverges for every row")
    logger.warning("tail certificate cannot settle kappa membership")
    return MemberReport('undecidable', space, witness=unsettled[0], row_norms=norms,
                        evidence=f"tail certificate too weak for row {unsettled[0]}")


# morphisms between weighted spaces ----------------------------------------------

def _columns(entries: Sequence[Sequence]) -> List[List]:
    width = max((len(row) for row in entries), default=0)
    return [[row[j] if j < len(row) else 0 for row in entries] for j in range(width)]


def matrix_morphism_norm(entries: Sequence[Sequence], sigma: Weight, rho: Weight,
                         model: CoefficientModel) -> NormValue:
    """
    Operator norm of ``e_j -> sum_i a_ij e_i`` from the rho-weighted coproduct to
    the sigma-weighted one; ``entries[i][j]`` is ``a_ij``.
    """
    best = NormValue(0)
    for j, column in enumerate(_columns(entries)):
        images = [model.norm(a) * sigma(i) for i, a in enumerate(column)]
        image = sup_norm(images) if model.is_nonarchimedean else sum(images, NormValue(0))
        best = max(best, _quotient_norm(image, rho(j)))
    return best


def matrix_nuclear_norm(entries: Sequence[Sequence], sigma: Weight, rho: Weight,
                        model: CoefficientModel) -> NormValue:
    """Norm of the rank-one decomposition ``sum_j e_j^* / rho(j) (x) A e_j``; bounds the nuclear norm."""
    pieces = []
    for j, column in enumerate(_columns(entries)):
        images = [model.norm(a) * sigma(i) for i, a in enumerate(column)]
        image = sup_norm(images) if model.is_nonarchimedean else sum(images, NormValue(0))
        pieces.append(_quotient_norm(image, rho(j)))
    if model.is_nonarchimedean:
        return sup_norm(pieces)
    return sum(pieces, NormValue(0))


def _quotient_norm(value: NormValue, denominator: Fraction) -> NormValue:
    if not value.is_finite:
        return value
    return _quotient(value.value, denominator)


def duality_pairing(x: Sequence, y: Sequence, rho: Weight,
                    model: CoefficientModel) -> BoundReport:
    """``sum_n x_n y_n`` with bound ``||x||_rho * ||y||_{inf, 1/rho}``."""
    length = min(len(x), len(y))
    value = model.sum(model.mul(x[n], y[n]) for n in range(length))
    left = weighted_l1_norm(list(x), None, rho, model)
    right = weighted_linf_norm(list(y), None, rho.reciprocal(), model)
    bound = left * right
    return BoundReport('duality_pairing', value, bound, model.norm(value) <= bound)
