"""
Bialgebra and Hopf structure maps on both sides of the duality.

Series side (monomial basis): product, unit, comultiplication
``Delta(s) = s(x)1 + 1(x)s + s(x)s``, counit ``a_0`` and antipode
``s -> (1+s)**-1 - 1``. Function side (Mahler basis): the transposed maps,
i.e. pointwise product, evaluation at 0, ``f(x+y)`` and ``f(-x)``.
"""

import logging
from fractions import Fraction
from math import factorial
from typing import Dict, List, Optional, Sequence, Tuple

from algebra.coefficients import (
    CoefficientModel, PadicElement, RingElement, TruncatedPAdicIntegers,
    binomial_coefficients, exact_binomial,
)
from algebra.mahler import padic_evaluate
from algebra.series import (
    BasisTag, BiTruncatedSeries, TruncatedSeries, _min_order, bs_norm, compose,
    geometric_inverse, ps_norm, tensor, tensor_norm,
)
from algebra.weights import TailDescriptor
from models.core import BoundReport, HopfAxiomReport
from utils.error_handling import CertificateError, DomainError
from utils.logging_config import log_execution_time

logger = logging.getLogger(__name__)

Triple = Tuple[int, int, int]


def _trinomial(n: int, i: int, j: int, k: int) -> int:
    return factorial(n) // (factorial(i) * factorial(j) * factorial(k))


def _delta_monomial(n: int) -> Dict[Tuple[int, int], int]:
    """Integer coefficients of ``Delta(s**n)`` keyed by ``(a, b)``."""
    values: Dict[Tuple[int, int], int] = {}
    for k in range(n + 1):
        for i in range(n - k + 1):
            j = n - k - i
            key = (i + k, j + k)
            values[key] = values.get(key, 0) + _trinomial(n, i, j, k)
    return values


def _require_monomial(F: TruncatedSeries):
    if F.basis is not BasisTag.MONOMIAL:
        raise DomainError(f"series-side map needs the monomial basis, got {F.basis.value}",
                          field='basis')


def _require_mahler(f: TruncatedSeries):
    if f.basis not in (BasisTag.MAHLER, BasisTag.INDICATOR):
        raise DomainError(f"function-side map needs a Mahler or indicator series, got {f.basis.value}",
                          field='basis')


# series side --------------------------------------------------------------------

def comultiply(F: TruncatedSeries, N: int) -> BiTruncatedSeries:
    """
    ``Delta(sum a_n s**n)`` restricted to the square ``i, j < N``.

    Entry ``(i, j)`` reads coefficients up to ``i + j``, so for a truncation of
    order ``M`` the result is valid where ``i + j < M``.
    """
    _require_monomial(F)
    if N < 1:
        raise DomainError("truncation square needs N >= 1", field='N')
    model = F.model
    values: Dict[Tuple[int, int], RingElement] = {}
    for n, a in enumerate(F.coeffs):
        if model.is_zero(a) or n > 2 * (N - 1):
            continue
        for key, c in _delta_monomial(n).items():
            if key[0] < N and key[1] < N:
                values[key] = model.add(values.get(key, model.zero()),
                                        model.mul(model.from_int(c), a))
    return BiTruncatedSeries.from_dict(model, values, N, F.order, BasisTag.MONOMIAL)


def counit(F: TruncatedSeries) -> RingElement:
    """``a_0``."""
    _require_monomial(F)
    return F.coefficient(0)


def antipode(F: TruncatedSeries, N: int) -> TruncatedSeries:
    """``F((1+s)**-1 - 1)`` modulo ``s**N``; purely formal, any model."""
    _require_monomial(F)
    return compose(F, geometric_inverse(N, F.model))


def normed_antipode(F: TruncatedSeries, N: int, rho) -> BoundReport:
    """
    Norm of the known part of ``alpha(F)`` against ``||F||_rho``.

    Only non-archimedean models with ``0 < rho < 1`` carry the normed
    antipode; the truncation's norm is a lower bound for the true norm.
    """
    rho = Fraction(rho)
    if not F.model.is_nonarchimedean:
        raise DomainError(f"{F.model.name} is archimedean; the antipode is not bounded there",
                          field='model')
    if not 0 < rho < 1:
        raise DomainError("normed antipode needs 0 < rho < 1", field='rho')
    image = antipode(F, N).as_polynomial()
    value = ps_norm(image, rho)
    bound = ps_norm(F, rho)
    return BoundReport('normed_antipode', value, bound, value <= bound, value == bound)


def _triple_left(n: int) -> Dict[Triple, int]:
    """``(Delta (x) id) Delta (s**n)``."""
    result: Dict[Triple, int] = {}
    for (a, b), c in _delta_monomial(n).items():
        for (x, y), d in _delta_monomial(a).items():
            result[(x, y, b)] = result.get((x, y, b), 0) + c * d
    return result


def _triple_right(n: int) -> Dict[Triple, int]:
    """``(id (x) Delta) Delta (s**n)``."""
    result: Dict[Triple, int] = {}
    for (a, b), c in _delta_monomial(n).items():
        for (x, y), d in _delta_monomial(b).items():
            result[(a, x, y)] = result.get((a, x, y), 0) + c * d
    return result


def _check_coassociativity(model: CoefficientModel, N: int) -> Optional[str]:
    for n in range(N):
        left, right = _triple_left(n), _triple_right(n)
        for key in sorted(set(left) | set(right)):
            lhs, rhs = model.from_int(left.get(key, 0)), model.from_int(right.get(key, 0))
            if not model.eq(lhs, rhs):
                return f"s^{n}: coefficient {key} is {model.format(lhs)} vs {model.format(rhs)}"
    return None


def _check_counit(N: int) -> Optional[str]:
    for n in range(N):
        delta = _delta_monomial(n)
        for side, position in (('left', 0), ('right', 1)):
            # apply the counit to one factor: keep entries whose other index is 0
            image: Dict[int, int] = {}
            for key, c in delta.items():
                if key[position] == 0:
                    image[key[1 - position]] = image.get(key[1 - position], 0) + c
            expected = {n: 1}
            if {k: v for k, v in image.items() if v} != expected:
                return f"s^{n}: {side} counit gives {sorted(image.items())}"
    return None


def _check_antipode(model: CoefficientModel, N: int) -> Optional[str]:
    alpha = geometric_inverse(N, model)
    images = [compose(TruncatedSeries.monomial(model, a), alpha).coefficients_below(N)
              for a in range(N)]
    one = [model.one()] + [model.zero()] * (N - 1)
    for n in range(N):
        F = TruncatedSeries.polynomial(model, binomial_coefficients(model, n, n + 1))
        delta = comultiply(F, N)
        for side in ('left', 'right'):
            total = [model.zero()] * N
            for i, j, c in delta.entries:
                alpha_index, plain_index = (i, j) if side == 'left' else (j, i)
                shifted = [model.zero()] * plain_index + images[alpha_index]
                product = [model.mul(c, v) for v in shifted[:N]]
                total = [model.add(x, y) for x, y in zip(total, product + [model.zero()] * N)]
            for k in range(N):
                if not model.eq(total[k], one[k]):
                    return (f"(1+s)^{n}: {side} antipode law gives coefficient "
                            f"{model.format(total[k])} at s^{k}")
    return None


@log_execution_time(logger)
def verify_hopf_axioms(model: CoefficientModel, N: int) -> HopfAxiomReport:
    """
    Exact check of coassociativity, counit and antipode laws below order ``N``.

    The antipode law is tested on ``(1+s)**n``, where both sides are finite.
    """
    if N < 1:
        raise DomainError("truncation order must be at least 1", field='N')
    report = HopfAxiomReport(model=model.name, order=N)
    report.record('coassoc', _check_coassociativity(model, N))
    report.record('counit', _check_counit(N))
    report.record('antipode', _check_antipode(model, N))
    if not report.passed:
        logger.warning(f"Hopf axioms fail for {model.name} at N={N}: {report.failures}")
    return report


def is_grouplike(F: TruncatedSeries, N: int) -> bool:
    """``a_0 = 1`` and ``Delta(F) = F (x) F`` on the truncation square."""
    _require_monomial(F)
    model = F.model
    if F.order == 0 or not model.eq(F.coefficient(0), model.one()):
        return False
    return comultiply(F, N).agrees_with(tensor(F, F))


def _binomial_tail(model: CoefficientModel, a, N: int) -> Optional[TailDescriptor]:
    if model.is_nonarchimedean:
        # binomial coefficients of a p-adic or rational integer have norm <= 1
        if isinstance(a, PadicElement) or Fraction(a).denominator == 1:
            return TailDescriptor(N, 1, 1)
        return None
    a = Fraction(a)
    if a.denominator != 1:
        return None
    if a < 0:
        # |binom(-m, n)| = binom(n+m-1, m-1) <= (n+1)**(m-1)
        return TailDescriptor(N, 1, 1, degree=int(-a) - 1, exact=a == -1)
    return TailDescriptor(N, 2 ** int(a), 1)


def grouplike_from_exponent(a, N: int, model: CoefficientModel) -> TruncatedSeries:
    """``(1+s)**a = sum binom(a, n) s**n`` modulo ``s**N``."""
    if N < 1:
        raise DomainError("truncation order must be at least 1", field='N')
    if isinstance(a, PadicElement) and not isinstance(model, TruncatedPAdicIntegers):
        raise DomainError(f"p-adic exponent needs a truncated p-adic model, not {model.name}",
                          field='a')
    coeffs = binomial_coefficients(model, a, N)
    if not isinstance(a, PadicElement) and Fraction(a).denominator == 1 and 0 <= a < N:
        return TruncatedSeries.polynomial(model, coeffs)
    return TruncatedSeries.truncated(model, coeffs, N, _binomial_tail(model, a, N))


def delta_norm_bound_check(n: int, rho, model: CoefficientModel) -> BoundReport:
    """``||Delta(s**n)||`` against ``(2 rho + rho**2)**n`` (or ``max(rho, rho**2)**n``)."""
    rho = Fraction(rho)
    if n < 0 or rho <= 0:
        raise DomainError("need n >= 0 and rho > 0")
    value = tensor_norm(comultiply(TruncatedSeries.monomial(model, n), n + 1), rho, rho)
    if model.is_nonarchimedean:
        bound = max(rho, rho * rho) ** n
    else:
        bound = (2 * rho + rho * rho) ** n
    return BoundReport('delta_norm', value, bound, value <= bound, value == bound)


# function side ------------------------------------------------------------------

def mahler_product(f: TruncatedSeries, g: TruncatedSeries) -> TruncatedSeries:
    """
    Pointwise product of functions.

    In the Mahler basis ``binom(x,n) binom(x,k) = sum_l binom(l,n) binom(n,l-k) binom(x,l)``
    over ``max(n,k) <= l <= n+k``; the indicator basis multiplies coefficientwise.
    """
    _require_mahler(f)
    if f.basis is not g.basis:
        raise DomainError("cannot multiply functions in different bases", field='basis')
    if f.model != g.model:
        raise DomainError(f"functions over different models: {f.model.name}, {g.model.name}")
    model = f.model
    order = _min_order(f.order, g.order)

    if f.basis is BasisTag.INDICATOR:
        length = min(len(f.coeffs), len(g.coeffs)) if order is None else order
        values = [model.mul(f.coefficient(n), g.coefficient(n)) for n in range(length)]
        return TruncatedSeries(model, f.basis, tuple(values), order)

    length = len(f.coeffs) + len(g.coeffs) - 1 if f.coeffs and g.coeffs else 0
    if order is not None:
        length = order
    values = [model.zero()] * length
    for n, a in enumerate(f.coeffs):
        if model.is_zero(a):
            continue
        for k, b in enumerate(g.coeffs):
            if model.is_zero(b) or max(n, k) >= length:
                continue
            ab = model.mul(a, b)
            for l in range(max(n, k), min(n + k, length - 1) + 1):
                c = exact_binomial(l, n) * exact_binomial(n, l - k)
                values[l] = model.add(values[l], model.mul(model.from_fraction(c), ab))
    return TruncatedSeries(model, f.basis, tuple(values), order)


def mahler_comultiply(f: TruncatedSeries, N: int) -> BiTruncatedSeries:
    """``f(x + y)``: entry ``(i, j)`` is the coefficient of index ``i + j`` (Vandermonde)."""
    _require_mahler(f)
    if N < 1:
        raise DomainError("truncation square needs N >= 1", field='N')
    values = {(i, j): f.coeffs[i + j]
              for i in range(N) for j in range(N) if i + j < len(f.coeffs)}
    return BiTruncatedSeries.from_dict(f.model, values, N, f.order, f.basis)


def mahler_counit(f: TruncatedSeries) -> RingElement:
    """Evaluation at 0."""
    _require_mahler(f)
    return f.coefficient(0)


def mahler_unit(model: CoefficientModel) -> TruncatedSeries:
    """The constant function ``binom(x, 0)``."""
    return TruncatedSeries.one(model, BasisTag.MAHLER)


def mahler_antipode(f: TruncatedSeries, eval_points: Sequence[int]) -> List[RingElement]:
    """
    ``f(-n) = sum_k binom(-n, k) a_k`` for each requested ``n``.

    Exact for finite Mahler support; otherwise the sum converges only p-adically
    and is returned at certified precision.
    """
    if f.basis is not BasisTag.MAHLER:
        raise DomainError("antipode evaluation needs a Mahler series", field='basis')
    model = f.model
    finite = f.is_polynomial or (f.tail is not None and f.tail.is_zero)
    values = []
    for n in eval_points:
        if n < 0:
            raise DomainError("evaluation points are natural numbers", field='eval_points')
        if finite:
            values.append(model.sum(model.mul(model.from_fraction(exact_binomial(-n, k)), a)
                                    for k, a in enumerate(f.coeffs)))
        else:
            if f.tail is None:
                raise CertificateError("f(-n) of a truncated series needs a tail certificate",
                                       field='tail')
            values.append(padic_evaluate(f, -n))
    return values


def mahler_reflect(f: TruncatedSeries) -> TruncatedSeries:
    """
    Mahler coefficients of ``x -> f(-x)`` for a polynomial:
    ``b_0 = a_0`` and ``b_m = sum_{k >= m} (-1)**k binom(k-1, m-1) a_k``.
    """
    if f.basis is not BasisTag.MAHLER or not f.is_polynomial:
        raise DomainError("reflection needs a Mahler polynomial", field='basis')
    model = f.model
    if not f.coeffs:
        return f
    values = [f.coeffs[0]]
    for m in range(1, len(f.coeffs)):
        values.append(model.sum(
            model.mul(model.from_fraction((-1) ** k * exact_binomial(k - 1, m - 1)), f.coeffs[k])
            for k in range(m, len(f.coeffs))))
    return TruncatedSeries.polynomial(model, values, BasisTag.MAHLER)


def mahler_product_bound_check(f: TruncatedSeries, g: TruncatedSeries, rho) -> BoundReport:
    """
    Norm of a product against the product of norms.

    Archimedean: ``||fg||`` at ``rho**2 / (2 rho + 1)``. Non-archimedean
    (``rho >= 1``): ``||fg||`` at ``rho`` itself.
    """
    rho = Fraction(rho)
    if rho <= 0:
        raise DomainError("rho must be positive", field='rho')
    model = f.model
    if model.is_nonarchimedean:
        if rho < 1:
            raise DomainError("the non-archimedean product bound needs rho >= 1", field='rho')
        target = rho
    else:
        target = rho * rho / (2 * rho + 1)
    value = bs_norm(mahler_product(f, g), target)
    bound = bs_norm(f, rho) * bs_norm(g, rho)
    return BoundReport('mahler_product', value, bound, value <= bound, value == bound)
