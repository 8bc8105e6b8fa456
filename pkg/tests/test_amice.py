"""
Tests for distributions, the duality pairing, Bernoulli numbers and base change.
"""

from fractions import Fraction

import pytest
import sympy
from sympy.functions.combinatorial.numbers import stirling

from algebra.amice import (
    Distribution, StirlingTable, amice_transform, base_change_commutes, base_change_series,
    bernoulli, bernoulli_by_recurrence, convolve, dirac, kubota_leopoldt, log_one_plus,
    pairing, power_moment, stirling_table, tensor_pairing,
)
from algebra.coefficients import NormValue, RingMorphism
from algebra.hopf import comultiply, mahler_comultiply, mahler_product
from algebra.series import BasisTag, TruncatedSeries, multiply, tensor
from algebra.weights import TailDescriptor
from utils.error_handling import CertificateError, DomainError, InsufficientDataError

HALF = Fraction(1, 2)


def mahler(model, coeffs, **kwargs):
    if kwargs:
        return TruncatedSeries.truncated(model, coeffs, basis=BasisTag.MAHLER, **kwargs)
    return TruncatedSeries.polynomial(model, coeffs, BasisTag.MAHLER)


def random_coeffs(rng, degree=8, bound=50):
    return [rng.randint(-bound, bound) for _ in range(rng.randint(0, degree) + 1)]


class TestDistributions:
    """Test distribution constructors."""

    def test_empty_moments_give_zero(self, q_arch):
        """Test that no moments is the zero distribution."""
        mu = amice_transform([], q_arch)
        assert mu.is_polynomial
        assert mu.coeffs == ()

    def test_truncated_moments(self, q_arch):
        """Test that moments are valid below their count."""
        mu = amice_transform([1, 2], q_arch)
        assert mu.order == 2
        assert mu.moment(1) == 2
        with pytest.raises(InsufficientDataError, match="moment 5"):
            mu.moment(5)

    def test_finite_support_with_tail_rejected(self, q_arch):
        """Test that a finitely supported distribution has no tail."""
        with pytest.raises(DomainError):
            amice_transform([1], q_arch, tail=TailDescriptor(1, 1, HALF), finite_support=True)

    def test_distribution_is_monomial(self, q_arch):
        """Test the basis requirement."""
        with pytest.raises(DomainError, match="monomial series"):
            Distribution(q_arch, BasisTag.MAHLER, (1,))

    def test_dirac_moments(self, q_arch):
        """Test that delta_a has moments binom(a, n)."""
        delta = dirac(2, 4, q_arch)
        assert isinstance(delta, Distribution)
        assert delta.coeffs == (1, 2, 1)

    def test_convolution_of_diracs(self, q_arch):
        """Test delta_1 * delta_2 = delta_3."""
        product = convolve(dirac(1, 4, q_arch), dirac(2, 4, q_arch))
        assert isinstance(product, Distribution)
        assert product.agrees_with(dirac(3, 4, q_arch))


class TestPairing:
    """Test the pairing of distributions with functions."""

    def test_dirac_evaluates(self, q_arch):
        """Test <delta_3, binom(x, 2)> = 3."""
        value = pairing(dirac(3, 5, q_arch), mahler(q_arch, [0, 0, 1]))
        assert value.value == 3
        assert value.exact
        assert value.error_bound == 0

    def test_dirac_on_squares(self, q_arch):
        """Test <delta_3, x**2> = 9."""
        assert pairing(dirac(3, 5, q_arch), mahler(q_arch, [0, 1, 2])).value == 9

    def test_truncated_against_polynomial(self, q_arch):
        """Test that a polynomial function needs only finitely many moments."""
        value = pairing(kubota_leopoldt(4, q_arch), mahler(q_arch, [0, 1]))
        assert value.value == -HALF
        assert value.exact

    def test_too_few_moments(self, q_arch):
        """Test that the truncation must cover the polynomial's support."""
        xi = amice_transform([1, 1], q_arch)
        with pytest.raises(InsufficientDataError):
            pairing(xi, mahler(q_arch, [0, 0, 0, 1]))

    def test_certified_error(self, q_arch):
        """Test the error bound sum_{n >= 2} 4**-n = 1/12."""
        xi = amice_transform([1, 0], q_arch, tail=TailDescriptor(2, 1, HALF))
        f = mahler(q_arch, [1, 1], tail=TailDescriptor(2, 1, HALF))
        value = pairing(xi, f)
        assert value.value == 1
        assert value.error_bound == Fraction(1, 12)
        assert not value.exact

    def test_missing_certificate(self, q_arch):
        """Test that both infinite sides need tails."""
        xi = amice_transform([1, 0], q_arch)
        f = mahler(q_arch, [1, 1], tail=TailDescriptor(2, 1, HALF))
        with pytest.raises(CertificateError):
            pairing(xi, f)

    def test_divergent_pairing(self, q_arch):
        """Test that non-decaying tails do not certify a value."""
        xi = amice_transform([1], q_arch, tail=TailDescriptor(1, 1, 1))
        f = mahler(q_arch, [1], tail=TailDescriptor(1, 1, 1))
        with pytest.raises(CertificateError, match="converge"):
            pairing(xi, f)

    def test_divergent_pairing_non_archimedean(self, q_5):
        """Test that bounded but non-vanishing terms do not certify a value."""
        xi = amice_transform([1], q_5, tail=TailDescriptor(1, 1, 1))
        f = mahler(q_5, [1], tail=TailDescriptor(1, 1, 1))
        with pytest.raises(CertificateError, match="terms to zero"):
            pairing(xi, f)

    def test_non_archimedean_error_is_a_supremum(self, q_5):
        """Test the error bound max_{n >= 1} 2**-n * 1 = 1/2."""
        xi = amice_transform([1], q_5, tail=TailDescriptor(1, 1, HALF))
        f = mahler(q_5, [1], tail=TailDescriptor(1, 1, 1))
        value = pairing(xi, f)
        assert value.value == 1
        assert value.error_bound == HALF

    def test_grouplike_basis(self, q_arch):
        """Test that a group-like element pairs through its monomial form."""
        xi = TruncatedSeries.polynomial(q_arch, [0, 0, 0, 1], BasisTag.GROUPLIKE)
        assert pairing(xi, mahler(q_arch, [0, 0, 1])).value == 3

    def test_pairing_sides(self, q_arch, q_na):
        """Test model and basis requirements."""
        with pytest.raises(DomainError):
            pairing(dirac(1, 3, q_arch), mahler(q_na, [1]))
        with pytest.raises(DomainError, match="Mahler series"):
            pairing(dirac(1, 3, q_arch), TruncatedSeries.polynomial(q_arch, [1], BasisTag.INDICATOR))

    def test_tensor_pairing(self, q_arch):
        """Test <delta_1 (x) delta_2, f(x+y)> = f(3) for f = binom(x, 2)."""
        T = tensor(dirac(1, 3, q_arch), dirac(2, 3, q_arch))
        U = mahler_comultiply(mahler(q_arch, [0, 0, 1]), 3)
        assert tensor_pairing(T, U) == 3

    def test_dual_bases(self, trivial):
        """Test <s**n, binom(x, k)> = delta_nk for n, k <= 32."""
        for n in range(33):
            xi = TruncatedSeries.monomial(trivial, n)
            for k in range(33):
                f = TruncatedSeries.monomial(trivial, k, BasisTag.MAHLER)
                assert pairing(xi, f).value == (1 if n == k else 0)

    def test_product_is_adjoint_to_mahler_coproduct(self, trivial, rng):
        """Test <F G, f> = <F (x) G, f(x + y)> on random integer polynomials."""
        for _ in range(200):
            F, G = (TruncatedSeries.polynomial(trivial, random_coeffs(rng)) for _ in range(2))
            f = mahler(trivial, random_coeffs(rng))
            assert pairing(multiply(F, G), f).value == \
                tensor_pairing(tensor(F, G), mahler_comultiply(f, 9))

    def test_coproduct_is_adjoint_to_mahler_product(self, trivial, rng):
        """Test <Delta F, f (x) g> = <F, f g> on random integer polynomials."""
        for _ in range(200):
            F = TruncatedSeries.polynomial(trivial, random_coeffs(rng))
            f, g = (mahler(trivial, random_coeffs(rng)) for _ in range(2))
            assert tensor_pairing(comultiply(F, 9), tensor(f, g)) == \
                pairing(F, mahler_product(f, g)).value

    def test_tensor_pairing_outside_valid_region(self, q_arch):
        """Test that a series entry the Mahler tensor cannot see is an error."""
        T = tensor(dirac(1, 3, q_arch), dirac(2, 3, q_arch))
        U = mahler_comultiply(mahler(q_arch, [0, 0, 1]), 2)
        with pytest.raises(InsufficientDataError):
            tensor_pairing(T, U)


class TestPowerMoments:
    """Test Stirling numbers and power moments."""

    def test_stirling_values(self):
        """Test S(4, 2) = 7 and S(3, 2) = 3."""
        assert StirlingTable.build(4)(4, 2) == 7
        assert stirling_table(5)(3, 2) == 3
        assert stirling_table(5)(3, 0) == 0

    def test_stirling_against_sympy(self):
        """Test the table against sympy's Stirling numbers of the second kind."""
        table = stirling_table(12)
        for n in range(13):
            for k in range(n + 1):
                assert table(n, k) == int(stirling(n, k))

    def test_stirling_bound(self):
        """Test reads past the table bound."""
        with pytest.raises(InsufficientDataError):
            stirling_table(2)(3, 1)
        with pytest.raises(DomainError):
            StirlingTable.build(-1)

    def test_power_moment_of_dirac(self, q_arch):
        """Test integral of x**2 against delta_3."""
        assert power_moment(dirac(3, 5, q_arch), 2) == 9

    def test_power_moment_needs_order(self, q_arch):
        """Test that moment n needs order n + 1."""
        with pytest.raises(InsufficientDataError):
            power_moment(kubota_leopoldt(2, q_arch), 2)


class TestKubotaLeopoldt:
    """Test log(1+s)/s and Bernoulli numbers."""

    def test_moments(self, q_na):
        """Test the moments (-1)**n / (n+1)."""
        mu = kubota_leopoldt(3)
        assert mu.coeffs == (1, -HALF, Fraction(1, 3))
        assert mu.model == q_na
        assert mu.tail == TailDescriptor(3, 1, 1, degree=1)

    def test_times_s_is_logarithm(self):
        """Test s * log(1+s)/s = log(1+s)."""
        s = TruncatedSeries.monomial(kubota_leopoldt(1).model, 1)
        assert multiply(s, kubota_leopoldt(4)).agrees_with(log_one_plus(4))

    def test_archimedean_tail(self, q_arch):
        """Test the bounded tail in the archimedean model."""
        assert kubota_leopoldt(3, q_arch).tail == TailDescriptor(3, 1, 1)

    def test_needs_rationals(self, trivial):
        """Test that Z-trivial cannot hold the moments."""
        with pytest.raises(DomainError, match="1/2"):
            kubota_leopoldt(3, trivial)
        with pytest.raises(DomainError):
            log_one_plus(3, trivial)

    @pytest.mark.parametrize("n, expected", [
        (1, Fraction(-1, 2)),
        (2, Fraction(1, 6)),
        (3, Fraction(0)),
        (4, Fraction(-1, 30)),
        (12, Fraction(-691, 2730)),
    ])
    def test_bernoulli_values(self, n, expected):
        """Test power moments of the Kubota-Leopoldt distribution."""
        assert bernoulli(n) == expected

    def test_bernoulli_against_sympy(self, sample_count):
        """Test B_n for n >= 2, where every convention agrees."""
        for n in range(2, 21 + sample_count(30, reduced=0)):
            assert bernoulli(n) == Fraction(str(sympy.bernoulli(n)))

    def test_bernoulli_against_generating_function(self):
        """Test B_1..B_20 against the coefficients of t/(e^t - 1)."""
        t = sympy.symbols('t')
        expansion = sympy.series(t / (sympy.exp(t) - 1), t, 0, 21).removeO()
        for n in range(1, 21):
            expected = expansion.coeff(t, n) * sympy.factorial(n)
            assert bernoulli(n) == Fraction(str(expected))

    def test_recurrence_base_case(self):
        """Test B_0 = 1."""
        assert bernoulli_by_recurrence(0) == 1

    def test_bernoulli_index(self):
        """Test that B_0 is not offered as a moment."""
        with pytest.raises(DomainError):
            bernoulli(0)


class TestBaseChange:
    """Test base change of series and the commuting square."""

    def test_square_commutes(self, trivial):
        """Test <delta_3, binom(x, 2)> = 3 before and after Z -> Z_5."""
        report = base_change_commutes(dirac(3, 5, trivial), mahler(trivial, [0, 0, 1]),
                                      RingMorphism.int_to_zp(5, 4))
        assert report.commutes
        assert report.mapped_pairing == '3 + O(5^4)'
        assert report.paired_images == '3 + O(5^4)'

    def test_distribution_class_kept(self, trivial):
        """Test that a distribution maps to a distribution."""
        image = base_change_series(dirac(3, 5, trivial), RingMorphism.int_to_zp(5, 4))
        assert isinstance(image, Distribution)
        assert image.model.name == 'Zp:5:4'

    def test_tail_loses_exactness(self, q_na):
        """Test that a contracting image keeps the bound but not equality."""
        mu = amice_transform([1], q_na, tail=TailDescriptor(1, 1, HALF, exact=True))
        image = base_change_series(mu, RingMorphism.qna_to_qp(5))
        assert image.tail == TailDescriptor(1, 1, HALF)

    def test_source_must_match(self, q_arch):
        """Test that the morphism must start at the series' model."""
        with pytest.raises(DomainError):
            base_change_series(dirac(1, 3, q_arch), RingMorphism.int_to_zp(5, 4))

    def test_needs_finite_support(self, q_na):
        """Test that commutation is only checked for finite support."""
        f = mahler(q_na, [1], tail=TailDescriptor(1, 1, HALF))
        with pytest.raises(CertificateError):
            base_change_commutes(kubota_leopoldt(3), f, RingMorphism.qna_to_qp(5))

    @pytest.mark.parametrize("p", [2, 3, 5])
    def test_random_pairs_commute(self, trivial, rng, p):
        """Test the commuting square along Z -> Z_p on random finite pairs."""
        morphism = RingMorphism.int_to_zp(p, 6)
        for _ in range(100):
            xi = TruncatedSeries.polynomial(trivial, random_coeffs(rng))
            f = mahler(trivial, random_coeffs(rng))
            assert base_change_commutes(xi, f, morphism).commutes

    def test_pairing_error_is_norm_value(self, q_na):
        """Test that exact pairings report a zero error bound."""
        assert pairing(dirac(2, 3, q_na), mahler(q_na, [1])).error_bound == NormValue(0)
