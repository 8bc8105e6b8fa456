"""
Tests for coefficient models, norms, p-adic elements and ring morphisms.
"""

from fractions import Fraction
from math import comb

import pytest

from algebra.coefficients import (
    ArchimedeanRationals, NormValue, PAdicRationals, PadicElement, RingMorphism,
    SupRationals, TrivialIntegers, TruncatedPAdicIntegers, binomial_coefficients,
    check_morphism_contracting, check_ring_axioms, exact_binomial, fraction_valuation,
    parse_model, parse_morphism, sup_norm,
)
from utils.error_handling import DomainError, PrecisionError


class TestNormValue:
    """Test the exact norm codomain."""

    def test_infinity_arithmetic(self):
        """Test that +inf absorbs sums and that 0 * inf is 0."""
        assert NormValue.inf() + 1 == NormValue.inf()
        assert NormValue(0) * NormValue.inf() == 0
        assert NormValue.inf() * Fraction(1, 2) == NormValue.inf()

    def test_ordering_with_rationals(self):
        """Test comparisons against plain numbers."""
        assert NormValue(Fraction(1, 2)) < 1
        assert NormValue(3) > Fraction(5, 2)
        assert NormValue(2) < NormValue.inf()
        assert not NormValue.inf() < NormValue.inf()

    def test_negative_value_rejected(self):
        """Test that negative norms cannot be built."""
        with pytest.raises(DomainError, match="nonnegative"):
            NormValue(-1)

    def test_rendering(self):
        """Test string forms used in JSON output."""
        assert str(NormValue.inf()) == 'inf'
        assert str(NormValue(Fraction(5, 4))) == '5/4'

    def test_sup_norm_of_empty_is_zero(self):
        """Test the empty supremum."""
        assert sup_norm([]) == 0
        assert sup_norm([NormValue(1), NormValue(3), NormValue(2)]) == 3


class TestPadicElement:
    """Test p-adic elements with tracked precision."""

    def test_from_int_splits_valuation(self):
        """Test that 12 = 2**2 * 3 in Z_2."""
        x = PadicElement.from_int(12, 2, 5)
        assert x.valuation == 2
        assert x.unit == 3
        assert x.absolute_precision == 7

    def test_from_fraction_inverts_unit(self):
        """Test that 1/3 in Z_5 is 417 modulo 5**4."""
        x = PadicElement.from_fraction(Fraction(1, 3), 5, 4)
        assert x.valuation == 0
        assert x.unit == 417

    def test_product_with_inverse_is_one(self):
        """Test that (1/3) * 3 agrees with 1."""
        third = PadicElement.from_fraction(Fraction(1, 3), 5, 6)
        three = PadicElement.from_int(3, 5, 6)
        assert (third * three).agrees_with(PadicElement.from_int(1, 5, 6))

    def test_cancellation_loses_precision(self):
        """Test that subtracting close elements keeps only the absolute precision."""
        a = PadicElement.from_int(1 + 5 ** 3, 5, 4)
        b = PadicElement.from_int(1, 5, 4)
        difference = a - b
        assert difference.valuation == 3
        assert difference.absolute_precision == 4

    def test_zero_marker_cannot_be_inverted(self):
        """Test inversion of an element known only to vanish."""
        with pytest.raises(PrecisionError, match="cannot invert"):
            PadicElement.zero_marker(5, 3).inverse()

    def test_mixed_primes_rejected(self):
        """Test that elements of different primes do not combine."""
        with pytest.raises(DomainError):
            PadicElement.from_int(1, 3, 4) + PadicElement.from_int(1, 5, 4)

    def test_reduce_precision(self):
        """Test truncation to a smaller absolute precision."""
        x = PadicElement.from_int(1 + 5 + 25, 5, 6).with_absolute_precision(2)
        assert x.absolute_precision == 2
        assert x.representative() == 6


class TestCoefficientModels:
    """Test the five coefficient models and their norms."""

    def test_trivial_integers(self, trivial):
        """Test the trivial norm."""
        assert trivial.norm(0) == 0
        assert trivial.norm(-7) == 1
        with pytest.raises(DomainError):
            trivial.coerce(Fraction(1, 2))

    def test_sup_rationals_norm(self, q_na):
        """Test that only denominator primes raise the Q-na norm."""
        assert q_na.norm(12) == 1
        assert q_na.norm(Fraction(1, 12)) == 4
        assert q_na.norm(Fraction(5, 9)) == 9

    def test_padic_rationals_norm(self, q_5):
        """Test the 5-adic absolute value."""
        assert q_5.norm(25) == Fraction(1, 25)
        assert q_5.norm(Fraction(1, 5)) == 5
        assert q_5.norm(7) == 1

    def test_archimedean_norm(self, q_arch):
        """Test the absolute value and the archimedean flag."""
        assert q_arch.norm(Fraction(-3, 2)) == Fraction(3, 2)
        assert not q_arch.is_nonarchimedean

    def test_truncated_padic_integers(self, z_5):
        """Test carrier checks and norms in Z_5 at precision 8."""
        assert z_5.norm(z_5.from_int(50)) == Fraction(1, 25)
        assert z_5.eq(z_5.from_fraction(Fraction(1, 2)) * z_5.from_int(2), z_5.one())
        with pytest.raises(DomainError, match="not a 5-adic integer"):
            z_5.from_fraction(Fraction(1, 5))

    def test_padic_model_requires_prime(self):
        """Test rejection of composite primes."""
        with pytest.raises(DomainError, match="not prime"):
            PAdicRationals(4)

    def test_parse_model(self):
        """Test identifier parsing for every model."""
        assert parse_model('Z-trivial') == TrivialIntegers()
        assert parse_model('Q-na') == SupRationals()
        assert parse_model('Q-arch') == ArchimedeanRationals()
        assert parse_model('Qp:3') == PAdicRationals(3)
        assert parse_model('Zp:7:5') == TruncatedPAdicIntegers(7, 5)

    def test_parse_unknown_model(self):
        """Test that unknown identifiers raise DomainError."""
        with pytest.raises(DomainError, match="unknown coefficient model"):
            parse_model('R')

    def test_parse_value(self, q_arch):
        """Test parsing of exact rational strings."""
        assert q_arch.parse('-1/2') == Fraction(-1, 2)
        with pytest.raises(DomainError, match="not an exact rational"):
            q_arch.parse('0.5.1')

    def test_fraction_valuation(self):
        """Test p-adic valuations of rationals."""
        assert fraction_valuation(Fraction(50, 3), 5) == 2
        assert fraction_valuation(Fraction(3, 125), 5) == -3


class TestRingAxioms:
    """Test the norm axiom checker."""

    samples = [0, 1, -1, 2, 3, Fraction(1, 2), Fraction(-5, 6), Fraction(25, 3)]

    def test_archimedean_rationals_pass(self, q_arch):
        """Test that absolute value passes and skips the ultrametric check."""
        report = check_ring_axioms(q_arch, self.samples)
        assert report.passed
        assert 'ultrametric' in report.skipped

    def test_padic_rationals_are_multiplicative(self, q_5):
        """Test that the p-adic norm is checked for multiplicativity."""
        report = check_ring_axioms(q_5, self.samples)
        assert report.passed
        assert 'multiplicativity' not in report.skipped

    def test_sup_rationals_are_ultrametric(self, q_na):
        """Test the supremum norm against the ultrametric inequality."""
        report = check_ring_axioms(q_na, self.samples)
        assert report.passed
        assert 'ultrametric' not in report.skipped

    def test_trivial_integers(self, trivial):
        """Test the trivial norm on integers."""
        assert check_ring_axioms(trivial, [0, 1, -1, 2, 6, -10]).passed

    def test_empty_samples_rejected(self, trivial):
        """Test that an empty sample set is a domain error."""
        with pytest.raises(DomainError, match="at least one sample"):
            check_ring_axioms(trivial, [])

    def test_report_serialization(self, q_arch):
        """Test the JSON form of an axiom report."""
        payload = check_ring_axioms(q_arch, [1, 2]).to_dict()
        assert payload['passed'] is True
        assert payload['sample_count'] == 2


class TestBinomials:
    """Test exact and p-adic binomial coefficients."""

    def test_exact_binomial_of_negative(self):
        """Test binom(-1, n) = (-1)**n."""
        assert [exact_binomial(-1, n) for n in range(5)] == [1, -1, 1, -1, 1]

    def test_exact_binomial_of_half(self):
        """Test binom(1/2, 2) = -1/8."""
        assert exact_binomial(Fraction(1, 2), 2) == Fraction(-1, 8)

    def test_padic_binomials_are_integral(self, z_5):
        """Test that binom(a, n) for a p-adic a has norm at most 1."""
        a = PadicElement.from_int(6, 5, 8)
        values = binomial_coefficients(z_5, a, 7)
        for n, value in enumerate(values):
            assert z_5.norm(value) <= 1
            assert z_5.eq(value, z_5.from_int(comb(6, n)))

    def test_padic_exponent_needs_padic_model(self, q_arch):
        """Test that a p-adic exponent requires a truncated p-adic model."""
        with pytest.raises(DomainError):
            binomial_coefficients(q_arch, PadicElement.from_int(2, 5, 4), 3)


class TestRingMorphisms:
    """Test base-change morphisms."""

    def test_int_to_zp_reduces(self):
        """Test that 30 maps to an element of valuation 1 in Z_5."""
        m = RingMorphism.int_to_zp(5, 4)
        image = m.apply(30)
        assert image.valuation == 1
        assert m.target.eq(image, m.target.from_int(30))

    def test_parse_morphisms(self):
        """Test every morphism identifier."""
        assert parse_morphism('IntToZp:5:4') == RingMorphism.int_to_zp(5, 4)
        assert parse_morphism('QnaToQp:3') == RingMorphism.qna_to_qp(3)
        assert parse_morphism('IntToQ') == RingMorphism.int_to_q()
        assert parse_morphism('Identity:Q-arch') == RingMorphism.identity(ArchimedeanRationals())

    def test_unknown_morphism(self):
        """Test that a malformed identifier is rejected."""
        with pytest.raises(DomainError, match="unknown morphism"):
            parse_morphism('IntToZp:5')

    def test_kind_must_match_models(self):
        """Test that a morphism kind fixes its source and target types."""
        with pytest.raises(DomainError):
            RingMorphism(ArchimedeanRationals(), PAdicRationals(5), 'QnaToQp')

    def test_int_to_zp_is_contracting(self):
        """Test the morphism axioms of Z -> Z_3."""
        report = check_morphism_contracting(RingMorphism.int_to_zp(3, 6), range(-4, 5))
        assert report.passed

    def test_qna_to_qp_is_contracting(self):
        """Test the morphism axioms of Q-na -> Q_5."""
        samples = [Fraction(1, 5), 5, Fraction(2, 3), Fraction(-7, 25), 0, 1]
        report = check_morphism_contracting(RingMorphism.qna_to_qp(5), samples)
        assert report.passed
