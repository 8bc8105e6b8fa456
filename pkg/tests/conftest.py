"""
Pytest configuration and shared fixtures for amice-kit tests.
"""
import random

import pytest

from algebra.coefficients import (
    ArchimedeanRationals, PAdicRationals, SupRationals, TrivialIntegers, TruncatedPAdicIntegers,
)


def pytest_addoption(parser):
    """Add custom command line options."""
    parser.addoption(
        "--exhaustive",
        action="store_true",
        default=False,
        help="Run randomized suites at their full sample counts"
    )


def pytest_configure(config):
    """Register custom markers."""
    config.addinivalue_line("markers", "exhaustive: randomized suite with a full-size mode")


@pytest.fixture
def sample_count(request):
    """Full sample count with --exhaustive, a reduced seeded sample otherwise."""
    def count(full: int, reduced: int = 20) -> int:
        return full if request.config.getoption("--exhaustive") else min(full, reduced)
    return count


@pytest.fixture
def rng():
    """Fixed-seed generator so randomized tests are reproducible."""
    return random.Random(20240611)


@pytest.fixture
def trivial():
    return TrivialIntegers()


@pytest.fixture
def q_na():
    return SupRationals()


@pytest.fixture
def q_arch():
    return ArchimedeanRationals()


@pytest.fixture
def q_5():
    return PAdicRationals(5)


@pytest.fixture
def z_5():
    return TruncatedPAdicIntegers(5, 8)
