"""Tests for polynomial-growth degree estimation."""

import random

import pytest
from hypothesis import given, settings, strategies as st

from liftcert.growth import SequenceTooShort, finite_differences, growth_degree


def test_quadratic_sequence():
    seq = [n * n for n in range(1, 11)]
    rep = growth_degree(seq)
    assert rep.fd_degree == 2
    assert rep.loglog_degree == 2
    assert rep.agreement
    assert rep.degree == 2


def test_finite_differences_values():
    assert finite_differences([1, 4, 9, 16, 25], 2) == [2, 2, 2]
    assert finite_differences([1, 4, 9, 16, 25], 1) == [3, 5, 7, 9]
    with pytest.raises(SequenceTooShort):
        finite_differences([1, 2], 2)


def test_staircase_linear():
    # Colengths of powers of a single linear form in 2 variables: n.
    seq = list(range(1, 12))
    assert growth_degree(seq).degree == 1


def test_constant_sequence():
    rep = growth_degree([7] * 10)
    assert rep.fd_degree == 0
    assert rep.degree == 0


def test_too_short_raises():
    with pytest.raises(SequenceTooShort):
        growth_degree([1, 2, 3])


@given(st.integers(0, 4), st.integers(1, 3), st.integers(0, 50))
@settings(max_examples=50, deadline=None)
def test_recovers_polynomial_degree(k, lead, shift):
    """Exact polynomial sequences must yield their true degree."""
    seq = [lead * n ** k + shift for n in range(1, 13)]
    rep = growth_degree(seq)
    assert rep.fd_degree == k


def test_random_integer_polynomials_agreement():
    rng = random.Random(20260826)
    for _ in range(20):
        k = rng.randint(0, 4)
        coeffs = [rng.randint(0, 3) for _ in range(k)] + [rng.randint(1, 3)]
        seq = [sum(c * n ** i for i, c in enumerate(coeffs))
               for n in range(1, 13)]
        rep = growth_degree(seq, window=4)
        assert rep.fd_degree == k
        assert rep.loglog_degree == k
        assert rep.agreement


def test_scaling_invariance():
    base = [n ** 3 + n for n in range(1, 12)]
    for c in (1, 2, 10):
        assert growth_degree([c * v for v in base]).fd_degree == 3


def test_summary_is_json_friendly():
    import json
    rep = growth_degree([n * n for n in range(1, 10)])
    json.dumps(rep.summary())
