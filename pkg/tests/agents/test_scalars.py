"""
Unit tests for the exact scalar field
"""

import sys
import os
sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), '../..')))

from fractions import Fraction

import numpy as np

from app.agents.scalars import (
    Field,
    cos_pi_over,
    make_field,
    real_cyclotomic_minpoly,
)
from app.agents.validator import CoxeterInputError
import pytest


def test_minpoly_small_orders():
    """Minimal polynomials of 2cos(pi/M), lowest degree first"""
    assert real_cyclotomic_minpoly(3) == (Fraction(-1), Fraction(1))
    assert real_cyclotomic_minpoly(4) == (Fraction(-2), Fraction(0), Fraction(1))
    assert real_cyclotomic_minpoly(5) == (Fraction(-1), Fraction(-1), Fraction(1))
    assert real_cyclotomic_minpoly(6) == (Fraction(-3), Fraction(0), Fraction(1))


def test_field_degree_matches_totient():
    """Degree of Q(2cos(pi/M)) is phi(2M)/2"""
    for M in range(2, 13):
        field = Field(M)
        assert field.degree == field.expected_degree
        assert field.is_irreducible()


def test_make_field_uses_lcm_of_matrix():
    """B2 needs sqrt 2, A2 stays rational, I2(5) gets the golden ratio"""
    assert make_field(((1, 3), (3, 1))).M == 3
    assert make_field(((1, 3), (3, 1))).degree == 1
    assert make_field(((1, 4), (4, 1))).M == 4
    assert make_field(((1, 5), (5, 1))).degree == 2
    assert make_field(((1, 3, 2), (3, 1, 4), (2, 4, 1))).M == 12


def test_make_field_rejects_bad_matrix():
    """Non-symmetric input is refused"""
    with pytest.raises(CoxeterInputError):
        make_field(((1, 3), (4, 1)))


def test_cos_pi_over_values():
    """cos(pi/2) = 0, cos(pi/3) = 1/2, cos(pi/4) = c/2"""
    f4 = Field(4)
    assert cos_pi_over(f4, 2).is_zero()
    assert cos_pi_over(f4, 4) == f4.gen * Fraction(1, 2)
    assert cos_pi_over(Field(3), 3) == Fraction(1, 2)


def test_cos_pi_over_outside_field():
    """cos(pi/5) does not live in Q(sqrt 2)"""
    with pytest.raises(ValueError):
        cos_pi_over(Field(4), 5)


def test_sqrt2_arithmetic():
    """c*c = 2 and 1/c = c/2 in Q(sqrt 2)"""
    field = Field(4)
    c = field.gen
    assert c * c == 2
    assert c.inverse() == c / 2
    assert (c + 1) * (c - 1) == 1
    assert 1 / c == c * Fraction(1, 2)


def test_golden_arithmetic():
    """c*c = c + 1 for the golden ratio"""
    field = Field(5)
    c = field.gen
    assert c * c == c + 1
    assert (c * c.inverse()) == 1
    assert (c ** 3) == 2 * c + 1


def test_inverse_of_zero_raises():
    """Zero has no inverse"""
    with pytest.raises(ZeroDivisionError):
        Field(4).zero.inverse()


def test_sign_and_order():
    """Signs follow the real embedding"""
    field = Field(5)
    c = field.gen
    assert c.sign() == 1
    assert (c - 2).sign() == -1
    assert (c * c - c - 1).sign() == 0
    assert c > Fraction(8, 5)
    assert c < Fraction(17, 10)


def test_mixing_fields_is_refused():
    """Elements of different fields never combine"""
    with pytest.raises(ValueError):
        Field(4).gen + Field(5).gen


def test_rational_interop():
    """Fractions and ints work on both sides"""
    field = Field(6)
    c = field.gen
    assert Fraction(1, 2) * c == c / 2
    assert 3 - c == -(c - 3)
    assert (c * c).is_rational()
    assert float(c) == pytest.approx(3 ** 0.5)


@pytest.mark.parametrize("M", [5, 7, 12])
def test_evaluation_is_a_ring_homomorphism(M):
    """Evaluating at 2cos(pi/M) respects sums, products and quotients"""
    field = Field(M)
    rng = np.random.default_rng(M)
    for _ in range(10):
        a = field.element([Fraction(int(x), int(y)) for x, y in rng.integers(1, 9, size=(field.degree, 2))])
        b = field.element([int(x) for x in rng.integers(-5, 6, size=field.degree)])
        assert float(a + b) == pytest.approx(float(a) + float(b))
        assert float(a * b) == pytest.approx(float(a) * float(b))
        if not b.is_zero():
            assert float(a / b) == pytest.approx(float(a) / float(b), rel=1e-6)
