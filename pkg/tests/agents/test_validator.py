"""
Unit tests for input validation
"""

import sys
import os
sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), '../..')))

from app.agents.validator import BudgetExceededError, CoxeterInputError, CoxeterValidator, GroupTooLargeError
import pytest


def test_valid_matrices():
    """A2, B2 and H3"""
    assert CoxeterValidator.validate_matrix([[1, 3], [3, 1]])[0]
    assert CoxeterValidator.validate_matrix([[1, 4], [4, 1]])[0]
    assert CoxeterValidator.validate_matrix([[1, 3, 2], [3, 1, 5], [2, 5, 1]])[0]


@pytest.mark.parametrize("matrix, fragment", [
    ([], "empty"),
    ([[1, 3], [3]], "entries"),
    ([[2, 3], [3, 1]], "Diagonal"),
    ([[1, 3], [4, 1]], "symmetric"),
    ([[1, 1], [1, 1]], "at least 2"),
    ([[1, 2.5], [2.5, 1]], "integer"),
])
def test_invalid_matrices(matrix, fragment):
    """Each defect is reported with a readable message"""
    is_valid, msg = CoxeterValidator.validate_matrix(matrix)
    assert not is_valid
    assert fragment in msg


def test_require_valid_matrix_raises():
    """The raising variant uses CoxeterInputError"""
    with pytest.raises(CoxeterInputError):
        CoxeterValidator.require_valid_matrix([[1, 3], [2, 1]])
    assert issubclass(CoxeterInputError, ValueError)


@pytest.mark.parametrize("label", ["A1", "A3", "B_2", "D4", "E6", "F4", "G2", "H3", "H4", "I2:7", "I2(5)"])
def test_valid_labels(label):
    """Accepted label spellings"""
    assert CoxeterValidator.validate_label(label)[0]


@pytest.mark.parametrize("label", ["", "X3", "A0", "D3", "G3", "H5", "I2:1", "B9"])
def test_invalid_labels(label):
    """Unknown families and ranks out of range"""
    assert not CoxeterValidator.validate_label(label)[0]


def test_degree_and_budget():
    """Degrees are non-negative integers, budgets positive integers"""
    assert CoxeterValidator.validate_degree(0)[0]
    assert not CoxeterValidator.validate_degree(-1)[0]
    assert not CoxeterValidator.validate_degree(True)[0]
    assert CoxeterValidator.validate_budget(100)[0]
    assert not CoxeterValidator.validate_budget(0)[0]
    assert not CoxeterValidator.validate_budget("100")[0]


def test_output_format():
    assert CoxeterValidator.validate_output_format('tsv')[0]
    assert not CoxeterValidator.validate_output_format('xml')[0]


def test_orbit_coefficients():
    """Orbits must exist and not all coefficients may vanish"""
    assert CoxeterValidator.validate_orbit_coefficients({0: 1, 1: 0}, 2)[0]
    assert not CoxeterValidator.validate_orbit_coefficients({2: 1}, 2)[0]
    is_valid, msg = CoxeterValidator.validate_orbit_coefficients({0: 0}, 1)
    assert not is_valid
    assert "nonzero" in msg


def test_budget_errors_carry_sizes():
    """Budget errors remember what was needed"""
    e = BudgetExceededError("too big", required=216, budget=100)
    assert e.required == 216 and e.budget == 100
    assert issubclass(GroupTooLargeError, BudgetExceededError)
