"""
Coxeter Input Validator Agent
Validates Coxeter matrices, type labels and run parameters before any computation
"""

import re
from typing import Dict, Sequence, Tuple


class CoxeterInputError(ValueError):
    """Invalid Coxeter matrix, type label or matrix file"""


class BudgetExceededError(RuntimeError):
    """A computation needs more room than the configured budget allows"""

    def __init__(self, message: str, required: int = 0, budget: int = 0):
        super().__init__(message)
        self.required = required
        self.budget = budget


class GroupTooLargeError(BudgetExceededError):
    """Root closure or group enumeration exceeded its size guard"""


class CoxeterValidator:
    """
    Validates inputs of the Coxeter engine
    Every validate_* method returns (is_valid, message)
    """

    # A3, B_2, I2:7, I2(7), H3 ...
    LABEL_PATTERN = r'^(?:([ABCDEFGH])_?(\d+)|I_?2[:(](\d+)\)?)$'

    OUTPUT_FORMATS = ['pretty', 'json', 'tsv']

    MAX_RANK = 8

    @staticmethod
    def validate_matrix(matrix: Sequence[Sequence[int]]) -> Tuple[bool, str]:
        """
        Validate a Coxeter matrix

        Args:
            matrix: Square integer matrix

        Returns:
            (is_valid, error_message)
        """
        if not matrix:
            return False, "Coxeter matrix cannot be empty"

        rank = len(matrix)
        if rank > CoxeterValidator.MAX_RANK:
            return False, f"Rank too large (max {CoxeterValidator.MAX_RANK})"

        for i, row in enumerate(matrix):
            if len(row) != rank:
                return False, f"Row {i + 1} has {len(row)} entries, expected {rank}"
            for j, m in enumerate(row):
                if isinstance(m, bool) or not isinstance(m, int):
                    return False, f"Entry ({i + 1},{j + 1}) must be an integer"

        for i in range(rank):
            if matrix[i][i] != 1:
                return False, f"Diagonal entry ({i + 1},{i + 1}) must be 1"
            for j in range(i + 1, rank):
                if matrix[i][j] != matrix[j][i]:
                    return False, f"Matrix is not symmetric at ({i + 1},{j + 1})"
                if matrix[i][j] < 2:
                    return False, f"Off-diagonal entry ({i + 1},{j + 1}) must be at least 2"

        return True, "Valid"

    @staticmethod
    def require_valid_matrix(matrix: Sequence[Sequence[int]]) -> None:
        """
        Raise instead of returning a tuple

        Raises:
            CoxeterInputError: If the matrix is invalid
        """
        is_valid, msg = CoxeterValidator.validate_matrix(matrix)
        if not is_valid:
            raise CoxeterInputError(msg)

    @staticmethod
    def validate_label(label: str) -> Tuple[bool, str]:
        """
        Validate a Coxeter type label

        Args:
            label: e.g. "A3", "B2", "G2", "H3", "I2:7"

        Returns:
            (is_valid, error_message)
        """
        if not label or not label.strip():
            return False, "Group label cannot be empty"

        match = re.match(CoxeterValidator.LABEL_PATTERN, label.strip())
        if not match:
            return False, f"Unrecognised group label '{label}'"

        family, n, m = match.groups()
        if m is not None:
            if int(m) < 2:
                return False, "Dihedral parameter m must be at least 2"
            return True, "Valid"

        n = int(n)
        limits = {
            'A': (1, 8), 'B': (2, 8), 'C': (2, 8), 'D': (4, 8),
            'E': (6, 8), 'F': (4, 4), 'G': (2, 2), 'H': (3, 4),
        }
        low, high = limits[family]
        if not low <= n <= high:
            return False, f"Type {family} needs rank between {low} and {high}"

        return True, "Valid"

    @staticmethod
    def validate_degree(degree: int) -> Tuple[bool, str]:
        """Validate a maximal degree"""
        if isinstance(degree, bool) or not isinstance(degree, int):
            return False, "Degree must be an integer"
        if degree < 0:
            return False, "Degree cannot be negative"
        return True, "Valid"

    @staticmethod
    def validate_budget(budget: int) -> Tuple[bool, str]:
        """Validate a word budget"""
        if isinstance(budget, bool) or not isinstance(budget, int) or budget <= 0:
            return False, "Budget must be a positive integer"
        return True, "Valid"

    @staticmethod
    def validate_output_format(fmt: str) -> Tuple[bool, str]:
        """Validate an output format name"""
        if fmt not in CoxeterValidator.OUTPUT_FORMATS:
            return False, f"Format must be one of {CoxeterValidator.OUTPUT_FORMATS}"
        return True, "Valid"

    @staticmethod
    def validate_orbit_coefficients(coeffs: Dict[int, object], orbit_count: int) -> Tuple[bool, str]:
        """
        Validate reflection submodule coefficients keyed by orbit number

        Args:
            coeffs: orbit number -> coefficient
            orbit_count: Number of W-orbits on the roots

        Returns:
            (is_valid, error_message)
        """
        for orbit in coeffs:
            if not isinstance(orbit, int) or not 0 <= orbit < orbit_count:
                return False, f"Orbit {orbit} out of range (group has {orbit_count} orbits)"

        if all(coeffs.get(o, 0) == 0 for o in range(orbit_count)):
            return False, "At least one orbit coefficient must be nonzero"

        return True, "Valid"
