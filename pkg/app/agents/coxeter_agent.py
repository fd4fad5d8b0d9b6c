"""
Coxeter Agent
Entry point used by the CLI and the HTTP API: group summaries, root tables,
Hilbert series, Schubert classes and pairings, returned as report models
"""

import logging
from typing import List, Optional, Sequence

from app.agents.braided import Tensor
from app.agents.cache_agent import CacheAgent
from app.agents.coxeter import CoxeterSystem, resolve_group_spec
from app.agents.nichols import DEFAULT_BUDGET, QuadraticCover, get_algebra, pairing, pairing_by_derivatives
from app.agents.roots import RootSystem, generate_root_system
from app.agents.schubert import schubert_classes
from app.agents.validator import CoxeterInputError, CoxeterValidator
from app.models.schemas import GroupSummary, HilbertRow, PairingResult, RootRow, SchubertRow

logger = logging.getLogger(__name__)


class CoxeterAgent:
    """Compute and package results for one Coxeter system at a time"""

    def __init__(self, budget: int = DEFAULT_BUDGET, cache_dir: Optional[str] = None):
        is_valid, msg = CoxeterValidator.validate_budget(budget)
        if not is_valid:
            raise CoxeterInputError(msg)
        self.budget = budget
        self.cache = CacheAgent(cache_dir) if cache_dir else None

    @staticmethod
    def resolve(group: Optional[str] = None, matrix_file: Optional[str] = None) -> CoxeterSystem:
        return resolve_group_spec(group, matrix_file)

    @staticmethod
    def root_system(system: CoxeterSystem) -> RootSystem:
        return generate_root_system(system)

    def summary(self, system: CoxeterSystem) -> GroupSummary:
        """
        Order, exponents, Poincare polynomial and orbit structure

        Raises:
            GroupTooLargeError: If the group does not fit the enumeration bound
        """
        rs = self.root_system(system)
        group = rs.group()
        orbits = rs.orbits()
        return GroupSummary(
            label=rs.label,
            rank=rs.rank,
            order=group.order,
            exponents=group.exponents(),
            positive_roots=rs.num_positive,
            orbits=len(orbits),
            orbit_sizes=[len(o) for o in orbits],
            poincare=group.poincare_polynomial(),
        )

    def roots(self, system: CoxeterSystem) -> List[RootRow]:
        """Positive roots in simple-root coordinates, numbered from 1"""
        rs = self.root_system(system)
        return [
            RootRow(index=i + 1, coordinates=rs.coordinates_string(i), orbit=rs.orbit_of[i])
            for i in range(rs.num_positive)
        ]

    def hilbert(self, system: CoxeterSystem, max_degree: int, quadratic: bool = False) -> List[HilbertRow]:
        """
        Dimensions of B_W in degrees 0..max_degree

        Args:
            system: Coxeter system
            max_degree: Highest degree
            quadratic: Also compute the quadratic cover and compare

        Raises:
            BudgetExceededError: If a component does not fit the budget
        """
        is_valid, msg = CoxeterValidator.validate_degree(max_degree)
        if not is_valid:
            raise CoxeterInputError(msg)

        rs = self.root_system(system)
        algebra = get_algebra(rs, self.budget, self.cache)
        dims = algebra.hilbert(max_degree)
        if not quadratic:
            return [HilbertRow(degree=n, dimension=d) for n, d in enumerate(dims)]

        cover = QuadraticCover(algebra, self.budget, self.cache).hilbert(max_degree)
        mismatch = [n for n, (a, b) in enumerate(zip(dims, cover)) if a != b]
        if mismatch:
            logger.info("%s: quadratic cover differs from B_W from degree %d", rs.label, mismatch[0])
        return [
            HilbertRow(degree=n, dimension=d, quadratic=q, match=(d == q))
            for n, (d, q) in enumerate(zip(dims, cover))
        ]

    def schubert(self, system: CoxeterSystem) -> List[SchubertRow]:
        """Every Schubert class, shortest elements first"""
        rs = self.root_system(system)
        group = rs.group()
        classes = schubert_classes(rs, group)
        rows = []
        for w in sorted(classes, key=lambda v: (group.length(v), group.reduced_word(v))):
            word = list(group.reduced_word(w))
            rows.append(SchubertRow(
                element='s' + '.s'.join(str(i) for i in word) if word else 'e',
                word=word,
                length=len(word),
                polynomial=repr(classes[w]),
            ))
        return rows

    def pairing(self, system: CoxeterSystem, left: Sequence[int], right: Sequence[int]) -> PairingResult:
        """
        Pairing of two words of positive roots (numbered from 1), computed
        through the symmetriser and through braided derivatives

        Raises:
            CoxeterInputError: On an unknown root index
        """
        rs = self.root_system(system)
        for index in list(left) + list(right):
            if not 1 <= index <= rs.num_positive:
                raise CoxeterInputError(f"root index {index} out of range 1..{rs.num_positive}")

        phi = Tensor.word([i - 1 for i in left])
        x = Tensor.word([i - 1 for i in right])
        by_symmetriser = pairing(rs, phi, x)
        by_derivatives = pairing_by_derivatives(rs, phi, x)
        return PairingResult(
            group=rs.label,
            left=list(left),
            right=list(right),
            symmetriser=str(by_symmetriser),
            derivatives=str(by_derivatives),
            agree=(by_symmetriser == by_derivatives),
        )
