"""
Root System Agent
Generates the positive roots of a finite Coxeter group over the exact
field, the signed reflection table, W-orbits and rank-2 subsystems
"""

import logging
from dataclasses import dataclass
from functools import cached_property
from typing import Dict, List, Optional, Tuple

from app.agents.coxeter import CoxeterGroup, CoxeterSystem, DEFAULT_GROUP_BOUND
from app.agents.scalars import Field, FieldElement, cos_pi_over, make_field
from app.agents.sparse_linalg import exact_rank
from app.agents.validator import GroupTooLargeError

logger = logging.getLogger(__name__)

MAX_POSITIVE_ROOTS = 200

Coords = Tuple[FieldElement, ...]


@dataclass(frozen=True)
class DihedralSubsystem:
    """
    Intersection of a plane with R

    gammas[i] is the positive-root index of gamma_i; gamma_0 and
    gamma_{m-1} are the simple roots of the subsystem.
    """
    gammas: Tuple[int, ...]
    orbits: Tuple[int, ...]

    @property
    def m(self) -> int:
        return len(self.gammas)

    def letter(self, i: int) -> Tuple[int, int]:
        """gamma_i for any integer i as (sign, root index); gamma_{m+i} = -gamma_i"""
        m = self.m
        i %= 2 * m
        if i >= m:
            return -1, self.gammas[i - m]
        return 1, self.gammas[i]


class RootSystem:
    """
    Positive roots in the simple-root basis with (alpha, alpha) = 1

    reflection_table[t][i] is +(k+1) or -(k+1) when s_t(alpha_i) is
    plus or minus positive root k.
    """

    def __init__(self, system: CoxeterSystem, field: Field, gram: Tuple[Coords, ...],
                 roots: List[Coords], reflection_table: List[Tuple[int, ...]]):
        self.system = system
        self.field = field
        self.gram = gram
        self.roots = roots
        self.reflection_table = reflection_table
        self._inner: Dict[Tuple[int, int], FieldElement] = {}
        self._group: Optional[CoxeterGroup] = None

    @property
    def rank(self) -> int:
        return self.system.rank

    @property
    def num_positive(self) -> int:
        return len(self.roots)

    @property
    def label(self) -> str:
        return self.system.display_name()

    def __repr__(self) -> str:
        return f"RootSystem({self.label}, positive_roots={self.num_positive})"

    def reflect_root(self, t: int, i: int) -> Tuple[int, int]:
        """Index and sign of s_t(alpha_i)"""
        s = self.reflection_table[t][i]
        return abs(s) - 1, (1 if s > 0 else -1)

    def form(self, u: Coords, v: Coords) -> FieldElement:
        """Bilinear form on coordinate vectors"""
        total = self.field.zero
        for i, a in enumerate(u):
            if not a:
                continue
            row = self.gram[i]
            for j, b in enumerate(v):
                if b:
                    total = total + a * row[j] * b
        return total

    def inner(self, i: int, j: int) -> FieldElement:
        """(alpha_i, alpha_j) for positive-root indices"""
        key = (i, j) if i <= j else (j, i)
        value = self._inner.get(key)
        if value is None:
            value = self.form(self.roots[i], self.roots[j])
            self._inner[key] = value
        return value

    def group(self, size_bound: int = DEFAULT_GROUP_BOUND) -> CoxeterGroup:
        """The full Coxeter group acting on these roots"""
        if self._group is None:
            self._group = CoxeterGroup(self, size_bound=size_bound, label=self.label)
        return self._group

    @cached_property
    def orbit_of(self) -> Tuple[int, ...]:
        """Orbit number of every positive root, orbits numbered by smallest member"""
        parent = list(range(self.num_positive))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for t in range(self.rank):
            for i, s in enumerate(self.reflection_table[t]):
                a, b = find(i), find(abs(s) - 1)
                if a != b:
                    parent[max(a, b)] = min(a, b)

        roots_of = sorted({find(i) for i in range(self.num_positive)})
        numbering = {r: n for n, r in enumerate(roots_of)}
        return tuple(numbering[find(i)] for i in range(self.num_positive))

    @property
    def orbit_count(self) -> int:
        return max(self.orbit_of) + 1

    def orbits(self) -> List[List[int]]:
        result: List[List[int]] = [[] for _ in range(self.orbit_count)]
        for i, o in enumerate(self.orbit_of):
            result[o].append(i)
        return result

    def coordinates_string(self, i: int) -> str:
        parts = []
        for k, a in enumerate(self.roots[i]):
            if not a:
                continue
            coeff = '' if a == 1 else f"({a})"
            parts.append(f"{coeff}a{k + 1}")
        return ' + '.join(parts)

    @cached_property
    def dihedral_subsystems(self) -> List[DihedralSubsystem]:
        return dihedral_subsystems(self)


def _sign_normalise(v: Coords) -> Tuple[int, Coords]:
    for a in v:
        if a:
            if a.sign() > 0:
                return 1, v
            return -1, tuple(-b for b in v)
    raise ArithmeticError("zero vector is not a root")


def generate_root_system(system: CoxeterSystem, max_roots: int = MAX_POSITIVE_ROOTS) -> RootSystem:
    """
    Close the simple roots under the simple reflections

    Args:
        system: Coxeter system
        max_roots: Guard against infinite groups

    Returns:
        RootSystem with simple roots first, then roots in discovery order

    Raises:
        GroupTooLargeError: If more than max_roots positive roots appear
    """
    field = make_field(system.matrix)
    r = system.rank
    gram = tuple(
        tuple(-cos_pi_over(field, system.matrix[i][j]) for j in range(r))
        for i in range(r)
    )

    def reflect(v: Coords, u: Coords) -> Coords:
        # v - 2(v,u)u
        f = 2 * _form(gram, v, u, field)
        return tuple(a - f * b for a, b in zip(v, u))

    simple = [tuple(field.one if k == i else field.zero for k in range(r)) for i in range(r)]
    roots: List[Coords] = list(simple)
    index: Dict[Coords, int] = {v: i for i, v in enumerate(roots)}

    pos = 0
    while pos < len(roots):
        v = roots[pos]
        for i in range(r):
            _, w = _sign_normalise(reflect(v, simple[i]))
            if w not in index:
                index[w] = len(roots)
                roots.append(w)
                if len(roots) > max_roots:
                    raise GroupTooLargeError(
                        f"root closure exceeds {max_roots} positive roots (is the group finite?)",
                        required=len(roots), budget=max_roots)
        pos += 1

    table = []
    for t, u in enumerate(roots):
        row = []
        for v in roots:
            sign, w = _sign_normalise(reflect(v, u))
            k = index.get(w)
            if k is None:
                raise ArithmeticError("reflection of a root left the root system")
            row.append(sign * (k + 1))
        table.append(tuple(row))

    rs = RootSystem(system, field, gram, roots, table)
    logger.info("generated %s: %d positive roots", rs.label, rs.num_positive)
    return rs


def _form(gram, u: Coords, v: Coords, field: Field) -> FieldElement:
    total = field.zero
    for i, a in enumerate(u):
        if a:
            for j, b in enumerate(v):
                if b:
                    total = total + a * gram[i][j] * b
    return total


def reflect_root(rs: RootSystem, t: int, i: int) -> Tuple[int, int]:
    return rs.reflect_root(t, i)


def inner(rs: RootSystem, i: int, j: int) -> FieldElement:
    return rs.inner(i, j)


def dihedral_subsystems(rs: RootSystem) -> List[DihedralSubsystem]:
    """
    Every intersection of R with a plane spanned by two roots

    gamma_0 is the lower-index simple root of the subsystem, gamma_{m-1}
    the other; gamma_1 = s_{gamma_0}(gamma_{m-1}) and
    gamma_{i+2} = s_{gamma_0} s_{gamma_{m-1}}(gamma_i).
    """
    n = rs.num_positive
    found: List[frozenset] = []
    for i in range(n):
        for j in range(i + 1, n):
            if any(i in s and j in s for s in found):
                continue
            plane = [k for k in range(n)
                     if k in (i, j) or exact_rank([rs.roots[i], rs.roots[j], rs.roots[k]]) == 2]
            found.append(frozenset(plane))

    result = []
    for members in found:
        positive = sorted(members)
        sub = CoxeterGroup(rs, positive_roots=positive)
        if sub.rank != 2:
            raise ArithmeticError(f"plane subsystem has {sub.rank} simple roots")
        g0, gl = sorted(sub.simple_roots)
        m = len(positive)

        gammas = [g0] * m
        gammas[m - 1] = gl
        if m > 2:
            k, sign = rs.reflect_root(g0, gl)
            gammas[1] = k
            for idx in range(1, m - 2):
                k1, s1 = rs.reflect_root(gl, gammas[idx - 1])
                k2, s2 = rs.reflect_root(g0, k1)
                if s1 * s2 < 0:
                    raise ArithmeticError("dihedral root ordering produced a negative root")
                gammas[idx + 1] = k2
        if sorted(gammas) != positive:
            raise ArithmeticError("dihedral root ordering does not cover the subsystem")
        result.append(DihedralSubsystem(tuple(gammas), tuple(rs.orbit_of[g] for g in gammas)))

    result.sort(key=lambda d: (d.m, d.gammas))
    logger.debug("%s: %d dihedral subsystems", rs.label, len(result))
    return result
