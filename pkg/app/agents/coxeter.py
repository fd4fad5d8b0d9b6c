"""
Coxeter Group Agent
Coxeter systems, group elements as signed permutations of positive roots,
reduced words, exponents, Matsumoto sections and dihedral Bruhat graphs
"""

import hashlib
import json
import logging
import re
from collections import deque
from dataclasses import dataclass, field
from itertools import permutations
from typing import Dict, List, Optional, Sequence, Tuple

import networkx as nx
import yaml
from sympy import Poly, Symbol

from app.agents.validator import (
    CoxeterInputError,
    CoxeterValidator,
    GroupTooLargeError,
)

logger = logging.getLogger(__name__)

DEFAULT_GROUP_BOUND = 10000
DEFAULT_MATSUMOTO_BOUND = 10


@dataclass(frozen=True)
class CoxeterSystem:
    """
    A Coxeter system given by its matrix
    m_ii = 1, m_ij = m_ji >= 2
    """
    matrix: Tuple[Tuple[int, ...], ...]
    label: Optional[str] = None

    def __post_init__(self):
        CoxeterValidator.require_valid_matrix(self.matrix)

    @property
    def rank(self) -> int:
        return len(self.matrix)

    def matrix_hash(self) -> str:
        """Canonical hash of the matrix, used as a cache key"""
        payload = json.dumps([list(row) for row in self.matrix], separators=(',', ':'))
        return hashlib.sha256(payload.encode('utf-8')).hexdigest()[:16]

    def display_name(self) -> str:
        return self.label or f"matrix:{self.matrix_hash()}"


def _matrix_from_edges(rank: int, edges: Dict[Tuple[int, int], int]) -> Tuple[Tuple[int, ...], ...]:
    """Build a Coxeter matrix from 1-based labelled edges"""
    m = [[1 if i == j else 2 for j in range(rank)] for i in range(rank)]
    for (i, j), value in edges.items():
        m[i - 1][j - 1] = value
        m[j - 1][i - 1] = value
    return tuple(tuple(row) for row in m)


def parse_label(label: str) -> CoxeterSystem:
    """
    Parse a type label into a Coxeter system

    Args:
        label: "A3", "B2", "C3", "D4", "E6", "F4", "G2", "H3", "I2:7"

    Returns:
        CoxeterSystem

    Raises:
        CoxeterInputError: If the label is not recognised
    """
    is_valid, msg = CoxeterValidator.validate_label(label)
    if not is_valid:
        raise CoxeterInputError(msg)

    family, n, m = re.match(CoxeterValidator.LABEL_PATTERN, label.strip()).groups()
    if m is not None:
        return CoxeterSystem(_matrix_from_edges(2, {(1, 2): int(m)}), f"I2:{int(m)}")

    n = int(n)
    chain = {(i, i + 1): 3 for i in range(1, n)}
    if family == 'A':
        edges = chain
    elif family in ('B', 'C'):
        edges = dict(chain)
        edges[(n - 1, n)] = 4
    elif family == 'D':
        edges = {(i, i + 1): 3 for i in range(1, n - 1)}
        edges[(n - 2, n)] = 3
    elif family == 'E':
        edges = {(1, 3): 3, (2, 4): 3}
        edges.update({(i, i + 1): 3 for i in range(3, n)})
    elif family == 'F':
        edges = {(1, 2): 3, (2, 3): 4, (3, 4): 3}
    elif family == 'G':
        edges = {(1, 2): 6}
    else:
        edges = dict(chain)
        edges[(1, 2)] = 5
    return CoxeterSystem(_matrix_from_edges(n, edges), f"{family}{n}")


def load_matrix_file(path: str) -> CoxeterSystem:
    """
    Load a Coxeter matrix from a YAML file with fields 'rank' and 'matrix'

    Raises:
        CoxeterInputError: If the file is missing or malformed
    """
    try:
        with open(path, 'r', encoding='utf-8') as f:
            data = yaml.safe_load(f)
    except OSError as e:
        raise CoxeterInputError(f"Cannot read matrix file {path}: {e}") from e
    except yaml.YAMLError as e:
        raise CoxeterInputError(f"Malformed matrix file {path}: {e}") from e

    if not isinstance(data, dict) or 'matrix' not in data:
        raise CoxeterInputError("Matrix file needs a 'matrix' field")

    matrix = data['matrix']
    if not isinstance(matrix, list) or not all(isinstance(row, list) for row in matrix):
        raise CoxeterInputError("'matrix' must be a list of rows")
    rank = data.get('rank', len(matrix))
    if rank != len(matrix):
        raise CoxeterInputError(f"'rank' is {rank} but the matrix has {len(matrix)} rows")

    return CoxeterSystem(tuple(tuple(row) for row in matrix), data.get('label'))


def resolve_group_spec(group: Optional[str] = None, matrix_file: Optional[str] = None) -> CoxeterSystem:
    """Turn a label or a matrix file path into a CoxeterSystem"""
    if matrix_file:
        return load_matrix_file(matrix_file)
    if group:
        return parse_label(group)
    raise CoxeterInputError("Either a group label or a matrix file is required")


class GroupElement:
    """
    Element of W acting on positive roots

    images[j] = +(k+1) or -(k+1) when the element sends positive root j to
    plus or minus positive root k.
    """

    __slots__ = ('images',)

    def __init__(self, images: Tuple[int, ...]):
        self.images = images

    def __eq__(self, other) -> bool:
        return isinstance(other, GroupElement) and self.images == other.images

    def __hash__(self) -> int:
        return hash(self.images)

    def __lt__(self, other: 'GroupElement') -> bool:
        return self.images < other.images

    def __repr__(self) -> str:
        return f"GroupElement(length={self.length})"

    def __mul__(self, other: 'GroupElement') -> 'GroupElement':
        """(v*w)(a) = v(w(a))"""
        mine = self.images
        out = []
        for s in other.images:
            t = mine[abs(s) - 1]
            out.append(t if s > 0 else -t)
        return GroupElement(tuple(out))

    def inverse(self) -> 'GroupElement':
        inv = [0] * len(self.images)
        for j, s in enumerate(self.images):
            inv[abs(s) - 1] = j + 1 if s > 0 else -(j + 1)
        return GroupElement(tuple(inv))

    def apply(self, j: int) -> Tuple[int, int]:
        """Image of positive root j as (index, sign)"""
        s = self.images[j]
        return abs(s) - 1, (1 if s > 0 else -1)

    @property
    def length(self) -> int:
        """Number of positive roots sent to negative roots"""
        return sum(1 for s in self.images if s < 0)

    def length_in(self, positive_roots: Sequence[int]) -> int:
        """Length relative to a reflection subgroup with the given positive roots"""
        images = self.images
        return sum(1 for j in positive_roots if images[j] < 0)

    def is_identity(self) -> bool:
        return all(s == j + 1 for j, s in enumerate(self.images))


class CoxeterGroup:
    """
    Finite Coxeter group (or reflection subgroup) acting on a root system

    The full group uses the simple roots 0..r-1 and all positive roots.
    A reflection subgroup is given by a set of positive roots closed under
    its own reflections; its simple roots are found from that set.
    """

    def __init__(self, root_system, positive_roots: Optional[Sequence[int]] = None,
                 size_bound: int = DEFAULT_GROUP_BOUND, label: Optional[str] = None):
        self.root_system = root_system
        n = root_system.num_positive
        if positive_roots is None:
            self.positive_roots = tuple(range(n))
            self.simple_roots = tuple(range(root_system.rank))
        else:
            self.positive_roots = tuple(sorted(set(positive_roots)))
            self.simple_roots = self._find_simple_roots(self.positive_roots)
        self.size_bound = size_bound
        self.label = label
        self.identity = GroupElement(tuple(range(1, n + 1)))
        self.generators = [self.reflection(beta) for beta in self.simple_roots]
        self._elements: Optional[List[GroupElement]] = None

    def _find_simple_roots(self, positive: Tuple[int, ...]) -> Tuple[int, ...]:
        members = set(positive)
        simple = []
        for beta in positive:
            row = self.root_system.reflection_table[beta]
            if all(row[g] > 0 for g in positive if g != beta):
                simple.append(beta)
        for beta in positive:
            for g in positive:
                if abs(self.root_system.reflection_table[beta][g]) - 1 not in members:
                    raise CoxeterInputError("root set is not closed under its reflections")
        return tuple(simple)

    @property
    def rank(self) -> int:
        return len(self.simple_roots)

    def reflection(self, t: int) -> GroupElement:
        """The reflection s_t as a group element"""
        return GroupElement(tuple(self.root_system.reflection_table[t]))

    def length(self, w: GroupElement) -> int:
        return w.length_in(self.positive_roots)

    def left_multiply(self, pos: int, w: GroupElement) -> GroupElement:
        """s_i * w for the 0-based generator position"""
        return self.generators[pos] * w

    def reduced_word(self, w: GroupElement) -> Tuple[int, ...]:
        """
        Lexicographically least reduced word in 1-based generator indices

        Args:
            w: Group element

        Returns:
            Tuple of generator indices; empty for the identity
        """
        word = []
        while not w.is_identity():
            inv = w.inverse().images
            for pos, beta in enumerate(self.simple_roots):
                if inv[beta] < 0:
                    break
            else:
                raise ArithmeticError("element has no left descent in this group")
            word.append(pos + 1)
            w = self.generators[pos] * w
        return tuple(word)

    def element_from_word(self, word: Sequence[int]) -> GroupElement:
        """Product s_{i1} s_{i2} ... of 1-based generator indices"""
        w = self.identity
        for i in word:
            w = w * self.generators[i - 1]
        return w

    def enumerate(self) -> List[GroupElement]:
        """
        All group elements by breadth-first closure

        Raises:
            GroupTooLargeError: If the closure exceeds the size bound
        """
        if self._elements is not None:
            return self._elements

        seen = {self.identity}
        order = [self.identity]
        queue = deque([self.identity])
        while queue:
            w = queue.popleft()
            for g in self.generators:
                v = g * w
                if v not in seen:
                    seen.add(v)
                    order.append(v)
                    queue.append(v)
                    if len(order) > self.size_bound:
                        raise GroupTooLargeError(
                            f"group closure exceeds {self.size_bound} elements",
                            required=len(order), budget=self.size_bound)
        self._elements = order
        logger.info("enumerated group %s: %d elements", self.label or '', len(order))
        return order

    @property
    def order(self) -> int:
        return len(self.enumerate())

    def longest_element(self) -> GroupElement:
        """Unique element of maximal length"""
        return max(self.enumerate(), key=self.length)

    def poincare_polynomial(self) -> List[int]:
        """Coefficients of sum_w t^l(w), lowest degree first"""
        counts: Dict[int, int] = {}
        for w in self.enumerate():
            l = self.length(w)
            counts[l] = counts.get(l, 0) + 1
        top = max(counts)
        return [counts.get(k, 0) for k in range(top + 1)]

    def exponents(self) -> List[int]:
        """
        Exponents m_1 <= ... <= m_r from the factorisation
        P(t) = prod (1 + t + ... + t^m_i)

        Raises:
            ArithmeticError: If the Poincare polynomial does not factor
        """
        t = Symbol('t')
        poly = Poly(list(reversed(self.poincare_polynomial())), t) * Poly(1 - t, t) ** self.rank
        one = Poly(1, t)
        degrees = []
        while poly != one:
            coeffs = poly.all_coeffs()[::-1]
            d = next((k for k in range(1, len(coeffs)) if coeffs[k] != 0), None)
            if d is None or len(degrees) >= self.rank:
                raise ArithmeticError("Poincare polynomial does not factor into cyclotomic pieces")
            quotient, remainder = poly.div(Poly(1 - t ** d, t))
            if not remainder.is_zero:
                raise ArithmeticError(f"Poincare polynomial is not divisible by 1 - t^{d}")
            degrees.append(d)
            poly = quotient
        exps = sorted(d - 1 for d in degrees)

        if sum(exps) != len(self.positive_roots):
            raise ArithmeticError("sum of exponents differs from the number of positive roots")
        product = 1
        for e in exps:
            product *= e + 1
        if product != self.order:
            raise ArithmeticError("product of degrees differs from the group order")
        return exps


def enumerate_group(root_system, size_bound: int = DEFAULT_GROUP_BOUND) -> List[GroupElement]:
    """All elements of W generated by the simple reflections"""
    return CoxeterGroup(root_system, size_bound=size_bound).enumerate()


def reduced_word(group: CoxeterGroup, w: GroupElement) -> Tuple[int, ...]:
    return group.reduced_word(w)


def poincare_and_exponents(group: CoxeterGroup) -> Tuple[List[int], List[int]]:
    """(length generating polynomial, exponents)"""
    return group.poincare_polynomial(), group.exponents()


def longest_element(group: CoxeterGroup) -> GroupElement:
    return group.longest_element()


def matsumoto_section(n: int, bound: int = DEFAULT_MATSUMOTO_BOUND) -> Dict[Tuple[int, ...], Tuple[int, ...]]:
    """
    One reduced word in adjacent transpositions for every permutation of n letters

    Permutations are in one-line notation. s_i * pi swaps the values i and
    i+1 and is shorter iff i+1 stands before i; the least such i is taken.

    Args:
        n: Number of letters
        bound: Refuse n above this

    Returns:
        permutation -> word (i1, ..., il) with pi = s_i1 ... s_il
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    if n > bound:
        raise ValueError(f"Matsumoto section limited to n <= {bound}")

    section = {}
    for perm in permutations(range(1, n + 1)):
        word = []
        current = list(perm)
        while True:
            position = {v: k for k, v in enumerate(current)}
            descent = next((i for i in range(1, n) if position[i + 1] < position[i]), None)
            if descent is None:
                break
            word.append(descent)
            a, b = position[descent], position[descent + 1]
            current[a], current[b] = current[b], current[a]
        section[perm] = tuple(word)
    return section


@dataclass
class DihedralBruhatGraph:
    """
    Bruhat graph of the dihedral group of order 2m

    Vertex l stands for v_l; v_m and v_-m are the single vertex m.
    Edges point from w to s_gamma w and carry the index of gamma in
    'root' (0..m-1 in the order gamma_0, ..., gamma_{m-1}).
    """
    m: int
    graph: nx.DiGraph = field(default_factory=nx.DiGraph)

    def vertex(self, l: int) -> int:
        return self.m if abs(l) == self.m else l

    def paths(self, target: int) -> List[Tuple[int, ...]]:
        """
        All paths from v_0 to v_target as label sequences, first edge first

        Returns:
            Sorted list of label tuples
        """
        target = self.vertex(target)
        if target == 0:
            return [()]
        result = []
        for nodes in nx.all_simple_paths(self.graph, 0, target):
            result.append(tuple(self.graph.edges[u, v]['root'] for u, v in zip(nodes, nodes[1:])))
        return sorted(result)

    @staticmethod
    def tensor_word(path: Sequence[int]) -> Tuple[int, ...]:
        """Tensor representation: last edge label first"""
        return tuple(reversed(path))


def dihedral_bruhat_graph(m: int) -> DihedralBruhatGraph:
    """
    Build the Bruhat graph of the dihedral group of order 2m

    Side edges v_{l+1} <- v_l (gamma_l) and v_{-(l+1)} <- v_{-l}
    (gamma_{m-1-l}), diagonals v_{l+1} <- v_{-l} (gamma_0) and
    v_{-(l+1)} <- v_l (gamma_{m-1}).
    """
    if m < 2:
        raise ValueError("m must be at least 2")

    bruhat = DihedralBruhatGraph(m)
    g = bruhat.graph
    g.add_node(0)
    for l in range(m):
        g.add_edge(bruhat.vertex(l), bruhat.vertex(l + 1), root=l)
        g.add_edge(bruhat.vertex(-l), bruhat.vertex(-(l + 1)), root=m - 1 - l)
    for l in range(1, m - 1):
        g.add_edge(bruhat.vertex(-l), bruhat.vertex(l + 1), root=0)
        g.add_edge(bruhat.vertex(l), bruhat.vertex(-(l + 1)), root=m - 1)
    return bruhat


class ReflectionSubgroup(CoxeterGroup):
    """
    Subgroup of W generated by the reflections in a set of roots

    The root set is closed under its own reflections before the simple
    roots are located; lengths and reduced words are relative to the
    subgroup.
    """

    def __init__(self, root_system, roots: Sequence[int],
                 size_bound: int = DEFAULT_GROUP_BOUND, label: Optional[str] = None):
        closure = set(roots)
        frontier = list(closure)
        table = root_system.reflection_table
        while frontier:
            a = frontier.pop()
            for b in list(closure):
                for t, u in ((a, b), (b, a)):
                    k = abs(table[t][u]) - 1
                    if k not in closure:
                        closure.add(k)
                        frontier.append(k)
        super().__init__(root_system, positive_roots=sorted(closure),
                         size_bound=size_bound, label=label)

    def is_full(self) -> bool:
        return len(self.positive_roots) == self.root_system.num_positive
