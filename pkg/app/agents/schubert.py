"""
Schubert Calculus Agent
Polynomials on h, divided differences, Schubert classes of the coinvariant
algebra, the nilCoxeter algebra, reflection submodules and the maps
mu, nu and theta into B_W
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from app.agents.braided import Tensor
from app.agents.coxeter import CoxeterGroup, GroupElement, ReflectionSubgroup
from app.agents.nichols import NicholsAlgebra, NicholsElement
from app.agents.validator import CoxeterInputError, CoxeterValidator

logger = logging.getLogger(__name__)

Exponent = Tuple[int, ...]


def _accumulate(target: Dict, key, value) -> None:
    new = target.get(key, 0) + value
    if new != 0:
        target[key] = new
    else:
        target.pop(key, None)


class Polynomial:
    """
    Element of S(h) in the simple roots alpha_1..alpha_r as variables

    terms maps exponent vectors to coefficients; zeros are never stored.
    """

    __slots__ = ('rank', 'terms')

    def __init__(self, rank: int, terms: Optional[Dict[Exponent, object]] = None):
        self.rank = rank
        self.terms: Dict[Exponent, object] = {}
        for e, c in (terms or {}).items():
            if c != 0:
                self.terms[e] = c

    @classmethod
    def constant(cls, rank: int, value=1) -> 'Polynomial':
        return cls(rank, {(0,) * rank: value})

    @classmethod
    def variable(cls, rank: int, i: int) -> 'Polynomial':
        e = [0] * rank
        e[i] = 1
        return cls(rank, {tuple(e): Fraction(1)})

    @classmethod
    def linear(cls, coords: Sequence) -> 'Polynomial':
        """Linear form sum_i coords[i] alpha_i"""
        rank = len(coords)
        terms = {}
        for i, a in enumerate(coords):
            if a != 0:
                e = [0] * rank
                e[i] = 1
                terms[tuple(e)] = a
        return cls(rank, terms)

    def is_zero(self) -> bool:
        return not self.terms

    @property
    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial"""
        return max((sum(e) for e in self.terms), default=-1)

    def is_homogeneous(self) -> bool:
        return len({sum(e) for e in self.terms}) <= 1

    def constant_term(self):
        return self.terms.get((0,) * self.rank, 0)

    def homogeneous_part(self, d: int) -> 'Polynomial':
        return Polynomial(self.rank, {e: c for e, c in self.terms.items() if sum(e) == d})

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = Polynomial.constant(self.rank, other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        return (self - other).is_zero()

    def __add__(self, other: 'Polynomial') -> 'Polynomial':
        terms = dict(self.terms)
        for e, c in other.terms.items():
            _accumulate(terms, e, c)
        return Polynomial(self.rank, terms)

    def __neg__(self) -> 'Polynomial':
        return Polynomial(self.rank, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other: 'Polynomial') -> 'Polynomial':
        return self + (-other)

    def scale(self, factor) -> 'Polynomial':
        if factor == 0:
            return Polynomial(self.rank)
        return Polynomial(self.rank, {e: c * factor for e, c in self.terms.items()})

    def __mul__(self, other):
        if not isinstance(other, Polynomial):
            return self.scale(other)
        terms: Dict[Exponent, object] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                _accumulate(terms, tuple(a + b for a, b in zip(e1, e2)), c1 * c2)
        return Polynomial(self.rank, terms)

    def __rmul__(self, other):
        return self.scale(other)

    def __pow__(self, n: int) -> 'Polynomial':
        result = Polynomial.constant(self.rank)
        for _ in range(n):
            result = result * self
        return result

    def substitute(self, images: Sequence['Polynomial']) -> 'Polynomial':
        """f(images[0], ..., images[r-1])"""
        powers: Dict[Tuple[int, int], Polynomial] = {}

        def power(i: int, k: int) -> Polynomial:
            if (i, k) not in powers:
                powers[(i, k)] = Polynomial.constant(self.rank) if k == 0 else power(i, k - 1) * images[i]
            return powers[(i, k)]

        result = Polynomial(self.rank)
        for e, c in self.terms.items():
            term = Polynomial.constant(self.rank, c)
            for i, k in enumerate(e):
                if k:
                    term = term * power(i, k)
            result = result + term
        return result

    def divide_linear(self, coords: Sequence) -> 'Polynomial':
        """
        Exact quotient by the linear form sum_i coords[i] alpha_i

        Division uses the term order comparing the exponent of the first
        variable with nonzero coefficient first, then lexicographically.

        Raises:
            ArithmeticError: If the division leaves a remainder
        """
        k = next((i for i, a in enumerate(coords) if a != 0), None)
        if k is None:
            raise ZeroDivisionError("division by the zero linear form")
        lead = coords[k]

        remainder = dict(self.terms)
        quotient: Dict[Exponent, object] = {}
        while remainder:
            e = max(remainder, key=lambda x: (x[k],) + x)
            c = remainder[e]
            if e[k] == 0:
                raise ArithmeticError("polynomial is not divisible by the linear form")
            qe = e[:k] + (e[k] - 1,) + e[k + 1:]
            qc = c / lead
            _accumulate(quotient, qe, qc)
            for i, a in enumerate(coords):
                if a != 0:
                    te = qe[:i] + (qe[i] + 1,) + qe[i + 1:]
                    _accumulate(remainder, te, -qc * a)
        return Polynomial(self.rank, quotient)

    def __repr__(self) -> str:
        if not self.terms:
            return 'Polynomial(0)'
        parts = []
        for e, c in sorted(self.terms.items(), reverse=True):
            mono = '*'.join(f"a{i + 1}" + (f"^{k}" if k > 1 else '') for i, k in enumerate(e) if k)
            parts.append(f"({c})*{mono}" if mono else f"({c})")
        return ' + '.join(parts)


def root_polynomial(rs, beta: int) -> Polynomial:
    """Positive root beta as a linear polynomial"""
    return Polynomial.linear(rs.roots[beta])


def reflect_polynomial(rs, beta: int, f: Polynomial) -> Polynomial:
    """s_beta(f) with s_beta(x) = x - 2(x, beta) beta"""
    r = rs.rank
    root = rs.roots[beta]
    images = []
    for i in range(r):
        coef = 2 * rs.inner(i, beta)
        images.append(Polynomial.linear([
            (1 if k == i else 0) - coef * root[k] for k in range(r)
        ]))
    return f.substitute(images)


def group_act_polynomial(rs, w: GroupElement, f: Polynomial) -> Polynomial:
    """w(f) through the images of the simple roots"""
    images = []
    for i in range(rs.rank):
        k, sign = w.apply(i)
        images.append(Polynomial.linear(rs.roots[k]).scale(sign))
    return f.substitute(images)


def divided_difference(rs, f: Polynomial, beta: int) -> Polynomial:
    """
    (f - s_beta f) / beta

    Args:
        rs: Root system
        f: Polynomial
        beta: Positive-root index

    Returns:
        Exact quotient

    Raises:
        ArithmeticError: If the quotient is not exact
    """
    difference = f - reflect_polynomial(rs, beta, f)
    if difference.is_zero():
        return Polynomial(rs.rank)
    return difference.divide_linear(rs.roots[beta])


def divided_difference_along(rs, f: Polynomial, roots: Sequence[int]) -> Polynomial:
    """f d_{b1} d_{b2} ... with d_{b1} applied first"""
    for beta in roots:
        if f.is_zero():
            break
        f = divided_difference(rs, f, beta)
    return f


def top_class(rs, group: CoxeterGroup) -> Polynomial:
    """(1/|W|) prod over the positive roots of the group"""
    product = Polynomial.constant(rs.rank)
    for gamma in group.positive_roots:
        product = product * root_polynomial(rs, gamma)
    return product.scale(Fraction(1, group.order))


def schubert_classes(rs, group: Optional[CoxeterGroup] = None,
                     cross_check: bool = False) -> Dict[GroupElement, Polynomial]:
    """
    Schubert classes X_w = d_{w w0} X_{w0}

    Built downward from w0: if l(s_i w) > l(w) then X_w = d_i X_{s_i w}.

    Args:
        rs: Root system
        group: Coxeter group or reflection subgroup (defaults to W)
        cross_check: Recompute every class through all its left ascents

    Returns:
        group element -> polynomial

    Raises:
        ArithmeticError: If cross_check finds two different values
    """
    group = group or rs.group()
    elements = sorted(group.enumerate(), key=group.length, reverse=True)
    classes: Dict[GroupElement, Polynomial] = {elements[0]: top_class(rs, group)}

    for w in elements[1:]:
        lw = group.length(w)
        values = []
        for pos, beta in enumerate(group.simple_roots):
            v = group.left_multiply(pos, w)
            if group.length(v) > lw:
                values.append(divided_difference(rs, classes[v], beta))
                if not cross_check:
                    break
        if not values:
            raise ArithmeticError("element below w0 has no left ascent")
        if any(x != values[0] for x in values[1:]):
            raise ArithmeticError("Schubert class depends on the reduced word")
        classes[w] = values[0]

    logger.info("computed %d Schubert classes", len(classes))
    return classes


def word_roots(group: CoxeterGroup, word: Sequence[int]) -> List[int]:
    """Root indices of a 1-based generator word"""
    return [group.simple_roots[i - 1] for i in word]


def sw_nw_pairing(rs, f: Polynomial, w: GroupElement, group: Optional[CoxeterGroup] = None):
    """
    <f, u_w> = eps(f d_{i1} ... d_{ik}) along a reduced word of w

    Returns:
        Constant term after the divided differences
    """
    group = group or rs.group()
    word = group.reduced_word(w)
    return divided_difference_along(rs, f, word_roots(group, word)).constant_term()


@dataclass
class NilCoxeterElement:
    """Sparse combination of basis elements u_w"""
    group: CoxeterGroup
    terms: Dict[GroupElement, object] = field(default_factory=dict)

    @classmethod
    def basis(cls, group: CoxeterGroup, w: GroupElement, coeff=1) -> 'NilCoxeterElement':
        return cls(group, {w: coeff})

    @classmethod
    def generator(cls, group: CoxeterGroup, i: int) -> 'NilCoxeterElement':
        """u_i for a 1-based generator index"""
        return cls(group, {group.generators[i - 1]: 1})

    def is_zero(self) -> bool:
        return not self.terms

    def __add__(self, other: 'NilCoxeterElement') -> 'NilCoxeterElement':
        terms = dict(self.terms)
        for w, c in other.terms.items():
            _accumulate(terms, w, c)
        return NilCoxeterElement(self.group, terms)

    def scale(self, factor) -> 'NilCoxeterElement':
        return NilCoxeterElement(self.group, {w: c * factor for w, c in self.terms.items() if c * factor != 0})

    def __mul__(self, other):
        if isinstance(other, NilCoxeterElement):
            return nilcoxeter_multiply(self, other)
        return self.scale(other)

    def __eq__(self, other) -> bool:
        if not isinstance(other, NilCoxeterElement):
            return NotImplemented
        keys = set(self.terms) | set(other.terms)
        return all(self.terms.get(w, 0) == other.terms.get(w, 0) for w in keys)


def nilcoxeter_multiply(a: NilCoxeterElement, b: NilCoxeterElement) -> NilCoxeterElement:
    """u_v u_w = u_{vw} when lengths add, else 0"""
    group = a.group
    terms: Dict[GroupElement, object] = {}
    for v, x in a.terms.items():
        lv = group.length(v)
        for w, y in b.terms.items():
            vw = v * w
            if group.length(vw) == lv + group.length(w):
                _accumulate(terms, vw, x * y)
    return NilCoxeterElement(group, terms)


def nilcoxeter_act(rs, f: Polynomial, a: NilCoxeterElement) -> Polynomial:
    """Right action f . u_w = f d_{i1} ... d_{ik}"""
    result = Polynomial(rs.rank)
    for w, c in a.terms.items():
        word = a.group.reduced_word(w)
        result = result + divided_difference_along(rs, f, word_roots(a.group, word)).scale(c)
    return result


@dataclass
class ReflectionSubmodule:
    """
    Image of h in V_W under mu_c, c constant on W-orbits

    support lists the positive roots with nonzero coefficient.
    """
    root_system: object
    orbit_coeffs: Dict[int, object]
    support: Tuple[int, ...]
    subgroup: CoxeterGroup

    @property
    def generic(self) -> bool:
        return len(self.support) == self.root_system.num_positive

    def coefficient(self, beta: int):
        return self.orbit_coeffs.get(self.root_system.orbit_of[beta], 0)


def reflection_submodule(rs, orbit_coeffs: Dict[int, object]) -> ReflectionSubmodule:
    """
    Build the reflection submodule for orbit coefficients

    Raises:
        CoxeterInputError: If an orbit is unknown or all coefficients vanish
    """
    is_valid, msg = CoxeterValidator.validate_orbit_coefficients(orbit_coeffs, rs.orbit_count)
    if not is_valid:
        raise CoxeterInputError(msg)

    support = tuple(b for b in range(rs.num_positive) if orbit_coeffs.get(rs.orbit_of[b], 0) != 0)
    if len(support) == rs.num_positive:
        subgroup = rs.group()
    else:
        subgroup = ReflectionSubgroup(rs, support)
    return ReflectionSubmodule(rs, dict(orbit_coeffs), support, subgroup)


def canonical_submodule(rs) -> ReflectionSubmodule:
    """c = 1 on every orbit"""
    return reflection_submodule(rs, {o: 1 for o in range(rs.orbit_count)})


def mu_linear_coefficients(rs, u: ReflectionSubmodule) -> List[Dict[int, object]]:
    """mu(alpha_i) = sum_beta 2 c_beta (alpha_i, beta) [beta], per variable"""
    rows = []
    for i in range(rs.rank):
        row = {}
        for beta in u.support:
            value = 2 * u.coefficient(beta) * rs.inner(i, beta)
            if value != 0:
                row[beta] = value
        rows.append(row)
    return rows


def mu_embed(rs, f: Polynomial, u: ReflectionSubmodule, algebra: NicholsAlgebra) -> NicholsElement:
    """
    Substitute mu(x) for every linear x and multiply in B_W

    Args:
        rs: Root system
        f: Polynomial
        u: Reflection submodule
        algebra: Nichols algebra of rs

    Returns:
        mu(f)
    """
    generators = []
    for row in mu_linear_coefficients(rs, u):
        element = NicholsElement(algebra, {})
        for beta, value in row.items():
            element = element + algebra.generator(beta, value)
        generators.append(element)

    powers: Dict[Tuple[int, int], NicholsElement] = {}

    def power(i: int, k: int) -> NicholsElement:
        if (i, k) not in powers:
            powers[(i, k)] = algebra.one() if k == 0 else algebra.multiply(power(i, k - 1), generators[i])
        return powers[(i, k)]

    result = NicholsElement(algebra, {})
    for e, c in f.terms.items():
        term = algebra.one().scale(c)
        for i, k in enumerate(e):
            if k:
                term = algebra.multiply(term, power(i, k))
                if term.is_zero():
                    break
        result = result + term
    return result


def mu_word_coefficient(f: Polynomial, rows: List[Dict[int, object]], word: Sequence[int]):
    """
    Coefficient of a word in the tensor representative of mu(f)

    Each monomial expands as the tensor product of mu(alpha_i) in
    increasing variable order.
    """
    total = 0
    d = len(word)
    for e, c in f.terms.items():
        if sum(e) != d:
            continue
        value = c
        k = 0
        for i, count in enumerate(e):
            row = rows[i]
            for _ in range(count):
                m = row.get(word[k])
                if m is None:
                    value = 0
                    break
                value = value * m
                k += 1
            if value == 0:
                break
        if value != 0:
            total = total + value
    return total


def mu_tensor(rs, f: Polynomial, u: ReflectionSubmodule) -> Tensor:
    """Full tensor representative of mu(f) for homogeneous f"""
    rows = mu_linear_coefficients(rs, u)
    result = Tensor(degree=max(f.degree, 0))
    for e, c in f.terms.items():
        piece = Tensor.one().scale(c)
        for i, count in enumerate(e):
            factor = Tensor({bytes([b]): v for b, v in rows[i].items()}, 1)
            for _ in range(count):
                piece = piece.tensor(factor)
        result = result + piece
    return result


def nu_word(group: CoxeterGroup, w: GroupElement, word: Optional[Sequence[int]] = None) -> Tensor:
    """Word of simple-root letters along a reduced word of w"""
    word = group.reduced_word(w) if word is None else word
    return Tensor.word(word_roots(group, word))


def nu_embed(rs, a: NilCoxeterElement, algebra: NicholsAlgebra) -> NicholsElement:
    """u_w -> [alpha_i1] ... [alpha_ik] along the least reduced word"""
    result = NicholsElement(algebra, {})
    for w, c in a.terms.items():
        result = result + algebra.normal_form(nu_word(a.group, w)).scale(c)
    return result


def theta_automorphism(rs, orbit_coeffs: Dict[int, object], a: NicholsElement) -> NicholsElement:
    """
    [beta] -> c_beta [beta], rescaling every basis word by its letters

    Raises:
        ValueError: If some orbit coefficient is zero
    """
    coeffs = [orbit_coeffs.get(o, 0) for o in range(rs.orbit_count)]
    if any(c == 0 for c in coeffs):
        raise ValueError("theta needs nonzero coefficients on every orbit")

    algebra = a.algebra
    pieces = {}
    for n, piece in a.pieces.items():
        basis = algebra.component(n).basis
        scaled = {}
        for pos, value in piece.items():
            for letter in basis[pos]:
                value = value * coeffs[rs.orbit_of[letter]]
            scaled[pos] = value
        pieces[n] = scaled
    return NicholsElement(algebra, pieces)


def reynolds(rs, f: Polynomial, group: Optional[CoxeterGroup] = None) -> Polynomial:
    """Average of w(f) over the group"""
    group = group or rs.group()
    elements = group.enumerate()
    total = Polynomial(rs.rank)
    for w in elements:
        total = total + group_act_polynomial(rs, w, f)
    return total.scale(Fraction(1, len(elements)))
