"""
Braided Tensor Agent
Sparse tensors over V_W, the Yetter-Drinfeld braiding, braided integers
and the Woronowicz symmetriser
"""

import logging
from dataclasses import dataclass
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

from app.agents.coxeter import GroupElement, matsumoto_section

logger = logging.getLogger(__name__)

Terms = Dict[bytes, object]


def add_term(terms: Terms, word: bytes, coeff) -> None:
    """terms[word] += coeff, dropping zeros"""
    new = terms.get(word, 0) + coeff
    if new != 0:
        terms[word] = new
    else:
        terms.pop(word, None)


class Tensor:
    """
    Sparse element of V^{(x)n}

    Words are packed as bytes of positive-root indices; signs live in the
    coefficients ([-a] = -[a]). Zero coefficients are never stored.
    """

    __slots__ = ('degree', 'terms')

    def __init__(self, terms: Optional[Terms] = None, degree: int = 0):
        self.terms: Terms = {}
        self.degree = degree
        if terms:
            for word, coeff in terms.items():
                if coeff != 0:
                    self.terms[word] = coeff
            self.degree = len(next(iter(terms)))

    @classmethod
    def word(cls, letters: Sequence[int], coeff=1) -> 'Tensor':
        return cls({bytes(letters): coeff}, degree=len(letters))

    @classmethod
    def from_words(cls, words: Dict[Tuple[int, ...], object], degree: int = 0) -> 'Tensor':
        terms: Terms = {}
        for letters, coeff in words.items():
            add_term(terms, bytes(letters), coeff)
            degree = len(letters)
        return cls(terms, degree)

    @classmethod
    def one(cls) -> 'Tensor':
        return cls({b'': 1}, degree=0)

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __len__(self) -> int:
        return len(self.terms)

    def items(self) -> Iterator[Tuple[Tuple[int, ...], object]]:
        for word, coeff in self.terms.items():
            yield tuple(word), coeff

    def coefficient(self, letters: Sequence[int]):
        return self.terms.get(bytes(letters), 0)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Tensor):
            return NotImplemented
        if self.terms.keys() != other.terms.keys():
            return False
        return all(self.terms[w] == other.terms[w] for w in self.terms)

    def __add__(self, other: 'Tensor') -> 'Tensor':
        terms = dict(self.terms)
        for word, coeff in other.terms.items():
            add_term(terms, word, coeff)
        return Tensor(terms, self.degree if self.terms else other.degree)

    def __neg__(self) -> 'Tensor':
        return Tensor({w: -c for w, c in self.terms.items()}, self.degree)

    def __sub__(self, other: 'Tensor') -> 'Tensor':
        return self + (-other)

    def scale(self, factor) -> 'Tensor':
        if factor == 0:
            return Tensor(degree=self.degree)
        return Tensor({w: c * factor for w, c in self.terms.items()}, self.degree)

    def tensor(self, other: 'Tensor') -> 'Tensor':
        """self (x) other, concatenating words"""
        terms: Terms = {}
        for w1, c1 in self.terms.items():
            for w2, c2 in other.terms.items():
                add_term(terms, w1 + w2, c1 * c2)
        return Tensor(terms, self.degree + other.degree)

    def map_coefficients(self, fn) -> 'Tensor':
        terms: Terms = {}
        for word, coeff in self.terms.items():
            add_term(terms, word, fn(word, coeff))
        return Tensor(terms, self.degree)

    def __repr__(self) -> str:
        if not self.terms:
            return 'Tensor(0)'
        shown = ' + '.join(f"({c})*{list(w)}" for w, c in sorted(self.terms.items())[:6])
        more = ' + ...' if len(self.terms) > 6 else ''
        return f"Tensor({shown}{more})"


class YetterDrinfeldBraiding:
    """Psi([a] (x) [b]) = [s_a b] (x) [a] on positive-root indices"""

    kind = 'nichols'

    def __init__(self, root_system):
        self.root_system = root_system
        self.size = root_system.num_positive
        self._table = root_system.reflection_table

    @property
    def cache_key(self) -> Optional[str]:
        return self.root_system.system.matrix_hash()

    def pair(self, a: int, b: int) -> Tuple[int, int, int]:
        s = self._table[a][b]
        return (1 if s > 0 else -1), abs(s) - 1, a

    def inverse_pair(self, c: int, d: int) -> Tuple[int, int, int]:
        s = self._table[d][c]
        return (1 if s > 0 else -1), d, abs(s) - 1


class FlipBraiding:
    """
    The flip (sign=+1) or minus-flip (sign=-1) on a space of given dimension

    Their Nichols algebras are the symmetric and exterior algebras.
    """

    kind = 'flip'
    cache_key = None

    def __init__(self, size: int, sign: int = 1):
        if sign not in (1, -1):
            raise ValueError("flip sign must be +1 or -1")
        self.size = size
        self.sign = sign

    def pair(self, a: int, b: int) -> Tuple[int, int, int]:
        return self.sign, b, a

    def inverse_pair(self, c: int, d: int) -> Tuple[int, int, int]:
        return self.sign, d, c


def as_braiding(obj):
    """Accept a braiding or a root system"""
    if hasattr(obj, 'pair'):
        return obj
    return YetterDrinfeldBraiding(obj)


def _check_position(pos: int, degree: int) -> None:
    if not 1 <= pos <= degree - 1:
        raise ValueError(f"braiding position {pos} out of range for degree {degree}")


def braid_apply(rs, pos: int, t: Tensor) -> Tensor:
    """
    Apply Psi at slots (pos, pos+1), pos 1-based

    Args:
        rs: Root system or braiding
        pos: Left slot
        t: Tensor

    Returns:
        Braided tensor
    """
    braiding = as_braiding(rs)
    if t.is_zero():
        return t
    _check_position(pos, t.degree)
    terms: Terms = {}
    i = pos - 1
    for word, coeff in t.terms.items():
        sign, x, y = braiding.pair(word[i], word[i + 1])
        buf = bytearray(word)
        buf[i], buf[i + 1] = x, y
        add_term(terms, bytes(buf), coeff if sign > 0 else -coeff)
    return Tensor(terms, t.degree)


def inverse_braid_apply(rs, pos: int, t: Tensor) -> Tensor:
    """Apply the inverse braiding at slots (pos, pos+1)"""
    braiding = as_braiding(rs)
    if t.is_zero():
        return t
    _check_position(pos, t.degree)
    terms: Terms = {}
    i = pos - 1
    for word, coeff in t.terms.items():
        sign, x, y = braiding.inverse_pair(word[i], word[i + 1])
        buf = bytearray(word)
        buf[i], buf[i + 1] = x, y
        add_term(terms, bytes(buf), coeff if sign > 0 else -coeff)
    return Tensor(terms, t.degree)


def shifted_integer_terms(braiding, terms: Terms, k: int, s: int) -> Terms:
    """
    [k]^{(s)} = 1 + Psi_s + Psi_{s+1} Psi_s + ... on raw word terms

    The letter in slot s travels right through k-1 slots.
    """
    out: Terms = {}
    start = s - 1
    pair = braiding.pair
    for word, coeff in terms.items():
        add_term(out, word, coeff)
        buf = bytearray(word)
        a = buf[start]
        sign = 1
        for p in range(start, start + k - 1):
            sgn, x, y = pair(a, buf[p + 1])
            buf[p], buf[p + 1] = x, y
            a = y
            sign *= sgn
            add_term(out, bytes(buf), coeff if sign > 0 else -coeff)
    return out


def shifted_braided_integer(rs, k: int, s: int, t: Tensor) -> Tensor:
    """
    Apply the shifted braided integer [k]^{(s)}

    Args:
        rs: Root system or braiding
        k: Number of summands
        s: First slot (1-based)
        t: Tensor with degree >= s + k - 1
    """
    if k < 1:
        raise ValueError("braided integer needs k >= 1")
    if t.is_zero() or k == 1:
        return t
    if s < 1 or s + k - 1 > t.degree:
        raise ValueError(f"[{k}]^({s}) does not fit degree {t.degree}")
    return Tensor(shifted_integer_terms(as_braiding(rs), t.terms, k, s), t.degree)


def symmetrise_terms(braiding, terms: Terms, n: int) -> Terms:
    """[n]!_Psi = [n]^{(1)} [n-1]^{(2)} ... [2]^{(n-1)}, rightmost first"""
    for s in range(n - 1, 0, -1):
        terms = shifted_integer_terms(braiding, terms, n - s + 1, s)
        if not terms:
            break
    return terms


def woronowicz_symmetrise(rs, t: Tensor) -> Tensor:
    """
    Apply the Woronowicz symmetriser [n]!_Psi in factorised form

    Args:
        rs: Root system or braiding
        t: Homogeneous tensor of degree n

    Returns:
        [n]!_Psi t
    """
    if t.degree <= 1 or t.is_zero():
        return t
    return Tensor(symmetrise_terms(as_braiding(rs), t.terms, t.degree), t.degree)


@dataclass
class BraidedOperatorPlan:
    """
    Braid lifts of all permutations of n letters, one reduced word each

    Entry (i1, ..., il) stands for Psi_i1 ... Psi_il with Psi_il applied first.
    """
    degree: int
    words: List[Tuple[int, ...]]

    @classmethod
    def for_degree(cls, n: int) -> 'BraidedOperatorPlan':
        section = matsumoto_section(n)
        return cls(n, [section[p] for p in sorted(section)])

    def apply(self, rs, t: Tensor) -> Tensor:
        """Sum of all braid lifts applied to t"""
        if t.degree != self.degree:
            raise ValueError(f"plan for degree {self.degree} applied to degree {t.degree}")
        total = Tensor(degree=t.degree)
        for word in self.words:
            current = t
            for pos in reversed(word):
                current = braid_apply(rs, pos, current)
            total = total + current
        return total


def matsumoto_symmetrise(rs, t: Tensor) -> Tensor:
    """Brute-force symmetriser summing over the Matsumoto section"""
    if t.degree <= 1 or t.is_zero():
        return t
    return BraidedOperatorPlan.for_degree(t.degree).apply(rs, t)


def group_act_tensor(rs, w: GroupElement, t: Tensor) -> Tensor:
    """
    Slotwise action w([a1]...[an]) = [w a1]...[w an]

    Args:
        rs: Root system
        w: Group element
        t: Tensor
    """
    images = w.images
    terms: Terms = {}
    for word, coeff in t.terms.items():
        sign = 1
        out = bytearray(len(word))
        for p, letter in enumerate(word):
            s = images[letter]
            if s < 0:
                sign = -sign
                s = -s
            out[p] = s - 1
        add_term(terms, bytes(out), coeff if sign > 0 else -coeff)
    return Tensor(terms, t.degree)
