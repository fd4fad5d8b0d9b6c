"""
Nichols Algebra Agent
Graded components of B_W as quotients of tensor powers by the kernel of the
Woronowicz symmetriser, normal forms, products, braided derivatives, the
duality pairing and the quadratic cover
"""

import logging
import time
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Dict, Iterable, List, Optional, Sequence

from cachetools import LRUCache

from app.agents.braided import (
    Tensor,
    Terms,
    add_term,
    as_braiding,
    group_act_tensor,
    shifted_integer_terms,
    symmetrise_terms,
    woronowicz_symmetrise,
)
from app.agents.coxeter import GroupElement
from app.agents.sparse_linalg import IncrementalEchelon, RelationQuotient, modular_rank
from app.agents.validator import BudgetExceededError

logger = logging.getLogger(__name__)

FORMAT_VERSION = 1
DEFAULT_BUDGET = 2 ** 20
NORMAL_FORM_MEMO = 100000

# basis position -> coefficient
Coords = Dict[int, object]


def _accumulate(target: Coords, key: int, value) -> None:
    new = target.get(key, 0) + value
    if new != 0:
        target[key] = new
    else:
        target.pop(key, None)


@dataclass
class GradedComponent:
    """
    One homogeneous component of a graded quotient of T(V)

    Candidates are the words beta.p with p running over the basis of the
    previous component (beta-major). Basis candidates form a basis of the
    component; every other candidate reduces to a combination of basis
    candidates (reductions, keyed by candidate index, valued in basis
    positions).
    """
    degree: int
    candidates: List[bytes]
    basis: List[bytes]
    reductions: Dict[int, Dict[int, Fraction]]
    kind: str = 'nichols'
    prev_dimension: int = 1
    images: Optional[List[Terms]] = field(default=None, repr=False)

    def __post_init__(self):
        self.memo = LRUCache(maxsize=NORMAL_FORM_MEMO)

    @property
    def dimension(self) -> int:
        return len(self.basis)

    @property
    def pivot_words(self) -> List[tuple]:
        return [tuple(w) for w in self.basis]

    @cached_property
    def basis_index(self) -> Dict[bytes, int]:
        return {w: i for i, w in enumerate(self.basis)}

    @cached_property
    def candidate_index(self) -> Dict[bytes, int]:
        return {w: i for i, w in enumerate(self.candidates)}

    @cached_property
    def _basis_candidates(self) -> Dict[int, int]:
        return {self.candidate_index[w]: i for i, w in enumerate(self.basis)}

    def candidate_normal_form(self, c: int) -> Dict[int, Fraction]:
        pos = self._basis_candidates.get(c)
        if pos is not None:
            return {pos: Fraction(1)}
        return self.reductions.get(c, {})

    @property
    def kernel_basis(self) -> List[Tensor]:
        """
        Kernel rows in the word basis, one per non-basis candidate

        These span the kernel relative to the candidate words only, not the
        whole kernel of [n]! on V^{(x)n}.
        """
        rows = []
        for c in sorted(self.reductions):
            terms: Terms = {self.candidates[c]: Fraction(1)}
            for pos, a in self.reductions[c].items():
                add_term(terms, self.basis[pos], -a)
            rows.append(Tensor(terms, self.degree))
        return rows

    def to_payload(self) -> Dict:
        """Serialisable form: words as lists, kernel as [row, word, num, den] strings"""
        kernel = []
        for row, tensor in enumerate(self.kernel_basis):
            for word, coeff in sorted(tensor.terms.items()):
                q = Fraction(coeff)
                kernel.append([row, list(word), str(q.numerator), str(q.denominator)])
        return {
            'degree': self.degree,
            'prev_dimension': self.prev_dimension,
            'candidates': [list(w) for w in self.candidates],
            'basis': [list(w) for w in self.basis],
            'kernel': kernel,
        }

    @classmethod
    def from_payload(cls, payload: Dict, kind: str) -> 'GradedComponent':
        candidates = [bytes(w) for w in payload['candidates']]
        basis = [bytes(w) for w in payload['basis']]
        cand_index = {w: i for i, w in enumerate(candidates)}
        basis_index = {w: i for i, w in enumerate(basis)}

        rows: Dict[int, Dict[bytes, Fraction]] = {}
        for row, word, num, den in payload['kernel']:
            rows.setdefault(int(row), {})[bytes(word)] = Fraction(int(num), int(den))

        reductions = {}
        for entries in rows.values():
            pivot = next(w for w in entries if w not in basis_index)
            scale = entries[pivot]
            reductions[cand_index[pivot]] = {
                basis_index[w]: -a / scale for w, a in entries.items() if w != pivot
            }
        return cls(int(payload['degree']), candidates, basis, reductions, kind,
                   int(payload.get('prev_dimension', 1)))


class GradedQuotient:
    """
    Common machinery of B_W and its quadratic cover

    Components are built lazily, degree by degree, and optionally persisted
    through a CacheAgent. Normal forms of words are computed by the
    recursion NF(beta.w) = sum_q NF(w)_q * NF(candidate beta.q).
    """

    kind = 'nichols'

    def __init__(self, braiding, budget: int = DEFAULT_BUDGET, cache_agent=None):
        self.braiding = as_braiding(braiding)
        self.size = self.braiding.size
        self.budget = budget
        self.cache_agent = cache_agent
        self._components: Dict[int, GradedComponent] = {}

    @property
    def root_system(self):
        return getattr(self.braiding, 'root_system', None)

    def component(self, n: int) -> GradedComponent:
        """
        Graded component of degree n

        Raises:
            BudgetExceededError: If size**n exceeds the budget
        """
        if n < 0:
            raise ValueError("degree must be nonnegative")
        comp = self._components.get(n)
        if comp is not None:
            return comp

        if n <= 1:
            comp = self._base_component(n)
        else:
            comp = self._load(n)
            if comp is None:
                start = time.perf_counter()
                comp = self._build(n)
                logger.info("%s component degree=%d candidates=%d dimension=%d elapsed=%.2fs",
                            self.kind, n, len(comp.candidates), comp.dimension,
                            time.perf_counter() - start)
                self._store(comp)
        self._components[n] = comp
        return comp

    def _base_component(self, n: int) -> GradedComponent:
        words = [b''] if n == 0 else [bytes([a]) for a in range(self.size)]
        return GradedComponent(n, list(words), list(words), {}, self.kind, 1,
                               images=[{w: 1} for w in words])

    def _empty_component(self, n: int) -> GradedComponent:
        return GradedComponent(n, [], [], {}, self.kind, 0, images=[])

    def _check_budget(self, n: int) -> None:
        required = self.size ** n
        if required > self.budget:
            raise BudgetExceededError(
                f"degree {n} needs {required} words, budget is {self.budget}",
                required=required, budget=self.budget)

    def _load(self, n: int) -> Optional[GradedComponent]:
        key = self.braiding.cache_key
        if self.cache_agent is None or key is None:
            return None
        payload = self.cache_agent.load_component(self.kind, key, n, FORMAT_VERSION)
        if payload is None:
            logger.debug("cache miss %s degree %d", self.kind, n)
            return None
        logger.debug("cache hit %s degree %d", self.kind, n)
        return GradedComponent.from_payload(payload, self.kind)

    def _store(self, comp: GradedComponent) -> None:
        key = self.braiding.cache_key
        if self.cache_agent is None or key is None:
            return
        rs = self.root_system
        self.cache_agent.save_component(self.kind, key, comp.degree, FORMAT_VERSION,
                                        comp.to_payload(), matrix=rs.system.matrix if rs else None)

    def _build(self, n: int) -> GradedComponent:
        raise NotImplementedError

    def word_normal_form(self, word: bytes) -> Coords:
        """Coordinates of a word on the basis of its component"""
        n = len(word)
        comp = self.component(n)
        if n <= 1:
            return {comp.basis_index[word]: Fraction(1)}
        hit = comp.memo.get(word)
        if hit is not None:
            return hit

        out: Coords = {}
        if comp.dimension:
            base = word[0] * comp.prev_dimension
            for q, c in self.word_normal_form(word[1:]).items():
                for pos, a in comp.candidate_normal_form(base + q).items():
                    _accumulate(out, pos, c * a)
        comp.memo[word] = out
        return out

    def normal_form(self, t: Tensor) -> 'NicholsElement':
        """Reduce a tensor to basis coordinates"""
        piece: Coords = {}
        for word, coeff in t.terms.items():
            for pos, a in self.word_normal_form(word).items():
                _accumulate(piece, pos, coeff * a)
        return NicholsElement(self, {t.degree: piece} if piece else {})

    def hilbert(self, up_to: int) -> List[int]:
        """Dimensions of the components 0..up_to"""
        dims = []
        for n in range(up_to + 1):
            if dims and dims[-1] == 0:
                dims.append(0)
                continue
            dims.append(self.component(n).dimension)
        return dims


class NicholsAlgebra(GradedQuotient):
    """
    B(V) for a braided vector space with signed-permutation braiding

    Component n is V^{(x)n} / ker [n]!_Psi, computed on candidate words
    beta.p because ker [n]!_Psi contains V (x) ker [n-1]!_Psi.
    """

    kind = 'nichols'

    def __init__(self, braiding, budget: int = DEFAULT_BUDGET, cache_agent=None,
                 modular_check: bool = False):
        super().__init__(braiding, budget, cache_agent)
        self.modular_check = modular_check

    def _images(self, comp: GradedComponent) -> List[Terms]:
        """[n]!_Psi of every basis word of comp"""
        if comp.images is None:
            comp.images = [symmetrise_terms(self.braiding, {w: 1}, comp.degree) for w in comp.basis]
        return comp.images

    def _build(self, n: int) -> GradedComponent:
        prev = self.component(n - 1)
        if prev.dimension == 0:
            return self._empty_component(n)
        self._check_budget(n)

        prev_images = self._images(prev)
        d = prev.dimension
        echelon = IncrementalEchelon()
        candidates: List[bytes] = []
        basis: List[bytes] = []
        images: List[Terms] = []
        accepted: Dict[int, int] = {}
        reductions: Dict[int, Dict[int, Fraction]] = {}
        all_images: List[Terms] = []

        for beta in range(self.size):
            head = bytes([beta])
            for q, p in enumerate(prev.basis):
                c = beta * d + q
                word = head + p
                candidates.append(word)
                lifted = {head + w: a for w, a in prev_images[q].items()}
                image = shifted_integer_terms(self.braiding, lifted, n, 1)
                if self.modular_check:
                    all_images.append(image)
                relation = echelon.add(image, c)
                if relation is None:
                    accepted[c] = len(basis)
                    basis.append(word)
                    images.append(image)
                else:
                    reductions[c] = {accepted[t]: -a for t, a in relation.items() if t != c}

        if self.modular_check:
            predicted = modular_rank(all_images)
            if predicted != len(basis):
                logger.warning("degree %d: modular rank %d differs from exact rank %d",
                               n, predicted, len(basis))
            else:
                logger.debug("degree %d: modular rank confirmed (%d)", n, predicted)

        return GradedComponent(n, candidates, basis, reductions, self.kind, d, images=images)

    # element operations

    def one(self) -> 'NicholsElement':
        return NicholsElement(self, {0: {0: Fraction(1)}})

    def generator(self, alpha: int, coeff=1) -> 'NicholsElement':
        return self.normal_form(Tensor.word([alpha], coeff))

    def multiply(self, a: 'NicholsElement', b: 'NicholsElement') -> 'NicholsElement':
        """Concatenate basis words of both factors and reduce"""
        pieces: Dict[int, Coords] = {}
        for i, pa in a.pieces.items():
            basis_i = self.component(i).basis
            for j, pb in b.pieces.items():
                basis_j = self.component(j).basis
                out = pieces.setdefault(i + j, {})
                for u, x in pa.items():
                    for v, y in pb.items():
                        xy = x * y
                        for pos, c in self.word_normal_form(basis_i[u] + basis_j[v]).items():
                            _accumulate(out, pos, xy * c)
        return NicholsElement(self, {n: p for n, p in pieces.items() if p})

    def derivative(self, a: 'NicholsElement', alpha: int) -> 'NicholsElement':
        """Right braided derivative along [alpha], computed on representatives"""
        result = NicholsElement(self, {})
        for n in a.pieces:
            if n == 0:
                continue
            result = result + self.normal_form(tensor_derivative(self.braiding, a.to_tensor(n), alpha))
        return result

    def is_constant(self, a: 'NicholsElement') -> bool:
        """A constant iff every derivative vanishes"""
        return all(self.derivative(a, alpha).is_zero() for alpha in range(self.size))

    def pairing(self, phi: 'NicholsElement', x: 'NicholsElement'):
        """<phi, x> on representatives, summed over common degrees"""
        total = 0
        for n in phi.pieces:
            if n in x.pieces:
                total = total + pairing(self.braiding, phi.to_tensor(n), x.to_tensor(n))
        return total

    def act(self, w: GroupElement, a: 'NicholsElement') -> 'NicholsElement':
        """Action of W through the slotwise action on representatives"""
        result = NicholsElement(self, {})
        for n in a.pieces:
            result = result + self.normal_form(group_act_tensor(self.root_system, w, a.to_tensor(n)))
        return result


class QuadraticCover(GradedQuotient):
    """
    T(V) modulo the ideal generated by ker(1 + Psi) in degree 2

    Degree k is (V (x) Q_{k-1}) modulo the images of K (x) Q_{k-2}, since
    the ideal in degree k is V (x) I_{k-1} + K (x) V^{(x)k-2}.
    """

    kind = 'quadratic'

    def __init__(self, nichols: NicholsAlgebra, budget: Optional[int] = None, cache_agent=None):
        super().__init__(nichols.braiding, budget or nichols.budget,
                         cache_agent if cache_agent is not None else nichols.cache_agent)
        self.nichols = nichols

    def _build(self, n: int) -> GradedComponent:
        if n == 2:
            base = self.nichols.component(2)
            return GradedComponent(2, list(base.candidates), list(base.basis),
                                   dict(base.reductions), self.kind, base.prev_dimension)

        prev = self.component(n - 1)
        if prev.dimension == 0:
            return self._empty_component(n)
        self._check_budget(n)
        lower = self.component(n - 2)
        kernel = self.nichols.component(2).kernel_basis

        d = prev.dimension
        quotient = RelationQuotient(self.size * d)
        for kappa in kernel:
            for p in lower.basis:
                relation: Coords = {}
                for ab, coeff in kappa.terms.items():
                    row = ab[0] * d
                    for q, x in self.word_normal_form(ab[1:] + p).items():
                        _accumulate(relation, row + q, coeff * x)
                quotient.add(relation)

        candidates = [bytes([beta]) + p for beta in range(self.size) for p in prev.basis]
        basis_candidates = quotient.basis()
        position = {c: i for i, c in enumerate(basis_candidates)}
        reductions = {
            c: {position[t]: a for t, a in red.items()}
            for c, red in quotient.reductions().items()
        }
        basis = [candidates[c] for c in basis_candidates]
        return GradedComponent(n, candidates, basis, reductions, self.kind, d)


@dataclass(eq=False)
class NicholsElement:
    """
    Element of a graded quotient: degree -> {basis position: coefficient}

    Pieces hold no zero coefficients and no empty degrees.
    """
    algebra: GradedQuotient
    pieces: Dict[int, Coords]

    def is_zero(self) -> bool:
        return not any(self.pieces.values())

    def degrees(self) -> List[int]:
        return sorted(n for n, p in self.pieces.items() if p)

    def is_homogeneous(self) -> bool:
        return len(self.degrees()) <= 1

    def coefficient(self, word: Sequence[int]):
        word = bytes(word)
        comp = self.algebra.component(len(word))
        pos = comp.basis_index.get(word)
        if pos is None:
            return 0
        return self.pieces.get(len(word), {}).get(pos, 0)

    def to_tensor(self, n: Optional[int] = None) -> Tensor:
        """Representative on basis words of one degree (the only degree if omitted)"""
        if n is None:
            degrees = self.degrees()
            if len(degrees) > 1:
                raise ValueError("element is not homogeneous; pass a degree")
            n = degrees[0] if degrees else 0
        basis = self.algebra.component(n).basis if n in self.pieces else []
        terms: Terms = {}
        for pos, c in self.pieces.get(n, {}).items():
            add_term(terms, basis[pos], c)
        return Tensor(terms, n)

    def __add__(self, other: 'NicholsElement') -> 'NicholsElement':
        pieces = {n: dict(p) for n, p in self.pieces.items()}
        for n, p in other.pieces.items():
            target = pieces.setdefault(n, {})
            for pos, c in p.items():
                _accumulate(target, pos, c)
        return NicholsElement(self.algebra, {n: p for n, p in pieces.items() if p})

    def __neg__(self) -> 'NicholsElement':
        return self.scale(-1)

    def __sub__(self, other: 'NicholsElement') -> 'NicholsElement':
        return self + (-other)

    def scale(self, factor) -> 'NicholsElement':
        if factor == 0:
            return NicholsElement(self.algebra, {})
        return NicholsElement(self.algebra, {
            n: {pos: c * factor for pos, c in p.items()} for n, p in self.pieces.items()
        })

    def __mul__(self, other):
        if isinstance(other, NicholsElement):
            return self.algebra.multiply(self, other)
        return self.scale(other)

    def __rmul__(self, other):
        return self.scale(other)

    def __eq__(self, other) -> bool:
        if not isinstance(other, NicholsElement):
            return NotImplemented
        return (self - other).is_zero()

    def __repr__(self) -> str:
        return f"NicholsElement(degrees={self.degrees()}, terms={sum(len(p) for p in self.pieces.values())})"


def tensor_derivative(rs, t: Tensor, alpha: int) -> Tensor:
    """
    Right braided derivative of a tensor along [alpha]

    (b1...bn) d_alpha = sum over j with bj = alpha of
    b1...b_{j-1} times the letters b_{j+1}...bn braided past alpha.
    For V_W this is b1...b_{j-1} s_alpha(b_{j+1}) ... s_alpha(bn).
    """
    braiding = as_braiding(rs)
    terms: Terms = {}
    for word, coeff in t.terms.items():
        for j, letter in enumerate(word):
            if letter != alpha:
                continue
            buf = bytearray(word[:j])
            sign = 1
            travelling = alpha
            for b in word[j + 1:]:
                sgn, x, travelling = braiding.pair(travelling, b)
                buf.append(x)
                sign *= sgn
            add_term(terms, bytes(buf), coeff if sign > 0 else -coeff)
    return Tensor(terms, max(t.degree - 1, 0))


def pairing(rs, phi: Tensor, x: Tensor):
    """
    <phi, x> = (phi | [n]!_Psi x) with the reversed evaluation pairing

    Args:
        rs: Root system or braiding
        phi: Tensor of degree n
        x: Tensor

    Returns:
        Field element, Fraction or int; 0 on a degree mismatch
    """
    if phi.degree != x.degree or phi.is_zero() or x.is_zero():
        return 0
    image = woronowicz_symmetrise(rs, x).terms
    total = 0
    for word, coeff in phi.terms.items():
        other = image.get(word[::-1])
        if other:
            total = total + coeff * other
    return total


def pairing_by_derivatives(rs, phi: Tensor, x: Tensor):
    """<phi, x> = eps(phi d_{x1} d_{x2} ... d_{xn}), summed over the words of x"""
    if phi.degree != x.degree:
        return 0
    total = 0
    for word, coeff in x.terms.items():
        current = phi
        for letter in word:
            current = tensor_derivative(rs, current, letter)
            if current.is_zero():
                break
        else:
            total = total + coeff * current.coefficient(())
    return total


_ALGEBRAS: LRUCache = LRUCache(maxsize=16)


def get_algebra(rs, budget: int = DEFAULT_BUDGET, cache_agent=None) -> NicholsAlgebra:
    """Shared NicholsAlgebra per Coxeter matrix and budget"""
    braiding = as_braiding(rs)
    cache_dir = cache_agent.cache_dir if cache_agent is not None else None
    key = (braiding.cache_key, budget, cache_dir) if braiding.cache_key else None
    if key is None:
        return NicholsAlgebra(braiding, budget, cache_agent)
    algebra = _ALGEBRAS.get(key)
    if algebra is None:
        algebra = NicholsAlgebra(braiding, budget, cache_agent)
        _ALGEBRAS[key] = algebra
    return algebra


def component(rs, n: int, budget: int = DEFAULT_BUDGET, cache_agent=None) -> GradedComponent:
    return get_algebra(rs, budget, cache_agent).component(n)


def normal_form(rs, t: Tensor) -> NicholsElement:
    return get_algebra(rs).normal_form(t)


def multiply(a: NicholsElement, b: NicholsElement) -> NicholsElement:
    return a.algebra.multiply(a, b)


def derivative(rs, a: NicholsElement, alpha: int) -> NicholsElement:
    return a.algebra.derivative(a, alpha)


def is_constant(rs, a: NicholsElement) -> bool:
    return a.algebra.is_constant(a)


def hilbert(rs, up_to: int, budget: int = DEFAULT_BUDGET, cache_agent=None) -> List[int]:
    """Dimensions of B_W^0 .. B_W^up_to"""
    return get_algebra(rs, budget, cache_agent).hilbert(up_to)


def quadratic_hilbert(rs, up_to: int, budget: int = DEFAULT_BUDGET, cache_agent=None) -> List[int]:
    """Dimensions of the quadratic cover in degrees 0 .. up_to"""
    return QuadraticCover(get_algebra(rs, budget, cache_agent)).hilbert(up_to)


def is_zero_in_nichols(rs, t: Tensor) -> bool:
    """t vanishes in B_W iff [n]!_Psi t = 0 (t homogeneous)"""
    return woronowicz_symmetrise(rs, t).is_zero()


def nichols_rank(rs, tensors: Iterable[Tensor]) -> int:
    """Dimension of the span of homogeneous tensors in B_W"""
    echelon = IncrementalEchelon()
    for i, t in enumerate(tensors):
        echelon.add({(t.degree, w): c for w, c in woronowicz_symmetrise(rs, t).terms.items()}, i)
    return echelon.rank
