"""
Verification Agent
Named checks over Coxeter groups and their Nichols algebras, each producing
a CheckReport with a reproducible witness on failure
"""

import logging
import time
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from app.agents.braided import Tensor, woronowicz_symmetrise
from app.agents.cache_agent import CacheAgent
from app.agents.coxeter import CoxeterSystem, dihedral_bruhat_graph, parse_label
from app.agents.nichols import DEFAULT_BUDGET, NicholsAlgebra, QuadraticCover
from app.agents.roots import DihedralSubsystem, RootSystem, generate_root_system
from app.agents.schubert import (
    Polynomial,
    ReflectionSubmodule,
    canonical_submodule,
    mu_embed,
    mu_linear_coefficients,
    mu_word_coefficient,
    nu_word,
    reflection_submodule,
    reynolds,
    schubert_classes,
    sw_nw_pairing,
    word_roots,
)
from app.agents.sparse_linalg import IncrementalEchelon, exact_rank
from app.agents.validator import BudgetExceededError, CoxeterInputError
from app.models.schemas import CheckReport

logger = logging.getLogger(__name__)

MAX_DIHEDRAL_M = 8

# total dimensions small enough to compute on a desk
KNOWN_TOTAL_DIMENSIONS = {'A1': 2, 'A2': 12, 'B2': 64, 'I2:2': 4}


def _tensor_witness(t: Tensor) -> Dict:
    word, coeff = min(t.terms.items())
    return {'word': list(word), 'coefficient': str(coeff), 'terms': len(t.terms)}


def _report(check: str, group: str, params: Dict, start: float, witness: Optional[Dict] = None,
            sizes: Optional[Dict] = None, message: str = '', expected_failure: bool = False) -> CheckReport:
    status = 'fail' if witness is not None else 'pass'
    report = CheckReport(
        check=check,
        group=group,
        params=params,
        status=status,
        expected_failure=expected_failure,
        witness=witness,
        elapsed_ms=round((time.perf_counter() - start) * 1000, 3),
        sizes=sizes or {},
        message=message,
    )
    if status == 'pass':
        logger.info("check %s on %s passed (%.0f ms)", check, group, report.elapsed_ms)
    else:
        logger.warning("check %s on %s failed: %s", check, group, witness)
    return report


def _alternating(a: int, b: int, length: int) -> Tuple[int, ...]:
    return tuple(a if k % 2 == 0 else b for k in range(length))


def dihedral_root_system(m: int) -> RootSystem:
    if m < 2:
        raise CoxeterInputError("m must be at least 2")
    return generate_root_system(parse_label(f"I2:{m}"))


def check_nilcoxeter_symmetriser(m: int, bound: int = MAX_DIHEDRAL_M) -> CheckReport:
    """
    [m]!_Psi of the two alternating words of length m agree in I2(m)

    Args:
        m: Dihedral parameter, 2 <= m <= bound
        bound: Largest m accepted
    """
    start = time.perf_counter()
    if not 2 <= m <= bound:
        raise CoxeterInputError(f"m must lie between 2 and {bound}")
    rs = dihedral_root_system(m)
    left = woronowicz_symmetrise(rs, Tensor.word(_alternating(0, 1, m)))
    right = woronowicz_symmetrise(rs, Tensor.word(_alternating(1, 0, m)))
    difference = left - right
    witness = None if difference.is_zero() else _tensor_witness(difference)
    return _report('nilcoxeter', rs.label, {'m': m}, start, witness,
                   sizes={'terms': len(left)})


def _subsystem_relation_failure(rs, sub: DihedralSubsystem) -> Optional[Dict]:
    g0, gl = sub.gammas[0], sub.gammas[-1]
    left = woronowicz_symmetrise(rs, Tensor.word(_alternating(g0, gl, sub.m)))
    right = woronowicz_symmetrise(rs, Tensor.word(_alternating(gl, g0, sub.m)))
    difference = left - right
    if difference.is_zero():
        return None
    witness = _tensor_witness(difference)
    witness['subsystem'] = list(sub.gammas)
    return witness


def check_root_pair_relations(rs: RootSystem) -> CheckReport:
    """The Coxeter relation between the two simple roots of every rank-2 subsystem"""
    start = time.perf_counter()
    subsystems = rs.dihedral_subsystems
    witness = None
    for sub in subsystems:
        witness = _subsystem_relation_failure(rs, sub)
        if witness is not None:
            break
    return _report('root-pairs', rs.label, {}, start, witness,
                   sizes={'subsystems': len(subsystems)})


def omega_word(sub: DihedralSubsystem, l: int, positive: bool) -> Tuple[int, ...]:
    """
    Tensor word of the alternating path to v_l (positive) or v_-l

    The first slot holds the label of the last edge.
    """
    g0, gl = sub.gammas[0], sub.gammas[-1]
    return _alternating(g0, gl, l) if positive else _alternating(gl, g0, l)


def check_psi_generating(m: int) -> CheckReport:
    """
    [l]!_Psi t(omega_l) equals the sum of t(path) over all Bruhat paths
    from v_0 to v_l, for 1 <= l <= m and both signs
    """
    start = time.perf_counter()
    rs = dihedral_root_system(m)
    sub = rs.dihedral_subsystems[0]
    graph = dihedral_bruhat_graph(m)

    path_counts = {}
    witness = None
    for l in range(1, m + 1):
        for positive in (True, False):
            target = l if positive else -l
            paths = graph.paths(target)
            path_counts[str(target)] = len(paths)
            if len(paths) != 2 ** (l - 1):
                witness = {'l': target, 'paths': len(paths), 'expected_paths': 2 ** (l - 1)}
                break

            expected: Dict[Tuple[int, ...], int] = {}
            for path in paths:
                word = tuple(sub.gammas[i] for i in graph.tensor_word(path))
                expected[word] = expected.get(word, 0) + 1
            symmetrised = woronowicz_symmetrise(rs, Tensor.word(omega_word(sub, l, positive)))
            difference = symmetrised - Tensor.from_words(expected, l)
            if not difference.is_zero():
                witness = _tensor_witness(difference)
                witness['l'] = target
                break
        if witness is not None:
            break

    return _report('paths', rs.label, {'m': m}, start, witness, sizes={'paths': path_counts})


def _mu_factor(rows: List[Dict[int, object]], i: int) -> Tensor:
    return Tensor({bytes([b]): v for b, v in rows[i].items()}, 1)


def check_dunkl_commutativity(rs: RootSystem, u: ReflectionSubmodule) -> CheckReport:
    """(id + Psi)(mu(x_i) mu(x_j) - mu(x_j) mu(x_i)) = 0 for simple roots x_i, x_j"""
    start = time.perf_counter()
    rows = mu_linear_coefficients(rs, u)
    witness = None
    for i in range(rs.rank):
        for j in range(i + 1, rs.rank):
            xi, xj = _mu_factor(rows, i), _mu_factor(rows, j)
            commutator = xi.tensor(xj) - xj.tensor(xi)
            image = woronowicz_symmetrise(rs, commutator)
            if not image.is_zero():
                witness = _tensor_witness(image)
                witness['pair'] = [i + 1, j + 1]
                break
        if witness is not None:
            break
    return _report('dunkl', rs.label, {'orbit_coeffs': _coeff_params(u)}, start, witness)


def _coeff_params(u: ReflectionSubmodule) -> Dict[str, str]:
    return {str(o): str(c) for o, c in sorted(u.orbit_coeffs.items())}


def _word_product(u: ReflectionSubmodule, roots: Sequence[int]):
    value = 1
    for beta in roots:
        value = value * u.coefficient(beta)
    return value


def mu_nu_pairing(rows, f: Polynomial, symmetrised_nu: Tensor):
    """<mu(f), word> from the symmetrised word and per-word mu coefficients"""
    total = 0
    for word, coeff in symmetrised_nu.terms.items():
        phi = mu_word_coefficient(f, rows, word[::-1])
        if phi != 0:
            total = total + coeff * phi
    return total


def check_duality_identity(rs: RootSystem, u: Optional[ReflectionSubmodule] = None,
                           polynomial_only: bool = False) -> CheckReport:
    """
    <mu(X_v), nu(u_w)> = delta_{v,w} * prod of c along the word of w

    The polynomial-side pairing <X_v, u_w> = delta_{v,w} is checked as well;
    with polynomial_only the B_W side is skipped.
    """
    start = time.perf_counter()
    u = u or canonical_submodule(rs)
    params = {'orbit_coeffs': _coeff_params(u), 'polynomial_only': polynomial_only}
    if not u.generic:
        raise CoxeterInputError("duality identity needs a generic submodule")

    group = rs.group()
    classes = schubert_classes(rs, group)
    by_length: Dict[int, List] = {}
    for w in group.enumerate():
        by_length.setdefault(group.length(w), []).append(w)

    rows = mu_linear_coefficients(rs, u)
    witness = None
    entries = 0
    for length, elements in sorted(by_length.items()):
        for w in elements:
            word = group.reduced_word(w)
            expected_diag = _word_product(u, word_roots(group, word))
            symmetrised = None if polynomial_only else woronowicz_symmetrise(rs, nu_word(group, w, word))
            for v in elements:
                poly_value = sw_nw_pairing(rs, classes[v], w, group)
                if poly_value != (1 if v == w else 0):
                    witness = {'v': list(group.reduced_word(v)), 'w': list(word),
                               'side': 'polynomial', 'value': str(poly_value)}
                    break
                if symmetrised is not None:
                    value = mu_nu_pairing(rows, classes[v], symmetrised)
                    expected = expected_diag if v == w else 0
                    if value != expected:
                        witness = {'v': list(group.reduced_word(v)), 'w': list(word),
                                   'side': 'nichols', 'value': str(value), 'expected': str(expected)}
                        break
                entries += 1
            if witness is not None:
                break
        if witness is not None:
            break

    return _report('duality', rs.label, params, start, witness,
                   sizes={'order': group.order, 'entries': entries})


def check_subalgebra_dimension(rs: RootSystem, u: ReflectionSubmodule,
                               algebra: Optional[NicholsAlgebra] = None) -> CheckReport:
    """
    rank of {mu(X'_w)} in B_W equals |W(supp U)|

    The rank is read off the pairing matrix against nu(u_w) for w in
    W(supp U); if that matrix is singular the rank is recomputed from
    normal forms.
    """
    start = time.perf_counter()
    subgroup = u.subgroup
    classes = schubert_classes(rs, subgroup)
    elements = sorted(subgroup.enumerate(), key=lambda w: (subgroup.length(w), subgroup.reduced_word(w)))
    rows = mu_linear_coefficients(rs, u)

    matrix = []
    symmetrised = {w: woronowicz_symmetrise(rs, nu_word(subgroup, w)) for w in elements}
    for v in elements:
        matrix.append([
            mu_nu_pairing(rows, classes[v], symmetrised[w])
            if subgroup.length(v) == subgroup.length(w) else 0
            for w in elements
        ])
    rank = exact_rank(matrix)
    route = 'pairing'

    if rank != len(elements):
        algebra = algebra or NicholsAlgebra(rs)
        echelon = IncrementalEchelon()
        for k, v in enumerate(elements):
            image = mu_embed(rs, classes[v], u, algebra)
            echelon.add({(n, pos): c for n, piece in image.pieces.items() for pos, c in piece.items()}, k)
        rank = echelon.rank
        route = 'normal-form'

    witness = None
    if rank != len(elements):
        witness = {'rank': rank, 'expected': len(elements)}
    return _report('subalgebra', rs.label, {'orbit_coeffs': _coeff_params(u)}, start, witness,
                   sizes={'dimension': rank, 'subgroup_order': len(elements), 'route': route})


def quadratic_relation(sub: DihedralSubsystem, k: int) -> Tensor:
    """sum_{i=0}^{m-1} [gamma_i][gamma_{i+k}] with gamma_{m+i} = -gamma_i"""
    words: Dict[Tuple[int, ...], int] = {}
    for i in range(sub.m):
        s1, a = sub.letter(i)
        s2, b = sub.letter(i + k)
        words[(a, b)] = words.get((a, b), 0) + s1 * s2
    return Tensor.from_words(words, 2)


def four_term_relation(sub: DihedralSubsystem) -> Tensor:
    """
    [g_l][g_0 ... g_2l] + [g_0 ... g_2l][g_l] + [g_l][g_2l ... g_0] + [g_2l ... g_0][g_l]
    with l = floor(m/2) - 1
    """
    l = sub.m // 2 - 1
    middle = sub.gammas[l]
    up = tuple(sub.gammas[i] for i in range(2 * l + 1))
    down = up[::-1]
    words: Dict[Tuple[int, ...], int] = {}
    for word in ((middle,) + up, up + (middle,), (middle,) + down, down + (middle,)):
        words[word] = words.get(word, 0) + 1
    return Tensor.from_words(words, 2 * l + 2)


def check_bracket_relations(rs: RootSystem) -> CheckReport:
    """
    Quadratic bracket relations lie in ker(1 + Psi) for every rank-2
    subsystem; the 4-term relation lies in the symmetriser kernel for
    m = 4 and must not for m = 6
    """
    start = time.perf_counter()
    witness = None
    four_term = {}
    expected_failure = False

    for sub in rs.dihedral_subsystems:
        for k in range(2 * sub.m):
            relation = quadratic_relation(sub, k)
            image = woronowicz_symmetrise(rs, relation)
            if not image.is_zero():
                witness = _tensor_witness(image)
                witness.update({'subsystem': list(sub.gammas), 'k': k})
                break
        if witness is not None:
            break

        if sub.m >= 4:
            vanishes = woronowicz_symmetrise(rs, four_term_relation(sub)).is_zero()
            four_term.setdefault(str(sub.m), []).append(vanishes)
            if sub.m == 4 and not vanishes:
                witness = {'subsystem': list(sub.gammas), 'relation': 'four-term', 'vanishes': False}
                break
            if sub.m == 6:
                if vanishes:
                    witness = {'subsystem': list(sub.gammas), 'relation': 'four-term', 'vanishes': True}
                    break
                expected_failure = True

    message = 'four-term relation does not hold for m = 6, as expected' if expected_failure else ''
    return _report('bracket', rs.label, {}, start, witness,
                   sizes={'subsystems': len(rs.dihedral_subsystems), 'four_term_vanishes': four_term},
                   message=message, expected_failure=expected_failure)


def _random_monomial(rank: int, degree: int, rng) -> Polynomial:
    exponent = [0] * rank
    for i in rng.integers(0, rank, size=degree):
        exponent[int(i)] += 1
    return Polynomial(rank, {tuple(exponent): Fraction(1)})


def check_mu_kernel(rs: RootSystem, u: ReflectionSubmodule, samples: int = 4, seed: int = 0,
                    algebra: Optional[NicholsAlgebra] = None, max_poly_degree: int = 4) -> CheckReport:
    """
    mu kills W(supp U)-invariants of positive degree and nothing outside
    the invariant ideal

    Non-members are random combinations of Schubert classes of W(supp U);
    their nonzero Schubert coordinates certify they lie outside the ideal.
    """
    start = time.perf_counter()
    rng = np.random.default_rng(seed)
    algebra = algebra or NicholsAlgebra(rs)
    subgroup = u.subgroup
    params = {'orbit_coeffs': _coeff_params(u), 'samples': samples, 'seed': seed}
    top = min(max_poly_degree, len(subgroup.positive_roots))

    witness = None
    checked = 0
    for _ in range(samples):
        degree = int(rng.integers(1, max_poly_degree + 1))
        monomial = _random_monomial(rs.rank, degree, rng)
        invariant = reynolds(rs, monomial, subgroup)
        image = mu_embed(rs, invariant, u, algebra)
        checked += 1
        if not image.is_zero():
            witness = {'kind': 'invariant', 'monomial': repr(monomial), 'degrees': image.degrees()}
            break

    if witness is None and top >= 1:
        classes = schubert_classes(rs, subgroup)
        for _ in range(samples):
            degree = int(rng.integers(1, top + 1))
            layer = [w for w in classes if subgroup.length(w) == degree]
            f = Polynomial(rs.rank)
            for w in layer:
                f = f + classes[w].scale(Fraction(int(rng.integers(1, 6))))
            coords = [sw_nw_pairing(rs, f, w, subgroup) for w in layer]
            if all(c == 0 for c in coords):
                continue
            image = mu_embed(rs, f, u, algebra)
            checked += 1
            if image.is_zero():
                witness = {'kind': 'non-invariant', 'degree': degree,
                           'coordinates': [str(c) for c in coords]}
                break

    return _report('mu-kernel', rs.label, params, start, witness, sizes={'checked': checked})


def check_total_dimension(rs: RootSystem, algebra: Optional[NicholsAlgebra] = None,
                          expected: Optional[int] = None, max_degree: int = 64) -> CheckReport:
    """Sum of component dimensions until two consecutive zeros"""
    start = time.perf_counter()
    algebra = algebra or NicholsAlgebra(rs)
    expected = expected if expected is not None else KNOWN_TOTAL_DIMENSIONS.get(rs.label)
    dims = []
    for n in range(max_degree + 1):
        dims.append(algebra.component(n).dimension)
        if len(dims) >= 2 and dims[-1] == 0 and dims[-2] == 0:
            break
    total = sum(dims)
    witness = None
    if expected is not None and total != expected:
        witness = {'total': total, 'expected': expected, 'dimensions': dims}
    return _report('dimension', rs.label, {'expected': expected}, start, witness,
                   sizes={'total': total, 'dimensions': dims})


def check_quadratic_cover(rs: RootSystem, up_to: int = 6, algebra: Optional[NicholsAlgebra] = None) -> CheckReport:
    """B_W and its quadratic cover agree in degrees 0..up_to (a finite prefix only)"""
    start = time.perf_counter()
    algebra = algebra or NicholsAlgebra(rs)
    nichols_dims = algebra.hilbert(up_to)
    quadratic_dims = QuadraticCover(algebra).hilbert(up_to)
    witness = None
    for n, (a, b) in enumerate(zip(nichols_dims, quadratic_dims)):
        if a != b:
            witness = {'degree': n, 'nichols': a, 'quadratic': b}
            break
    return _report('quadratic-cover', rs.label, {'up_to': up_to}, start, witness,
                   sizes={'nichols': nichols_dims, 'quadratic': quadratic_dims})


def random_orbit_coefficients(rs: RootSystem, seed: int = 0) -> Dict[int, Fraction]:
    """Nonzero rational coefficient per orbit from a seeded generator"""
    rng = np.random.default_rng(seed)
    return {o: Fraction(int(rng.integers(1, 10)), int(rng.integers(1, 5))) for o in range(rs.orbit_count)}


class VerifyAgent:
    """Run named checks and whole suites"""

    GROUP_CHECKS = ('bracket', 'dimension', 'duality', 'dunkl', 'mu-kernel',
                    'quadratic-cover', 'root-pairs', 'subalgebra')
    DIHEDRAL_CHECKS = ('nilcoxeter', 'paths')
    CHECKS = tuple(sorted(GROUP_CHECKS + DIHEDRAL_CHECKS))

    def __init__(self, budget: int = DEFAULT_BUDGET, cache_dir: Optional[str] = None,
                 seed: int = 0, threads: int = 1, max_degree: int = 6):
        self.budget = budget
        self.cache_dir = cache_dir
        self.seed = seed
        self.threads = max(1, threads)
        self.max_degree = max_degree

    def _algebra(self, rs: RootSystem) -> NicholsAlgebra:
        cache = CacheAgent(self.cache_dir) if self.cache_dir else None
        return NicholsAlgebra(rs, budget=self.budget, cache_agent=cache)

    def _submodule(self, rs: RootSystem, params: Dict) -> ReflectionSubmodule:
        if params.get('coefficients'):
            coeffs = {int(o): Fraction(str(c)) for o, c in params['coefficients'].items()}
        elif params.get('canonical'):
            coeffs = {o: Fraction(1) for o in range(rs.orbit_count)}
        else:
            coeffs = random_orbit_coefficients(rs, self.seed)
        for o in params.get('zero_orbits', ()):
            coeffs[int(o)] = Fraction(0)
        return reflection_submodule(rs, coeffs)

    def run_check(self, name: str, system: Optional[CoxeterSystem] = None, **params) -> CheckReport:
        """
        Run one check by name

        Args:
            name: One of CHECKS
            system: Coxeter system (not needed for the dihedral checks)
            **params: Check parameters (m, coefficients, zero_orbits, samples, ...)

        Raises:
            KeyError: If the check name is unknown
            CoxeterInputError: If a required group or parameter is missing
        """
        if name not in self.CHECKS:
            raise KeyError(f"Unknown check '{name}'. Available: {', '.join(self.CHECKS)}")

        if name in self.DIHEDRAL_CHECKS:
            m = params.get('m')
            if m is None:
                raise CoxeterInputError(f"check '{name}' needs the parameter m")
            if name == 'nilcoxeter':
                return check_nilcoxeter_symmetriser(int(m))
            return check_psi_generating(int(m))

        if system is None:
            raise CoxeterInputError(f"check '{name}' needs a group")
        rs = generate_root_system(system)

        if name == 'root-pairs':
            return check_root_pair_relations(rs)
        if name == 'bracket':
            return check_bracket_relations(rs)
        if name == 'dunkl':
            return check_dunkl_commutativity(rs, self._submodule(rs, params))
        if name == 'duality':
            params.setdefault('canonical', True)
            return check_duality_identity(rs, self._submodule(rs, params),
                                          polynomial_only=bool(params.get('polynomial_only')))
        if name == 'subalgebra':
            return check_subalgebra_dimension(rs, self._submodule(rs, params), self._algebra(rs))
        if name == 'mu-kernel':
            return check_mu_kernel(rs, self._submodule(rs, params), int(params.get('samples', 4)),
                                   self.seed, self._algebra(rs))
        if name == 'dimension':
            return check_total_dimension(rs, self._algebra(rs), params.get('expected'))
        return check_quadratic_cover(rs, int(params.get('up_to', self.max_degree)), self._algebra(rs))

    def suite_plan(self, system: CoxeterSystem) -> List[Tuple[str, Dict]]:
        """Checks applicable to a group with their default parameters"""
        rs = generate_root_system(system)
        plan: List[Tuple[str, Dict]] = [
            ('bracket', {}),
            ('duality', {}),
            ('dunkl', {}),
            ('mu-kernel', {}),
            ('root-pairs', {}),
            ('subalgebra', {}),
        ]
        for m in sorted({sub.m for sub in rs.dihedral_subsystems}):
            plan.append(('paths', {'m': m}))
        if rs.label in KNOWN_TOTAL_DIMENSIONS:
            plan.append(('dimension', {}))
        # B_W is only expected to be quadratic in the simply laced case
        if all(sub.m <= 3 for sub in rs.dihedral_subsystems):
            up_to = min(self.max_degree, _affordable_degree(rs.num_positive, self.budget))
            plan.append(('quadratic-cover', {'up_to': up_to}))
        return plan

    def run_suite(self, system: CoxeterSystem) -> List[CheckReport]:
        """
        Every applicable check with default parameters

        Reports come back sorted by check name and parameters, whatever
        the worker count.
        """
        plan = self.suite_plan(system)
        jobs = [(name, system.matrix, system.label, params, self._settings()) for name, params in plan]
        if self.threads == 1:
            reports = [_run_job(job) for job in jobs]
        else:
            with ProcessPoolExecutor(max_workers=self.threads) as pool:
                reports = list(pool.map(_run_job, jobs))
        return sorted(reports, key=lambda r: (r.check, repr(sorted(r.params.items()))))

    def _settings(self) -> Dict:
        return {'budget': self.budget, 'cache_dir': self.cache_dir, 'seed': self.seed,
                'max_degree': self.max_degree}


def _affordable_degree(size: int, budget: int) -> int:
    n = 0
    while size ** (n + 1) <= budget:
        n += 1
    return n


def _run_job(job) -> CheckReport:
    name, matrix, label, params, settings = job
    agent = VerifyAgent(threads=1, **settings)
    system = CoxeterSystem(matrix, label)
    start = time.perf_counter()
    try:
        return agent.run_check(name, system, **params)
    except BudgetExceededError as e:
        return _report(name, system.display_name(), params, start,
                       witness={'budget_exceeded': True, 'required': e.required, 'budget': e.budget},
                       message=str(e))


def run_suite(system: CoxeterSystem, **settings) -> List[CheckReport]:
    return VerifyAgent(**settings).run_suite(system)

