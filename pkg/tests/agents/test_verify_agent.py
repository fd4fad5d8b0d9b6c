"""
Unit tests for the named checks and suites
"""

import sys
import os
sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), '../..')))

from fractions import Fraction

from pydantic import ValidationError

import numpy as np

from app.agents.coxeter import parse_label
from app.agents.roots import generate_root_system
from app.agents.schubert import canonical_submodule, reflection_submodule
from app.agents.validator import CoxeterInputError
from app.agents.verify_agent import (
    VerifyAgent,
    check_bracket_relations,
    check_dunkl_commutativity,
    check_duality_identity,
    check_mu_kernel,
    check_nilcoxeter_symmetriser,
    check_psi_generating,
    check_quadratic_cover,
    check_root_pair_relations,
    check_subalgebra_dimension,
    check_total_dimension,
    dihedral_root_system,
    four_term_relation,
    quadratic_relation,
    run_suite,
)
from app.models.schemas import CheckReport
import pytest


@pytest.mark.parametrize("m", [2, 3, 4, 5, 6, 7, 8])
def test_nilcoxeter_symmetriser(m):
    """Alternating words of length m agree under [m]!"""
    report = check_nilcoxeter_symmetriser(m)
    assert report.passed
    assert report.params == {'m': m}


def test_nilcoxeter_symmetriser_range():
    """m outside 2..8 is refused"""
    with pytest.raises(CoxeterInputError):
        check_nilcoxeter_symmetriser(9)


@pytest.mark.parametrize("m", [2, 3, 4, 5, 6, pytest.param(7, marks=pytest.mark.slow), pytest.param(8, marks=pytest.mark.slow)])
def test_psi_generating(m):
    """Symmetrised alternating words are sums over Bruhat paths"""
    report = check_psi_generating(m)
    assert report.passed, report.witness
    assert report.sizes['paths'][str(m)] == 2 ** (m - 1)


def test_psi_generating_m5_path_terms():
    """For m = 5 and l = 5 the expected sum has 16 path terms"""
    report = check_psi_generating(5)
    assert report.sizes['paths']['5'] == 16
    assert report.sizes['paths']['-5'] == 16


def test_root_pair_relations(a3, b2):
    """Coxeter relations hold in every rank-2 subsystem"""
    assert check_root_pair_relations(a3).passed
    assert check_root_pair_relations(b2).passed


def test_dunkl_commutativity(a2, b2):
    """Dunkl elements commute for the canonical and for arbitrary orbit coefficients"""
    assert check_dunkl_commutativity(a2, canonical_submodule(a2)).passed
    u = reflection_submodule(b2, {0: Fraction(3), 1: Fraction(-2, 7)})
    assert check_dunkl_commutativity(b2, u).passed


def _random_orbit_coefficients(rs, seed):
    rng = np.random.default_rng(seed)
    return {o: Fraction(int(rng.integers(1, 10)) * int(rng.choice([-1, 1])), int(rng.integers(1, 7)))
            for o in range(rs.orbit_count)}


@pytest.mark.parametrize("label", ["A3", "B3", "G2", "I2:5", "I2:7", "H3"])
def test_dunkl_commutativity_generic(label):
    """Dunkl elements commute for seeded random orbit coefficients"""
    rs = generate_root_system(parse_label(label))
    u = reflection_submodule(rs, _random_orbit_coefficients(rs, 3))
    report = check_dunkl_commutativity(rs, u)
    assert report.passed, report.witness


def test_duality_identity(a1, a2, b2):
    """Schubert classes and nilCoxeter words are dual through mu and nu"""
    assert check_duality_identity(a1).passed
    report = check_duality_identity(a2)
    assert report.passed
    assert report.sizes['order'] == 6
    assert check_duality_identity(b2, reflection_submodule(b2, {0: 2, 1: 5})).passed


@pytest.mark.parametrize("label", [pytest.param("A3", marks=pytest.mark.slow), "I2:5", pytest.param("I2:7", marks=pytest.mark.slow)])
def test_duality_identity_more_groups(label):
    """Identity matrices for A3 and the odd dihedral groups"""
    rs = generate_root_system(parse_label(label))
    report = check_duality_identity(rs)
    assert report.passed, report.witness
    assert report.sizes['order'] == rs.group().order


@pytest.mark.parametrize("label", ["B3", pytest.param("H3", marks=pytest.mark.slow)])
def test_duality_polynomial_side(label):
    """Schubert classes pair to delta with nilCoxeter words"""
    rs = generate_root_system(parse_label(label))
    report = check_duality_identity(rs, polynomial_only=True)
    assert report.passed, report.witness
    assert report.params['polynomial_only']


def test_duality_needs_generic_submodule(b2):
    """A zero orbit is refused"""
    with pytest.raises(CoxeterInputError):
        check_duality_identity(b2, reflection_submodule(b2, {0: 1, 1: 0}))


def test_subalgebra_dimension(a2, b2, a2_algebra, b2_algebra):
    """Dimension of the mu image equals the order of W(supp)"""
    report = check_subalgebra_dimension(a2, canonical_submodule(a2), a2_algebra)
    assert report.passed
    assert report.sizes['dimension'] == 6

    partial = check_subalgebra_dimension(b2, reflection_submodule(b2, {0: 1, 1: 0}), b2_algebra)
    assert partial.passed
    assert partial.sizes['dimension'] == 4

    generic = check_subalgebra_dimension(b2, reflection_submodule(b2, {0: 1, 1: 3}), b2_algebra)
    assert generic.sizes['dimension'] == 8


def test_quadratic_relations_vanish(a3):
    """Every quadratic relation lies in ker(1 + Psi)"""
    from app.agents.braided import woronowicz_symmetrise
    for sub in a3.dihedral_subsystems:
        for k in range(2 * sub.m):
            assert woronowicz_symmetrise(a3, quadratic_relation(sub, k)).is_zero()


def test_four_term_relation_shape():
    """Degree 2l + 2 with l = floor(m/2) - 1"""
    b2 = dihedral_root_system(4)
    assert four_term_relation(b2.dihedral_subsystems[0]).degree == 4
    g2 = dihedral_root_system(6)
    assert four_term_relation(g2.dihedral_subsystems[0]).degree == 6


def test_bracket_relations(a3, b2, g2):
    """Four-term relation holds for B2 and fails for G2, as it must"""
    assert check_bracket_relations(a3).passed

    b2_report = check_bracket_relations(b2)
    assert b2_report.passed
    assert not b2_report.expected_failure
    assert b2_report.sizes['four_term_vanishes'] == {'4': [True]}

    g2_report = check_bracket_relations(g2)
    assert g2_report.passed
    assert g2_report.expected_failure
    assert g2_report.sizes['four_term_vanishes'] == {'6': [False]}


def test_b3_rank_two_relations(b3):
    """Coxeter, quadratic and four-term relations hold in every subsystem of B3"""
    assert check_root_pair_relations(b3).passed
    report = check_bracket_relations(b3)
    assert report.passed, report.witness
    assert not report.expected_failure
    assert all(all(v) for v in report.sizes['four_term_vanishes'].values())


def test_mu_kernel(a2, b2, a2_algebra, b2_algebra):
    """Invariants die under mu, Schubert combinations survive"""
    assert check_mu_kernel(a2, canonical_submodule(a2), samples=3, seed=1, algebra=a2_algebra).passed
    u = reflection_submodule(b2, {0: 1, 1: 0})
    assert check_mu_kernel(b2, u, samples=3, seed=2, algebra=b2_algebra).passed


def test_total_dimension(a2):
    """A2 totals 12; a wrong expectation produces a witness"""
    report = check_total_dimension(a2)
    assert report.passed
    assert report.sizes['total'] == 12

    wrong = check_total_dimension(a2, expected=13)
    assert not wrong.passed
    assert wrong.witness['total'] == 12


def test_quadratic_cover_check(a2):
    """B_{S_3} agrees with its quadratic cover"""
    report = check_quadratic_cover(a2, up_to=5)
    assert report.passed
    assert report.sizes['nichols'] == [1, 3, 4, 3, 1, 0]


def test_failing_report_needs_witness():
    """A fail without a witness is not a valid report"""
    with pytest.raises(ValidationError):
        CheckReport(check='dunkl', group='A2', status='fail')


def test_run_check_dispatch():
    """Unknown names and missing parameters are reported"""
    agent = VerifyAgent(threads=1)
    with pytest.raises(KeyError):
        agent.run_check('no-such-check', parse_label("A2"))
    with pytest.raises(CoxeterInputError):
        agent.run_check('paths')
    with pytest.raises(CoxeterInputError):
        agent.run_check('bracket')

    assert agent.run_check('paths', m=4).passed
    assert agent.run_check('subalgebra', parse_label("B2"), zero_orbits=[1]).sizes['dimension'] == 4


def test_suite_plan_simply_laced_only_gets_cover():
    """Quadratic cover comparison is planned for simply laced groups"""
    agent = VerifyAgent(threads=1, max_degree=4)
    a2_plan = [name for name, _ in agent.suite_plan(parse_label("A2"))]
    b2_plan = [name for name, _ in agent.suite_plan(parse_label("B2"))]
    assert 'quadratic-cover' in a2_plan
    assert 'quadratic-cover' not in b2_plan
    assert 'dimension' in b2_plan


def test_suite_a2_passes_and_is_sorted():
    """Every A2 check passes and reports are ordered by check name"""
    reports = run_suite(parse_label("A2"), threads=1, max_degree=4)
    assert all(r.passed for r in reports), [r.check for r in reports if not r.passed]
    keys = [(r.check, repr(sorted(r.params.items()))) for r in reports]
    assert keys == sorted(keys)


def test_suite_budget_failure_is_reported():
    """A budget overrun becomes a failing report with a witness"""
    reports = run_suite(parse_label("A2"), threads=1, budget=5, max_degree=4)
    budget_failures = [r for r in reports if not r.passed]
    assert budget_failures
    assert all(r.witness.get('budget_exceeded') for r in budget_failures)


@pytest.mark.slow
def test_suite_order_independent_of_threads():
    """Parallel and serial suites give the same reports"""
    serial = run_suite(parse_label("A2"), threads=1, max_degree=4)
    parallel = run_suite(parse_label("A2"), threads=2, max_degree=4)
    assert [(r.check, r.status, r.params) for r in serial] == [(r.check, r.status, r.params) for r in parallel]


@pytest.mark.slow
def test_suite_g2_expected_failure():
    """G2 passes with the four-term relation marked as an expected non-relation"""
    reports = run_suite(parse_label("G2"), threads=1, max_degree=4)
    assert all(r.passed for r in reports)
    bracket = next(r for r in reports if r.check == 'bracket')
    assert bracket.expected_failure


@pytest.mark.slow
def test_duality_identity_g2(g2):
    """Duality holds for G2 with unequal orbit coefficients"""
    report = check_duality_identity(g2, reflection_submodule(g2, {0: 1, 1: Fraction(2, 3)}))
    assert report.passed, report.witness
    assert report.sizes['order'] == 12
