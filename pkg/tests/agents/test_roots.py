"""
Unit tests for root system generation and rank-2 subsystems
"""

import sys
import os
sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), '../..')))

from collections import Counter
from fractions import Fraction

from app.agents.coxeter import parse_label
from app.agents.roots import dihedral_subsystems, generate_root_system, inner, reflect_root
import pytest


def test_positive_root_counts(a2, b2, g2, h3):
    """|R+| for the small types"""
    assert a2.num_positive == 3
    assert b2.num_positive == 4
    assert g2.num_positive == 6
    assert h3.num_positive == 15


@pytest.mark.parametrize("m", [2, 3, 5, 7, 8])
def test_dihedral_root_count(m):
    """I2(m) has m positive roots"""
    assert generate_root_system(parse_label(f"I2:{m}")).num_positive == m


def test_a2_roots(a2):
    """Simple roots first, then alpha1 + alpha2"""
    assert a2.coordinates_string(0) == "a1"
    assert a2.coordinates_string(2) == "a1 + a2"


def test_reflect_root(a2):
    """s_t(alpha_t) = -alpha_t and s_1(alpha_2) = alpha_1 + alpha_2"""
    assert reflect_root(a2, 0, 0) == (0, -1)
    assert reflect_root(a2, 0, 1) == (2, 1)
    for t in range(a2.num_positive):
        for i in range(a2.num_positive):
            k, sign = reflect_root(a2, t, i)
            # involution
            back, sign_back = reflect_root(a2, t, k)
            assert back == i and sign * sign_back == 1


def test_inner_products(a2, b2):
    """(a, a) = 1, A2: -1/2, B2: -c/2"""
    for i in range(b2.num_positive):
        assert inner(b2, i, i) == 1
    assert inner(a2, 0, 1) == Fraction(-1, 2)
    assert inner(b2, 0, 1) == -b2.field.gen / 2


def test_orbits(a2, b2, g2, h3):
    """Simply laced and H3 have one orbit; B2 and G2 have two"""
    assert a2.orbit_count == 1
    assert h3.orbit_count == 1
    assert b2.orbit_count == 2
    assert g2.orbit_count == 2
    assert sorted(len(o) for o in b2.orbits()) == [2, 2]


def test_subsystem_counts(a2, a3, g2, h3):
    """Rank-2 subsystems by m"""
    assert [s.m for s in dihedral_subsystems(a2)] == [3]
    assert Counter(s.m for s in a3.dihedral_subsystems) == {3: 4, 2: 3}
    assert [s.m for s in g2.dihedral_subsystems] == [6]
    assert Counter(s.m for s in h3.dihedral_subsystems) == {5: 6, 3: 10, 2: 15}


@pytest.mark.parametrize("m", [3, 4, 5, 6])
def test_dihedral_reflection_rule(m):
    """s_{gamma_i}(gamma_j) = gamma_{m + 2i - j}"""
    rs = generate_root_system(parse_label(f"I2:{m}"))
    (sub,) = rs.dihedral_subsystems
    for i in range(m):
        for j in range(m):
            sign, index = sub.letter(m + 2 * i - j)
            assert reflect_root(rs, sub.gammas[i], sub.gammas[j]) == (index, sign)


def test_letter_wraps():
    """gamma_{m+i} = -gamma_i"""
    rs = generate_root_system(parse_label("I2:5"))
    (sub,) = rs.dihedral_subsystems
    assert sub.letter(0) == (1, sub.gammas[0])
    assert sub.letter(5) == (-1, sub.gammas[0])
    assert sub.letter(-1) == (-1, sub.gammas[4])
