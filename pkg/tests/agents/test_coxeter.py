"""
Unit tests for Coxeter systems, group enumeration and the dihedral Bruhat graph
"""

import sys
import os
sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), '../..')))

from app.agents.coxeter import (
    CoxeterGroup,
    CoxeterSystem,
    ReflectionSubgroup,
    dihedral_bruhat_graph,
    enumerate_group,
    load_matrix_file,
    longest_element,
    matsumoto_section,
    parse_label,
    poincare_and_exponents,
    reduced_word,
    resolve_group_spec,
)
from app.agents.roots import generate_root_system
from app.agents.validator import CoxeterInputError, GroupTooLargeError
import pytest


def test_parse_label_families():
    """Labels map to the expected Coxeter matrices"""
    assert parse_label("A2").matrix == ((1, 3), (3, 1))
    assert parse_label("B2").matrix == ((1, 4), (4, 1))
    assert parse_label("G2").matrix == ((1, 6), (6, 1))
    assert parse_label("I2:7").matrix == ((1, 7), (7, 1))
    assert parse_label("I2(7)").label == "I2:7"
    h3 = parse_label("H3").matrix
    assert h3[0][1] == 5 and h3[1][2] == 3 and h3[0][2] == 2


def test_parse_label_rejects_garbage():
    """Unknown families and impossible ranks are refused"""
    for bad in ("", "Z3", "G3", "E5", "I2:1", "A0"):
        with pytest.raises(CoxeterInputError):
            parse_label(bad)


def test_coxeter_system_validation():
    """Diagonal must be 1 and off-diagonal entries at least 2"""
    with pytest.raises(CoxeterInputError):
        CoxeterSystem(((1, 1), (1, 1)))
    with pytest.raises(CoxeterInputError):
        CoxeterSystem(((2, 3), (3, 1)))


def test_matrix_hash_is_stable():
    """Same matrix, same hash; label does not matter"""
    a = CoxeterSystem(((1, 3), (3, 1)), "A2")
    b = CoxeterSystem(((1, 3), (3, 1)))
    assert a.matrix_hash() == b.matrix_hash()
    assert b.display_name().startswith("matrix:")


def test_load_matrix_file(tmp_path):
    """YAML matrix files load and malformed ones raise"""
    good = tmp_path / "b2.yaml"
    good.write_text("rank: 2\nmatrix:\n  - [1, 4]\n  - [4, 1]\n", encoding="utf-8")
    system = load_matrix_file(str(good))
    assert system.matrix == ((1, 4), (4, 1))

    wrong_rank = tmp_path / "bad.yaml"
    wrong_rank.write_text("rank: 3\nmatrix:\n  - [1, 4]\n  - [4, 1]\n", encoding="utf-8")
    with pytest.raises(CoxeterInputError):
        load_matrix_file(str(wrong_rank))

    with pytest.raises(CoxeterInputError):
        load_matrix_file(str(tmp_path / "missing.yaml"))


def test_resolve_group_spec_needs_input():
    """Neither label nor file is a usage error"""
    with pytest.raises(CoxeterInputError):
        resolve_group_spec()
    assert resolve_group_spec("A3").rank == 3


def test_group_orders(a2, b2):
    """|A2| = 6, |B2| = 8, |I2(7)| = 14"""
    assert len(enumerate_group(a2)) == 6
    assert len(enumerate_group(b2)) == 8
    assert len(enumerate_group(generate_root_system(parse_label("I2:7")))) == 14


def test_enumeration_guard(a3):
    """A tiny size bound trips the closure guard"""
    with pytest.raises(GroupTooLargeError):
        CoxeterGroup(a3, size_bound=5).enumerate()


def test_reduced_words(a2):
    """Identity, a generator and the longest element of A2"""
    group = a2.group()
    assert reduced_word(group, group.identity) == ()
    assert reduced_word(group, group.generators[0]) == (1,)
    assert reduced_word(group, longest_element(group)) == (1, 2, 1)


def test_reduced_word_round_trip(b2):
    """element_from_word inverts reduced_word and lengths agree"""
    group = b2.group()
    for w in group.enumerate():
        word = group.reduced_word(w)
        assert group.element_from_word(word) == w
        assert len(word) == group.length(w)


def test_poincare_and_exponents(a1, a2, b2, h3):
    """Length generating polynomials and exponents"""
    assert poincare_and_exponents(a2.group()) == ([1, 2, 2, 1], [1, 2])
    assert poincare_and_exponents(b2.group())[1] == [1, 3]
    assert poincare_and_exponents(a1.group())[1] == [1]
    assert h3.group().exponents() == [1, 5, 9]


def test_longest_element_lengths(a1, a2, b2):
    """Longest element has length |R+|"""
    assert longest_element(a1.group()).length == 1
    assert longest_element(a2.group()).length == 3
    assert longest_element(b2.group()).length == 4


def test_matsumoto_section_small():
    """One reduced word per permutation"""
    assert matsumoto_section(2) == {(1, 2): (), (2, 1): (1,)}
    section = matsumoto_section(3)
    assert len(section) == 6
    assert section[(3, 2, 1)] in {(1, 2, 1), (2, 1, 2)}
    assert section[(1, 2, 3)] == ()


def test_matsumoto_section_bound():
    """Large n is refused"""
    with pytest.raises(ValueError):
        matsumoto_section(11)


def test_bruhat_path_counts():
    """2^(l-1) paths from v_0 to v_l"""
    assert len(dihedral_bruhat_graph(2).paths(2)) == 2
    assert len(dihedral_bruhat_graph(3).paths(3)) == 4
    graph = dihedral_bruhat_graph(5)
    assert len(graph.paths(-4)) == 8
    for l in range(1, 5):
        assert len(graph.paths(l)) == 2 ** (l - 1)
        assert len(graph.paths(-l)) == 2 ** (l - 1)


def test_bruhat_single_edges():
    """v_1 and v_-1 are reached by the simple roots"""
    graph = dihedral_bruhat_graph(4)
    assert graph.paths(1) == [(0,)]
    assert graph.paths(-1) == [(3,)]
    assert graph.paths(0) == [()]


def test_reflection_subgroup_closure(b2):
    """Short roots of B2 generate A1 x A1 of order 4"""
    short = [i for i, o in enumerate(b2.orbit_of) if o == b2.orbit_of[1]]
    subgroup = ReflectionSubgroup(b2, short)
    assert subgroup.order == 4
    assert not subgroup.is_full()
    assert ReflectionSubgroup(b2, [0, 1]).is_full()
