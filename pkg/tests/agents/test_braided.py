"""
Unit tests for tensors, the braiding on V_W and the Woronowicz symmetriser
"""

import sys
import os
sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), '../..')))

import numpy as np

from app.agents.braided import (
    FlipBraiding,
    Tensor,
    braid_apply,
    group_act_tensor,
    inverse_braid_apply,
    matsumoto_symmetrise,
    shifted_braided_integer,
    woronowicz_symmetrise,
)
import pytest


def _random_tensor(rs, degree, rng, terms=4):
    t = Tensor(degree=degree)
    for _ in range(terms):
        word = [int(x) for x in rng.integers(0, rs.num_positive, size=degree)]
        t = t + Tensor.word(word, int(rng.integers(1, 5)))
    return t


def test_tensor_basics():
    """Zero coefficients vanish and concatenation multiplies"""
    a = Tensor.word([0, 1], 2)
    assert (a - a).is_zero()
    b = Tensor.from_words({(1,): 3, (2,): -1})
    product = a.tensor(b)
    assert product.degree == 3
    assert product.coefficient([0, 1, 1]) == 6
    assert product.coefficient([0, 1, 2]) == -2
    assert Tensor.one().tensor(a) == a


def test_braiding_on_a2(a2):
    """Psi([a1] [a2]) = [a1 + a2] [a1]"""
    assert braid_apply(a2, 1, Tensor.word([0, 1])) == Tensor.word([2, 0])


def test_braiding_same_root_is_minus_identity(b2):
    """Psi([a] [a]) = -[a] [a]"""
    for a in range(b2.num_positive):
        assert braid_apply(b2, 1, Tensor.word([a, a])) == Tensor.word([a, a], -1)


def test_braiding_position_checked(a2):
    """Slots outside the tensor are refused"""
    with pytest.raises(ValueError):
        braid_apply(a2, 2, Tensor.word([0, 1]))


def test_inverse_braiding(b2, g2):
    """Psi^-1 undoes Psi in every slot"""
    rng = np.random.default_rng(7)
    for rs in (b2, g2):
        t = _random_tensor(rs, 3, rng)
        for pos in (1, 2):
            assert inverse_braid_apply(rs, pos, braid_apply(rs, pos, t)) == t
            assert braid_apply(rs, pos, inverse_braid_apply(rs, pos, t)) == t


def test_braid_relation(a3, g2):
    """Psi_1 Psi_2 Psi_1 = Psi_2 Psi_1 Psi_2"""
    rng = np.random.default_rng(11)
    for rs in (a3, g2):
        t = _random_tensor(rs, 3, rng)
        left = braid_apply(rs, 1, braid_apply(rs, 2, braid_apply(rs, 1, t)))
        right = braid_apply(rs, 2, braid_apply(rs, 1, braid_apply(rs, 2, t)))
        assert left == right


def test_shifted_integer_small_cases(a2):
    """[1] is the identity, [2] = 1 + Psi"""
    t = Tensor.word([0, 1])
    assert shifted_braided_integer(a2, 1, 1, t) == t
    assert shifted_braided_integer(a2, 2, 1, Tensor.word([0, 0])).is_zero()
    assert shifted_braided_integer(a2, 2, 1, t) == Tensor.word([0, 1]) + Tensor.word([2, 0])


def test_shifted_integer_must_fit(a2):
    """[3] does not fit a degree-2 tensor"""
    with pytest.raises(ValueError):
        shifted_braided_integer(a2, 3, 1, Tensor.word([0, 1]))


def test_symmetriser_low_degrees(a2):
    """Degree 1 is the identity and [a][a] is killed"""
    assert woronowicz_symmetrise(a2, Tensor.word([1])) == Tensor.word([1])
    assert woronowicz_symmetrise(a2, Tensor.word([1, 1])).is_zero()
    assert woronowicz_symmetrise(a2, Tensor.word([0, 1])) == Tensor.word([0, 1]) + Tensor.word([2, 0])


@pytest.mark.parametrize("degree", [2, 3, 4])
def test_factorised_symmetriser_matches_brute_force(b2, degree):
    """Factorised [n]! equals the sum over all braid lifts"""
    rng = np.random.default_rng(degree)
    t = _random_tensor(b2, degree, rng)
    assert woronowicz_symmetrise(b2, t) == matsumoto_symmetrise(b2, t)


def test_flip_symmetriser_counts_permutations():
    """With the flip, [3]! of a word with distinct letters hits all 6 rearrangements"""
    flip = FlipBraiding(3)
    image = woronowicz_symmetrise(flip, Tensor.word([0, 1, 2]))
    assert len(image) == 6
    assert all(c == 1 for _, c in image.items())
    assert woronowicz_symmetrise(FlipBraiding(3, -1), Tensor.word([0, 1, 1])).is_zero()


def test_group_action_on_tensors(a2):
    """Slotwise action by reflections"""
    group = a2.group()
    s1 = group.generators[0]
    t = Tensor.word([0, 1])
    assert group_act_tensor(a2, group.identity, t) == t
    assert group_act_tensor(a2, s1, Tensor.word([0])) == Tensor.word([0], -1)
    assert group_act_tensor(a2, s1, Tensor.word([1])) == Tensor.word([2])


def test_group_action_commutes_with_braiding(b2):
    """V_W is a Yetter-Drinfeld module: w Psi = Psi w"""
    rng = np.random.default_rng(3)
    t = _random_tensor(b2, 2, rng)
    for w in b2.group().enumerate():
        assert group_act_tensor(b2, w, braid_apply(b2, 1, t)) == braid_apply(b2, 1, group_act_tensor(b2, w, t))
