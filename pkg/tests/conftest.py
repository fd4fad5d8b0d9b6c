"""
Shared fixtures: root systems and Nichols algebras of the small groups
"""

import sys
import os
sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))

import pytest

from app.agents.coxeter import parse_label
from app.agents.nichols import NicholsAlgebra
from app.agents.roots import generate_root_system


def _rs(label):
    return generate_root_system(parse_label(label))


@pytest.fixture(scope="session")
def a1():
    return _rs("A1")


@pytest.fixture(scope="session")
def a2():
    return _rs("A2")


@pytest.fixture(scope="session")
def a3():
    return _rs("A3")


@pytest.fixture(scope="session")
def b2():
    return _rs("B2")


@pytest.fixture(scope="session")
def b3():
    return _rs("B3")


@pytest.fixture(scope="session")
def g2():
    return _rs("G2")


@pytest.fixture(scope="session")
def h3():
    return _rs("H3")


@pytest.fixture(scope="session")
def a2_algebra(a2):
    return NicholsAlgebra(a2)


@pytest.fixture(scope="session")
def b2_algebra(b2):
    return NicholsAlgebra(b2)
