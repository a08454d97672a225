"""
Shared fixtures for Primitive Forge tests.
"""

import os

import numpy as np
import pytest

from primitive_forge.construction.partition import build
from primitive_forge.expr import parse


@pytest.fixture
def unit_square():
    """f(x) = x^2, parsed."""
    return parse("x^2")


@pytest.fixture
def unit_identity():
    return parse("x")


@pytest.fixture
def level2_partition():
    """[0, 1] at level 2: knots (0, 0.5, 1)."""
    return build(0.0, 1.0, 2)


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


@pytest.fixture(autouse=True)
def _isolate_env(monkeypatch):
    """Keep PRIMITIVE_FORGE_* variables of the developer's shell out of tests."""
    for name in list(os.environ):
        if name.startswith("PRIMITIVE_FORGE_"):
            monkeypatch.delenv(name, raising=False)

