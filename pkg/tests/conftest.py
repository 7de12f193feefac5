import os
import sys

import numpy as np
import pytest

sys.path.insert(0, os.path.dirname(__file__))


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)


def random_poly(rng, max_degree=12, n_terms=8):
    """Random mapping with O(1) complex coefficients, degree <= max_degree."""
    from qrdisk import MappingExpr

    terms = {}
    for _ in range(n_terms):
        a = int(rng.integers(0, max_degree // 2 + 1))
        b = int(rng.integers(0, max_degree // 2 + 1))
        c = complex(rng.uniform(-1, 1), rng.uniform(-1, 1))
        terms[(a, b)] = terms.get((a, b), 0) + c
    return MappingExpr(terms)


def random_points(rng, n, r_max=0.9):
    r = r_max * np.sqrt(rng.uniform(0.01, 1.0, n))
    t = rng.uniform(0.0, 2.0 * np.pi, n)
    return r * np.exp(1j * t)
