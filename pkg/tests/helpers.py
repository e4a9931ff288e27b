"""Shared strategies, fixture data and assertion helpers."""
from pathlib import Path

import numpy as np
from hypothesis import strategies as st

from slkf import opinion as sl

DATA = Path(__file__).parent / "data"


def load_table(name: str) -> np.ndarray:
    return np.loadtxt(DATA / name, delimiter=",", skiprows=1)


def simplex(n: int, min_mass: float = 0.0):
    """Strategy for a probability vector of length ``n``."""
    weights = st.lists(st.floats(0.01, 1.0), min_size=n, max_size=n)
    return weights.map(lambda w: min_mass + (1 - n * min_mass) * np.array(w) / sum(w))


@st.composite
def opinions(draw, n=None, base_rate=None, u_min=0.0, u_max=1.0):
    """Valid opinions; pass ``base_rate`` to share one across draws."""
    n = n or (base_rate.size if base_rate is not None else draw(st.integers(2, 9)))
    a = base_rate if base_rate is not None else draw(simplex(n, 0.01))
    u = draw(st.floats(u_min, u_max))
    b = draw(simplex(n)) * (1 - u)
    return sl.make_opinion(b, 1 - b.sum(), a)


@st.composite
def opinion_pairs(draw, u_min=0.0, u_max=1.0, same_base=True):
    n = draw(st.integers(2, 9))
    a = draw(simplex(n, 0.01))
    A = draw(opinions(base_rate=a, u_min=u_min, u_max=u_max))
    B = draw(opinions(base_rate=a if same_base else draw(simplex(n, 0.01)),
                      u_min=u_min, u_max=u_max))
    return A, B


def assert_valid(op: sl.Opinion, tol=1e-9):
    assert abs(op.belief.sum() + op.uncertainty - 1) <= tol
    assert abs(op.base_rate.sum() - 1) <= tol
    assert np.all(op.belief >= 0) and np.all(op.belief <= 1)
    assert np.all(op.base_rate >= 0) and np.all(op.base_rate <= 1)
    assert 0 <= op.uncertainty <= 1


def assert_close(A: sl.Opinion, B: sl.Opinion, tol=1e-9):
    np.testing.assert_allclose(A.belief, B.belief, atol=tol, rtol=0)
    np.testing.assert_allclose(A.base_rate, B.base_rate, atol=tol, rtol=0)
    assert abs(A.uncertainty - B.uncertainty) <= tol
