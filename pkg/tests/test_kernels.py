import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from unit_spectra import _kernels
from unit_spectra.coloring import chromatic_exact
from unit_spectra.core import preset_weights
from unit_spectra.families import random_simple_connected
from unit_spectra.walk import WalkModel, simulate, simulate_first_hits

needs_numba = pytest.mark.skipif(not _kernels.HAVE_NUMBA, reason="numba not importable")


def both_backends(monkeypatch, fn):
    monkeypatch.delenv(_kernels.ENV_FLAG, raising=False)
    a = fn()
    monkeypatch.setenv(_kernels.ENV_FLAG, "1")
    b = fn()
    return a, b


def test_env_flag_selects_backend(monkeypatch):
    monkeypatch.setenv(_kernels.ENV_FLAG, "1")
    assert _kernels.backend_name() == "numpy"
    monkeypatch.delenv(_kernels.ENV_FLAG)
    assert _kernels.backend_name() == ("numba" if _kernels.HAVE_NUMBA else "numpy")


def test_cumulative_rows_end_at_one():
    P = np.array([[0.0, 0.3, 0.7, 0.0], [0.5, 0.0, 0.5, 0.0], [0.1, 0.2, 0.0, 0.7], [0.0, 0.0, 1.0, 0.0]])
    cum = _kernels.cumulative_rows(P)
    assert np.all(cum[:, -1] == 1.0)
    # the trailing zero-probability column is never selected
    assert cum[0, 2] == 1.0 and cum[1, 2] == 1.0


@needs_numba
def test_walk_backends_agree(monkeypatch, fig1):
    model = WalkModel.build(fig1, preset_weights(fig1, "B"))
    a, b = both_backends(monkeypatch, lambda: simulate(model, "5", 500, seed=11))
    assert a == b
    a, b = both_backends(monkeypatch, lambda: simulate_first_hits(model, "5", "1", 25, 2000, seed=4))
    assert np.array_equal(a, b)


@needs_numba
@given(st.integers(0, 2**32 - 1))
def test_colouring_backends_agree(seed):
    H = random_simple_connected(np.random.Generator(np.random.PCG64(seed)), n_max=9, m_max=6)
    mp = pytest.MonkeyPatch()
    try:
        a, b = both_backends(mp, lambda: chromatic_exact(H))
    finally:
        mp.undo()
    assert a == b


@needs_numba
@given(st.integers(1, 30), st.floats(0.1, 0.9), st.integers(0, 2**32 - 1))
def test_clique_backends_agree(n, p, seed):
    rng = np.random.Generator(np.random.PCG64(seed))
    A = np.triu(rng.random((n, n)) < p, 1)
    A = A | A.T
    rows = [sum(1 << int(j) for j in np.flatnonzero(r)) for r in A]
    mp = pytest.MonkeyPatch()
    try:
        a, b = both_backends(mp, lambda: _kernels.max_clique_size(rows))
    finally:
        mp.undo()
    assert a == b


def test_clique_beyond_64_vertices():
    # a 70-cycle plus a triangle on 0, 1, 2
    n = 70
    rows = [(1 << ((i + 1) % n)) | (1 << ((i - 1) % n)) for i in range(n)]
    assert _kernels.max_clique_size(rows) == 2
    rows[0] |= 1 << 2
    rows[2] |= 1
    assert _kernels.max_clique_size(rows) == 3
