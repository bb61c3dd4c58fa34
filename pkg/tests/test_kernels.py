import os
import subprocess
import sys
from pathlib import Path

import numpy as np
import pytest
from hypothesis import given, strategies as st

from dynzeta import kernels

needs_compiled = pytest.mark.skipif(kernels.BACKEND != "cython", reason="compiled extension not built")


def workload(seed, G, r, dim_chi, nw):
    rng = np.random.default_rng(seed)
    lengths = 0.5 + rng.random(G) * 2
    angles = rng.uniform(-np.pi, np.pi, (G, r))
    chi = np.exp(rng.uniform(-0.3, 0.3, (G, dim_chi)) + 1j * rng.uniform(0, 2 * np.pi, (G, dim_chi)))
    n_max = rng.integers(0, 40, G)
    weights = rng.integers(-2, 3, (nw, r)) / 2
    wmult = rng.integers(-2, 4, nw).astype(float)
    return lengths, angles, chi, n_max, weights, wmult


@needs_compiled
@given(st.integers(0, 2**31), st.integers(1, 6), st.integers(1, 3), st.integers(1, 3), st.integers(1, 5), st.booleans())
def test_backends_agree(seed, G, r, dim_chi, nw, with_den):
    args = workload(seed, G, r, dim_chi, nw)
    s = 1.5 + 0.7j
    a = kernels.euler_log_sum(*args, s, 1.0, with_den, backend="python")
    b = kernels.euler_log_sum(*args, s, 1.0, with_den, backend="cython")
    assert abs(a - b) <= 1e-12 * max(1.0, abs(a))


def test_single_term_closed_form():
    # One geodesic, n_max = 1: the term is chi * e^{-(s + shift) l} / |1 - e^{-l}|^2.
    lengths, angles, chi = np.array([1.0]), np.array([[0.0]]), np.array([[1.0 + 0j]])
    weights, wmult = np.zeros((1, 1)), np.ones(1)
    for backend in ["python"] + (["cython"] if kernels.BACKEND == "cython" else []):
        v = kernels.euler_log_sum(lengths, angles, chi, np.array([1]), weights, wmult, 2.0, 1.0, True, backend=backend)
        assert v == pytest.approx(np.exp(-3.0) / (1 - np.exp(-1.0)) ** 2)


def test_unknown_backend():
    with pytest.raises(ValueError):
        kernels.euler_log_sum(*workload(0, 1, 1, 1, 1), 1.0, 0.0, False, backend="fortran")


def test_pure_python_switch():
    env = dict(os.environ, DYNZETA_PURE_PYTHON="1")
    out = subprocess.run(
        [sys.executable, "-c", "import dynzeta; print(dynzeta.BACKEND)"], capture_output=True, text=True, env=env, check=True
    )
    assert out.stdout.strip() == "python"


def test_benchmark_script_runs():
    script = Path(__file__).parents[1] / "benchmarks" / "bench_kernels.py"
    out = subprocess.run(
        [sys.executable, str(script), "--count", "10", "--repeat", "1"], capture_output=True, text=True, check=True
    )
    assert "python" in out.stdout
