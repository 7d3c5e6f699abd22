"""The compiled kernels and the numpy fallback must agree."""

import os
import subprocess
import sys

import numpy as np
import pytest

from conflab import _pykernels, kernels

compiled = kernels.compiled_backend
needs_compiled = pytest.mark.skipif(compiled is None, reason="compiled extension not built")


def sorted_case(rng, n):
    markers = np.sort(rng.integers(0, 6, size=n) / 6.0)[::-1].copy()
    labels = (rng.random(n) < 0.5).astype(np.int8)
    return markers, labels


@needs_compiled
def test_auc_pair_twice_agrees():
    rng = np.random.default_rng(0)
    for _ in range(200):
        pos = rng.integers(0, 5, size=int(rng.integers(1, 30))).astype(float)
        neg = rng.integers(0, 5, size=int(rng.integers(1, 30))).astype(float)
        assert compiled.auc_pair_twice(pos, neg) == _pykernels.auc_pair_twice(pos, neg)


@needs_compiled
def test_roc_counts_agree():
    rng = np.random.default_rng(1)
    for _ in range(200):
        m, y = sorted_case(rng, int(rng.integers(1, 40)))
        a = compiled.roc_counts(m, y)
        b = _pykernels.roc_counts(m, y)
        for x, z in zip(a, b):
            assert list(x) == list(z)


@needs_compiled
def test_step_overlap_agrees():
    rng = np.random.default_rng(2)
    for _ in range(200):
        e1 = np.concatenate([[0.0], np.sort(rng.random(int(rng.integers(0, 6)))), [1.0]])
        e2 = np.concatenate([[0.0], np.sort(rng.random(int(rng.integers(0, 6)))), [1.0]])
        p1, p2 = rng.random(len(e1) - 1), rng.random(len(e2) - 1)
        a = compiled.step_overlap(e1, p1, e2, p2)
        b = _pykernels.step_overlap(e1, p1, e2, p2)
        assert np.allclose(a, b, rtol=0, atol=1e-14)


def test_roc_counts_reference():
    m = np.array([0.9, 0.8, 0.8, 0.2])
    y = np.array([1, 0, 1, 0], dtype=np.int8)
    values, tps, fps = kernels.roc_counts(m, y)
    assert list(values) == [0.9, 0.8, 0.2]
    assert list(tps) == [0, 1, 2, 2] and list(fps) == [0, 0, 1, 2]


def test_backend_reported():
    assert kernels.BACKEND in ("cython", "python")
    forced = os.environ.get("CONFLAB_PURE_PYTHON") == "1"
    if compiled is not None and not forced:
        assert kernels.BACKEND == "cython"
    if forced:
        assert kernels.BACKEND == "python"


def test_env_forces_fallback():
    code = "from conflab import kernels; print(kernels.BACKEND)"
    env = dict(os.environ, CONFLAB_PURE_PYTHON="1")
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True,
                         check=True)
    assert out.stdout.strip() == "python"
