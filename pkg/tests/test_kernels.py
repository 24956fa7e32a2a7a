"""Backend equality: every kernel must be bit-exact across numba and numpy."""

import os
import subprocess
import sys

import numpy as np
import pytest

from walshlab import kernels
from walshlab.gf2n import default_field


ALL = kernels.implementations()


def test_at_least_numpy_available():
    assert "numpy" in ALL
    assert kernels.backend() in ALL


@pytest.mark.parametrize("n", [1, 4, 8, 12])
def test_wht_backends_agree(n):
    rng = np.random.default_rng(3)
    base = rng.integers(-5, 6, size=1 << n).astype(np.int64)
    results = []
    for impl in ALL.values():
        v = base.copy()
        impl["wht_inplace"](v)
        results.append(v)
    for r in results[1:]:
        assert np.array_equal(results[0], r)
    # against the definition at small n
    if n <= 8:
        h = np.array([[(-1) ** bin(u & x).count("1") for x in range(1 << n)]
                      for u in range(1 << n)], dtype=np.int64)
        assert np.array_equal(results[0], h @ base)


@pytest.mark.parametrize("n", [2, 6, 10])
def test_mobius_backends_agree_and_invert(n):
    rng = np.random.default_rng(5)
    base = rng.integers(0, 2, size=1 << n).astype(np.uint8)
    results = []
    for impl in ALL.values():
        v = base.copy()
        impl["mobius_inplace"](v)
        results.append(v)
    for r in results[1:]:
        assert np.array_equal(results[0], r)
    twice = results[0].copy()
    kernels.mobius_inplace(twice)
    assert np.array_equal(twice, base)


@pytest.mark.parametrize("n", [3, 8, 12])
def test_exp_table_backends_agree(n):
    ctx = default_field(n)
    tables = [impl["exp_table"](n, ctx.reduction_poly, ctx.generator)
              for impl in ALL.values()]
    for t in tables[1:]:
        assert np.array_equal(tables[0], t)
    # spot-check against scalar square-and-multiply
    for k in (0, 1, 2, (1 << n) - 2):
        assert int(tables[0][k]) == ctx.pow(ctx.generator, k)


def test_masked_parity_backends_agree():
    rng = np.random.default_rng(9)
    arr = rng.integers(0, 1 << 24, size=4096).astype(np.int64)
    mask = 0b1011001110001111
    outs = [impl["masked_parity"](arr, mask) for impl in ALL.values()]
    for o in outs[1:]:
        assert np.array_equal(outs[0], o)
    want = np.array([bin(int(a) & mask).count("1") & 1 for a in arr], dtype=np.uint8)
    assert np.array_equal(outs[0], want)


def test_env_flag_selects_numpy():
    env = dict(os.environ, WALSHLAB_BACKEND="numpy")
    out = subprocess.run(
        [sys.executable, "-c", "from walshlab import kernels; print(kernels.backend())"],
        capture_output=True, text=True, env=env, check=True)
    assert out.stdout.strip() == "numpy"
