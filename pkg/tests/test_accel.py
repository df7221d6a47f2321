import os
import shutil
import subprocess
import sys

import numpy as np
import pytest

from convlab import Field, Grid, accel, convolve

from conftest import random_smooth_field

NUMBA_ACTIVE = accel.backend() == "numba"
needs_numba = pytest.mark.skipif(not NUMBA_ACTIVE, reason="numpy backend active")


def sample_points(rng, n=4096):
    return rng.uniform(-0.5, 0.5, n) + 1j * rng.uniform(-0.5, 0.5, n)


class TestBackendParity:
    @needs_numba
    def test_polyval(self):
        rng = np.random.default_rng(111)
        for _ in range(10):
            deg = int(rng.integers(1, 9))
            coeffs = rng.uniform(-3, 3, deg + 1)
            z = sample_points(rng)
            a = accel.polyval_many_numba(coeffs, z)
            b = accel.polyval_many_numpy(coeffs, z)
            assert np.allclose(a, b, rtol=1e-14, atol=1e-14)

    @needs_numba
    def test_violation_counts(self):
        rng = np.random.default_rng(112)
        # q(z) = z - z^2 on a disk well clear of tie values
        q = np.array([-1.0, 1.0, 0.0])
        for lip in (0.2, 0.5, 0.9):
            z1 = sample_points(rng)
            z2 = sample_points(rng)
            a = accel.count_lipschitz_violations_numba(q, z1, z2, lip, 1e-14)
            b = accel.count_lipschitz_violations_numpy(q, z1, z2, lip, 1e-14)
            assert a == b

    @needs_numba
    def test_direct_conv(self):
        rng = np.random.default_rng(113)
        f = rng.standard_normal(256)
        g = rng.standard_normal(256)
        a = accel.direct_circular_conv1d_numba(f, g)
        b = accel.direct_circular_conv1d_numpy(f, g)
        assert np.allclose(a, b, rtol=1e-12, atol=1e-12)


class TestDirectVsSpectral:
    def test_convolve_matches_direct_sum(self):
        # the FFT route must agree with the O(M^2) definition: the grid
        # origin sits at node M/2, so the raw circular output is rolled
        g = Grid(dim=1, extent=8.0, points_per_axis=256)
        rng = np.random.default_rng(114)
        f1 = random_smooth_field(g, rng)
        f2 = random_smooth_field(g, rng)
        direct = g.h * np.roll(
            accel.direct_circular_conv1d(f1.values, f2.values),
            -(g.points_per_axis // 2),
        )
        spectral = convolve(f1, f2).values
        scale = np.abs(direct).max() + 1.0
        assert np.abs(direct - spectral).max() <= 1e-12 * scale


class TestSelection:
    def test_backend_name(self):
        assert accel.backend() in ("numba", "numpy")

    def test_env_flag_forces_numpy(self):
        env = dict(os.environ, CONVLAB_NUMBA="0")
        run = subprocess.run(
            [sys.executable, "-c", "from convlab import accel; print(accel.backend())"],
            capture_output=True,
            text=True,
            env=env,
        )
        assert run.returncode == 0
        assert run.stdout.strip() == "numpy"

    def test_cli_output_backend_independent(self, tmp_path):
        exe = shutil.which("convlab")
        assert exe, "console script not installed"
        args = [exe, "disk", "--coeffs", "1,1", "--pairs", "2000"]
        on = subprocess.run(args, cwd=tmp_path, capture_output=True)
        off = subprocess.run(
            args, cwd=tmp_path, capture_output=True,
            env=dict(os.environ, CONVLAB_NUMBA="0"),
        )
        assert on.returncode == off.returncode == 0
        assert on.stdout == off.stdout

    def test_warmup_idempotent(self):
        accel.warmup()
        accel.warmup()
