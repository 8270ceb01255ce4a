import math

import numpy as np
import pytest

from lanslab.dyadic import BesovIndex, build_dyadic_family
from lanslab.dynamics import semigroup_apply
from lanslab.fields import constant_field, random_band_mixture, zero_field
from lanslab.solver import Trajectory
from lanslab.timenorms import TimeFunctional, ct_norm, lsigma_norm


def const_traj(grid, f, T=1.0, nsamples=9):
    ts = np.linspace(0.0, T, nsamples)
    return Trajectory(times=ts, fields=[f] * nsamples)


def test_ct_norm_unweighted_constant(grid3d_small, family=None):
    grid = grid3d_small
    fam = build_dyadic_family(grid)
    f = random_band_mixture(grid, seed=1, j_hi=fam.j_max - 1)
    idx = BesovIndex(1.0, 2, 2)
    traj = const_traj(grid, f)
    assert ct_norm(traj, 0.0, idx, fam) == pytest.approx(
        fam.besov_norm(f, idx), rel=1e-12
    )


def test_ct_norm_weighted_skips_origin(grid3d_small):
    grid = grid3d_small
    fam = build_dyadic_family(grid)
    f = random_band_mixture(grid, seed=2, j_hi=fam.j_max - 1)
    idx = BesovIndex(1.0, 2, 2)
    traj = const_traj(grid, f, T=2.0)
    # sup of t^a * const is attained at the final time
    assert ct_norm(traj, 0.5, idx, fam) == pytest.approx(
        math.sqrt(2.0) * fam.besov_norm(f, idx), rel=1e-12
    )


def test_zero_trajectory_functionals(grid3d_small):
    traj = const_traj(grid3d_small, zero_field(grid3d_small, 1))
    idx = BesovIndex(1.0, 2, 2)
    assert ct_norm(traj, 0.0, idx) == 0.0
    assert lsigma_norm(traj, 2.0, idx) == 0.0


def test_lsigma_constant_closed_form(grid3d_small):
    grid = grid3d_small
    fam = build_dyadic_family(grid)
    one = constant_field(grid, [1.0])
    traj = const_traj(grid, one, T=3.0, nsamples=13)
    # ||1||_{s,p,q} = 1, so the integral is T^{1/sigma}
    assert lsigma_norm(traj, 2.0, BesovIndex(1.0, 2, 2), fam) == pytest.approx(
        math.sqrt(3.0), rel=1e-6
    )


def test_lsigma_semigroup_finite(grid3d_small):
    # smoothing trajectory is integrable with 2/sigma = s1 - s0
    grid = grid3d_small
    fam = build_dyadic_family(grid)
    u0 = random_band_mixture(grid, seed=3, j_hi=fam.j_max - 1)
    ts = np.linspace(0.0, 2.0, 41)
    traj = Trajectory(times=ts, fields=[semigroup_apply(u0, t) for t in ts])
    s0, s1 = 1.0, 2.0
    sigma = 2.0 / (s1 - s0)
    val = lsigma_norm(traj, sigma, BesovIndex(s1, 2, 2), fam)
    assert math.isfinite(val) and val > 0


def test_functional_validation():
    idx = BesovIndex(1.0, 2, 2)
    with pytest.raises(ValueError):
        TimeFunctional("sup-weighted", -1.0, idx)
    with pytest.raises(ValueError):
        TimeFunctional("integral", 0.5, idx)
    with pytest.raises(ValueError):
        TimeFunctional("bogus", 1.0, idx)


def test_functional_dispatch(grid3d_small):
    grid = grid3d_small
    fam = build_dyadic_family(grid)
    f = random_band_mixture(grid, seed=4, j_hi=fam.j_max - 1)
    traj = const_traj(grid, f)
    idx = BesovIndex(1.0, 2, 2)
    sup_f = TimeFunctional("sup-weighted", 0.0, idx)
    int_f = TimeFunctional("integral", 2.0, idx)
    assert sup_f(traj, fam) == pytest.approx(ct_norm(traj, 0.0, idx, fam))
    assert int_f(traj, fam) == pytest.approx(lsigma_norm(traj, 2.0, idx, fam))


def test_norm_cache_reused(grid3d_small):
    grid = grid3d_small
    fam = build_dyadic_family(grid)
    f = random_band_mixture(grid, seed=5, j_hi=fam.j_max - 1)
    traj = const_traj(grid, f)
    idx = BesovIndex(1.0, 2, 2)
    ct_norm(traj, 0.0, idx, fam)
    assert any(k[0] == "besov" for k in traj.norm_cache)
