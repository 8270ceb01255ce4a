import math

import numpy as np
import pytest

from lanslab.fields import fourier_mode, l2_norm, zero_field
from lanslab.quadrature import duhamel_apply, duhamel_on_nodes, make_time_grid
from lanslab.solver import Trajectory


def constant_trajectory(grid, f, T, nsamples):
    ts = np.linspace(0.0, T, nsamples)
    return Trajectory(times=ts, fields=[f] * nsamples)


def test_time_grid_shapes_and_weights():
    tg = make_time_grid(2.0, panels=5, nodes_per_panel=4, grading=2.0)
    assert tg.edges[0] == 0.0 and tg.edges[-1] == pytest.approx(2.0)
    assert np.all(np.diff(tg.edges) > 0)
    # grading concentrates panels near zero
    assert tg.edges[1] < 2.0 / 5.0
    widths = np.diff(tg.edges)
    assert np.allclose(tg.weights.sum(axis=1), widths)
    assert np.all((tg.nodes > tg.edges[:-1, None]) & (tg.nodes < tg.edges[1:, None]))


def test_time_grid_rejects_bad_params():
    with pytest.raises(ValueError):
        make_time_grid(0.0, 4, 4)
    with pytest.raises(ValueError):
        make_time_grid(1.0, 4, 1)


def test_duhamel_constant_forcing_oracle(grid3d):
    # g = const mode with |k|^2 = 4, nu = 1, t = 1: factor (1 - e^-4)/4
    mode = fourier_mode(grid3d, (2, 0, 0), ncomp=3)
    traj = constant_trajectory(grid3d, mode, T=1.0, nsamples=17)
    out = duhamel_apply(traj, 1.0, nu=1.0)
    factor = (1.0 - math.exp(-4.0)) / 4.0
    err = l2_norm(out - factor * mode) / (factor * l2_norm(mode))
    assert err < 1e-10


def test_duhamel_zero_forcing(grid3d):
    traj = constant_trajectory(grid3d, zero_field(grid3d), T=1.0, nsamples=5)
    assert l2_norm(duhamel_apply(traj, 0.7)) == 0.0


def test_duhamel_out_of_support(grid3d):
    traj = constant_trajectory(grid3d, zero_field(grid3d), T=0.5, nsamples=5)
    with pytest.raises(ValueError):
        duhamel_apply(traj, 0.8)


def _sin_forcing_error(grid, nsamples, t=0.75, a=4.0):
    mode = fourier_mode(grid, (2, 0, 0), ncomp=3)
    ts = np.linspace(0.0, 1.0, nsamples)
    fields = [math.sin(s) * mode for s in ts]
    traj = Trajectory(times=ts, fields=fields)
    out = duhamel_apply(traj, t, nu=1.0)
    exact = (a * math.sin(t) - math.cos(t) + math.exp(-a * t)) / (1.0 + a * a)
    return l2_norm(out - exact * mode) / abs(exact)


def test_duhamel_refinement_order(grid3d_small):
    e1 = _sin_forcing_error(grid3d_small, 9)
    e2 = _sin_forcing_error(grid3d_small, 17)
    assert e2 < e1 / 4.0  # at least second order; cubic stencils give ~4th


def test_duhamel_on_nodes_matches_closed_form(grid3d_small):
    from lanslab.fields import to_spectral
    from lanslab.grid import ksq

    grid = grid3d_small
    mode = fourier_mode(grid, (2, 0, 0), ncomp=3)
    tg = make_time_grid(1.0, panels=6, nodes_per_panel=4, grading=1.5)
    coeffs = to_spectral(mode).coeffs
    values = np.broadcast_to(
        coeffs, (tg.panels, tg.nodes_per_panel) + coeffs.shape
    ).copy()
    t_out = np.array([0.0, tg.nodes[2, 1], 1.0])
    out = duhamel_on_nodes(values, tg, 1.0, ksq(grid), t_out)
    for row, t in zip(out, t_out):
        exact = (1.0 - math.exp(-4.0 * t)) / 4.0 if t > 0 else 0.0
        err = np.max(np.abs(row - exact * coeffs))
        assert err < 1e-10
