import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lanslab.dyadic import (
    BesovIndex,
    DyadicFamily,
    build_dyadic_family,
    decompose,
    norm_report_record,
    smooth_cutoff,
)
from lanslab.fields import (
    constant_field,
    fourier_mode,
    l2_norm,
    random_band_limited,
    random_band_mixture,
    zero_field,
)
from lanslab.grid import Grid, kmag


def test_cutoff_plateaus_and_monotone():
    r = np.linspace(0.0, 3.0, 301)
    c = smooth_cutoff(r)
    assert np.all(c[r <= 1.0] == 1.0)
    assert np.all(c[r >= 2.0] == 0.0)
    assert np.all(np.diff(c) <= 1e-15)
    assert np.all((c >= 0.0) & (c <= 1.0))


def test_family_rejects_unresolved_range(grid3d):
    with pytest.raises(ValueError):
        DyadicFamily(grid3d, j_max=4)  # 2^5 > 16


def test_annulus_support(family3d):
    km = kmag(family3d.grid)
    for j in range(family3d.j_max + 1):
        tbl = family3d.psi_hat[j]
        outside = (km <= 2.0 ** (j - 1)) | (km >= 2.0 ** (j + 1))
        assert np.max(np.abs(tbl[outside])) == 0.0
        assert np.all((tbl >= 0.0) & (tbl <= 1.0))


def test_low_pass_value_at_zero(family3d):
    zero = (0,) * family3d.grid.n
    assert family3d.low_hat[zero] == 1.0


def test_exact_symbol_values_on_dyadic_radii(family3d):
    # |k| = 2^j sits at the plateau crossover: psi_j = 1, neighbors vanish
    km = kmag(family3d.grid)
    for j in (1, 2, 3):
        at = np.isclose(km, 2.0**j)
        assert np.all(family3d.psi_hat[j][at] == 1.0)
        if j - 1 >= 0:
            assert np.all(family3d.psi_hat[j - 1][at] == 0.0)
        if j + 1 <= family3d.j_max:
            assert np.all(family3d.psi_hat[j + 1][at] == 0.0)


def test_partition_of_unity(family3d):
    km = kmag(family3d.grid)
    total = family3d.low_hat + family3d.psi_hat.sum(axis=0)
    covered = km <= 2.0**family3d.j_max
    assert np.max(np.abs(total[covered] - 1.0)) <= 1e-12


def test_delta_j_reproduces_its_own_annulus_mode(family3d):
    f = fourier_mode(family3d.grid, (0, 4, 0))  # |k| = 4 = 2^2
    d = family3d.delta_j(f, 2)
    assert np.max(np.abs(d.data - f.data)) < 1e-12
    assert l2_norm(family3d.delta_j(f, 1)) < 1e-13


def test_delta_j_orthogonality(family3d):
    f = random_band_mixture(family3d.grid, seed=9)
    for j in range(family3d.j_max + 1):
        for m in range(family3d.j_max + 1):
            if abs(j - m) >= 2:
                g = family3d.delta_j(family3d.delta_j(f, m), j)
                assert l2_norm(g) <= 1e-12 * l2_norm(f)


def test_delta_j_range_check(family3d):
    f = zero_field(family3d.grid, 1)
    with pytest.raises(ValueError):
        family3d.delta_j(f, family3d.j_max + 1)
    with pytest.raises(ValueError):
        family3d.delta_j(f, -1)


def test_s_j_telescopes(family3d):
    f = random_band_mixture(family3d.grid, seed=10)
    acc = family3d.low_pass(f)
    assert l2_norm(family3d.s_j(f, -1) - acc) < 1e-13
    assert l2_norm(family3d.s_j(f, -3)) == 0.0
    for j in range(family3d.j_max + 1):
        acc = acc + family3d.delta_j(f, j)
        assert l2_norm(family3d.s_j(f, j) - acc) < 1e-12


def test_besov_norm_constant(family3d):
    one = constant_field(family3d.grid, [1.0])
    for idx in (BesovIndex(0.5, 2, 2), BesovIndex(1.5, 3, 1), BesovIndex(2.0, math.inf, math.inf)):
        assert family3d.besov_norm(one, idx) == pytest.approx(1.0, abs=1e-12)


def test_besov_norm_single_block_closed_form(family3d):
    # cos(k.x) with |k| = 4 = 2^2: single block j=2, ||Delta_2 f||_2 = 1/sqrt(2)
    f = fourier_mode(family3d.grid, (0, 0, 4))
    for q in (1, 2, math.inf):
        val = family3d.besov_norm(f, BesovIndex(0.75, 2, q))
        assert val == pytest.approx(2.0, rel=1e-12)


def test_besov_norm_zero(family3d):
    assert family3d.besov_norm(zero_field(family3d.grid, 1), BesovIndex(1.0, 2, 2)) == 0.0


@settings(max_examples=15, deadline=None)
@given(seed=st.integers(0, 2**31), lam=st.floats(0.1, 10.0))
def test_besov_norm_homogeneous(seed, lam):
    grid = Grid(n=2, N=16)
    fam = build_dyadic_family(grid)
    f = random_band_mixture(grid, seed=seed)
    idx = BesovIndex(1.2, 2, 2)
    assert fam.besov_norm(lam * f, idx) == pytest.approx(
        lam * fam.besov_norm(f, idx), rel=1e-10
    )


def test_besov_warns_on_uncovered_spectrum():
    grid = Grid(n=2, N=32)
    fam = DyadicFamily(grid, j_max=2)  # covers only |k| <= 4
    f = random_band_limited(grid, j=3, seed=1)
    with pytest.warns(UserWarning):
        fam.besov_norm(f, BesovIndex(1.0, 2, 2))


def test_block_decomposition_reconstructs(family3d):
    f = random_band_mixture(family3d.grid, seed=12)
    dec = decompose(family3d, f)
    err = l2_norm(dec.reconstruct() - f)
    assert err <= 1e-10 * l2_norm(f)


def test_norm_report_record(family3d):
    f = random_band_mixture(family3d.grid, seed=13)
    rec = norm_report_record(family3d, f, BesovIndex(1.0, 2, 2), "f13")
    assert rec["field_id"] == "f13"
    assert len(rec["per_block"]) == family3d.j_max + 1
    total = sum(v for _, v in rec["per_block"])
    assert rec["value"] <= total + family3d.besov_norm(f, BesovIndex(1.0, 2, 2))
