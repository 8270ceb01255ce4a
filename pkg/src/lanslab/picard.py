"""Fixed-point machinery for the mild formulation of the filtered dynamics.

The map iterated is

    Phi(u)(t) = e^{t nu Lap} u0 - int_0^t e^{(t-s) nu Lap} P[V(u(s))] ds,

with P the filtered (Stokes) projection and V the momentum-flux plus
stress nonlinearity.  Iterates live on a graded Gauss node grid; the
residual is measured in the mixed norm

    sup_t ||.||_{B^r_{p,q}}  +  sup_t t^a ||.||_{B^s_{p~,q}},

and membership in the contraction ball ||u - Gamma u0||_{0;r,p,q} +
||u||_{a;s,p~,q} <= M is recorded each sweep.  The index tuple must pass
the admissibility conditions below (the b-bar = 1 reduction); the checker
rejects violations with a structured error.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from .dyadic import BesovIndex, build_dyadic_family
from .dynamics import nonlinearity_V
from .errors import AdmissibilityError
from .fields import SpectralField, to_real, to_spectral
from .grid import ksq
from .operators import stokes_project
from .quadrature import duhamel_on_nodes, make_time_grid
from .solver import Trajectory


def check_admissibility(n, r, s, p, p_tilde, q, a=None):
    """Validate the index tuple for the contraction argument; returns the
    weight exponent a (computed when not supplied).

    The reduced condition list (auxiliary exponent fixed at its minimal
    value 1) with s_bar = s - 1 - r + n/p:
      1 < p <= p~ < inf, 1 <= q <= inf, s > 1, r > n/p,
      0 <= s_bar < s - 1, s_bar p~ < n, 0 < 2a = s - r + n/p - n/p~ < 1,
      1 < n p~ / (2n - s_bar p~) < inf, 0 <= n/p~ - s_bar < 1,
      s_bar <= n/p <= 1 + s_bar.
    """
    violations = []
    if not (1 < p <= p_tilde):
        violations.append(f"need 1 < p <= p_tilde (p={p}, p_tilde={p_tilde})")
    if math.isinf(p_tilde):
        violations.append("p_tilde must be finite")
    if not 1 <= q:
        violations.append(f"need q >= 1 (q={q})")
    if not s > 1:
        violations.append(f"need s > 1 (s={s})")
    if not r > n / p:
        violations.append(f"need r > n/p = {n / p} (r={r})")
    s_bar = s - 1.0 - r + n / p
    if not 0 <= s_bar:
        violations.append(f"need s_bar = s-1-r+n/p >= 0 (s_bar={s_bar:.4g})")
    if not s_bar < s - 1:
        violations.append(f"need s_bar < s-1 (s_bar={s_bar:.4g}, s-1={s - 1})")
    if not s_bar * p_tilde < n:
        violations.append(f"need s_bar*p_tilde < n (got {s_bar * p_tilde:.4g})")
    two_a = s - r + n / p - n / p_tilde
    if not 0 < two_a < 1:
        violations.append(f"need 0 < s - r + n/p - n/p_tilde < 1 (got {two_a:.4g})")
    denom = 2 * n - s_bar * p_tilde
    if not (denom > 0 and n * p_tilde / denom > 1):
        violations.append("need 1 < n*p_tilde/(2n - s_bar*p_tilde) < inf")
    if not 0 <= n / p_tilde - s_bar < 1:
        violations.append(f"need 0 <= n/p_tilde - s_bar < 1 (got {n / p_tilde - s_bar:.4g})")
    if not s_bar <= n / p <= 1 + s_bar:
        violations.append(f"need s_bar <= n/p <= 1 + s_bar (s_bar={s_bar:.4g}, n/p={n / p})")
    if violations:
        raise AdmissibilityError(violations)
    a_expected = two_a / 2.0
    if a is not None and abs(a - a_expected) > 1e-12:
        raise AdmissibilityError(
            [f"supplied a={a} inconsistent with (s-r+n/p-n/p_tilde)/2 = {a_expected}"]
        )
    return a_expected


@dataclass
class PicardReport:
    converged: bool
    iterates: int
    residuals: list
    contraction_ratios: list
    ball_radius: float
    horizon: float
    weight_a: float
    indices: dict
    membership: list = field(default_factory=list)  # mixed-ball norm per sweep
    membership_ok: list = field(default_factory=list)

    def to_dict(self):
        return {
            "converged": self.converged,
            "iterates": self.iterates,
            "residuals": list(map(float, self.residuals)),
            "contraction_ratios": list(map(float, self.contraction_ratios)),
            "ball_radius": float(self.ball_radius),
            "horizon": float(self.horizon),
            "weight_a": float(self.weight_a),
            "indices": self.indices,
            "membership": list(map(float, self.membership)),
            "membership_ok": list(map(bool, self.membership_ok)),
        }


_RESIDUAL_BAIL = 1e8


def picard_solve(u0, cfg, family=None):
    """Iterate the mild-formulation map to a fixed point on [0, cfg.T].

    Returns (Trajectory, PicardReport); `converged` is False when the
    residual fails to fall below cfg.picard.tol within cfg.picard.max_iter
    sweeps (the usual signal that the horizon is too long for this data).
    """
    grid = cfg.grid
    bz = cfg.besov
    a = check_admissibility(grid.n, bz.r, bz.s, bz.p, bz.p_tilde, bz.q)
    family = family or build_dyadic_family(grid)
    idx_base = BesovIndex(bz.r, bz.p, bz.q)
    idx_aux = BesovIndex(bz.s, bz.p_tilde, bz.q)

    pp = cfg.picard
    tg = make_time_grid(cfg.T, pp.panels, pp.nodes_per_panel, pp.grading)
    node_times = tg.flat_nodes
    out_times = np.append(node_times, cfg.T)
    k2 = ksq(grid)
    nu = cfg.nu

    u0 = to_spectral(u0)
    t_bcast = out_times.reshape((-1,) + (1,) * (grid.n + 1))
    gamma = np.exp(-nu * t_bcast * k2[None, None]) * u0.coeffs[None]

    def fields_of(states):
        return [to_real(SpectralField(grid, c)) for c in states]

    def mixed_norms(fields_list):
        base = np.array([family.besov_norm(f, idx_base) for f in fields_list])
        aux = np.array([family.besov_norm(f, idx_aux) for f in fields_list])
        return base, aux

    gamma_fields = fields_of(gamma)
    _, gamma_aux = mixed_norms(gamma_fields)
    weighted_gamma = float(np.max(out_times**a * gamma_aux))
    ball = pp.ball_radius if pp.ball_radius is not None else 2.0 * weighted_gamma

    current = gamma.copy()
    current_fields = gamma_fields
    residuals, ratios, membership, membership_ok = [], [], [], []
    converged = False
    sweeps = 0
    for sweeps in range(1, pp.max_iter + 1):
        # forcing at the quadrature nodes (the last output time is T itself,
        # excluded from the node set)
        node_fields = current_fields[:-1]
        forc = np.stack(
            [
                to_spectral(stokes_project(nonlinearity_V(f, cfg.alpha), cfg.alpha)).coeffs
                for f in node_fields
            ]
        ).reshape((tg.panels, tg.nodes_per_panel) + u0.coeffs.shape)
        correction = duhamel_on_nodes(forc, tg, nu, k2, out_times)
        updated = gamma - correction
        updated_fields = fields_of(updated)

        diff_fields = [fa - fb for fa, fb in zip(updated_fields, current_fields)]
        diff_base, diff_aux = mixed_norms(diff_fields)
        residual = float(np.max(diff_base) + np.max(out_times**a * diff_aux))
        residuals.append(residual)
        if len(residuals) >= 2 and residuals[-2] > 0:
            ratios.append(residual / residuals[-2])

        up_base = np.array(
            [family.besov_norm(fa - fb, idx_base) for fa, fb in zip(updated_fields, gamma_fields)]
        )
        _, up_aux = mixed_norms(updated_fields)
        mixed = float(np.max(up_base) + np.max(out_times**a * up_aux))
        membership.append(mixed)
        membership_ok.append(mixed <= ball * (1.0 + 1e-9) + 1e-30)

        current, current_fields = updated, updated_fields
        if residual <= pp.tol:
            converged = True
            break
        if not math.isfinite(residual) or residual > _RESIDUAL_BAIL:
            break

    report = PicardReport(
        converged=converged,
        iterates=sweeps,
        residuals=residuals,
        contraction_ratios=ratios,
        ball_radius=ball,
        horizon=cfg.T,
        weight_a=a,
        indices={"r": bz.r, "s": bz.s, "p": bz.p, "p_tilde": bz.p_tilde, "q": bz.q},
        membership=membership,
        membership_ok=membership_ok,
    )
    times = np.concatenate([[0.0], out_times])
    fields_list = [to_real(u0)] + current_fields
    traj = Trajectory(times=times, fields=fields_list)
    return traj, report


def estimate_existence_time(amplitudes, cfg, t_max=2.0, bracket_halvings=8, bisect_steps=6):
    """Largest horizon with a converging fixed-point iteration, per amplitude.

    For each amplitude the initial data is cfg.initial scaled to that
    amplitude; certification is a converged picard_solve at horizon T.  A
    converging horizon is bracketed by halving from t_max, then refined by
    bisection.  Zero amplitude certifies the harness cap t_max directly.
    Deterministic given (cfg, amplitudes).
    """
    rows = []
    family = build_dyadic_family(cfg.grid)
    idx_base = BesovIndex(cfg.besov.r, cfg.besov.p, cfg.besov.q)

    def certify(amp, horizon):
        trial = cfg.with_updates(
            T=horizon, initial=cfg.initial.__class__(cfg.initial.kind, amp, cfg.initial.j)
        )
        _, rep = picard_solve(trial.initial_field(), trial, family=family)
        return rep.converged

    for amp in amplitudes:
        u0 = cfg.initial.__class__(cfg.initial.kind, amp, cfg.initial.j).build(
            cfg.grid, seed=cfg.seed
        )
        u0_norm = family.besov_norm(u0, idx_base)
        if u0_norm == 0.0:
            rows.append({"amplitude": float(amp), "u0_norm": 0.0, "certified_T": float(t_max)})
            continue
        if certify(amp, t_max):
            rows.append(
                {"amplitude": float(amp), "u0_norm": u0_norm, "certified_T": float(t_max)}
            )
            continue
        hi = t_max
        lo = None
        probe = t_max
        for _ in range(bracket_halvings):
            probe /= 2.0
            if certify(amp, probe):
                lo = probe
                break
            hi = probe
        if lo is None:
            rows.append({"amplitude": float(amp), "u0_norm": u0_norm, "certified_T": 0.0})
            continue
        for _ in range(bisect_steps):
            mid = 0.5 * (lo + hi)
            if certify(amp, mid):
                lo = mid
            else:
                hi = mid
        rows.append({"amplitude": float(amp), "u0_norm": u0_norm, "certified_T": float(lo)})
    return rows
