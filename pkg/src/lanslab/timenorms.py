"""Time-weighted and integral-in-time Besov functionals on trajectories.

ct_norm is the weighted sup functional sup_t t^a ||u(t)||_{s,p,q}; for
a > 0 the t = 0 sample is skipped (the weight vanishes there and the
functional is controlled by the first positive sample).  lsigma_norm is
the L^sigma-in-time Besov norm, integrated with composite Simpson on the
trajectory's native sample grid.
"""

from dataclasses import dataclass

import numpy as np
from scipy.integrate import simpson

from .dyadic import BesovIndex, build_dyadic_family


def _norm_series(traj, idx, family=None):
    family = family or build_dyadic_family(traj.grid)
    key = ("besov", idx.s, idx.p, idx.q, family.j_max)
    cached = traj.norm_cache.get(key)
    if cached is None or len(cached) != len(traj.fields):
        cached = np.array([family.besov_norm(f, idx) for f in traj.fields])
        traj.norm_cache[key] = cached
    return cached


def ct_norm(traj, a, idx, family=None):
    """sup over samples of t^a ||u(t)||_{B^s_{p,q}}."""
    if a < 0:
        raise ValueError("weight exponent a must be >= 0")
    norms = _norm_series(traj, idx, family)
    times = np.asarray(traj.times, float)
    if a == 0:
        return float(np.max(norms)) if norms.size else 0.0
    mask = times > 0
    if not mask.any():
        return 0.0
    return float(np.max(times[mask] ** a * norms[mask]))


def lsigma_norm(traj, sigma, idx, family=None):
    """(int ||u(t)||^sigma dt)^{1/sigma} over the trajectory support."""
    if sigma < 1:
        raise ValueError("integral exponent sigma must be >= 1")
    norms = _norm_series(traj, idx, family)
    times = np.asarray(traj.times, float)
    if len(times) < 2:
        return 0.0
    val = simpson(norms**sigma, x=times)
    return float(max(val, 0.0) ** (1.0 / sigma))


@dataclass(frozen=True)
class TimeFunctional:
    """Declarative description of a trajectory functional.

    kind = "sup-weighted" evaluates sup_t t^exponent ||.||; kind =
    "integral" evaluates the L^exponent-in-time norm.
    """

    kind: str
    exponent: float
    idx: BesovIndex

    def __post_init__(self):
        if self.kind not in ("sup-weighted", "integral"):
            raise ValueError(f"unknown functional kind '{self.kind}'")
        if self.kind == "sup-weighted" and self.exponent < 0:
            raise ValueError("sup-weighted exponent must be >= 0")
        if self.kind == "integral" and self.exponent < 1:
            raise ValueError("integral exponent must be >= 1")

    def __call__(self, traj, family=None):
        if self.kind == "sup-weighted":
            return ct_norm(traj, self.exponent, self.idx, family)
        return lsigma_norm(traj, self.exponent, self.idx, family)
