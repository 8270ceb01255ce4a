"""Filtered fluid dynamics building blocks: Reynolds stress, momentum-flux
nonlinearity and the heat semigroup.

Conventions: the velocity Jacobian is J[i, j] = d_j u_i, the deformation
tensor is Def(u) = (J + J^T)/2 and the rotation tensor is taken unhalved,
Om(u) = J - J^T.  The filtered stress is

    tau(u) = alpha^2 (1 - alpha^2 Lap)^{-1} [ Def(u) . Om(u) ],

which for the shear u = (sin y, 0, 0) at alpha = 1 gives
div tau = (0, -sin(2y)/10, 0).  Setting alpha = 0 removes the stress and
the dynamics reduce to incompressible Navier-Stokes.
"""

import numpy as np

from .errors import GridMismatchError
from .fields import SpectralField, VectorField, dealias_array, to_real, to_spectral
from .grid import ksq
from .operators import divergence_tensor, gradient_tensor


def reynolds_stress(u, alpha):
    """Filtered Reynolds stress tensor, samples of shape (n, n, N, ..., N).

    The tensor product is dealiased before the Helmholtz inversion.
    """
    grid = u.grid
    if u.ncomp != grid.n:
        raise GridMismatchError("stress needs a velocity field")
    a2 = float(alpha) ** 2
    if a2 == 0.0:
        return np.zeros((grid.n, grid.n) + grid.shape)
    jac = gradient_tensor(u)
    deform = 0.5 * (jac + np.swapaxes(jac, 0, 1))
    rotation = jac - np.swapaxes(jac, 0, 1)
    prod = np.einsum("ik...,kj...->ij...", deform, rotation)
    flat = dealias_array(grid, prod.reshape((-1,) + grid.shape))
    from . import _fft

    prod_hat = _fft.fftn(flat, grid.n) / grid.npoints
    tau_hat = a2 * prod_hat / (1.0 + a2 * ksq(grid))
    tau = np.real(_fft.ifftn(tau_hat * grid.npoints, grid.n))
    return tau.reshape(prod.shape)


def reynolds_stress_divergence(u, alpha):
    """div tau(u) as a velocity-shaped field."""
    if float(alpha) == 0.0:
        return VectorField(u.grid, np.zeros_like(u.data))
    return divergence_tensor(u.grid, reynolds_stress(u, alpha))


def momentum_flux_divergence(u):
    """div(u (x) u), j-th component sum_k d_k(u_j u_k), dealiased."""
    grid = u.grid
    flux = u.data[:, None, ...] * u.data[None, :, ...]
    flux = dealias_array(grid, flux.reshape((-1,) + grid.shape)).reshape(flux.shape)
    return divergence_tensor(grid, flux)


def nonlinearity_V(u, alpha):
    """Unprojected nonlinearity div(u (x) u) + div tau(u).

    Bilinear in u at alpha = 0: V(lam u) = lam^2 V(u) exactly.
    """
    out = momentum_flux_divergence(u)
    if float(alpha) != 0.0:
        out = out + reynolds_stress_divergence(u, alpha)
    return out


def semigroup_apply(phi, t, nu=1.0):
    """Heat semigroup e^{t nu Lap} phi (multiplier e^{-nu t |k|^2})."""
    if t < 0:
        raise ValueError(f"semigroup time must be nonnegative, got {t}")
    grid = phi.grid
    factor = np.exp(-float(nu) * float(t) * ksq(grid))
    spectral_in = isinstance(phi, SpectralField)
    F = phi if spectral_in else to_spectral(phi)
    out = SpectralField(grid, F.coeffs * factor)
    return out if spectral_in else to_real(out)
