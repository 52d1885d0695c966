"""Seven-velocity MRT evolution of the temperature populations.

The update couples source and destination nodes:

    rho_cv(y) g_i(y, t+dt) = g_i(x, t) + (rho_cv(y) - 1) g_i(y, t)
                             - [M^-1 L M (g - g_eq)]_i(x, t)
                             + dt Fbar_i(x, t) + theta dt S_i(x, t)

with y = x + c_i dt.  Both volumetric-heat-capacity factors are evaluated
at the destination node at time t; this keeps a uniform-temperature field
an exact fixed point even when rho_cv varies in space.  No gradient of
rho_cv is ever formed.

The temperature gradient needed by the forcing comes from the
non-equilibrium first-order moments of g itself (node-local, evaluated
pre-collision); only the velocity divergence uses a finite-difference
stencil.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .lattice import LatticeDescriptor, d3q19, d3q7, from_moments, to_moments

__all__ = [
    "ThermalRelaxation",
    "sigma_from_conductivity",
    "conductivity_from_sigma",
    "equilibrium_g",
    "equilibrium_moments_g",
    "local_grad_T",
    "divergence_u",
    "thermal_forcing",
    "correction_term",
    "step_thermal",
]


def sigma_from_conductivity(lam, cs2: float, dt: float = 1.0):
    """Relaxation rate reproducing conductivity ``lam = dt (1/sigma - 1/2) cs2``."""
    lam = np.asarray(lam, dtype=np.float64)
    if np.any(lam <= 0.0):
        raise ValueError("thermal conductivity must be positive")
    return 1.0 / (lam / (dt * cs2) + 0.5)


def conductivity_from_sigma(sigma, cs2: float, dt: float = 1.0):
    return dt * (1.0 / np.asarray(sigma, dtype=np.float64) - 0.5) * cs2


@dataclass(frozen=True)
class ThermalRelaxation:
    """Diagonal relaxation rates for the 7-moment collision.

    ``sigma_k`` is the shared rate of the three first-order moments and
    sets the conductivity; it may be a scalar or a per-node field (for
    phase-dependent conductivity).  The remaining rates default to 1.
    """

    sigma_k: float | np.ndarray
    sigma_0: float = 1.0
    sigma_4: float = 1.0
    sigma_5: float = 1.0
    sigma_6: float = 1.0

    def __post_init__(self):
        sk = np.asarray(self.sigma_k)
        if np.any(sk <= 0.0) or np.any(sk >= 2.0):
            raise ValueError("sigma_k must lie in (0, 2)")
        for name in ("sigma_0", "sigma_4", "sigma_5", "sigma_6"):
            val = getattr(self, name)
            if not 0.0 < val < 2.0:
                raise ValueError(f"{name} = {val} outside (0, 2)")

    @classmethod
    def from_conductivity(cls, lam, cs2: float, dt: float = 1.0) -> "ThermalRelaxation":
        return cls(sigma_k=sigma_from_conductivity(lam, cs2, dt))

    def conductivity(self, cs2: float, dt: float = 1.0):
        return conductivity_from_sigma(self.sigma_k, cs2, dt)

    def diagonal(self, shape: tuple[int, ...] = ()) -> np.ndarray:
        """(..., 7) relaxation diagonal, broadcasting a per-node sigma_k."""
        sk = np.broadcast_to(np.asarray(self.sigma_k, dtype=np.float64), shape)
        out = np.empty(shape + (7,), dtype=np.float64)
        out[..., 0] = self.sigma_0
        out[..., 1] = sk
        out[..., 2] = sk
        out[..., 3] = sk
        out[..., 4] = self.sigma_4
        out[..., 5] = self.sigma_5
        out[..., 6] = self.sigma_6
        return out


def equilibrium_g(T, lat: LatticeDescriptor | None = None) -> np.ndarray:
    """Linear temperature equilibrium, g_i = w_i T."""
    lat = lat or d3q7()
    return lat.w * np.asarray(T, dtype=np.float64)[..., None]


def equilibrium_moments_g(T, lat: LatticeDescriptor | None = None) -> np.ndarray:
    """Equilibrium moments [T, 0, 0, 0, wbar T, 0, 0]."""
    lat = lat or d3q7()
    T = np.asarray(T, dtype=np.float64)
    out = np.zeros(T.shape + (7,), dtype=np.float64)
    out[..., 0] = T
    out[..., 4] = (1.0 - lat.w[0]) * T  # wbar
    return out


def local_grad_T(
    g: np.ndarray,
    relax: ThermalRelaxation,
    lat: LatticeDescriptor | None = None,
    dt: float = 1.0,
) -> np.ndarray:
    """Temperature gradient from the non-equilibrium first-order moments.

    d_a T = -sigma_a m_a / (dt cs2), with m_a = g(+a) - g(-a) since the
    corresponding equilibrium moments vanish.  Strictly node-local; reads
    no neighbor data.  Evaluate on pre-collision populations.
    """
    lat = lat or d3q7()
    sk = np.asarray(relax.sigma_k, dtype=np.float64)
    coeff = -sk / (dt * lat.cs2)
    out = np.empty(g.shape[:-1] + (3,), dtype=np.float64)
    out[..., 0] = coeff * (g[..., 1] - g[..., 2])
    out[..., 1] = coeff * (g[..., 3] - g[..., 4])
    out[..., 2] = coeff * (g[..., 5] - g[..., 6])
    return out


def divergence_u(
    u_padded: np.ndarray,
    lat19: LatticeDescriptor | None = None,
    dt: float = 1.0,
) -> np.ndarray:
    """Isotropic 19-point finite-difference divergence of the velocity.

    div u = sum_i w_i c_i . u(x + c_i) / (cs2 dt); exact for fields linear
    in the node index.

    Args:
        u_padded: velocity with one ghost layer per face, shape
            (nx+2, ny+2, nz+2, 3), ghosts filled per the active boundary
            conditions.
    """
    lat19 = lat19 or d3q19()
    nx, ny, nz = (s - 2 for s in u_padded.shape[:3])
    acc = np.zeros((nx, ny, nz))
    for i in range(1, lat19.q):
        cx, cy, cz = lat19.c[i]
        w = lat19.w[i]
        block = u_padded[1 + cx : 1 + cx + nx, 1 + cy : 1 + cy + ny, 1 + cz : 1 + cz + nz]
        for axis, comp in enumerate((cx, cy, cz)):
            if comp:
                acc += (w * comp) * block[..., axis]
    return acc / (lat19.cs2 * dt)


def thermal_forcing(T, u, rho, c_v, grad_T, div_u, dp_dT) -> np.ndarray:
    """Scalar forcing  Fbar = rho c_v u . grad T + T (dp/dT)_rho div u.

    The per-population contribution applied in :func:`step_thermal` is
    ``-w_i Fbar``.
    """
    convection = np.asarray(rho) * c_v * np.sum(np.asarray(u) * grad_T, axis=-1)
    compression = np.asarray(T) * np.asarray(dp_dT) * div_u
    return convection + compression


def correction_term(
    T_now,
    T_prev,
    T_prev2,
    rho_cv,
    lat: LatticeDescriptor | None = None,
    dt: float = 1.0,
) -> np.ndarray:
    """Second-time-derivative correction  S_i = w_i rho_cv (dt/2) d2T/dt2.

    Uses the backward second difference over the three latest temperature
    fields.  Callers supply zeros while fewer than two prior steps exist.
    """
    lat = lat or d3q7()
    d2 = (np.asarray(T_now) - 2.0 * np.asarray(T_prev) + np.asarray(T_prev2)) / (dt * dt)
    return lat.w * (np.asarray(rho_cv) * (0.5 * dt) * d2)[..., None]


def step_thermal(
    g: np.ndarray,
    T: np.ndarray,
    Fbar: np.ndarray,
    rho_cv: np.ndarray,
    relax: ThermalRelaxation,
    lat: LatticeDescriptor | None = None,
    dt: float = 1.0,
    theta: int = 0,
    S: np.ndarray | None = None,
) -> np.ndarray:
    """One explicit update of the temperature populations (periodic wrap).

    Collides and forces at the source node, streams, then combines with
    the pre-update destination value and divides by the destination's
    volumetric heat capacity.  Non-periodic faces must be finalized by the
    thermal boundary pass afterwards.

    Args:
        rho_cv: destination-side volumetric heat capacity at time t.
        theta: correction-term switch (0 or 1).
        S: precomputed correction term, required when theta == 1.
    """
    lat = lat or d3q7()
    if np.any(rho_cv <= 0.0):
        raise ValueError("rho_cv must be positive everywhere")
    diag = relax.diagonal(g.shape[:-1])
    m = to_moments(g, lat)
    m_eq = equilibrium_moments_g(T, lat)
    g_star = from_moments(m - diag * (m - m_eq), lat)
    g_star -= (dt * lat.w) * Fbar[..., None]
    if theta:
        if S is None:
            raise ValueError("theta = 1 requires the correction term S")
        g_star += (theta * dt) * S
    out = np.empty_like(g)
    scale = 1.0 / rho_cv
    for i in range(lat.q):
        shift = tuple(int(s) for s in lat.c[i])
        if shift == (0, 0, 0):
            arrived = g_star[..., i]
        else:
            arrived = np.roll(g_star[..., i], shift, axis=(0, 1, 2))
        out[..., i] = (arrived + (rho_cv - 1.0) * g[..., i]) * scale
    return out
