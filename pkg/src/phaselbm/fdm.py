"""Explicit finite-difference reference solver for the temperature equation.

Independent oracle for the lattice thermal solver: advances

    rho c_v dT/dt = div(lam grad T) - rho c_v u . grad T - T (dp/dT)_rho div u

with second-order central differences, a flux-form diffusion term using
harmonic-mean face conductivities, and explicit Euler sub-cycling of the
lattice time step.  Shares the grid, the velocity-divergence stencil and
the equation of state with the lattice path, nothing else.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .boundaries import FaceSpec, periodic_fill, zero_gradient_fill
from .eos import EosParams, pr_dp_dT
from .errors import ConfigError

__all__ = ["FdmState", "stable_dt", "fdm_temperature_step", "fdm_temperature_update"]


@dataclass
class FdmState:
    """Temperature field plus material properties on the lattice grid."""

    T: np.ndarray
    lam: np.ndarray  # per-node conductivity
    c_v: float
    dt: float = 1.0  # target (lattice) step advanced per update, sub-cycled as needed


def _pad_zero_gradient(field: np.ndarray, faces: dict[str, FaceSpec]) -> np.ndarray:
    """Ghost fill for T and lam: wrap on periodic faces, copy elsewhere.

    Non-periodic faces are Dirichlet-clamped on the boundary plane itself,
    so their ghost values only feed updates that get overwritten.
    """
    padded = np.pad(field, 1)
    for axis, ax_name in enumerate("xyz"):
        for side, sign in enumerate("-+"):
            if faces[f"{ax_name}{sign}"].kind == "periodic":
                if side == 0:
                    periodic_fill(padded, axis)
            else:
                zero_gradient_fill(padded, axis, side)
    return padded


def _clamp_dirichlet(T: np.ndarray, faces: dict[str, FaceSpec]) -> None:
    for axis, ax_name in enumerate("xyz"):
        for side, sign in enumerate("-+"):
            spec = faces[f"{ax_name}{sign}"]
            if spec.T is not None:
                sl = [slice(None)] * 3
                sl[axis] = 0 if side == 0 else T.shape[axis] - 1
                T[tuple(sl)] = spec.T


def stable_dt(rho, c_v: float, u, lam, dx: float = 1.0, safety: float = 0.5) -> float:
    """Largest explicit step the update tolerates, with a safety factor."""
    rho_cv = np.asarray(rho) * c_v
    diff_limit = float(np.min(dx * dx * rho_cv / (6.0 * np.asarray(lam))))
    u_max = float(np.max(np.abs(u)))
    adv_limit = dx / u_max if u_max > 0.0 else math.inf
    return safety * min(diff_limit, adv_limit)


def fdm_temperature_step(
    state: FdmState,
    rho: np.ndarray,
    u: np.ndarray,
    div_u: np.ndarray,
    eos: EosParams,
    faces: dict[str, FaceSpec],
    dt: float,
) -> np.ndarray:
    """One explicit Euler step of length ``dt``; returns the new T field.

    Raises:
        ConfigError: ``dt`` violates the stability bound.
    """
    T, lam = state.T, state.lam
    if dt > stable_dt(rho, state.c_v, u, lam):
        raise ConfigError(
            f"FDM step dt = {dt:g} violates the explicit stability bound "
            f"{stable_dt(rho, state.c_v, u, lam):g}"
        )
    T_pad = _pad_zero_gradient(T, faces)
    lam_pad = _pad_zero_gradient(lam, faces)

    rhs = -np.asarray(T) * pr_dp_dT(rho, T, eos) * div_u
    rho_cv = rho * state.c_v
    for axis in range(3):
        lo = [slice(1, -1)] * 3
        mid = [slice(1, -1)] * 3
        hi = [slice(1, -1)] * 3
        lo[axis], mid[axis], hi[axis] = slice(0, -2), slice(1, -1), slice(2, None)
        T_lo, T_mid, T_hi = T_pad[tuple(lo)], T_pad[tuple(mid)], T_pad[tuple(hi)]
        lam_lo, lam_mid, lam_hi = lam_pad[tuple(lo)], lam_pad[tuple(mid)], lam_pad[tuple(hi)]
        # Harmonic-mean face conductivities keep the flux continuous
        # across the phase jump.
        lam_hi_face = 2.0 * lam_mid * lam_hi / (lam_mid + lam_hi)
        lam_lo_face = 2.0 * lam_mid * lam_lo / (lam_mid + lam_lo)
        rhs += lam_hi_face * (T_hi - T_mid) - lam_lo_face * (T_mid - T_lo)
        rhs -= rho_cv * u[..., axis] * 0.5 * (T_hi - T_lo)
    T_new = T + dt * rhs / rho_cv
    _clamp_dirichlet(T_new, faces)
    return T_new


def fdm_temperature_update(
    state: FdmState,
    rho: np.ndarray,
    u: np.ndarray,
    div_u: np.ndarray,
    eos: EosParams,
    faces: dict[str, FaceSpec],
) -> None:
    """Advance ``state.T`` by one lattice step, sub-cycling for stability.

    The flow-side inputs (rho, u, div u) are frozen over the sub-steps.
    """
    limit = stable_dt(rho, state.c_v, u, state.lam)
    n_sub = max(1, math.ceil(state.dt / limit))
    dt = state.dt / n_sub
    for _ in range(n_sub):
        state.T = fdm_temperature_step(state, rho, u, div_u, eos, faces, dt)
