"""Moment-space MRT evolution of the 19-velocity density populations.

All field operations accept arrays with arbitrary leading grid dimensions
and the population index on the last axis, so the same functions serve
single nodes in unit tests and full 3D fields in production runs.

Collision is relaxation in moment space with a diagonal rate matrix plus
an exact-difference forcing shift; it is applied here through the
precomputed velocity-space kernel ``M^-1 diag(rates) M``, which is
algebraically identical to transforming, relaxing and transforming back.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from .lattice import LatticeDescriptor, d3q19, from_moments, to_moments

__all__ = [
    "FlowRelaxation",
    "CorruptedStateError",
    "equilibrium_f",
    "equilibrium_moments",
    "closed_form_equilibrium_moments",
    "log_moment_listing_check",
    "interaction_force",
    "edm_forcing_shift",
    "collide_flow",
    "stream",
    "density",
    "macroscopics",
]

logger = logging.getLogger(__name__)

# Interaction-force stencil weights keyed by |c|^2.
_FORCE_WEIGHTS = {1: 1.0 / 6.0, 2: 1.0 / 12.0}


class CorruptedStateError(RuntimeError):
    """Nonpositive or non-finite density encountered on a fluid node."""


@dataclass(frozen=True)
class FlowRelaxation:
    """Diagonal relaxation rates for the 19-moment collision.

    Rates multiply (m - m_eq) per moment and must lie in (0, 2).  Defaults
    reproduce shear viscosity 0.25 (``cs2 * (1/s_nu - 1/2)``) with the
    bulk-viscosity rate at 1.25 and unit rates elsewhere.  The first four
    diagonal entries belong to the conserved moments and are pinned to 1.
    """

    s_e: float = 1.25
    s_nu: float = 0.8
    s_q: float = 1.0
    s_pi: float = 1.0

    def __post_init__(self):
        for name in ("s_e", "s_nu", "s_q", "s_pi"):
            val = getattr(self, name)
            if not 0.0 < val < 2.0:
                raise ValueError(f"relaxation rate {name} = {val} outside (0, 2)")

    def diagonal(self) -> np.ndarray:
        """Length-19 diagonal: conserved, bulk, 5x shear, 6x third, 3x fourth order."""
        return np.array(
            [1.0] * 4 + [self.s_e] + [self.s_nu] * 5 + [self.s_q] * 6 + [self.s_pi] * 3
        )

    def viscosity(self, cs2: float = 1.0 / 3.0, dt: float = 1.0) -> float:
        """Kinematic shear viscosity implied by the shear-moment rate."""
        return cs2 * (1.0 / self.s_nu - 0.5) * dt

    def kernel(self, lat: LatticeDescriptor) -> np.ndarray:
        """Velocity-space collision matrix ``M^-1 diag(rates) M``."""
        return lat.M_inv @ (self.diagonal()[:, None] * lat.M)


def equilibrium_f(rho, u, lat: LatticeDescriptor | None = None) -> np.ndarray:
    """Second-order Hermite equilibrium populations.

    f_i = w_i rho [1 + (c.u)/cs2 + (c.u)^2/(2 cs2^2) - |u|^2/(2 cs2)]

    The last term uses the squared speed; this preserves the zeroth- and
    first-moment identities sum(f) = rho and sum(c f) = rho u exactly.
    """
    lat = lat or d3q19()
    rho = np.asarray(rho, dtype=np.float64)
    u = np.asarray(u, dtype=np.float64)
    cu = u @ lat.c.T.astype(np.float64)
    usq = np.sum(u * u, axis=-1)
    inv_cs2 = 1.0 / lat.cs2
    bracket = (
        1.0
        + inv_cs2 * cu
        + 0.5 * inv_cs2 * inv_cs2 * cu * cu
        - 0.5 * inv_cs2 * usq[..., None]
    )
    return lat.w * rho[..., None] * bracket


def equilibrium_moments(rho, u, lat: LatticeDescriptor | None = None) -> np.ndarray:
    """Equilibrium moments, derived as ``M @ equilibrium_f`` (not transcribed)."""
    lat = lat or d3q19()
    return to_moments(equilibrium_f(rho, u, lat), lat)


def closed_form_equilibrium_moments(rho, u) -> np.ndarray:
    """Closed-form listing of the 19 equilibrium moments for cross-checking.

    This is the conventional tabulated form with cs2 = 1/3.  It is kept
    only as a diagnostic reference; the solver always derives moments from
    the equilibrium populations.  See :func:`log_moment_listing_check`.
    """
    rho = np.asarray(rho, dtype=np.float64)
    u = np.asarray(u, dtype=np.float64)
    ux, uy, uz = u[..., 0], u[..., 1], u[..., 2]
    usq = ux * ux + uy * uy + uz * uz
    cs2 = 1.0 / 3.0
    cs4 = cs2 * cs2
    out = np.empty(rho.shape + (19,), dtype=np.float64)
    out[..., 0] = rho
    out[..., 1] = rho * ux
    out[..., 2] = rho * uy
    out[..., 3] = rho * uz
    out[..., 4] = rho + rho * usq
    out[..., 5] = rho * (2.0 * ux * ux - uy * uy - uz * uz)
    out[..., 6] = rho * (uy * uy - uz * uz)
    out[..., 7] = rho * ux * uy
    out[..., 8] = rho * ux * uz
    out[..., 9] = rho * uy * uz
    out[..., 10] = rho * cs2 * uy
    out[..., 11] = rho * cs2 * ux
    out[..., 12] = rho * cs2 * uz
    out[..., 13] = rho * cs2 * ux
    out[..., 14] = rho * cs2 * uz
    out[..., 15] = rho * cs2 * uy
    out[..., 16] = rho * cs4 * (1.0 - 1.5 * usq) + rho * cs2 * (ux * ux + uy * uy)
    out[..., 17] = rho * cs4 * (1.0 - 1.5 * usq) + rho * cs2 * (ux * ux + uz * uz)
    out[..., 18] = rho * cs4 * (1.0 - 1.5 * usq) + rho * cs2 * (uy * uy + uz * uz)
    return out


_moment_listing_logged = False


def log_moment_listing_check(lat: LatticeDescriptor | None = None) -> np.ndarray:
    """Compare derived equilibrium moments against the closed-form listing.

    Logs (once per process) which moment rows of the tabulated listing
    disagree with ``M @ f_eq`` at a generic velocity.  Returns the indices
    of the mismatching rows.  Mismatches are quadratic in |u| and do not
    affect the solver, which never uses the listing.
    """
    global _moment_listing_logged
    lat = lat or d3q19()
    rho = np.array(1.3)
    u = np.array([0.04, -0.03, 0.02])
    derived = equilibrium_moments(rho, u, lat)
    listed = closed_form_equilibrium_moments(rho, u)
    bad = np.flatnonzero(np.abs(derived - listed) > 1e-12)
    if len(bad) and not _moment_listing_logged:
        logger.warning(
            "closed-form equilibrium-moment listing disagrees with M @ f_eq in rows %s "
            "(max diff %.3e); solver uses the derived moments",
            bad.tolist(),
            float(np.max(np.abs(derived - listed))),
        )
        _moment_listing_logged = True
    return bad


def interaction_force(
    psi_padded: np.ndarray,
    psi: np.ndarray,
    G: float,
    lat: LatticeDescriptor | None = None,
) -> np.ndarray:
    """Nearest-neighbor pseudopotential force field.

    F = -G psi(x) sum_i varpi(|c_i|^2) psi(x + c_i) c_i

    with stencil weights varpi(1) = 1/6 and varpi(2) = 1/12.

    Args:
        psi_padded: pseudopotential with one ghost layer on every face,
            shape (nx+2, ny+2, nz+2); the caller fills ghosts per the
            active boundary conditions.
        psi: interior pseudopotential, shape (nx, ny, nz).
        G: interaction strength.

    Returns:
        (nx, ny, nz, 3) force field.
    """
    lat = lat or d3q19()
    nx, ny, nz = psi.shape
    acc = np.zeros((nx, ny, nz, 3))
    for i in range(1, lat.q):
        cx, cy, cz = lat.c[i]
        varpi = _FORCE_WEIGHTS[int(cx * cx + cy * cy + cz * cz)]
        shifted = psi_padded[1 + cx : 1 + cx + nx, 1 + cy : 1 + cy + ny, 1 + cz : 1 + cz + nz]
        for axis, comp in enumerate((cx, cy, cz)):
            if comp:
                acc[..., axis] += (varpi * comp) * shifted
    return -G * psi[..., None] * acc


def edm_forcing_shift(rho, u_eq, F, lat: LatticeDescriptor | None = None, dt: float = 1.0) -> np.ndarray:
    """Exact-difference forcing increments: f_eq(u_eq + F dt / rho) - f_eq(u_eq)."""
    lat = lat or d3q19()
    rho = np.asarray(rho, dtype=np.float64)
    if np.any(rho <= 0.0):
        raise CorruptedStateError("forcing shift requires positive density")
    du = np.asarray(F, dtype=np.float64) * dt / rho[..., None]
    return equilibrium_f(rho, np.asarray(u_eq) + du, lat) - equilibrium_f(rho, u_eq, lat)


def collide_flow(
    f: np.ndarray,
    rho,
    u_eq,
    F,
    relax: FlowRelaxation,
    lat: LatticeDescriptor | None = None,
    dt: float = 1.0,
    kernel: np.ndarray | None = None,
) -> np.ndarray:
    """Post-collision populations: moment relaxation plus forcing shift.

    In moment space this is ``m* = m - diag(rates) (m - m_eq) + [m_eq
    shifted - m_eq]``; it is evaluated through the equivalent
    velocity-space kernel so the whole update is a single matrix product.

    Args:
        kernel: optional precomputed ``relax.kernel(lat)`` to avoid
            rebuilding the 19x19 matrix every step.
    """
    lat = lat or d3q19()
    K = relax.kernel(lat) if kernel is None else kernel
    f_eq = equilibrium_f(rho, u_eq, lat)
    shift = edm_forcing_shift(rho, u_eq, F, lat, dt)
    return f + (f_eq - f) @ K.T + shift


def collide_flow_moment_space(
    f: np.ndarray,
    rho,
    u_eq,
    F,
    relax: FlowRelaxation,
    lat: LatticeDescriptor | None = None,
    dt: float = 1.0,
) -> np.ndarray:
    """Reference collision executed explicitly in moment space.

    Kept as the cross-check route for :func:`collide_flow`; both agree to
    roundoff and tests assert it.
    """
    lat = lat or d3q19()
    diag = relax.diagonal()
    m = to_moments(f, lat)
    m_eq = to_moments(equilibrium_f(rho, u_eq, lat), lat)
    m_shift = to_moments(edm_forcing_shift(rho, u_eq, F, lat, dt), lat)
    m_star = m - diag * (m - m_eq) + m_shift
    return from_moments(m_star, lat)


def stream(f_star: np.ndarray, lat: LatticeDescriptor | None = None) -> np.ndarray:
    """Advect post-collision populations one link; periodic wrap on all faces.

    Writes into a fresh buffer (two-buffer discipline).  Non-periodic
    faces are finalized afterwards by the boundary-condition pass, which
    overwrites the wrapped-in populations.
    """
    lat = lat or d3q19()
    out = np.empty_like(f_star)
    for i in range(lat.q):
        shift = tuple(int(s) for s in lat.c[i])
        if shift == (0, 0, 0):
            out[..., i] = f_star[..., i]
        else:
            out[..., i] = np.roll(f_star[..., i], shift, axis=(0, 1, 2))
    return out


def density(f: np.ndarray) -> np.ndarray:
    """Zeroth moment of the populations."""
    return f.sum(axis=-1)


def macroscopics(
    f: np.ndarray,
    F,
    lat: LatticeDescriptor | None = None,
    dt: float = 1.0,
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Density, equilibrium velocity and half-force-corrected true velocity.

    rho = sum f;  rho u_eq = sum c f;  rho u = sum c f + F dt / 2.

    Raises:
        CorruptedStateError: some node has rho <= 0 or non-finite, with
            the offending node coordinates in the message.
    """
    lat = lat or d3q19()
    rho = density(f)
    bad = ~(np.isfinite(rho) & (rho > 0.0))
    if np.any(bad):
        idx = np.unravel_index(int(np.argmax(bad)), rho.shape)
        raise CorruptedStateError(f"rho = {rho[idx]!r} at node {idx}")
    mom = f @ lat.c.astype(np.float64)
    u_eq = mom / rho[..., None]
    u = (mom + (0.5 * dt) * np.asarray(F, dtype=np.float64)) / rho[..., None]
    return rho, u_eq, u
