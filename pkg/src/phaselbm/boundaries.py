"""Boundary-condition suite: walls, periodic faces, thermal Dirichlet,
geometric wetting ghosts and the constant-density outlet.

Faces are addressed as (axis, side) with axis in {0, 1, 2} for x, y, z and
side 0/1 for the low/high face.  Population fields are streamed with
periodic wrap everywhere first; the passes here then overwrite the
populations that wrapped through non-periodic faces.  Application order is
fixed: x faces, then y, then z, so on (unused) wall-wall edges the later
axis wins.

Ghost-layer padding for stencil operands (pseudopotential, velocity) runs
two fill rounds over the six faces so edge and corner ghosts settle even
for mixed periodic/wall/outlet configurations.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .lattice import LatticeDescriptor, d3q19, d3q7
from .thermal import equilibrium_g

__all__ = [
    "FaceSpec",
    "bounce_back_wall",
    "pressure_outlet_z",
    "dirichlet_temperature",
    "wetting_ghost_psi",
    "periodic_fill",
    "zero_gradient_fill",
    "pad_scalar",
    "pad_vector",
    "outlet_unknown_directions",
]

FACE_NAMES = ("x-", "x+", "y-", "y+", "z-", "z+")


@dataclass(frozen=True)
class FaceSpec:
    """Boundary assignment for one domain face.

    kind:
        "periodic" - wrap; may still carry a fixed temperature ``T`` (the
            thermal field is then Dirichlet on this face while the flow
            wraps).
        "wall" - no-slip bounce-back wall with Dirichlet temperature ``T``
            and contact angle ``theta_deg`` for the wetting ghost layer.
        "outlet" - constant-density open face (prescribed ``rho_out``,
            Dirichlet temperature ``T``); only supported on z+.
    """

    kind: str
    T: float | None = None
    theta_deg: float = 90.0
    rho_out: float | None = None

    def __post_init__(self):
        if self.kind not in ("periodic", "wall", "outlet"):
            raise ValueError(f"unknown face kind {self.kind!r}")
        if self.kind == "wall":
            if self.T is None:
                raise ValueError("wall faces need a temperature")
            if not 0.0 < self.theta_deg < 180.0:
                raise ValueError("contact angle must lie strictly between 0 and 180 degrees")
        if self.kind == "outlet":
            if self.rho_out is None or self.rho_out <= 0.0:
                raise ValueError("outlet faces need rho_out > 0")
            if self.T is None:
                raise ValueError("outlet faces need a temperature")


def _face_plane(arr: np.ndarray, axis: int, side: int, offset: int = 0):
    """View of the boundary plane, ``offset`` nodes into the domain."""
    idx = offset if side == 0 else arr.shape[axis] - 1 - offset
    return np.take(arr, idx, axis=axis)


def _set_face_plane(arr: np.ndarray, axis: int, side: int, value, offset: int = 0):
    idx = offset if side == 0 else arr.shape[axis] - 1 - offset
    sl = [slice(None)] * arr.ndim
    sl[axis] = idx
    arr[tuple(sl)] = value


def bounce_back_wall(
    f_new: np.ndarray,
    f_star: np.ndarray,
    axis: int,
    side: int,
    lat: LatticeDescriptor | None = None,
) -> np.ndarray:
    """No-slip wall on one face: halfway bounce-back with on-node collision.

    Boundary nodes carry full state and collided this step; every link
    pointing out of the domain is reflected back in place,

        f_opposite(i)(x_b, t + dt) = f*_i(x_b, t),

    which conserves node mass exactly.  ``f_new`` is the post-streaming
    buffer (mutated in place), ``f_star`` the post-collision buffer.
    """
    lat = lat or d3q19()
    inward = 1 if side == 0 else -1
    wall_new = _face_plane(f_new, axis, side)
    wall_star = _face_plane(f_star, axis, side)
    for i in range(lat.q):
        if lat.c[i, axis] * inward > 0:  # link coming in from outside: unknown
            wall_new[..., i] = wall_star[..., lat.opposite[i]]
    return f_new


def outlet_unknown_directions(lat: LatticeDescriptor | None = None) -> np.ndarray:
    """Directions with c_z = -1, unknown after streaming at a z+ outlet."""
    lat = lat or d3q19()
    return np.flatnonzero(lat.c[:, 2] == -1)


def pressure_outlet_z(
    f_plane: np.ndarray,
    F_plane: np.ndarray,
    rho_out: float,
    dt: float = 1.0,
) -> np.ndarray:
    """Constant-density open boundary on the top (z+) face.

    The five populations with c_z = -1 (indices 6, 12, 13, 16, 17) are
    reconstructed from the known fourteen so that, with u_x = u_y = 0 and
    density pinned to ``rho_out``, the half-force-corrected momentum
    relations hold exactly: the normal direction uses non-equilibrium
    bounce-back, the four diagonal links carry transverse corrections.

    Args:
        f_plane: (..., 19) populations on the outlet plane, post-streaming;
            the five unknown slots are overwritten in place.
        F_plane: (..., 3) body force on the outlet plane.
        rho_out: prescribed outlet density.

    Returns:
        The mutated ``f_plane``.
    """
    if rho_out <= 0.0:
        raise ValueError("rho_out must be positive")
    f = f_plane
    Fx, Fy, Fz = F_plane[..., 0], F_plane[..., 1], F_plane[..., 2]
    u_z = (
        f[..., 0] + f[..., 1] + f[..., 2] + f[..., 3] + f[..., 4]
        + f[..., 7] + f[..., 8] + f[..., 9] + f[..., 10]
        + 2.0 * (f[..., 5] + f[..., 11] + f[..., 14] + f[..., 15] + f[..., 18])
        + 0.5 * dt * Fz
    ) / rho_out - 1.0
    ruz = rho_out * u_z
    dx = 0.5 * (f[..., 1] - f[..., 2]) + 0.5 * (f[..., 7] - f[..., 8]) + 0.5 * (f[..., 9] - f[..., 10])
    dy = 0.5 * (f[..., 3] - f[..., 4]) + 0.5 * (f[..., 7] - f[..., 8]) - 0.5 * (f[..., 9] - f[..., 10])
    f[..., 6] = f[..., 5] - ruz / 3.0
    f[..., 12] = f[..., 11] + dx + 0.125 * (2.0 * Fx + Fz) - ruz / 6.0
    f[..., 13] = f[..., 14] - dx - 0.125 * (2.0 * Fx - Fz) - ruz / 6.0
    f[..., 16] = f[..., 15] + dy + 0.125 * (2.0 * Fy + Fz) - ruz / 6.0
    f[..., 17] = f[..., 18] - dy - 0.125 * (2.0 * Fy - Fz) - ruz / 6.0
    return f


def dirichlet_temperature(
    g_fluid: np.ndarray,
    T_b: float,
    lat: LatticeDescriptor | None = None,
) -> np.ndarray:
    """Boundary populations from non-equilibrium extrapolation.

    g_i(x_b) = g_i^eq(T_b) + [g_i(x_f) - g_i^eq(T_f)] with x_f the
    adjacent fluid node.  The zeroth moment of the result is exactly T_b.
    """
    lat = lat or d3q7()
    T_f = g_fluid.sum(axis=-1)
    T_b_arr = np.broadcast_to(np.asarray(T_b, dtype=np.float64), T_f.shape)
    return equilibrium_g(T_b_arr, lat) + (g_fluid - equilibrium_g(T_f, lat))


def wetting_ghost_psi(
    psi_wall_layer: np.ndarray,
    psi_layer1: np.ndarray,
    theta_deg: float,
) -> np.ndarray:
    """Ghost-layer pseudopotential enforcing a prescribed contact angle.

    ghost = psi_layer1 + sqrt(dpsi_a^2 + dpsi_b^2) * tan(pi/2 - theta)

    where dpsi_a, dpsi_b are in-plane central differences of the wall
    layer (computed with periodic wrap; the in-plane faces of every
    supported case are periodic).  theta = 90 deg reduces to a mirror of
    the first interior layer.

    Args:
        psi_wall_layer: 2D pseudopotential on the wall-node plane.
        psi_layer1: 2D pseudopotential one layer into the fluid.
        theta_deg: contact angle in degrees, strictly inside (0, 180).
    """
    if not 0.0 < theta_deg < 180.0:
        raise ValueError("contact angle must lie strictly between 0 and 180 degrees")
    slope = math.tan(math.pi / 2.0 - math.radians(theta_deg))
    if slope == 0.0:
        return psi_layer1.copy()
    da = np.roll(psi_wall_layer, -1, axis=0) - np.roll(psi_wall_layer, 1, axis=0)
    db = np.roll(psi_wall_layer, -1, axis=1) - np.roll(psi_wall_layer, 1, axis=1)
    return psi_layer1 + np.sqrt(da * da + db * db) * slope


def periodic_fill(padded: np.ndarray, axis: int) -> None:
    """Copy opposite interior layers into both ghost layers of one axis."""
    lo = [slice(None)] * padded.ndim
    hi = [slice(None)] * padded.ndim
    src_hi = [slice(None)] * padded.ndim
    src_lo = [slice(None)] * padded.ndim
    lo[axis], src_hi[axis] = 0, padded.shape[axis] - 2
    hi[axis], src_lo[axis] = padded.shape[axis] - 1, 1
    padded[tuple(lo)] = padded[tuple(src_hi)]
    padded[tuple(hi)] = padded[tuple(src_lo)]


def zero_gradient_fill(padded: np.ndarray, axis: int, side: int) -> None:
    """Copy the boundary layer outward into the ghost layer of one face."""
    ghost = [slice(None)] * padded.ndim
    src = [slice(None)] * padded.ndim
    if side == 0:
        ghost[axis], src[axis] = 0, 1
    else:
        ghost[axis], src[axis] = padded.shape[axis] - 1, padded.shape[axis] - 2
    padded[tuple(ghost)] = padded[tuple(src)]


def _interior_take(padded: np.ndarray, axis: int, idx: int) -> np.ndarray:
    """Interior-extent plane at padded index ``idx`` along ``axis``."""
    sl = [slice(1, -1)] * 3 + [slice(None)] * (padded.ndim - 3)
    sl[axis] = idx
    return padded[tuple(sl)]


def _wetting_fill(padded: np.ndarray, axis: int, side: int, theta_deg: float) -> None:
    if side == 0:
        ghost_idx, wall_idx, inner_idx = 0, 1, 2
    else:
        n = padded.shape[axis]
        ghost_idx, wall_idx, inner_idx = n - 1, n - 2, n - 3
    wall = _interior_take(padded, axis, wall_idx)
    inner = _interior_take(padded, axis, inner_idx)
    ghost = wetting_ghost_psi(wall, inner, theta_deg)
    sl = [slice(1, -1)] * 3
    sl[axis] = ghost_idx
    padded[tuple(sl)] = ghost


def _mirror_negate_fill(padded: np.ndarray, axis: int, side: int) -> None:
    """Antisymmetric velocity ghost about the wall-node plane."""
    if side == 0:
        ghost_idx, inner_idx = 0, 2
    else:
        n = padded.shape[axis]
        ghost_idx, inner_idx = n - 1, n - 3
    ghost = [slice(None)] * padded.ndim
    src = [slice(None)] * padded.ndim
    ghost[axis], src[axis] = ghost_idx, inner_idx
    padded[tuple(ghost)] = -padded[tuple(src)]


def _pad(field: np.ndarray, faces: dict[str, FaceSpec], wall_fill) -> np.ndarray:
    extra = (0, 0) if field.ndim == 3 else ((0, 0),) * (field.ndim - 3)
    padded = np.pad(field, ((1, 1), (1, 1), (1, 1)) + (extra if field.ndim > 3 else ()))
    # Two rounds settle edge/corner ghosts regardless of face mix.
    for _ in range(2):
        for axis, ax_name in enumerate("xyz"):
            for side, sign in enumerate("-+"):
                spec = faces[f"{ax_name}{sign}"]
                if spec.kind == "periodic":
                    if side == 0:  # one call fills both sides
                        periodic_fill(padded, axis)
                elif spec.kind == "wall":
                    wall_fill(padded, axis, side, spec)
                else:  # outlet
                    zero_gradient_fill(padded, axis, side)
    return padded


def pad_scalar(psi: np.ndarray, faces: dict[str, FaceSpec]) -> np.ndarray:
    """Pseudopotential with ghost layers: periodic wrap, wetting ghosts on
    walls, zero-gradient beyond outlets."""
    return _pad(psi, faces, lambda p, a, s, spec: _wetting_fill(p, a, s, spec.theta_deg))


def pad_vector(u: np.ndarray, faces: dict[str, FaceSpec]) -> np.ndarray:
    """Velocity with ghost layers: periodic wrap, antisymmetric mirror on
    walls (no-slip plane on the wall nodes), zero-gradient beyond outlets."""
    return _pad(u, faces, lambda p, a, s, spec: _mirror_negate_fill(p, a, s))
