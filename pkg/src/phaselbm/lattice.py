"""Discrete velocity sets, weights and non-orthogonal moment bases.

Two lattices are provided: the 19-velocity set used for the density
populations and the 7-velocity set used for the temperature populations.
Moment transforms use a non-orthogonal basis whose rows are monomials of
the velocity components, which keeps the matrices sparse and integer.

Velocity ordering for the 19-velocity set (single source of truth for the
whole package; row ``i`` of every population array follows this table):

    index: 0   1   2   3   4   5   6   7   8   9  10  11  12  13  14  15  16  17  18
    c_x :  0   1  -1   0   0   0   0   1  -1   1  -1   1  -1   1  -1   0   0   0   0
    c_y :  0   0   0   1  -1   0   0   1  -1  -1   1   0   0   0   0   1  -1   1  -1
    c_z :  0   0   0   0   0   1  -1   0   0   0   0   1  -1  -1   1   1  -1  -1   1

The 7-velocity set uses the rest vector followed by the six axis
directions in the same +x, -x, +y, -y, +z, -z order.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass

import numpy as np

__all__ = [
    "LatticeDescriptor",
    "d3q19",
    "d3q7",
    "to_moments",
    "from_moments",
    "velocity_component_matrices",
]

_C19 = np.array(
    [
        [0, 0, 0],
        [1, 0, 0],
        [-1, 0, 0],
        [0, 1, 0],
        [0, -1, 0],
        [0, 0, 1],
        [0, 0, -1],
        [1, 1, 0],
        [-1, -1, 0],
        [1, -1, 0],
        [-1, 1, 0],
        [1, 0, 1],
        [-1, 0, -1],
        [1, 0, -1],
        [-1, 0, 1],
        [0, 1, 1],
        [0, -1, -1],
        [0, 1, -1],
        [0, -1, 1],
    ],
    dtype=np.int64,
)

_C7 = np.array(
    [
        [0, 0, 0],
        [1, 0, 0],
        [-1, 0, 0],
        [0, 1, 0],
        [0, -1, 0],
        [0, 0, 1],
        [0, 0, -1],
    ],
    dtype=np.int64,
)


@dataclass(frozen=True)
class LatticeDescriptor:
    """Immutable bundle of one discrete velocity set and its moment basis.

    Attributes:
        q: number of discrete velocities.
        c: (q, 3) integer velocity vectors, lattice units.
        w: (q,) quadrature weights, sum to one.
        M: (q, q) moment transformation matrix.
        M_inv: (q, q) inverse of ``M``.
        cs2: squared lattice sound speed.
        opposite: (q,) index permutation with ``c[opposite[i]] == -c[i]``.
    """

    q: int
    c: np.ndarray
    w: np.ndarray
    M: np.ndarray
    M_inv: np.ndarray
    cs2: float
    opposite: np.ndarray

    def __post_init__(self):
        for arr in (self.c, self.w, self.M, self.M_inv, self.opposite):
            arr.setflags(write=False)


def _opposite_permutation(c: np.ndarray) -> np.ndarray:
    opp = np.empty(len(c), dtype=np.int64)
    for i, ci in enumerate(c):
        matches = np.flatnonzero((c == -ci).all(axis=1))
        if len(matches) != 1:
            raise ValueError(f"velocity set has no unique opposite for direction {i}")
        opp[i] = matches[0]
    return opp


def _moment_basis_19(c: np.ndarray) -> np.ndarray:
    """Rows are monomials of the velocity components, up to fourth order."""
    cx, cy, cz = c[:, 0], c[:, 1], c[:, 2]
    rows = [
        np.ones_like(cx),
        cx,
        cy,
        cz,
        cx**2 + cy**2 + cz**2,
        2 * cx**2 - cy**2 - cz**2,
        cy**2 - cz**2,
        cx * cy,
        cx * cz,
        cy * cz,
        cx**2 * cy,
        cx * cy**2,
        cx**2 * cz,
        cx * cz**2,
        cy**2 * cz,
        cy * cz**2,
        cx**2 * cy**2,
        cx**2 * cz**2,
        cy**2 * cz**2,
    ]
    return np.array(rows, dtype=np.float64)


def _moment_basis_7(c: np.ndarray) -> np.ndarray:
    cx, cy, cz = c[:, 0], c[:, 1], c[:, 2]
    rows = [
        np.ones_like(cx),
        cx,
        cy,
        cz,
        cx**2 + cy**2 + cz**2,
        cx**2 - cy**2,
        cx**2 - cz**2,
    ]
    return np.array(rows, dtype=np.float64)


def _invert(M: np.ndarray) -> np.ndarray:
    # LAPACK LU with partial pivoting; sanity-check the round trip so a
    # transcription error in the basis fails loudly at startup.
    M_inv = np.linalg.inv(M)
    if not np.allclose(M @ M_inv, np.eye(len(M)), atol=1e-12):
        raise np.linalg.LinAlgError("moment basis inversion failed the identity check")
    return M_inv


@functools.lru_cache(maxsize=None)
def d3q19() -> LatticeDescriptor:
    """Nineteen-velocity lattice for the density populations.

    Weights are 1/3 for the rest velocity, 1/18 for the six axis
    directions and 1/36 for the twelve face diagonals; cs2 = 1/3.
    """
    w = np.empty(19)
    w[0] = 1.0 / 3.0
    w[1:7] = 1.0 / 18.0
    w[7:19] = 1.0 / 36.0
    M = _moment_basis_19(_C19)
    return LatticeDescriptor(
        q=19,
        c=_C19.copy(),
        w=w,
        M=M,
        M_inv=_invert(M),
        cs2=1.0 / 3.0,
        opposite=_opposite_permutation(_C19),
    )


@functools.lru_cache(maxsize=None)
def d3q7(wbar: float = 0.5) -> LatticeDescriptor:
    """Seven-velocity lattice for the temperature populations.

    Args:
        wbar: free rest-weight parameter in (0, 1); the rest weight is
            ``1 - wbar`` and each axis direction carries ``wbar / 6``.
            The sound speed satisfies ``cs2 = wbar / 3``.
    """
    if not 0.0 < wbar < 1.0:
        raise ValueError(f"wbar must lie in (0, 1), got {wbar}")
    w = np.empty(7)
    w[0] = 1.0 - wbar
    w[1:] = wbar / 6.0
    M = _moment_basis_7(_C7)
    return LatticeDescriptor(
        q=7,
        c=_C7.copy(),
        w=w,
        M=M,
        M_inv=_invert(M),
        cs2=wbar / 3.0,
        opposite=_opposite_permutation(_C7),
    )


def to_moments(populations: np.ndarray, lat: LatticeDescriptor) -> np.ndarray:
    """Map populations to moments, ``m = M @ populations`` on the last axis."""
    if populations.shape[-1] != lat.q:
        raise ValueError(f"expected last axis {lat.q}, got {populations.shape[-1]}")
    return populations @ lat.M.T


def from_moments(moments: np.ndarray, lat: LatticeDescriptor) -> np.ndarray:
    """Inverse of :func:`to_moments` on the last axis."""
    if moments.shape[-1] != lat.q:
        raise ValueError(f"expected last axis {lat.q}, got {moments.shape[-1]}")
    return moments @ lat.M_inv.T


def velocity_component_matrices(lat: LatticeDescriptor) -> tuple[np.ndarray, ...]:
    """Moment-space images of per-population scaling by each velocity component.

    Returns ``E_a = M @ diag(c[:, a]) @ M_inv`` for a in (x, y, z).
    """
    return tuple(lat.M @ np.diag(lat.c[:, a].astype(np.float64)) @ lat.M_inv for a in range(3))
