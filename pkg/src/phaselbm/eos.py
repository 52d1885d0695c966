"""Peng-Robinson equation of state, pseudopotential mapping and coexistence.

All quantities are in lattice units.  The attraction parameter ``a`` and
covolume ``b`` fix the critical point through

    a = 0.45724 R^2 Tc^2 / pc,      b = 0.0778 R Tc / pc,

so ``Tc`` and ``pc`` are derived rather than stored independently.  The
critical density comes from the stationary-inflection condition
dp/drho = d2p/drho2 = 0 at ``Tc``, solved numerically.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy import optimize

__all__ = [
    "EosParams",
    "CoexistencePoint",
    "EosDomainError",
    "pr_pressure",
    "pr_dp_dT",
    "pr_dp_drho",
    "pseudopotential",
    "critical_point",
    "maxwell_coexistence",
]

# Guard for tiny negative radicands produced by roundoff at rho -> 0.
_RADICAND_SLACK = 1e-12


class EosDomainError(ValueError):
    """State outside the validity domain of the equation of state."""


@dataclass(frozen=True)
class EosParams:
    """Constants of the cubic equation of state plus the derived critical point."""

    a: float
    b: float
    R: float
    omega: float
    T_c: float = field(init=False)
    p_c: float = field(init=False)
    rho_c: float = field(init=False)

    def __post_init__(self):
        if min(self.a, self.b, self.R) <= 0.0:
            raise ValueError("a, b and R must all be positive")
        if not 0.0 <= self.omega < 1.0:
            raise ValueError(f"acentric factor must lie in [0, 1), got {self.omega}")
        T_c, p_c, rho_c = critical_point(self.a, self.b, self.R, self.omega)
        object.__setattr__(self, "T_c", T_c)
        object.__setattr__(self, "p_c", p_c)
        object.__setattr__(self, "rho_c", rho_c)

    @property
    def kappa(self) -> float:
        """Acentric polynomial entering the temperature attenuation factor."""
        w = self.omega
        return 0.37464 + 1.54226 * w - 0.26992 * w * w

    def xi(self, T):
        """Temperature attenuation of the attraction term."""
        root = np.sqrt(np.asarray(T, dtype=np.float64) / self.T_c)
        return (1.0 + self.kappa * (1.0 - root)) ** 2

    def dxi_dT(self, T):
        T = np.asarray(T, dtype=np.float64)
        root = np.sqrt(T / self.T_c)
        return -self.kappa * (1.0 + self.kappa * (1.0 - root)) / np.sqrt(T * self.T_c)


@dataclass(frozen=True)
class CoexistencePoint:
    """Equal-area coexistence state on one subcritical isotherm."""

    T: float
    rho_l: float
    rho_v: float
    p_sat: float


def _check_density_domain(rho, b: float) -> np.ndarray:
    rho = np.asarray(rho, dtype=np.float64)
    if np.any(rho < 0.0):
        raise EosDomainError("density must be nonnegative")
    if np.any(rho >= 1.0 / b):
        raise EosDomainError(f"density reaches the covolume singularity 1/b = {1.0 / b:g}")
    return rho


def pr_pressure(rho, T, eos: EosParams):
    """Pressure of the cubic equation of state; broadcasts over arrays."""
    rho = _check_density_domain(rho, eos.b)
    T = np.asarray(T, dtype=np.float64)
    b = eos.b
    repulsion = rho * eos.R * T / (1.0 - b * rho)
    attraction = eos.a * eos.xi(T) * rho * rho / (1.0 + 2.0 * b * rho - b * b * rho * rho)
    return repulsion - attraction


def pr_dp_dT(rho, T, eos: EosParams):
    """Analytic isochoric temperature derivative of the pressure."""
    rho = _check_density_domain(rho, eos.b)
    T = np.asarray(T, dtype=np.float64)
    b = eos.b
    repulsion = rho * eos.R / (1.0 - b * rho)
    attraction = eos.a * eos.dxi_dT(T) * rho * rho / (1.0 + 2.0 * b * rho - b * b * rho * rho)
    return repulsion - attraction


def pr_dp_drho(rho, T, eos: EosParams):
    """Analytic isothermal density derivative of the pressure."""
    rho = _check_density_domain(rho, eos.b)
    T = np.asarray(T, dtype=np.float64)
    b = eos.b
    denom = 1.0 + 2.0 * b * rho - b * b * rho * rho
    repulsion = eos.R * T / (1.0 - b * rho) ** 2
    attraction = 2.0 * eos.a * eos.xi(T) * rho * (1.0 + b * rho) / (denom * denom)
    return repulsion - attraction


def pseudopotential(rho, T, G: float, eos: EosParams, cs2: float = 1.0 / 3.0):
    """Effective mass mediating the nearest-neighbor interaction force.

    psi = sqrt(2 (p_eos - rho cs2) / G) with unit lattice spacing and time
    step.  With the conventional G = -1 the attractive branch has
    p_eos <= rho cs2, so the two signs cancel under the root.

    Raises:
        EosDomainError: the radicand is negative beyond roundoff, which
            signals an unphysical state or a wrong sign of G.
    """
    if G == 0.0:
        raise ValueError("interaction strength G must be nonzero")
    p = pr_pressure(rho, T, eos)
    radicand = 2.0 * (p - np.asarray(rho, dtype=np.float64) * cs2) / G
    if np.any(radicand < -_RADICAND_SLACK):
        worst = float(np.min(radicand))
        raise EosDomainError(
            f"negative pseudopotential radicand (min {worst:.3e}); "
            "state is outside the attractive branch for this G"
        )
    return np.sqrt(np.clip(radicand, 0.0, None))


def critical_point(a: float, b: float, R: float, omega: float) -> tuple[float, float, float]:
    """Critical temperature, pressure and density implied by (a, b, R).

    Tc and pc follow algebraically from the defining relations of a and b;
    rho_c minimizes dp/drho on the critical isotherm, where the minimum
    value is zero (stationary inflection).  ``omega`` does not enter: the
    attenuation factor is exactly one on the critical isotherm.
    """
    T_c = (0.0778 / 0.45724) * a / (b * R)
    p_c = 0.0778 * R * T_c / b

    def dp_drho(rho: float) -> float:
        denom = 1.0 + 2.0 * b * rho - b * b * rho * rho
        return R * T_c / (1.0 - b * rho) ** 2 - 2.0 * a * rho * (1.0 + b * rho) / denom**2

    res = optimize.minimize_scalar(
        dp_drho, bounds=(1e-9, (1.0 - 1e-9) / b), method="bounded",
        options={"xatol": 1e-13},
    )
    return T_c, p_c, float(res.x)


def _spinodal_densities(T: float, eos: EosParams) -> tuple[float, float]:
    """Locations of the two interior extrema of a subcritical isotherm."""
    lo, hi = 1e-9, (1.0 - 1e-6) / eos.b
    grid = np.linspace(lo, hi, 4001)
    slope = pr_dp_drho(grid, T, eos)
    sign_change = np.flatnonzero(np.sign(slope[:-1]) != np.sign(slope[1:]))
    if len(sign_change) != 2:
        raise EosDomainError(
            f"isotherm at T = {T:g} has {len(sign_change)} interior extrema, expected 2; "
            "no phase split above the critical temperature"
        )
    roots = [
        optimize.brentq(lambda r: pr_dp_drho(r, T, eos), grid[i], grid[i + 1], xtol=1e-14)
        for i in sign_change
    ]
    return roots[0], roots[1]  # pressure maximum (vapor side), minimum (liquid side)


def maxwell_coexistence(
    T: float,
    eos: EosParams,
    *,
    n_quad: int = 200,
    max_iter: int = 200,
) -> CoexistencePoint:
    """Coexistence densities and saturation pressure by the equal-area rule.

    Bisects the saturation pressure between the interior extrema of the
    isotherm.  Each candidate is scored by the signed area of
    (p - p_sat) dv in specific volume, integrated with fixed-order
    Gauss-Legendre quadrature on a log-volume substitution (accurate even
    when the vapor volume is orders of magnitude above the liquid one).

    Raises:
        EosDomainError: T is not strictly below the critical temperature.
        RuntimeError: the bisection failed to meet the residual target.
    """
    if not 0.0 < T < eos.T_c:
        raise EosDomainError(f"need 0 < T < T_c = {eos.T_c:g} for coexistence, got {T:g}")
    rho_sv, rho_sl = _spinodal_densities(T, eos)
    p_hi = float(pr_pressure(rho_sv, T, eos))
    p_floor = max(float(pr_pressure(rho_sl, T, eos)), 0.0)
    if p_hi <= p_floor:
        raise EosDomainError(f"degenerate pressure bracket at T = {T:g}")

    nodes, weights = np.polynomial.legendre.leggauss(n_quad)

    def branch_roots(p_s: float) -> tuple[float, float]:
        f = lambda r: float(pr_pressure(r, T, eos)) - p_s
        rho_v = optimize.brentq(f, 0.0, rho_sv, xtol=1e-16, rtol=8.9e-16)
        hi = rho_sl
        while f(hi) < 0.0:  # walk up the rising liquid branch to bracket
            hi = min(hi + 0.5 * rho_sl, (1.0 - 1e-9) / eos.b)
        rho_l = optimize.brentq(f, rho_sl, hi, xtol=1e-16, rtol=8.9e-16)
        return rho_v, rho_l

    def areas(p_s: float) -> tuple[float, float, float, float]:
        """Signed and absolute equal-area integrals plus the two roots."""
        rho_v, rho_l = branch_roots(p_s)
        v_l, v_v = 1.0 / rho_l, 1.0 / rho_v
        span = np.log(v_v / v_l)
        s = 0.5 * span * (nodes + 1.0)
        v = v_l * np.exp(s)
        integrand = (pr_pressure(1.0 / v, T, eos) - p_s) * v  # dv = v ds
        signed = float(np.sum(weights * integrand) * 0.5 * span)
        absolute = float(np.sum(weights * np.abs(integrand)) * 0.5 * span)
        return signed, absolute, rho_v, rho_l

    # Bracket: signed area decreases monotonically in p_s, positive near the
    # pressure floor and negative near the vapor-spinodal maximum.
    span_p = p_hi - p_floor
    hi = p_hi - 1e-12 * span_p
    lo = p_floor + 1e-3 * span_p
    for _ in range(40):
        if areas(lo)[0] > 0.0:
            break
        lo = p_floor + (lo - p_floor) / 8.0
    else:
        raise RuntimeError("failed to bracket the equal-area pressure from below")
    if areas(hi)[0] > 0.0:
        raise RuntimeError("failed to bracket the equal-area pressure from above")

    p_s = signed = absolute = rho_v = rho_l = None
    for _ in range(max_iter):
        p_s = 0.5 * (lo + hi)
        signed, absolute, rho_v, rho_l = areas(p_s)
        if signed > 0.0:
            lo = p_s
        else:
            hi = p_s
        if hi - lo <= 4.0 * np.spacing(p_s):
            break
    if abs(signed) > 1e-8 * max(absolute, 1e-300):
        raise RuntimeError(
            f"equal-area residual {signed:.3e} above tolerance after bisection at T = {T:g}"
        )
    return CoexistencePoint(T=float(T), rho_l=rho_l, rho_v=rho_v, p_sat=p_s)
