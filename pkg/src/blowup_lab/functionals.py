"""Integral quantities of a flow state and the weighted L^1 interpolation bound.

All integrals are composite quadrature over the truncated grid.  Snapshot
evaluation is pure and safe to run concurrently across states.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import InvalidInputError, NumericsError
from .gas_state import Degenerate, Euler, ConstantViscosity, FlowState, GasModel, Grid, pressure

__all__ = [
    "FunctionalSnapshot",
    "snapshot",
    "viscous_virial",
    "dissipation_rate",
    "CheminResult",
    "chemin",
    "unit_ball_volume",
    "interpolation_constant",
]

# CSV column order used by the reporting layer
SNAPSHOT_COLUMNS = (
    "t",
    "M",
    "P",
    "F",
    "G",
    "E_k",
    "E_i_or_I",
    "E_or_IE",
    "H_or_IH_or_DIH",
    "J_or_IJ",
)


@dataclass(frozen=True)
class FunctionalSnapshot:
    """All tracked integral quantities at one time.

    `potential` is the internal energy when the state carries entropy and
    the pressure integral /(gamma-1) otherwise (the two coincide through
    the EOS identity p=(gamma-1)*rho*e).  `virial` is 2*E_k + n(gamma-1)*
    potential, with the divergence correction subtracted in the degenerate-
    viscosity regime.  `combined` is G - (t+1)F + (t+1)^2 * total.
    """

    t: float
    mass: float
    momentum: float
    momentum_weight: float
    inertia: float
    kinetic: float
    potential: float
    total: float
    virial: float
    combined: float
    isentropic: bool

    def as_row(self) -> tuple:
        return (
            self.t,
            self.mass,
            self.momentum,
            self.momentum_weight,
            self.inertia,
            self.kinetic,
            self.potential,
            self.total,
            self.virial,
            self.combined,
        )


def _check_finite(name: str, value: float) -> float:
    if not math.isfinite(value):
        raise NumericsError(f"quadrature of {name} is non-finite")
    return value


def snapshot(state: FlowState, model: GasModel, method: str = "trapezoid") -> FunctionalSnapshot:
    """Evaluate every tracked quantity of `state` by composite quadrature."""
    grid = state.grid
    rho, u = state.rho, state.u
    x = grid.x
    p = pressure(state, model)

    mass = _check_finite("mass", grid.integrate(rho, method))
    momentum = _check_finite("momentum", grid.integrate(rho * u, method))
    momentum_weight = _check_finite("momentum weight", grid.integrate(rho * u * x, method))
    inertia = _check_finite("inertia", 0.5 * grid.integrate(rho * x * x, method))
    kinetic = _check_finite("kinetic energy", 0.5 * grid.integrate(rho * u * u, method))
    potential = _check_finite(
        "potential/internal energy", grid.integrate(p, method) / (model.gamma - 1.0)
    )
    total = kinetic + potential

    n, g = model.dim, model.gamma
    virial = 2.0 * kinetic + n * (g - 1.0) * potential
    if isinstance(model.regime, Degenerate):
        virial = viscous_virial_from_parts(state, model, kinetic, potential, method)

    tt = state.t + 1.0
    combined = inertia - tt * momentum_weight + tt * tt * total
    return FunctionalSnapshot(
        t=state.t,
        mass=mass,
        momentum=momentum,
        momentum_weight=momentum_weight,
        inertia=inertia,
        kinetic=kinetic,
        potential=potential,
        total=total,
        virial=virial,
        combined=combined,
        isentropic=not state.has_entropy,
    )


def viscous_virial_from_parts(
    state: FlowState,
    model: GasModel,
    kinetic: float,
    potential: float,
    method: str = "trapezoid",
) -> float:
    """Virial with the degenerate-viscosity divergence correction subtracted."""
    alpha = model.regime.alpha
    n, g = model.dim, model.gamma
    coeff = 1.0 + n * (alpha - 1.0)
    div_term = state.grid.integrate(state.rho**alpha * state.grid.divergence(state.u), method)
    return 2.0 * kinetic + n * (g - 1.0) * potential - coeff * _check_finite("divergence term", div_term)


def viscous_virial(state: FlowState, model: GasModel, method: str = "trapezoid") -> float:
    """2*E_k + n(gamma-1)*I - [1+n(alpha-1)] * int rho^alpha div(u)."""
    if not isinstance(model.regime, Degenerate):
        raise InvalidInputError("viscous_virial needs the degenerate-viscosity regime")
    snap = snapshot(state, model, method)
    return snap.virial


def dissipation_rate(state: FlowState, model: GasModel, method: str = "trapezoid") -> float:
    """Time derivative of the energy due to viscosity (non-positive).

    Constant viscosity: -int [2 mu (u_r^2 + (n-1)(u/r)^2)/... ] reduces for
    radially symmetric fields to -int [2 mu q + lam (div u)^2] with
    q = u'^2 + (n-1)(u/r)^2; degenerate: -int [rho^a q + (a-1) rho^a (div u)^2].
    Zero in the inviscid regime.
    """
    regime = model.regime
    if isinstance(regime, Euler):
        return 0.0
    grid = state.grid
    u = state.u
    du = grid.derivative(u)
    if grid.geometry == "radial":
        shear_sq = du * du + (model.dim - 1) * (u / grid.x) ** 2
    else:
        shear_sq = du * du
    div = grid.divergence(u)
    if isinstance(regime, ConstantViscosity):
        integrand = 2.0 * regime.mu * shear_sq + regime.lam * div * div
    else:
        h = state.rho**regime.alpha
        integrand = h * shear_sq + (regime.alpha - 1.0) * h * div * div
    return -_check_finite("dissipation", grid.integrate(integrand, method))


# ---------------------------------------------------------------------------
# weighted interpolation inequality (L^1 <= C1 * L^gamma-part * weighted-part)

def unit_ball_volume(n: int) -> float:
    return math.pi ** (n / 2.0) / math.gamma(n / 2.0 + 1.0)


def interpolation_constant(gamma: float, n: int) -> float:
    """Explicit constant C1 = 2 |B_1|^{2(gamma-1)/((n+2)gamma-n)}."""
    q = (n + 2) * gamma - n
    return 2.0 * unit_ball_volume(n) ** (2.0 * (gamma - 1.0) / q)


@dataclass(frozen=True)
class CheminResult:
    """Both sides of the weighted interpolation inequality for one field.

    `rhs` is the balanced product form with the explicit constant; `r_opt`
    is the radius minimising the two-piece split bound
    phi(r) = |B1|^{1-1/gamma} r^{n(1-1/gamma)} ||f||_gamma + r^-2 ||f||_w.
    """

    lhs: float
    norm_gamma: float
    weighted: float
    constant: float
    rhs: float
    r_opt: float
    gamma: float
    n: int

    def split_bound(self, r) -> np.ndarray:
        """The two-piece bound phi(r); its minimum is at `r_opt`."""
        a = self.n * (1.0 - 1.0 / self.gamma)
        A = unit_ball_volume(self.n) ** (1.0 - 1.0 / self.gamma) * self.norm_gamma
        r = np.asarray(r, dtype=float)
        return A * r**a + self.weighted / (r * r)


def chemin(f: np.ndarray, gamma: float, n: int, grid: Grid, method: str = "trapezoid") -> CheminResult:
    """Evaluate the weighted interpolation inequality for a nonnegative field.

    Raises for identically-zero or negative input; asserts nothing (callers
    compare lhs and rhs themselves).
    """
    f = np.asarray(f, dtype=float)
    if np.any(f < 0):
        raise InvalidInputError("field must be nonnegative")
    if not np.any(f > 0):
        raise InvalidInputError("field is identically zero; bound is degenerate")
    if gamma <= 1.0:
        raise InvalidInputError("gamma must exceed 1")
    if grid.geometry == "line" and n != 1:
        raise InvalidInputError("line grids are one-dimensional")
    if grid.geometry == "radial" and n != grid.dim:
        raise InvalidInputError("dimension must match the radial grid")

    x = grid.x
    lhs = grid.integrate(f, method)
    norm_gamma = grid.integrate(f**gamma, method) ** (1.0 / gamma)
    weighted = grid.integrate(f * x * x, method)
    if not all(map(math.isfinite, (lhs, norm_gamma, weighted))):
        raise NumericsError("non-finite norm in interpolation bound")

    q = (n + 2) * gamma - n
    c1 = interpolation_constant(gamma, n)
    rhs = c1 * norm_gamma ** (2.0 * gamma / q) * weighted ** (n * (gamma - 1.0) / q)

    # exact minimiser of the split bound A r^a + B r^-2
    a = n * (1.0 - 1.0 / gamma)
    A = unit_ball_volume(n) ** (1.0 - 1.0 / gamma) * norm_gamma
    r_opt = (2.0 * weighted / (a * A)) ** (1.0 / (a + 2.0))

    return CheminResult(
        lhs=lhs,
        norm_gamma=norm_gamma,
        weighted=weighted,
        constant=c1,
        rhs=rhs,
        r_opt=r_opt,
        gamma=gamma,
        n=n,
    )
