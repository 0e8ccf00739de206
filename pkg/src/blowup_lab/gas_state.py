"""Gas model, spatial grid, flow states, and initial-data construction.

The unbounded domain is truncated to [-L, L] (1D line) or (0, L] (radial
symmetry in n dimensions); `validate_decay` quantifies what the truncation
neglects.  All values are immutable after construction and every operation
is a pure function of its inputs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import InvalidInputError

__all__ = [
    "Euler",
    "ConstantViscosity",
    "Degenerate",
    "GasModel",
    "Grid",
    "FlowState",
    "DensitySpec",
    "VelocitySpec",
    "ProfileSpec",
    "build_initial_data",
    "load_table",
    "pressure",
    "entropy_from_pressure",
    "DecayReport",
    "validate_decay",
]


# ---------------------------------------------------------------------------
# gas model

@dataclass(frozen=True)
class Euler:
    """Inviscid regime (no stress tensor, no heat conduction)."""

    kind: str = field(default="euler", init=False, repr=False)


@dataclass(frozen=True)
class ConstantViscosity:
    """Constant Lame coefficients mu, lam and heat conduction kappa."""

    mu: float
    lam: float = 0.0
    kappa: float = 0.0
    kind: str = field(default="constant", init=False, repr=False)


@dataclass(frozen=True)
class Degenerate:
    """Density-dependent viscosity h(rho)=rho^alpha, g(rho)=(alpha-1)rho^alpha."""

    alpha: float
    kind: str = field(default="degenerate", init=False, repr=False)


@dataclass(frozen=True)
class GasModel:
    """Polytropic gas: heat ratio gamma, dimension, viscosity regime.

    Pressure laws: p = exp(s/c_nu) rho^gamma with an entropy field,
    p = rho^gamma without one (the normalisation constant is taken as 1).
    """

    gamma: float
    dim: int = 1
    regime: object = Euler()
    gas_constant: float = 1.0

    def __post_init__(self):
        if not self.gamma > 1.0:
            raise InvalidInputError(f"gamma must exceed 1, got {self.gamma}")
        if self.dim < 1 or int(self.dim) != self.dim:
            raise InvalidInputError(f"dim must be a positive integer, got {self.dim}")
        if self.gas_constant <= 0:
            raise InvalidInputError("gas_constant must be positive")
        r = self.regime
        if isinstance(r, ConstantViscosity):
            if r.mu < 0 or r.kappa < 0 or 2 * r.mu + self.dim * r.lam < 0:
                raise InvalidInputError(
                    "constant viscosity needs mu >= 0, kappa >= 0 and 2*mu + n*lambda >= 0"
                )
        elif isinstance(r, Degenerate):
            if not r.alpha > 1.0 - 1.0 / self.dim:
                raise InvalidInputError(
                    f"degenerate viscosity needs alpha > 1 - 1/n = {1.0 - 1.0 / self.dim}"
                )
        elif not isinstance(r, Euler):
            raise InvalidInputError(f"unknown viscosity regime: {r!r}")

    @property
    def c_nu(self) -> float:
        return self.gas_constant / (self.gamma - 1.0)

    @property
    def is_viscous(self) -> bool:
        return not isinstance(self.regime, Euler)


# ---------------------------------------------------------------------------
# grid

def _ball_surface(n: int) -> float:
    """Surface measure of the unit sphere S^{n-1}."""
    return 2.0 * math.pi ** (n / 2.0) / math.gamma(n / 2.0)


@dataclass(frozen=True)
class Grid:
    """Uniform cell-centered grid.

    geometry "line": cells on [-L, L], spacing 2L/N.
    geometry "radial": cells on (0, L], spacing L/N; volume integrals carry
    the surface-measure weight |S^{n-1}| r^{n-1}.
    """

    half_width: float
    ncells: int
    geometry: str = "line"
    dim: int = 1

    def __post_init__(self):
        if self.geometry not in ("line", "radial"):
            raise InvalidInputError(f"unknown grid geometry {self.geometry!r}")
        if self.geometry == "line" and self.dim != 1:
            raise InvalidInputError("line geometry is one-dimensional")
        if self.half_width <= 0:
            raise InvalidInputError("half_width must be positive")
        if self.ncells < 16:
            raise InvalidInputError("need at least 16 cells")

    @property
    def dx(self) -> float:
        if self.geometry == "line":
            return 2.0 * self.half_width / self.ncells
        return self.half_width / self.ncells

    @property
    def x(self) -> np.ndarray:
        """Cell-center coordinates (signed position or radius)."""
        if self.geometry == "line":
            return -self.half_width + (np.arange(self.ncells) + 0.5) * self.dx
        return (np.arange(self.ncells) + 0.5) * self.dx

    @property
    def volume_weight(self) -> np.ndarray:
        """Pointwise weight w(x) such that integrals are sum(w*f)*dx-like."""
        if self.geometry == "line":
            return np.ones(self.ncells)
        return _ball_surface(self.dim) * self.x ** (self.dim - 1)

    def integrate(self, values: np.ndarray, method: str = "trapezoid") -> float:
        """Volume integral of a cell-centered field by composite quadrature."""
        y = np.asarray(values, dtype=float) * self.volume_weight
        if method == "trapezoid":
            out = self.dx * (y.sum() - 0.5 * (y[0] + y[-1]))
        elif method == "simpson":
            from scipy.integrate import simpson

            out = float(simpson(y, dx=self.dx))
        else:
            raise InvalidInputError(f"unknown quadrature method {method!r}")
        return float(out)

    def derivative(self, values: np.ndarray) -> np.ndarray:
        """Second-order central differences, one-sided at the boundary."""
        return np.gradient(np.asarray(values, dtype=float), self.dx, edge_order=2)

    def divergence(self, u: np.ndarray) -> np.ndarray:
        """Divergence of the (radial) velocity field."""
        if self.geometry == "line":
            return self.derivative(u)
        r = self.x
        return self.derivative(u) + (self.dim - 1) * np.asarray(u) / r


# ---------------------------------------------------------------------------
# flow state

@dataclass(frozen=True)
class FlowState:
    """Density/velocity (and optional entropy) fields at one time."""

    grid: Grid
    rho: np.ndarray
    u: np.ndarray
    s: Optional[np.ndarray] = None
    t: float = 0.0

    def __post_init__(self):
        rho = np.asarray(self.rho, dtype=float)
        u = np.asarray(self.u, dtype=float)
        object.__setattr__(self, "rho", rho)
        object.__setattr__(self, "u", u)
        if rho.shape != (self.grid.ncells,) or u.shape != (self.grid.ncells,):
            raise InvalidInputError("field shapes must match the grid")
        if not np.all(np.isfinite(rho)) or not np.all(np.isfinite(u)):
            raise InvalidInputError("fields must be finite")
        if np.any(rho < 0):
            raise InvalidInputError("density must be nonnegative")
        if self.s is not None:
            s = np.asarray(self.s, dtype=float)
            object.__setattr__(self, "s", s)
            if s.shape != rho.shape:
                raise InvalidInputError("entropy field shape must match the grid")
            # -inf marks vacuum cells (p=0 with rho>0 impossible, see EOS)
            if np.any(np.isnan(s)) or np.any(s == np.inf):
                raise InvalidInputError("entropy field must not contain NaN/+inf")

    @property
    def has_entropy(self) -> bool:
        return self.s is not None


# ---------------------------------------------------------------------------
# equation of state

def pressure(state: FlowState, model: GasModel) -> np.ndarray:
    """Pointwise pressure: rho^gamma, times exp(s/c_nu) when entropy is carried.

    Vacuum cells give p = 0.
    """
    p = state.rho ** model.gamma
    if state.has_entropy:
        factor = np.where(state.rho > 0, np.exp(np.minimum(state.s / model.c_nu, 700.0)), 0.0)
        p = factor * p
    return p


def entropy_from_pressure(rho: np.ndarray, p: np.ndarray, model: GasModel) -> np.ndarray:
    """Invert the pressure law: s = c_nu * ln(p / rho^gamma).

    rho=0 with p>0 is rejected; p=0 with rho>0 yields a -inf sentinel.
    """
    rho = np.asarray(rho, dtype=float)
    p = np.asarray(p, dtype=float)
    if np.any((rho == 0) & (p > 0)):
        raise InvalidInputError("entropy undefined where rho=0 but p>0")
    if np.any(p < 0):
        raise InvalidInputError("pressure must be nonnegative")
    with np.errstate(divide="ignore"):
        out = np.where(
            rho > 0,
            model.c_nu * (np.log(np.where(p > 0, p, 1.0)) - model.gamma * np.log(np.where(rho > 0, rho, 1.0))),
            0.0,
        )
        out = np.where((rho > 0) & (p == 0), -np.inf, out)
    return out


# ---------------------------------------------------------------------------
# initial-data profiles

@dataclass(frozen=True)
class DensitySpec:
    """Density profile: gaussian, bump (compactly supported), or table.

    `floor` adds a constant background (useful for viscous runs, where a
    hard vacuum is outside the constant-viscosity model's validity).
    """

    kind: str
    amplitude: float = 1.0
    width: float = 1.0
    center: float = 0.0
    radius: float = 1.0
    order: int = 2
    floor: float = 0.0
    table: Optional[tuple] = None  # (x, rho) arrays for kind="table"

    def sample(self, x: np.ndarray) -> np.ndarray:
        if self.kind == "gaussian":
            out = self.amplitude * np.exp(-(((x - self.center) / self.width) ** 2))
        elif self.kind == "bump":
            xi = (x - self.center) / self.radius
            out = self.amplitude * np.where(np.abs(xi) <= 1.0, (1.0 - xi**2) ** self.order, 0.0)
        elif self.kind == "table":
            xs, ys = self.table
            out = np.interp(x, xs, ys, left=ys[0], right=ys[-1])
        else:
            raise InvalidInputError(f"unknown density profile {self.kind!r}")
        return out + self.floor


@dataclass(frozen=True)
class VelocitySpec:
    """Velocity profile; `linear` is u = a*x, `jet` is u = a*x*exp(-(x/w)^2)."""

    kind: str = "zero"
    amplitude: float = 0.0
    width: float = 1.0
    table: Optional[tuple] = None  # (x, u) arrays for kind="table"

    def sample(self, x: np.ndarray) -> np.ndarray:
        if self.kind == "zero":
            return np.zeros_like(x)
        if self.kind == "constant":
            return np.full_like(x, self.amplitude)
        if self.kind == "linear":
            return self.amplitude * x
        if self.kind == "jet":
            return self.amplitude * x * np.exp(-((x / self.width) ** 2))
        if self.kind == "tanh":
            return self.amplitude * np.tanh(x / self.width)
        if self.kind == "table":
            xs, us = self.table
            return np.interp(x, xs, us, left=us[0], right=us[-1])
        raise InvalidInputError(f"unknown velocity profile {self.kind!r}")


@dataclass(frozen=True)
class ProfileSpec:
    """Complete initial-data recipe; `entropy` (a constant) marks full-CNS data."""

    density: DensitySpec
    velocity: VelocitySpec = VelocitySpec()
    entropy: Optional[float] = None


def load_table(path) -> tuple:
    """Read a whitespace-separated x, rho, [u] table ('#' starts a comment)."""
    rows = []
    with open(path) as fh:
        for raw in fh:
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            parts = line.split()
            if len(parts) not in (2, 3):
                raise InvalidInputError(f"table rows need 2 or 3 columns, got {len(parts)}")
            rows.append([float(v) for v in parts])
    if not rows:
        raise InvalidInputError("empty table file")
    ncols = len(rows[0])
    if any(len(r) != ncols for r in rows):
        raise InvalidInputError("inconsistent column count in table file")
    data = np.array(rows, dtype=float)
    order = np.argsort(data[:, 0])
    data = data[order]
    x, rho = data[:, 0], data[:, 1]
    u = data[:, 2] if ncols == 3 else None
    return x, rho, u


def build_initial_data(profile: ProfileSpec, grid: Grid, model: GasModel) -> FlowState:
    """Sample a ProfileSpec on the grid, validating sign and finiteness."""
    x = grid.x
    rho = profile.density.sample(x)
    u = profile.velocity.sample(x)
    if not np.all(np.isfinite(rho)) or not np.all(np.isfinite(u)):
        raise InvalidInputError("profile produced non-finite samples")
    if np.any(rho < 0):
        raise InvalidInputError("profile produced negative density")
    s = None
    if profile.entropy is not None:
        s = np.full_like(rho, float(profile.entropy))
    return FlowState(grid=grid, rho=rho, u=u, s=s, t=0.0)


# ---------------------------------------------------------------------------
# decay validation

@dataclass(frozen=True)
class DecayReport:
    """Finite-window estimate of the far-field decay assumptions."""

    tail_mass: float
    tail_flags: dict
    worst_ratio: float
    exponents: dict


def _shell_max(values: np.ndarray, coords: np.ndarray, lo: float, hi: float) -> float:
    mask = (np.abs(coords) > lo) & (np.abs(coords) <= hi)
    if not mask.any():
        return 0.0
    return float(np.max(np.abs(values[mask])))


def _tail_mass_estimate(state: FlowState) -> float:
    """Geometric extrapolation of the density tail beyond the grid."""
    grid = state.grid
    w = state.rho * grid.volume_weight
    total = 0.0
    edges = [(-2, -1)] if grid.geometry == "radial" else [(1, 0), (-2, -1)]
    for inner, outer in edges:
        a, b = w[inner], w[outer]
        if b <= 0:
            continue
        q = b / a if a > 0 else 1.0
        if q >= 1.0:
            q = 0.5  # non-decaying edge: crude half-life fallback
        total += b * grid.dx * q / (1.0 - q)
    return total


def validate_decay(state: FlowState, model: GasModel) -> DecayReport:
    """Estimate far-field decay exponents from the two outermost dyadic shells.

    Each condition requires |q(x)| = o(|x|^-k); the measured exponent comes
    from the log-ratio of shell maxima.  Report-only: nothing is raised.
    """
    grid = state.grid
    if grid.ncells < 32:
        raise InvalidInputError("decay validation needs at least 4 dyadic shells")
    n = model.dim
    coords = grid.x
    L = grid.half_width
    p = pressure(state, model)
    quantities = {
        "momentum_density": (state.rho * state.u, n + 1),
        "velocity_gradient": (grid.derivative(state.u), n),
        "pressure": (p, n),
    }
    if isinstance(model.regime, Degenerate):
        quantities["weighted_velocity_gradient"] = (
            state.rho ** model.regime.alpha * np.abs(grid.derivative(state.u)),
            n,
        )

    flags = {}
    exponents = {}
    peak = max(float(np.max(state.rho)), 1e-300)
    floor = 1e-13 * peak
    r_outer = math.sqrt(L * L / 2)  # geometric means of shell bounds
    r_inner = math.sqrt(L * L / 8)
    for name, (values, required) in quantities.items():
        m_out = _shell_max(values, coords, L / 2, L)
        m_in = _shell_max(values, coords, L / 4, L / 2)
        if m_out <= floor:
            flags[name] = "satisfied"
            exponents[name] = math.inf
            continue
        if m_in <= floor:
            flags[name] = "indeterminate"
            exponents[name] = math.nan
            continue
        measured = -math.log(m_out / m_in) / math.log(r_outer / r_inner)
        exponents[name] = measured
        flags[name] = "satisfied" if measured > required else "violated"

    ratios = [
        exponents[k] / req
        for k, (_, req) in quantities.items()
        if math.isfinite(exponents[k])
    ]
    worst = min(ratios) if ratios else math.inf
    return DecayReport(
        tail_mass=_tail_mass_estimate(state),
        tail_flags=flags,
        worst_ratio=worst,
        exponents=exponents,
    )
