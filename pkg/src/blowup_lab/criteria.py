"""Initial-data blow-up criteria, their explicit constants, and the
compact-support life-span bound.

Every check returns a CriterionReport with both sides of the inequality,
the constants used, and (where a free parameter appears) the scan trace
over its admissible interval.  All evaluation is pure.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .errors import (
    InconsistentDataError,
    InvalidInputError,
    MissingInputError,
    OutOfRegimeError,
)
from .functionals import interpolation_constant, snapshot
from .gas_state import Degenerate, FlowState, GasModel

__all__ = [
    "Constants",
    "constants_table",
    "CriterionReport",
    "check_cns",
    "check_icns",
    "check_dicns_1d_high_alpha",
    "check_dicns_1d_mid_alpha",
    "check_dicns_nd",
    "compact_support_lifespan",
    "criterion_rhs",
]

# number of points in the free-parameter log scan
_SCAN_POINTS = 64


# ---------------------------------------------------------------------------
# explicit constants

@dataclass(frozen=True)
class ConstantEntry:
    value: float
    formula: str


def _gamma_fn(x: float) -> float:
    return math.gamma(x)


class Constants:
    """Lazily evaluated table of the explicit constants.

    Each entry records its defining formula; requesting a constant whose
    prerequisite scalars were not supplied raises MissingInputError naming
    both the constant and the missing scalars.
    """

    def __init__(self, model: GasModel, **scalars):
        self.model = model
        self.scalars = {k: v for k, v in scalars.items() if v is not None}
        self._cache: dict[str, ConstantEntry] = {}

    # -- helpers -----------------------------------------------------------
    def _need(self, name: str, *keys: str) -> list:
        missing = [k for k in keys if k not in self.scalars]
        if missing:
            raise MissingInputError(name, missing)
        return [self.scalars[k] for k in keys]

    def _alpha(self, name: str) -> float:
        if not isinstance(self.model.regime, Degenerate):
            raise MissingInputError(name, ["degenerate viscosity exponent alpha"])
        return self.model.regime.alpha

    # -- public ------------------------------------------------------------
    def entry(self, name: str) -> ConstantEntry:
        if name not in self._cache:
            self._cache[name] = self._build(name)
        return self._cache[name]

    def get(self, name: str) -> float:
        return self.entry(name).value

    def available(self) -> dict:
        """All constants computable from the supplied scalars."""
        out = {}
        for name in self._BUILDERS:
            try:
                out[name] = self.entry(name)
            except MissingInputError:
                pass
        return out

    # -- definitions -------------------------------------------------------
    def _build(self, name: str) -> ConstantEntry:
        try:
            builder = self._BUILDERS[name]
        except KeyError:
            raise MissingInputError(name, ["unknown constant"]) from None
        return builder(self)

    def _c1(self):
        g, n = self.model.gamma, self.model.dim
        return ConstantEntry(
            interpolation_constant(g, n),
            "2*|B1|^(2(g-1)/((n+2)g-n))",
        )

    def _c2(self):
        (m0, s1) = self._need("C2", "M0", "s1")
        g, n = self.model.gamma, self.model.dim
        q = (n + 2) * g - n
        val = (
            (_gamma_fn(n / 2 + 1) / math.pi ** (n / 2)) ** (g - 1)
            * math.exp(s1 / self.model.c_nu)
            * m0 ** (q / 2)
            / (2 ** (q / 2) * (g - 1))
        )
        return ConstantEntry(val, "(Gamma(n/2+1)/pi^(n/2))^(g-1)*exp(s1/c_nu)*M0^(Q/2)/(2^(Q/2)(g-1))")

    def _c3(self):
        (m0,) = self._need("C3", "M0")
        g, n = self.model.gamma, self.model.dim
        q = (n + 2) * g - n
        val = (
            (_gamma_fn(n / 2 + 1) / math.pi ** (n / 2)) ** (g - 1)
            * m0 ** (q / 2)
            / (2 ** (q / 2) * (g - 1))
        )
        return ConstantEntry(val, "(Gamma(n/2+1)/pi^(n/2))^(g-1)*M0^(Q/2)/(2^(Q/2)(g-1))")

    def _c4(self):
        (j0,) = self._need("C4", "J0")
        return ConstantEntry(j0, "J(0)")

    def _c5(self):
        (ij0,) = self._need("C5", "IJ0")
        return ConstantEntry(ij0, "IJ(0)")

    def _c13(self):
        (e,) = self._need("C13", "energy_bound")
        return ConstantEntry(e, "initial energy bound")

    def _c14(self):
        (c,) = self._need("C14", "density_ceiling")
        return ConstantEntry(c, "assumed density ceiling max rho")

    def _c16_c18_product(self):
        a = self._alpha("C16*C18")
        (m0, c14) = self._need("C16*C18", "M0", "density_ceiling")
        return ConstantEntry(a / 4 * m0 * c14 ** (a - 1), "(a/4)*M0*C14^(a-1)")

    def _c18(self):
        (v,) = self._need("C18", "free_param")
        return ConstantEntry(v, "free parameter in (0, P0^2/(2 M0))")

    def _c16(self):
        return ConstantEntry(
            self.get("C16*C18") / self.get("C18"), "(C16*C18 product)/C18"
        )

    def _c19(self):
        a = self._alpha("C19")
        (m0, c13) = self._need("C19", "M0", "energy_bound")
        g = self.model.gamma
        val = (g - 1) ** ((a - 1) / (g - 1)) * m0 ** ((g - a) / (g - 1)) * c13 ** ((a - 1) / (g - 1))
        return ConstantEntry(val, "(g-1)^((a-1)/(g-1))*M0^((g-a)/(g-1))*C13^((a-1)/(g-1))")

    def _c21_c22_product(self):
        a = self._alpha("C21*C22")
        n = self.model.dim
        val = n / 4 * (1 + n * (a - 1)) ** 2 * self.get("C19")
        return ConstantEntry(val, "(n/4)*(1+n(a-1))^2*C19")

    def _c22(self):
        (v,) = self._need("C22", "free_param")
        return ConstantEntry(v, "free parameter in (0, P0^2/(2 M0))")

    def _c21(self):
        return ConstantEntry(
            self.get("C21*C22") / self.get("C22"), "(C21*C22 product)/C22"
        )

    def _c23(self):
        return ConstantEntry(self.get("C3"), "C3")

    def _c24(self):
        a = self._alpha("C24")
        (c14,) = self._need("C24", "density_ceiling")
        g = self.model.gamma
        return ConstantEntry(a / 4 * c14 ** (a - g), "(a/4)*C14^(a-g)")

    def _c25(self):
        a = self._alpha("C25")
        (c14,) = self._need("C25", "density_ceiling")
        g = self.model.gamma
        return ConstantEntry(a * (g - 1) / 4 * c14 ** (a - g), "(a(g-1)/4)*C14^(a-g)")

    def _c26(self):
        (ij0,) = self._need("C26", "IJ0")
        return ConstantEntry(ij0 * math.exp(self.get("C25")), "IJ(0)*exp(C25)")

    def _c27(self):
        a = self._alpha("C27")
        (m0,) = self._need("C27", "M0")
        g, n = self.model.gamma, self.model.dim
        val = (
            (g - 1)
            / (4 * (a - 1) * (2 * a - g - 1))
            * (1 + n * (a - 1)) ** 2
            * (g - 1) ** ((a - 1) / (g - 1))
            * m0 ** ((g - a) / (g - 1))
        )
        return ConstantEntry(
            val, "(g-1)/(4(a-1)(2a-g-1))*(1+n(a-1))^2*(g-1)^((a-1)/(g-1))*M0^((g-a)/(g-1))"
        )

    def _c28(self):
        a = self._alpha("C28")
        g = self.model.gamma
        return ConstantEntry((2 * a - g - 1) / (g - 1), "(2a-g-1)/(g-1)")

    def _c29(self):
        (ij0,) = self._need("C29", "IJ0")
        return ConstantEntry(ij0 * math.exp(self.get("C27")), "IJ(0)*exp(C27)")

    def _c30(self):
        a = self._alpha("C30")
        (m0,) = self._need("C30", "M0")
        g = self.model.gamma
        val = (
            a * (g - 1) / (4 * (2 * a - g - 1))
            * (g - 1) ** ((a - 1) / (g - 1))
            * m0 ** ((g - a) / (g - 1))
        )
        return ConstantEntry(val, "a(g-1)/(4(2a-g-1))*(g-1)^((a-1)/(g-1))*M0^((g-a)/(g-1))")

    def _c31(self):
        (ij0,) = self._need("C31", "IJ0")
        return ConstantEntry(ij0 * math.exp(self.get("C30")), "IJ(0)*exp(C30)")

    # C32 appears in the proof's constant list as the coefficient the
    # statement calls C31; both names resolve to the same value.
    def _c32(self):
        return ConstantEntry(self.get("C31"), "alias of C31")

    _BUILDERS: dict = {
        "C1": _c1,
        "C2": _c2,
        "C3": _c3,
        "C4": _c4,
        "C5": _c5,
        "C13": _c13,
        "C14": _c14,
        "C16*C18": _c16_c18_product,
        "C16": _c16,
        "C18": _c18,
        "C19": _c19,
        "C21*C22": _c21_c22_product,
        "C21": _c21,
        "C22": _c22,
        "C23": _c23,
        "C24": _c24,
        "C25": _c25,
        "C26": _c26,
        "C27": _c27,
        "C28": _c28,
        "C29": _c29,
        "C30": _c30,
        "C31": _c31,
        "C32": _c32,
    }


def constants_table(model: GasModel, **scalars) -> Constants:
    """Build the lazily evaluated constants table from data-derived scalars.

    Recognised scalars: M0, P0, F0, G0, E0, IE0, Ei0, J0, IJ0, s1,
    energy_bound (the assumed energy ceiling), density_ceiling (the assumed
    max density), free_param (the chosen scan parameter).
    """
    return Constants(model, **scalars)


# ---------------------------------------------------------------------------
# criterion reports

@dataclass(frozen=True)
class CriterionReport:
    criterion: str
    lhs: float
    rhs: float
    satisfied: bool
    inputs: dict
    free_param: Optional[dict] = None
    notes: tuple = ()

    @property
    def margin(self) -> float:
        return self.rhs - self.lhs


def criterion_rhs(gamma: float, n: int) -> float:
    """Right-hand side shared by the inviscid/constant-viscosity criteria."""
    q = (n + 2) * gamma - n
    return (
        (_gamma_fn(n / 2 + 1) / math.pi ** (n / 2)) ** (gamma - 1)
        / (2 ** (q / 2) * (gamma - 1))
    )


def _initial_parts(data: FlowState, model: GasModel, method: str):
    snap = snapshot(data, model, method)
    # the criteria are statements about t=0 data; recompute the combined
    # functional with the t=0 weight regardless of the state's timestamp
    j0 = snap.inertia - snap.momentum_weight + snap.total
    return snap, j0


def _require_gamma_range(gamma: float, n: int, hi_inclusive: bool = True):
    hi = 1.0 + 2.0 / n
    ok = gamma <= hi if hi_inclusive else gamma < hi
    if not (gamma > 1.0 and ok):
        op = "<=" if hi_inclusive else "<"
        raise OutOfRegimeError(f"criterion needs 1 < gamma {op} 1+2/n = {hi}, got {gamma}")


def check_cns(
    data: FlowState,
    model: GasModel,
    entropy_shift: float = 0.0,
    method: str = "trapezoid",
) -> CriterionReport:
    """Initial-data criterion for the full (heat-conduction-free) system.

    `entropy_shift` probes the criterion's explicit entropy dependence: it
    shifts the minimum entropy s1 while keeping the energy functionals at
    the supplied data's values, so the left side scales by exactly
    exp(-shift/c_nu).
    """
    _require_gamma_range(model.gamma, model.dim)
    if not data.has_entropy:
        raise InvalidInputError("full-system criterion needs an entropy field")
    snap, j0 = _initial_parts(data, model, method)
    if snap.mass <= 0 or snap.total <= 0:
        raise InconsistentDataError("criterion needs M(0) > 0 and E(0) > 0")
    if j0 <= 0:
        raise InconsistentDataError("J(0) must be positive for consistent data")
    live = data.rho > 0
    if not live.any():
        raise InconsistentDataError("no mass-carrying cells")
    s1 = float(np.min(data.s[live])) + entropy_shift

    g, n = model.gamma, model.dim
    q_exp = n * (g - 1) / 2
    big_q = (n + 2) * g - n
    entropy_factor = math.exp(s1 / model.c_nu) if math.isfinite(s1) else 0.0
    if entropy_factor == 0.0:
        lhs = math.inf
    else:
        lhs = snap.total**q_exp * j0 / (entropy_factor * snap.mass ** (big_q / 2))
    rhs = criterion_rhs(g, n)
    notes = ()
    if entropy_shift:
        notes = ("entropy_shift applied to s1 only; energy functionals kept at data values",)
    return CriterionReport(
        criterion="full-system",
        lhs=lhs,
        rhs=rhs,
        satisfied=lhs < rhs,
        inputs={
            "M0": snap.mass,
            "P0": snap.momentum,
            "E0": snap.total,
            "J0": j0,
            "F0": snap.momentum_weight,
            "G0": snap.inertia,
            "s1": s1,
            "gamma": g,
            "n": n,
            "c_nu": model.c_nu,
            "entropy_shift": entropy_shift,
        },
        notes=notes,
    )


def check_icns(data: FlowState, model: GasModel, method: str = "trapezoid") -> CriterionReport:
    """Initial-data criterion for the isentropic system."""
    _require_gamma_range(model.gamma, model.dim)
    if data.has_entropy:
        raise InvalidInputError("isentropic criterion expects entropy-free data")
    snap, ij0 = _initial_parts(data, model, method)
    if snap.mass <= 0 or snap.total <= 0:
        raise InconsistentDataError("criterion needs M(0) > 0 and IE(0) > 0")
    if ij0 <= 0:
        raise InconsistentDataError("IJ(0) must be positive for consistent data")
    g, n = model.gamma, model.dim
    big_q = (n + 2) * g - n
    lhs = snap.total ** (n * (g - 1) / 2) * ij0 / snap.mass ** (big_q / 2)
    rhs = criterion_rhs(g, n)
    return CriterionReport(
        criterion="isentropic",
        lhs=lhs,
        rhs=rhs,
        satisfied=lhs < rhs,
        inputs={
            "M0": snap.mass,
            "P0": snap.momentum,
            "IE0": snap.total,
            "IJ0": ij0,
            "F0": snap.momentum_weight,
            "G0": snap.inertia,
            "gamma": g,
            "n": n,
        },
    )


# ---------------------------------------------------------------------------
# degenerate-viscosity criteria (free-parameter scan)

def _free_param_interval(p0: float, m0: float) -> float:
    if p0 == 0:
        raise InconsistentDataError(
            "free-parameter interval (0, P(0)^2/(2 M(0))) is empty: zero initial momentum"
        )
    return p0 * p0 / (2.0 * m0)


def _scan_free_param(lhs_of: Callable[[float], float], rhs: float, hi: float):
    values = np.geomspace(hi * 1e-8, hi * (1.0 - 1e-9), _SCAN_POINTS)
    lhs_vals = np.array([lhs_of(v) for v in values])
    margins = rhs - lhs_vals
    best = int(np.argmax(margins))
    trace = {
        "name": None,  # filled by caller
        "value": float(values[best]),
        "interval": (0.0, hi),
        "scan_values": values,
        "scan_margins": margins,
    }
    return float(lhs_vals[best]), trace


def _dicns_common(data: FlowState, model: GasModel, method: str):
    if data.has_entropy:
        raise InvalidInputError("degenerate-viscosity criteria expect isentropic data")
    if not isinstance(model.regime, Degenerate):
        raise InvalidInputError("model must use the degenerate-viscosity regime")
    snap, ij0 = _initial_parts(data, model, method)
    if snap.mass <= 0 or snap.total <= 0:
        raise InconsistentDataError("criterion needs M(0) > 0 and IE(0) > 0")
    return snap, ij0


def check_dicns_1d_high_alpha(
    data: FlowState,
    model: GasModel,
    density_ceiling: Optional[float] = None,
    method: str = "trapezoid",
) -> CriterionReport:
    """1D criterion for alpha >= gamma under an assumed density ceiling."""
    g, n = model.gamma, model.dim
    if n != 1:
        raise OutOfRegimeError("this criterion is one-dimensional")
    if not (1.0 < g <= 3.0):
        raise OutOfRegimeError(f"needs 1 < gamma <= 3, got {g}")
    snap, ij0 = _dicns_common(data, model, method)
    alpha = model.regime.alpha
    if alpha < g:
        raise OutOfRegimeError(f"needs alpha >= gamma, got alpha={alpha}, gamma={g}")
    max_rho = float(np.max(data.rho))
    if density_ceiling is None:
        density_ceiling = max_rho
    if density_ceiling < max_rho:
        raise InconsistentDataError(
            f"assumed density ceiling {density_ceiling} below max rho0 {max_rho}"
        )
    hi = _free_param_interval(snap.momentum, snap.mass)
    m0, ie0 = snap.mass, snap.total
    rhs = math.exp((1 - g) / 4 * density_ceiling ** (alpha - g)) / (4 ** (2 * g - 1) * (g - 1))

    def lhs_of(c18):
        return ij0 * (0.5 * (max(2.0, g - 1.0) * ie0 + c18)) ** ((g - 1) / 2) / m0 ** ((3 * g - 1) / 2)

    lhs, trace = _scan_free_param(lhs_of, rhs, hi)
    trace["name"] = "C18"
    return CriterionReport(
        criterion="degenerate-1d-high-alpha",
        lhs=lhs,
        rhs=rhs,
        satisfied=lhs < rhs,
        inputs={
            "M0": m0,
            "P0": snap.momentum,
            "IE0": ie0,
            "IJ0": ij0,
            "F0": snap.momentum_weight,
            "G0": snap.inertia,
            "gamma": g,
            "n": n,
            "alpha": alpha,
            "density_ceiling": density_ceiling,
        },
        free_param=trace,
    )


def check_dicns_1d_mid_alpha(
    data: FlowState,
    model: GasModel,
    energy_bound: Optional[float] = None,
    method: str = "trapezoid",
) -> CriterionReport:
    """1D criterion for (gamma+1)/2 < alpha <= gamma under the energy bound."""
    g, n = model.gamma, model.dim
    if n != 1:
        raise OutOfRegimeError("this criterion is one-dimensional")
    if not (1.0 < g < 3.0):
        raise OutOfRegimeError(f"needs 1 < gamma < 3, got {g}")
    snap, ij0 = _dicns_common(data, model, method)
    alpha = model.regime.alpha
    if not ((g + 1) / 2 < alpha <= g):
        raise OutOfRegimeError(
            f"needs (gamma+1)/2 < alpha <= gamma, got alpha={alpha}, gamma={g}"
        )
    if energy_bound is None:
        energy_bound = snap.total
    hi = _free_param_interval(snap.momentum, snap.mass)
    m0, ie0 = snap.mass, snap.total
    exp_arg = (
        alpha * (1 - g) / (4 * (2 * alpha - g - 1))
        * (g - 1) ** ((alpha - 1) / (g - 1))
        * m0 ** ((g - alpha) / (g - 1))
    )
    rhs = _gamma_fn(1.5) ** (g - 1) / ((g - 1) * math.pi ** (g - 1) * 2 ** ((3 * g - 1) / 2))

    def lhs_of(c18):
        return (
            ij0
            * (0.5 * (max(2.0, g - 1.0) * ie0 + c18)) ** ((g - 1) / 2)
            / (m0 ** ((3 * g - 1) / 2) * math.exp(exp_arg))
        )

    lhs, trace = _scan_free_param(lhs_of, rhs, hi)
    trace["name"] = "C18"
    return CriterionReport(
        criterion="degenerate-1d-mid-alpha",
        lhs=lhs,
        rhs=rhs,
        satisfied=lhs < rhs,
        inputs={
            "M0": m0,
            "P0": snap.momentum,
            "IE0": ie0,
            "IJ0": ij0,
            "F0": snap.momentum_weight,
            "G0": snap.inertia,
            "gamma": g,
            "n": n,
            "alpha": alpha,
            "energy_bound": energy_bound,
        },
        free_param=trace,
    )


def check_dicns_nd(
    data: FlowState,
    model: GasModel,
    energy_bound: Optional[float] = None,
    method: str = "trapezoid",
) -> CriterionReport:
    """Multi-dimensional criterion for (gamma+1)/2 < alpha <= gamma."""
    g, n = model.gamma, model.dim
    if n < 2:
        raise OutOfRegimeError("this criterion needs n >= 2 (radially symmetric data)")
    _require_gamma_range(g, n, hi_inclusive=False)
    snap, ij0 = _dicns_common(data, model, method)
    alpha = model.regime.alpha
    if not ((g + 1) / 2 < alpha <= g):
        raise OutOfRegimeError(
            f"needs (gamma+1)/2 < alpha <= gamma, got alpha={alpha}, gamma={g}"
        )
    if energy_bound is None:
        energy_bound = snap.total
    hi = _free_param_interval(snap.momentum, snap.mass)
    m0, ie0 = snap.mass, snap.total
    big_q = (n + 2) * g - n
    exp_arg = (
        (1 - g)
        / (4 * (alpha - 1) * (2 * alpha - g - 1))
        * (1 + n * (alpha - 1)) ** 2
        * (g - 1) ** ((alpha - 1) / (g - 1))
        * m0 ** ((g - alpha) / (g - 1))
    )
    rhs = _gamma_fn(n / 2 + 1) ** (g - 1) / (
        (g - 1) * math.pi ** (n / 2 * (g - 1)) * 2 ** (big_q / 2)
    )

    def lhs_of(c22):
        return (
            ij0
            * (0.5 * (max(2.0, n * (g - 1.0)) * ie0 + c22)) ** ((g - 1) / 2)
            / (m0 ** (big_q / 2) * math.exp(exp_arg))
        )

    lhs, trace = _scan_free_param(lhs_of, rhs, hi)
    trace["name"] = "C22"
    return CriterionReport(
        criterion="degenerate-nd",
        lhs=lhs,
        rhs=rhs,
        satisfied=lhs < rhs,
        inputs={
            "M0": m0,
            "P0": snap.momentum,
            "IE0": ie0,
            "IJ0": ij0,
            "F0": snap.momentum_weight,
            "G0": snap.inertia,
            "gamma": g,
            "n": n,
            "alpha": alpha,
            "energy_bound": energy_bound,
        },
        free_param=trace,
    )


# ---------------------------------------------------------------------------
# compact-support life-span bound

def compact_support_lifespan(
    M0: float,
    E0: float,
    F0: float,
    G0: float,
    D: float,
    gamma: float,
    n: int,
) -> float:
    """Largest T compatible with the inertia staying under (1/2) M0 D^2.

    Solves a*T^2 + F0*T + G0 = (1/2) M0 D^2 with a = n(gamma-1)E0/2 when
    gamma <= 1+2/n and a = E0 otherwise; the life span of a compactly
    supported smooth solution must be below the returned value.
    """
    if M0 <= 0 or E0 <= 0 or D <= 0:
        raise InvalidInputError("needs M0 > 0, E0 > 0, D > 0")
    cap = 0.5 * M0 * D * D
    if G0 > cap * (1 + 1e-12):
        raise InconsistentDataError(
            "G(0) exceeds (1/2) M0 D^2, contradicting the compact-support bound at t=0"
        )
    a = n * (gamma - 1) / 2 * E0 if gamma <= 1 + 2 / n else E0
    # positive root of a T^2 + F0 T + (G0 - cap) = 0; G0 <= cap makes the
    # discriminant at least F0^2 for either sign of F0
    disc = F0 * F0 - 4 * a * (G0 - cap)
    return (-F0 + math.sqrt(disc)) / (2 * a)
