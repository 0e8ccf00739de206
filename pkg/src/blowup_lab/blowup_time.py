"""Two-sided envelopes on the potential energy and the latest blow-up time.

For a satisfied criterion the potential-energy lower envelope (interpolation
bound divided by the quadratic ceiling on the inertia) eventually exceeds the
decaying upper envelope; the first crossing time T* is the latest time any
smooth solution with that data can exist.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .criteria import Constants, CriterionReport
from .errors import InconsistentDataError, InvalidInputError, OutOfRegimeError
from .functionals import FunctionalSnapshot

__all__ = ["BoundCurves", "build_bounds", "TStarResult", "find_tstar"]

_SCAN_CAP = 1e12
_REFINE_POINTS = 4096
_REL_TOL = 1e-10


@dataclass(frozen=True)
class BoundCurves:
    """Envelopes bounding the potential energy of any smooth solution.

    `lower` and `upper` bound E_i(t) (or I(t)) from below and above;
    `g_lower`/`g_upper` are the quadratic inertia bounds the lower envelope
    is built from; `f_lower`/`f_upper` are their time derivatives bounding
    the momentum weight.  `low_coeff`/`up_coeff` are the coefficients of the
    shared leading decay power, so `low_coeff > up_coeff` predicts a
    crossing.
    """

    regime: str
    gamma_branch: str  # "low" when gamma <= 1+2/n, else "high"
    lower: Callable[[float], float]
    upper: Callable[[float], float]
    g_lower: Callable[[float], float]
    g_upper: Callable[[float], float]
    f_lower: Callable[[float], float]
    f_upper: Callable[[float], float]
    constants: Constants
    decay_power: float
    low_coeff: float
    up_coeff: float
    satisfied: bool

    def limit_comparison(self, t: float = 1e8) -> dict:
        """Numerical version of the asymptotic coefficient comparison."""
        measured = self.lower(t) * (1.0 + t) ** self.decay_power
        return {
            "t": t,
            "lower_coefficient": measured,
            "lower_coefficient_exact": self.low_coeff,
            "upper_coefficient": self.up_coeff,
            "crossing_expected": measured > self.up_coeff,
        }

    def export(self, times) -> np.ndarray:
        """Rows (t, lower, upper) for plotting."""
        times = np.asarray(times, dtype=float)
        return np.column_stack(
            [times, [self.lower(t) for t in times], [self.upper(t) for t in times]]
        )


def _quadratic(a2: float, a1: float, a0: float) -> Callable[[float], float]:
    return lambda t: (a2 * t + a1) * t + a0


def _linear(a1: float, a0: float) -> Callable[[float], float]:
    return lambda t: a1 * t + a0


def build_bounds(
    report: CriterionReport,
    constants: Constants,
    snapshot0: FunctionalSnapshot,
    check_sandwich: bool = True,
) -> BoundCurves:
    """Assemble the envelopes for the regime the report was issued under.

    The t=0 sandwich lower(0) <= potential(0) <= upper(0) is asserted; data
    violating it is inconsistent with the bounds being built.  Curves are
    built even for unsatisfied reports (they then never cross).
    """
    inp = report.inputs
    g, n = inp["gamma"], inp["n"]
    f0, g0 = inp["F0"], inp["G0"]
    low_branch = g <= 1.0 + 2.0 / n
    branch = "low" if low_branch else "high"
    q = n * (g - 1.0) / 2.0

    if report.criterion in ("full-system", "isentropic"):
        e0 = inp["E0"] if report.criterion == "full-system" else inp["IE0"]
        c_low = constants.get("C2" if report.criterion == "full-system" else "C3")
        c_up = constants.get("C4" if report.criterion == "full-system" else "C5")
        if report.criterion == "full-system":
            up2 = e0 if low_branch else q * e0
            lo2 = q * e0 if low_branch else e0
        else:
            up2 = e0 if low_branch else q * e0
            lo2 = inp["P0"] ** 2 / (2.0 * inp["M0"]) if "P0" in inp else 0.0
        g_upper = _quadratic(up2, f0, g0)
        g_lower = _quadratic(lo2, f0, g0)
        f_upper = _linear(2.0 * up2, f0)
        f_lower = _linear(2.0 * lo2, f0)
        decay = 2.0 * q if low_branch else 2.0
        lower = lambda t: c_low / g_upper(t) ** q
        upper = lambda t: c_up / (1.0 + t) ** decay
        low_coeff = c_low / up2**q if up2 > 0 else math.inf
        up_coeff = c_up
    elif report.criterion in (
        "degenerate-1d-high-alpha",
        "degenerate-1d-mid-alpha",
        "degenerate-nd",
    ):
        ie0, m0, p0 = inp["IE0"], inp["M0"], inp["P0"]
        free = report.free_param["value"] if report.free_param else None
        if free is None:
            raise InvalidInputError("degenerate curves need the criterion's free parameter")
        if report.criterion == "degenerate-1d-high-alpha":
            slope_const = constants.get("C16*C18") / free
        else:
            slope_const = constants.get("C21*C22") / free
        gap = p0 * p0 / (2.0 * m0) - ie0
        brace = max(2.0, n * (g - 1.0)) * ie0 + free
        up2 = 0.5 * brace
        g_upper = _quadratic(up2, -slope_const * gap + f0, g0)
        g_lower = _quadratic(0.5 * (p0 * p0 / m0 - free), slope_const * gap + f0, g0)
        f_upper = _linear(brace, -slope_const * gap + f0)
        f_lower = _linear(p0 * p0 / m0 - free, slope_const * gap + f0)
        c_low = constants.get("C23")
        decay = 2.0 * q
        if report.criterion == "degenerate-1d-high-alpha":
            c_up, c_exp = constants.get("C26"), constants.get("C25")
            upper = lambda t: c_up / (1.0 + t) ** decay * math.exp(-c_exp / (1.0 + t))
        else:
            c28 = constants.get("C28")
            if report.criterion == "degenerate-1d-mid-alpha":
                c_up, c_exp = constants.get("C31"), constants.get("C30")
            else:
                c_up, c_exp = constants.get("C29"), constants.get("C27")
            upper = lambda t: (
                c_up / (1.0 + t) ** decay * math.exp(-c_exp / (1.0 + t) ** c28)
                + 1.0 / (1.0 + t) ** 2
            )
        lower = lambda t: c_low / g_upper(t) ** q
        low_coeff = c_low / up2**q
        up_coeff = c_up
    else:
        raise OutOfRegimeError(f"no bound curves for regime {report.criterion!r}")

    if check_sandwich:
        lo0, up0 = lower(0.0), upper(0.0)
        pot0 = snapshot0.potential
        tol = 1e-9 * max(1.0, abs(pot0))
        if not (lo0 <= pot0 + tol and pot0 <= up0 + tol):
            raise InconsistentDataError(
                f"t=0 sandwich violated: lower(0)={lo0}, potential={pot0}, upper(0)={up0}"
            )
    return BoundCurves(
        regime=report.criterion,
        gamma_branch=branch,
        lower=lower,
        upper=upper,
        g_lower=g_lower,
        g_upper=g_upper,
        f_lower=f_lower,
        f_upper=f_upper,
        constants=constants,
        decay_power=decay,
        low_coeff=low_coeff,
        up_coeff=up_coeff,
        satisfied=report.satisfied,
    )


@dataclass(frozen=True)
class TStarResult:
    """Location of the first lower/upper envelope crossing, if any."""

    tstar: Optional[float]
    bracket: Optional[tuple]
    residual: Optional[float]
    sign_changes: tuple
    trace: dict
    diagnostic: str = ""


def _bisect(f: Callable[[float], float], lo: float, hi: float) -> tuple:
    """Bisect f (negative at lo, positive at hi) to _REL_TOL relative width."""
    iterations = 0
    while hi - lo > _REL_TOL * max(1.0, abs(hi)) and iterations < 200:
        mid = 0.5 * (lo + hi)
        if f(mid) > 0.0:
            hi = mid
        else:
            lo = mid
        iterations += 1
    return 0.5 * (lo + hi), iterations


def find_tstar(curves: BoundCurves, cap: float = _SCAN_CAP) -> TStarResult:
    """Smallest t >= 0 where the lower envelope exceeds the upper one.

    Geometric scan {0, 1, 2, 4, ...} up to `cap` to bracket a sign change,
    uniform refinement inside the bracket to isolate the earliest one, then
    bisection to 1e-10 relative.  Returns tstar=None with the asymptotic
    coefficient diagnostic when no crossing exists below the cap.
    """
    gap = lambda t: curves.lower(t) - curves.upper(t)

    scan = [0.0]
    t = 1.0
    while t <= cap:
        scan.append(t)
        t *= 2.0
    values = [gap(t) for t in scan]
    sign_changes = [
        (scan[i], scan[i + 1])
        for i in range(len(scan) - 1)
        if values[i] <= 0.0 < values[i + 1] or values[i] > 0.0 >= values[i + 1]
    ]
    trace = {"scan_times": scan, "scan_points": len(scan)}

    if values[0] > 0.0:
        # already crossed at t=0 (possible only by sandwich-tolerance slack)
        return TStarResult(0.0, (0.0, 0.0), values[0], tuple(sign_changes), trace)

    first_up = next((i for i in range(1, len(values)) if values[i] > 0.0), None)
    if first_up is None:
        comp = curves.limit_comparison()
        return TStarResult(
            None,
            None,
            None,
            tuple(sign_changes),
            trace,
            diagnostic=(
                "no crossing below cap; asymptotic lower coefficient "
                f"{comp['lower_coefficient']:.6e} vs upper {comp['upper_coefficient']:.6e}"
                f" (crossing expected: {comp['crossing_expected']})"
            ),
        )

    lo, hi = scan[first_up - 1], scan[first_up]
    # isolate the earliest sign change inside the bracket
    fine = np.linspace(lo, hi, _REFINE_POINTS)
    fine_vals = np.array([gap(t) for t in fine])
    pos = np.nonzero(fine_vals > 0.0)[0]
    k = int(pos[0])
    if k > 0:
        lo, hi = float(fine[k - 1]), float(fine[k])
    tstar, iterations = _bisect(gap, lo, hi)
    trace["bisection_iterations"] = iterations
    trace["refined_bracket"] = (lo, hi)
    return TStarResult(
        tstar=tstar,
        bracket=(lo, hi),
        residual=gap(tstar),
        sign_changes=tuple(sign_changes),
        trace=trace,
    )
