#!/usr/bin/env python3
"""Locate the last possible blow-up time T* from two-sided envelopes.

Builds a lower envelope on the potential energy (via the weighted
interpolation bound) and an upper decay envelope; their first crossing is
the latest time a smooth solution could still exist.  A satisfied
criterion guarantees the crossing; this demo back-solves the entropy level
of a scalar data bundle so the criterion holds, then finds T*.
"""

import math

from blowup_lab import (
    GasModel,
    build_bounds,
    constants_table,
    criterion_rhs,
    find_tstar,
)
from blowup_lab.criteria import CriterionReport
from blowup_lab.functionals import FunctionalSnapshot

gamma, n = 2.0, 1
model = GasModel(gamma=gamma, dim=n)
q = n * (gamma - 1.0) / 2.0
big_q = (n + 2) * gamma - n

M0, E0, F0, G0 = 1.0, 1.5, 0.1, 10.0
J0 = G0 - F0 + E0
rhs = criterion_rhs(gamma, n)

# back-solve the entropy level so that lhs = rhs / 2 (criterion satisfied)
margin = 2.0
s1 = model.c_nu * math.log(E0**q * J0 * margin / (M0 ** (big_q / 2) * rhs))
lhs = E0**q * J0 / (math.exp(s1 / model.c_nu) * M0 ** (big_q / 2))

report = CriterionReport(
    criterion="full-system",
    lhs=lhs,
    rhs=rhs,
    satisfied=lhs < rhs,
    inputs={
        "M0": M0, "P0": 0.2, "E0": E0, "J0": J0, "F0": F0, "G0": G0,
        "s1": s1, "gamma": gamma, "n": n, "c_nu": model.c_nu,
        "entropy_shift": 0.0,
    },
)
print(f"criterion satisfied: {report.satisfied}  (lhs={lhs:.6g} < rhs={rhs:.6g})")

constants = constants_table(model, M0=M0, s1=s1, J0=J0)
lower0 = constants.get("C2") / G0**q
pot0 = math.sqrt(lower0 * J0)  # any value inside the t=0 sandwich
snap0 = FunctionalSnapshot(
    t=0.0, mass=M0, momentum=0.2, momentum_weight=F0, inertia=G0,
    kinetic=E0 - pot0, potential=pot0, total=E0, virial=0.0,
    combined=J0, isentropic=False,
)

curves = build_bounds(report, constants, snap0)
print(f"t=0 sandwich: {curves.lower(0.0):.6g} <= {pot0:.6g} <= {curves.upper(0.0):.6g}")

comp = curves.limit_comparison(1e8)
print(f"asymptotic coefficients: lower {comp['lower_coefficient']:.6g} "
      f"vs upper {comp['upper_coefficient']:.6g} -> crossing expected: "
      f"{comp['crossing_expected']}")

res = find_tstar(curves)
print(f"\nT* = {res.tstar:.10g}")
print(f"bracket  : [{res.bracket[0]:.6g}, {res.bracket[1]:.6g}]")
print(f"residual : {res.residual:.3g}")

print("\nenvelopes near the crossing:")
for t in (0.0, 0.5 * res.tstar, res.tstar, 2.0 * res.tstar):
    print(f"  t={t:8.4f}  lower={curves.lower(t):.6g}  upper={curves.upper(t):.6g}")
