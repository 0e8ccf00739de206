import math

import numpy as np
import pytest
from scipy.integrate import quad

from blowup_lab import (
    Degenerate,
    DensitySpec,
    GasModel,
    Grid,
    InconsistentDataError,
    InvalidInputError,
    MissingInputError,
    OutOfRegimeError,
    ProfileSpec,
    VelocitySpec,
    build_initial_data,
    check_cns,
    check_dicns_1d_high_alpha,
    check_dicns_1d_mid_alpha,
    check_dicns_nd,
    check_icns,
    compact_support_lifespan,
    constants_table,
    criterion_rhs,
)


def _data(gamma=2.0, dim=1, regime=None, entropy=None, velocity=None, ncells=1024, L=10.0):
    model = GasModel(gamma=gamma, dim=dim, regime=regime or __import__("blowup_lab").Euler())
    geometry = "line" if dim == 1 else "radial"
    grid = Grid(half_width=L, ncells=ncells, geometry=geometry, dim=dim)
    prof = ProfileSpec(
        density=DensitySpec(kind="gaussian"),
        velocity=velocity or VelocitySpec(),
        entropy=entropy,
    )
    return build_initial_data(prof, grid, model), model


# ---------------------------------------------------------------------------
# closed-form regressions

def test_criterion_rhs_closed_form():
    # n=1, gamma=2: (Gamma(3/2)/sqrt(pi)) / (2^(5/2)) = (1/2) / 2^(5/2)
    assert criterion_rhs(2.0, 1) == pytest.approx(0.5 / 2**2.5, abs=1e-15)
    # independent evaluation of the general formula via mpmath-free floats
    g, n = 1.4, 3
    q = (n + 2) * g - n
    expect = (math.gamma(2.5) / math.pi**1.5) ** 0.4 / (2 ** (q / 2) * 0.4)
    assert criterion_rhs(g, n) == pytest.approx(expect, rel=1e-14)


def test_constants_table_values_and_identities():
    model = GasModel(gamma=2.0, regime=Degenerate(alpha=2.0))
    m0 = math.sqrt(math.pi)
    c = constants_table(
        model, M0=m0, s1=0.3, J0=1.5, IJ0=1.7, density_ceiling=1.0,
        energy_bound=2.0, free_param=0.01,
    )
    # C3 closed form for n=1, gamma=2, M0=sqrt(pi)
    expect_c3 = (math.gamma(1.5) / math.sqrt(math.pi)) * m0**2.5 / 2**2.5
    assert c.get("C3") == pytest.approx(expect_c3, rel=1e-14)
    assert c.get("C2") == pytest.approx(expect_c3 * math.exp(0.3), rel=1e-14)
    assert c.get("C23") == c.get("C3")
    assert c.get("C4") == 1.5
    assert c.get("C5") == 1.7
    assert c.get("C28") == 1.0  # (2a-g-1)/(g-1) at a=g=2
    # product couplings hold to machine precision
    assert c.get("C16") * c.get("C18") == pytest.approx(0.5 * m0, rel=1e-14)
    assert c.get("C21") * c.get("C22") == pytest.approx(
        0.25 * 4.0 * 1.0 * m0**0 * 2.0, rel=1e-14
    )
    assert c.get("C26") == pytest.approx(1.7 * math.exp(c.get("C25")), rel=1e-14)
    assert c.get("C31") == c.get("C32")
    entry = c.entry("C2")
    assert "M0" in entry.formula or "Q" in entry.formula


def test_constants_missing_input_errors():
    model = GasModel(gamma=2.0)
    c = constants_table(model, J0=1.0)
    with pytest.raises(MissingInputError) as err:
        c.get("C2")
    assert err.value.name == "C2"
    assert "M0" in err.value.needs
    with pytest.raises(MissingInputError):
        c.get("C16*C18")  # needs a degenerate regime
    assert "C4" in c.available()


# ---------------------------------------------------------------------------
# criterion checks

def test_check_cns_gaussian_and_entropy_shift():
    data, model = _data(entropy=0.0)
    rep = check_cns(data, model)
    assert rep.criterion == "full-system"
    assert rep.rhs == pytest.approx(0.5 / 2**2.5, abs=1e-15)
    assert rep.satisfied == (rep.lhs < rep.rhs)
    assert not rep.satisfied  # consistent physical data cannot satisfy it
    # entropy shift scales lhs by exp(-shift/c_nu) exactly
    shifted = check_cns(data, model, entropy_shift=3.0)
    assert shifted.lhs == pytest.approx(rep.lhs * math.exp(-3.0 / model.c_nu), rel=1e-12)
    assert shifted.satisfied  # large shift flips the flag


def test_check_cns_preconditions():
    data, model = _data(entropy=0.0, gamma=4.0)
    with pytest.raises(OutOfRegimeError):
        check_cns(data, model)
    data, model = _data()  # no entropy field
    with pytest.raises(InvalidInputError):
        check_cns(data, model)


def test_check_icns_matches_quad_oracle():
    data, model = _data()
    rep = check_icns(data, model)
    m0 = quad(lambda x: math.exp(-x * x), -10, 10)[0]
    ie0 = quad(lambda x: math.exp(-2 * x * x), -10, 10)[0]
    g0 = 0.5 * quad(lambda x: x * x * math.exp(-x * x), -10, 10)[0]
    ij0 = g0 + ie0
    assert rep.lhs == pytest.approx(math.sqrt(ie0) * ij0 / m0**2.5, rel=1e-8)
    assert not rep.satisfied
    assert rep.inputs["M0"] == pytest.approx(m0, rel=1e-10)


def test_check_icns_lhs_grows_with_kinetic_energy():
    # constant velocity over an even density keeps F(0)=0, so larger data
    # only increase IE(0) and IJ(0): lhs grows monotonically
    small, model = _data(velocity=VelocitySpec(kind="constant", amplitude=0.1))
    large, _ = _data(velocity=VelocitySpec(kind="constant", amplitude=2.0))
    assert check_icns(large, model).lhs > check_icns(small, model).lhs


def test_check_icns_rejects_entropy_data():
    data, model = _data(entropy=0.0)
    with pytest.raises(InvalidInputError):
        check_icns(data, model)


def test_dicns_high_alpha_regimes_and_scan():
    data, model = _data(regime=Degenerate(alpha=2.0),
                        velocity=VelocitySpec(kind="constant", amplitude=0.4))
    rep = check_dicns_1d_high_alpha(data, model, density_ceiling=1.0)
    assert rep.criterion == "degenerate-1d-high-alpha"
    assert rep.rhs == pytest.approx(math.exp(-0.25) / 64.0, rel=1e-14)
    fp = rep.free_param
    assert fp["name"] == "C18"
    assert 0.0 < fp["value"] < fp["interval"][1]
    # margin trace is continuous and the reported value maximises it
    margins = np.asarray(fp["scan_margins"])
    best = np.argmax(margins)
    assert fp["scan_values"][best] == fp["value"]
    # alpha=gamma: rhs independent of the ceiling value
    rep2 = check_dicns_1d_high_alpha(data, model, density_ceiling=7.0)
    assert rep2.rhs == pytest.approx(rep.rhs)

    with pytest.raises(InconsistentDataError):
        check_dicns_1d_high_alpha(data, model, density_ceiling=0.5)  # below max rho
    zero_u, _ = _data(regime=Degenerate(alpha=2.0))
    with pytest.raises(InconsistentDataError):
        check_dicns_1d_high_alpha(zero_u, model, density_ceiling=1.0)  # P0=0
    low_alpha, low_model = _data(regime=Degenerate(alpha=1.6),
                                 velocity=VelocitySpec(kind="constant", amplitude=0.4))
    with pytest.raises(OutOfRegimeError):
        check_dicns_1d_high_alpha(low_alpha, low_model, density_ceiling=1.0)


def test_dicns_mid_alpha_regimes():
    data, model = _data(regime=Degenerate(alpha=1.8),
                        velocity=VelocitySpec(kind="constant", amplitude=0.4))
    rep = check_dicns_1d_mid_alpha(data, model)
    assert rep.criterion == "degenerate-1d-mid-alpha"
    # rhs closed form with n=1 substituted
    expect = math.gamma(1.5) / (math.pi * 2**2.5)
    assert rep.rhs == pytest.approx(expect, rel=1e-14)
    assert rep.free_param["name"] == "C18"

    boundary, bmodel = _data(regime=Degenerate(alpha=1.5),
                             velocity=VelocitySpec(kind="constant", amplitude=0.4))
    with pytest.raises(OutOfRegimeError):
        check_dicns_1d_mid_alpha(boundary, bmodel)  # alpha = (gamma+1)/2 exactly


def test_dicns_nd_regimes():
    data, model = _data(gamma=1.5, dim=2, regime=Degenerate(alpha=1.4),
                        velocity=VelocitySpec(kind="constant", amplitude=0.4))
    rep = check_dicns_nd(data, model)
    assert rep.criterion == "degenerate-nd"
    assert rep.free_param["name"] == "C22"
    q = (2 + 2) * 1.5 - 2
    expect = math.gamma(2.0) ** 0.5 / (0.5 * math.pi**0.5 * 2 ** (q / 2))
    assert rep.rhs == pytest.approx(expect, rel=1e-14)

    edge, emodel = _data(gamma=2.0, dim=2, regime=Degenerate(alpha=1.8),
                         velocity=VelocitySpec(kind="constant", amplitude=0.4))
    with pytest.raises(OutOfRegimeError):
        check_dicns_nd(edge, emodel)  # gamma = 1 + 2/n excluded (strict)


def test_margin_continuity_under_perturbation():
    data, model = _data()
    rep = check_icns(data, model)
    wiggled = type(data)(grid=data.grid, rho=data.rho * (1 + 1e-6), u=data.u)
    rep2 = check_icns(wiggled, model)
    assert abs(rep2.lhs - rep.lhs) / rep.lhs < 1e-3


# ---------------------------------------------------------------------------
# compact-support life span

def test_compact_support_worked_example():
    T = compact_support_lifespan(M0=2.0, E0=1.0, F0=0.0, G0=0.1, D=1.0, gamma=2.0, n=1)
    assert T == pytest.approx(math.sqrt(1.8), abs=1e-10)
    # defining equality holds and fails just past T
    a = 0.5  # n(gamma-1)E0/2
    cap = 0.5 * 2.0 * 1.0
    assert a * T * T + 0.1 == pytest.approx(cap, abs=1e-10)
    assert a * (T * (1 + 1e-6)) ** 2 + 0.1 > cap


def test_compact_support_simple_and_scan_oracle():
    # a=1 (gamma>1+2/n branch: gamma=4, n=1 -> a=E0), F0=0, G0=0: T=1
    assert compact_support_lifespan(2.0, 1.0, 0.0, 0.0, 1.0, 4.0, 1) == pytest.approx(1.0)
    # negative F0 case cross-checked by a dense scan
    T = compact_support_lifespan(M0=2.0, E0=1.0, F0=-0.3, G0=0.1, D=1.0, gamma=2.0, n=1)
    ts = np.linspace(0, 5, 2_000_001)
    ok = 0.5 * ts**2 - 0.3 * ts + 0.1 <= 1.0
    t_scan = ts[np.nonzero(ok)[0][-1]]
    assert T == pytest.approx(t_scan, abs=5e-6)


def test_compact_support_errors():
    with pytest.raises(InvalidInputError):
        compact_support_lifespan(0.0, 1.0, 0.0, 0.0, 1.0, 2.0, 1)
    with pytest.raises(InconsistentDataError):
        compact_support_lifespan(2.0, 1.0, 0.0, 5.0, 1.0, 2.0, 1)  # G0 > cap
