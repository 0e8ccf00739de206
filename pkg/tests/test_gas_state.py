import math

import numpy as np
import pytest
from scipy.integrate import quad

from blowup_lab import (
    ConstantViscosity,
    Degenerate,
    DensitySpec,
    Euler,
    FlowState,
    GasModel,
    Grid,
    InvalidInputError,
    ProfileSpec,
    VelocitySpec,
    build_initial_data,
    entropy_from_pressure,
    load_table,
    pressure,
    validate_decay,
)


def test_model_validation():
    with pytest.raises(InvalidInputError):
        GasModel(gamma=1.0)
    with pytest.raises(InvalidInputError):
        GasModel(gamma=2.0, regime=ConstantViscosity(mu=-1.0))
    with pytest.raises(InvalidInputError):
        GasModel(gamma=2.0, dim=2, regime=Degenerate(alpha=0.4))
    m = GasModel(gamma=2.0)
    assert m.c_nu == pytest.approx(1.0)
    assert not m.is_viscous
    assert GasModel(gamma=2.0, regime=Degenerate(alpha=1.5)).is_viscous


def test_grid_quadrature_against_quad_oracle():
    grid = Grid(half_width=10.0, ncells=2048)
    f = np.exp(-(grid.x**2)) * np.cos(grid.x)
    oracle, _ = quad(lambda x: math.exp(-x * x) * math.cos(x), -10, 10)
    assert grid.integrate(f) == pytest.approx(oracle, abs=1e-10)
    assert grid.integrate(f, method="simpson") == pytest.approx(oracle, abs=1e-10)


def test_radial_quadrature_against_quad_oracle():
    grid = Grid(half_width=8.0, ncells=4096, geometry="radial", dim=3)
    f = np.exp(-(grid.x**2))
    # int over R^3 of exp(-r^2) = pi^(3/2)
    assert grid.integrate(f) == pytest.approx(math.pi**1.5, rel=1e-6)


def test_grid_derivative_and_divergence():
    grid = Grid(half_width=5.0, ncells=1024)
    du = grid.derivative(np.sin(grid.x))
    assert np.max(np.abs(du - np.cos(grid.x))) < 1e-4
    radial = Grid(half_width=5.0, ncells=1024, geometry="radial", dim=2)
    # u = r has divergence u' + (n-1) u/r = 2 in 2D
    div = radial.divergence(radial.x)
    assert np.max(np.abs(div - 2.0)) < 1e-10


def test_pressure_entropy_round_trip():
    model = GasModel(gamma=1.4)
    grid = Grid(half_width=5.0, ncells=64)
    rho = 0.5 + np.exp(-(grid.x**2))
    p0 = 2.0 * rho**1.2  # deliberately non-isentropic
    s = entropy_from_pressure(rho, p0, model)
    state = FlowState(grid=grid, rho=rho, u=np.zeros_like(rho), s=s)
    assert pressure(state, model) == pytest.approx(p0, rel=1e-12)


def test_entropy_from_pressure_edge_cases():
    model = GasModel(gamma=2.0)
    with pytest.raises(InvalidInputError):
        entropy_from_pressure(np.array([0.0]), np.array([1.0]), model)
    s = entropy_from_pressure(np.array([1.0]), np.array([0.0]), model)
    assert s[0] == -math.inf


def test_isentropic_pressure_is_power_law():
    model = GasModel(gamma=2.0)
    grid = Grid(half_width=5.0, ncells=64)
    rho = np.exp(-(grid.x**2))
    state = FlowState(grid=grid, rho=rho, u=np.zeros_like(rho))
    assert pressure(state, model) == pytest.approx(rho**2)


def test_state_validation():
    grid = Grid(half_width=5.0, ncells=64)
    good = np.ones(64)
    with pytest.raises(InvalidInputError):
        FlowState(grid=grid, rho=-good, u=good)
    with pytest.raises(InvalidInputError):
        FlowState(grid=grid, rho=good, u=np.full(64, np.nan))
    with pytest.raises(InvalidInputError):
        FlowState(grid=grid, rho=good[:32], u=good[:32])


def test_build_initial_data_profiles():
    model = GasModel(gamma=2.0)
    grid = Grid(half_width=10.0, ncells=256)
    prof = ProfileSpec(
        density=DensitySpec(kind="bump", amplitude=2.0, radius=3.0, order=3),
        velocity=VelocitySpec(kind="jet", amplitude=0.5, width=2.0),
        entropy=1.5,
    )
    state = build_initial_data(prof, grid, model)
    assert state.has_entropy and np.all(state.s == 1.5)
    assert np.all(state.rho[np.abs(grid.x) > 3.0] == 0.0)
    assert state.rho.max() == pytest.approx(2.0, rel=1e-3)
    # velocity is odd
    assert state.u[10] == pytest.approx(-state.u[-11])


def test_density_floor():
    grid = Grid(half_width=10.0, ncells=128)
    spec = DensitySpec(kind="gaussian", floor=1e-3)
    assert np.min(spec.sample(grid.x)) >= 1e-3


def test_load_table(tmp_path):
    path = tmp_path / "profile.dat"
    path.write_text("# x rho u\n1.0 0.5 0.1\n-1.0 0.5 -0.1\n0.0 1.0 0.0\n")
    x, rho, u = load_table(path)
    assert list(x) == [-1.0, 0.0, 1.0]  # sorted
    assert list(rho) == [0.5, 1.0, 0.5]
    assert list(u) == [-0.1, 0.0, 0.1]
    bad = tmp_path / "bad.dat"
    bad.write_text("1.0 2.0 3.0 4.0\n")
    with pytest.raises(InvalidInputError):
        load_table(bad)


def test_validate_decay_gaussian_passes():
    model = GasModel(gamma=2.0)
    grid = Grid(half_width=10.0, ncells=1024)
    prof = ProfileSpec(
        density=DensitySpec(kind="gaussian"),
        velocity=VelocitySpec(kind="jet", amplitude=0.3),
    )
    state = build_initial_data(prof, grid, model)
    report = validate_decay(state, model)
    assert all(flag != "violated" for flag in report.tail_flags.values())
    assert report.tail_mass < 1e-12


def test_validate_decay_flags_slow_profiles():
    model = GasModel(gamma=2.0)
    grid = Grid(half_width=10.0, ncells=1024)
    rho = 1.0 / (1.0 + grid.x**2) ** 0.25  # decays like |x|^-1/2: too slow
    state = FlowState(grid=grid, rho=rho, u=np.ones_like(rho))
    report = validate_decay(state, model)
    assert report.tail_flags["momentum_density"] == "violated"
    assert report.worst_ratio < 1.0
