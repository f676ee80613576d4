import numpy as np
import pytest

from singdyn import refsolver
from singdyn.chain1d import ExactWaveParams, exact_wave
from singdyn.errors import BoundaryContact, CFLViolation, NoCrossing
from singdyn.refsolver import FieldGrid

WAVE = ExactWaveParams(1.0, 1.0)


def _wave_grid(n, t=1.0):
    return FieldGrid.line(-2.0, 2.0, n, lambda x: exact_wave(WAVE, x, t), t=t)


def test_zero_field_stays_zero():
    snaps = refsolver.solve_model_1d(FieldGrid.line(-1, 1, 21), 1.0, [0.5])
    assert all(np.all(s.values == 0.0) for s in snaps)


def test_output_times_are_hit_exactly():
    snaps = refsolver.solve_model_1d(_wave_grid(65), 1.5, [1.1, 1.25])
    assert [s.t for s in snaps] == [1.1, 1.25, 1.5]


def test_max_norm_error_converges():
    errs = []
    for n in (257, 513, 1025):
        s = refsolver.solve_model_1d(_wave_grid(n), 2.0)[-1]
        errs.append(np.max(np.abs(s.values - exact_wave(WAVE, s.x, 2.0))))
    orders = np.log2(np.array(errs[:-1]) / np.array(errs[1:]))
    assert np.all(orders >= 0.8), orders


def test_front_position_converges():
    errs = []
    for n in (129, 257, 513):
        s = refsolver.solve_model_1d(_wave_grid(n), 2.0)[-1]
        errs.append(abs(refsolver.extract_front(s)[0] + 2 ** (1 / 3)))
    orders = np.log2(np.array(errs[:-1]) / np.array(errs[1:]))
    assert np.all(orders >= 0.8), orders


def test_mass_is_conserved():
    g = _wave_grid(513)
    m0 = g.mass()
    for s in refsolver.solve_model_1d(g, 2.0, [1.5]):
        assert abs(s.mass() - m0) < 1e-12 * m0


def test_radial_mass_is_conserved():
    mu, K = 1.0, 0.0625
    g = FieldGrid.radial(2.0, 201, mu, lambda r: refsolver.barenblatt_radial(r, 1.0, mu, K), t=1.0)
    dev0 = np.sum(refsolver._volumes(g) * (g.values - g.level))
    s = refsolver.solve_reduced_2d_radial(g, mu, 2.0)[-1]
    dev1 = np.sum(refsolver._volumes(s) * (s.values - s.level))
    assert abs(dev1 - dev0) < 1e-12 * abs(dev0)


def test_constant_radial_field_is_stationary():
    g = FieldGrid.radial(1.0, 21, 1.0, lambda r: 0.2 + 0 * r)
    s = refsolver.solve_reduced_2d_radial(g, 1.0, 1.0)[-1]
    assert np.all(s.values == 0.2)


def test_mu_scaling():
    lam, mu = 2.5, 1.0
    f = lambda r: 0.5 / mu - 0.0625 * np.maximum(1 - r * r, 0.0) ** 2  # noqa: E731
    g = FieldGrid.radial(2.0, 101, mu, f)
    gl = FieldGrid.radial(2.0, 101, lam * mu, lambda r: f(r) / lam)
    dt = 1e-4
    s = refsolver.solve_reduced_2d_radial(g, mu, 0.5, dt=dt)[-1]
    sl = refsolver.solve_reduced_2d_radial(gl, lam * mu, 0.5, dt=dt)[-1]
    assert np.allclose(sl.values, s.values / lam, rtol=1e-12, atol=1e-14)


def test_barenblatt_radial_solution_tracked():
    mu, K = 1.3, 0.05
    g = FieldGrid.radial(2.0, 401, mu, lambda r: refsolver.barenblatt_radial(r, 1.0, mu, K), t=1.0)
    s = refsolver.solve_reduced_2d_radial(g, mu, 3.0)[-1]
    R = refsolver.extract_front(s, rel_tol=1e-3)[0]
    assert abs(R - refsolver.barenblatt_front(3.0, mu, K)) < 2 * g.h
    assert np.max(np.abs(s.values - refsolver.barenblatt_radial(s.x, 3.0, mu, K))) < 0.02 * K / np.sqrt(mu * 3.0)


def test_expanding_cap_front_is_monotone():
    mu = 1.0
    g = FieldGrid.radial(2.0, 201, mu, lambda r: 0.5 - 0.0625 * np.maximum(1 - r * r, 0.0) ** 2, t=1.0)
    snaps = refsolver.solve_reduced_2d_radial(g, mu, 3.0, np.linspace(1.0, 3.0, 9))
    R = [refsolver.extract_front(s, rel_tol=1e-3)[0] for s in snaps]
    assert np.all(np.diff(R) >= 0) and R[-1] > R[0]


def test_speed_law_on_radial_run():
    from singdyn.acceptance import radial_speed_law

    meas, pred = radial_speed_law(sample_times=(2.0, 3.0))
    assert np.all(np.abs(meas - pred) <= 0.05 * np.abs(pred))


def test_extract_front_examples():
    x = np.array([-1.0, -0.5, 0.0, 0.5, 1.0, 1.5])
    g = FieldGrid(x, np.array([0.0, 0.2, 0.4, 0.2, 0.0, 0.0]))
    assert refsolver.extract_front(g) == (-1.0, 1.0)
    # 0.3 at x = 0 and 0.1 at x = 1 around the level 0.2: crossing at x = 0.5
    g2 = FieldGrid(np.array([-1.0, 0.0, 1.0, 2.0]), np.array([0.2, 0.3, 0.1, 0.2]), level=0.2)
    assert refsolver.extract_front(g2)[0] == pytest.approx(0.5, abs=1e-15)


def test_extract_front_on_exact_wave_grids():
    for t in (1.0, 1.7, 3.0):
        g = FieldGrid.line(-2.0, 2.0, 401, lambda x: exact_wave(WAVE, x, t), t=t)
        left, right = refsolver.extract_front(g)
        assert abs(left + t ** (1 / 3)) <= g.h and abs(right - t ** (1 / 3)) <= g.h


def test_no_crossing():
    with pytest.raises(NoCrossing):
        refsolver.extract_front(FieldGrid.line(-1, 1, 11))
    with pytest.raises(NoCrossing):
        refsolver.extract_front(FieldGrid.line(-1, 1, 11, np.ones(11)))


def test_cfl_violation():
    with pytest.raises(CFLViolation):
        refsolver.solve_model_1d(_wave_grid(129), 1.1, dt=1e-2)


def test_boundary_contact():
    with pytest.raises(BoundaryContact):
        refsolver.solve_model_1d(FieldGrid.line(-1.1, 1.1, 65, lambda x: exact_wave(WAVE, x, 1.0), t=1.0), 3.0)


def test_input_validation():
    with pytest.raises(ValueError):
        FieldGrid(np.array([0.0, 1.0, 3.0]), np.zeros(3))
    with pytest.raises(ValueError):
        FieldGrid(np.array([0.5, 1.0, 1.5]), np.zeros(3), geometry="radial")
    with pytest.raises(ValueError):
        refsolver.solve_model_1d(FieldGrid.line(-1, 1, 5, -np.ones(5)), 1.0)
    with pytest.raises(ValueError):
        refsolver.solve_reduced_2d_radial(FieldGrid.radial(1, 5, 1.0), 0.0, 1.0)


def test_inward_normal_derivative_of_exact_wave():
    t = 1.5
    g = FieldGrid.line(-2.0, 2.0, 801, lambda x: exact_wave(WAVE, x, t), t=t)
    right = t ** (1 / 3)
    # u = (t^(2/3) - x^2) / (6t): outward derivative at the right front is -2x/(6t)
    assert refsolver.inward_normal_derivative(g, right, "right") == pytest.approx(-right / (3 * t), rel=1e-3)
    assert refsolver.inward_normal_derivative(g, -right, "left") == pytest.approx(-right / (3 * t), rel=1e-3)
