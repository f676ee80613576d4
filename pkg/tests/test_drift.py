import numpy as np
import pytest

from singdyn.drift import DriftField
from singdyn.integrate import n_steps, rk4
from singdyn.polyalg import hp_eval


def test_from_mapping_and_omega():
    d = DriftField.from_mapping({"w20": [1.0, 2.0], "w03": [0.5]})
    om = d.omega(1.5)
    assert om["w20"] == 4.0 and om["w03"] == 0.5 and om["w11"] == 0.0
    assert d.omega(1.5, 1)["w20"] == 2.0
    assert not d.is_zero() and DriftField.zero().is_zero()


def test_bad_names():
    for bad in ({"x20": [1.0]}, {"w21": [1.0]}):
        with pytest.raises(ValueError):
            DriftField.from_mapping(bad)


def test_potentials_are_harmonic_and_match_basis():
    d = DriftField.from_mapping({"w20": [1.0], "w11": [2.0], "w30": [0.5], "w10": [3.0]})
    W2 = d.W(2, 0.0)
    assert np.allclose(W2.coeffs, [1.0, 2.0, -1.0])
    for W in d.potentials(0.3):
        assert np.allclose(W.laplacian().coeffs, 0.0)


def test_derivative_paths_agree():
    d = DriftField.from_mapping({"w10": [0.2], "w20": [0.1, 0.3], "w11": [0.4], "w30": [0.5], "w03": [0.2, 1.0]})
    x1 = np.linspace(-1, 1, 7)
    x2 = np.linspace(0, 2, 7)
    fast = d.derivatives_upto(x1, x2, 0.7, 3)
    for order in (1, 2, 3):
        slow = d.derivatives_at(x1, x2, 0.7, order)
        for k, v in slow.items():
            assert np.allclose(fast[k], v, rtol=1e-13, atol=1e-13)


def test_gradient_by_finite_differences():
    d = DriftField.from_mapping({"w20": [0.3], "w11": [-0.2], "w30": [0.1], "w03": [0.4], "w01": [1.0]})
    x = np.array([0.3, -0.7])
    h = 1e-6

    def wval(p):
        return sum(hp_eval(W, p) for W in d.potentials(0.0))

    g = d.gradient_at(x[0], x[1], 0.0)
    fd = [(wval(x + h * e) - wval(x - h * e)) / (2 * h) for e in np.eye(2)]
    assert np.allclose(g, fd, rtol=1e-8)


def test_rk4_lands_on_end_time_and_is_fourth_order():
    assert n_steps(0.0, 1.0, 0.3) == 3
    errs = []
    for dt in (0.1, 0.05):
        times, ys = rk4(lambda t, y: -y, [1.0], 0.0, 1.0, dt)
        assert times[-1] == 1.0
        errs.append(abs(ys[-1, 0] - np.exp(-1.0)))
    assert np.log2(errs[0] / errs[1]) > 3.8
    with pytest.raises(ValueError):
        rk4(lambda t, y: y, [1.0], 1.0, 0.0, 0.1)
