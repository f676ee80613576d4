import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from singdyn.errors import DegreeMismatch, NotDivisible
from singdyn.polyalg import (
    X2,
    HarmonicSpec,
    HPoly,
    harmonic_eval,
    hp_arith,
    hp_calculus,
    hp_eval,
    hp_rotate,
    hp_x2_factor,
    hp_zero,
)

coef = st.floats(-10, 10, allow_nan=False)


@st.composite
def hpolys(draw, max_degree=6, degree=None):
    n = draw(st.integers(0, max_degree)) if degree is None else degree
    return HPoly(draw(st.lists(coef, min_size=n + 1, max_size=n + 1)))


def test_product_example():
    p = HPoly([1.0, 2.0])  # x1 + 2 x2
    q = HPoly([1.0, -1.0])  # x1 - x2
    assert np.allclose(hp_arith(p, q, "mul").coeffs, [1.0, 1.0, -2.0])


def test_add_zero_and_monomial_product():
    p = HPoly([3.0, -1.0, 2.0])
    assert np.array_equal(hp_arith(p, hp_zero(2), "add").coeffs, p.coeffs)
    r = hp_arith(HPoly([1.0, 0.0, 0.0]), HPoly([0.0, 0.0, 1.0]), "mul")
    assert r.degree == 4 and np.array_equal(r.coeffs, [0, 0, 1, 0, 0])


def test_add_degree_mismatch():
    with pytest.raises(DegreeMismatch):
        hp_arith(HPoly([1.0]), HPoly([1.0, 0.0]), "add")


def test_scale_and_sub():
    p = HPoly([1.0, 2.0])
    assert np.allclose(hp_arith(p, p, "sub").coeffs, 0.0)
    assert np.allclose(hp_arith(p, p, "add", scale=0.5).coeffs, [1.0, 2.0])


def test_grad_example():
    g = hp_calculus(HPoly([1.0, 0.0, -1.0]), "grad")
    assert np.allclose(g.u.coeffs, [2.0, 0.0]) and np.allclose(g.v.coeffs, [0.0, -2.0])


def test_low_degree_derivatives_are_zero():
    g = hp_calculus(HPoly([5.0]), "grad")
    assert g.u.degree == 0 and g.u.coeffs[0] == 0.0
    assert hp_calculus(HPoly([1.0, 2.0]), "laplacian").coeffs[0] == 0.0


def test_divergence_and_dot():
    p = HPoly([1.0, 2.0, 3.0, 4.0])
    assert np.allclose(hp_calculus(p.grad(), "divergence").coeffs, p.laplacian().coeffs)
    g = HPoly([1.0, 1.0]).grad()
    assert np.allclose(hp_calculus(g, "dot", g).coeffs, [2.0])
    with pytest.raises(ValueError):
        hp_calculus(g, "dot")


@given(hpolys())
def test_euler_identity(p):
    n = p.degree
    g = p.grad()
    lhs = HPoly([1.0, 0.0]) * g.u + HPoly([0.0, 1.0]) * g.v if n > 0 else HPoly([0.0])
    assert np.allclose(lhs.coeffs, n * p.coeffs, rtol=0, atol=1e-12 * max(1.0, np.max(np.abs(p.coeffs))))


def test_euler_cubic_random():
    rng = np.random.default_rng(0)
    p = HPoly(rng.normal(size=4))
    g = p.grad()
    lhs = HPoly([1.0, 0.0]) * g.u + HPoly([0.0, 1.0]) * g.v
    assert np.allclose(lhs.coeffs, 3 * p.coeffs, rtol=1e-14)


def test_x2_factor_examples():
    q = hp_x2_factor(HPoly([3.0, 0.0, 3.0, 0.0]))
    assert np.allclose(q.coeffs, [3.0, 0.0])
    one = hp_x2_factor(X2)
    assert one.degree == 0 and one.coeffs[0] == pytest.approx(1.0)
    with pytest.raises(NotDivisible) as exc:
        hp_x2_factor(HPoly([1.0, 0.0, 0.0, 0.0]))
    assert exc.value.residual > 0


@given(hpolys(max_degree=4))
def test_x2_factor_inverts_multiplication(q):
    scale = max(1.0, float(np.max(np.abs(q.coeffs))))
    back = hp_x2_factor(X2 * q)
    assert np.max(np.abs(back.coeffs - q.coeffs)) <= 1e-14 * scale * 10


def test_harmonic_examples():
    w2 = harmonic_eval(HarmonicSpec(2, ((1.0,), (0.0,))))
    assert np.allclose(w2.coeffs, [1, 0, -1])
    w3 = harmonic_eval(HarmonicSpec(3, ((1.0,), ())))
    assert np.allclose(w3.coeffs, [1, 0, -3, 0])
    w0 = harmonic_eval(HarmonicSpec(0, ((2.0, 3.0),)), t=2.0)
    assert w0.degree == 0 and w0.coeffs[0] == pytest.approx(8.0)


def test_harmonic_time_derivative():
    spec = HarmonicSpec(2, ((1.0, 2.0, 3.0), (0.0, 1.0)))
    w = harmonic_eval(spec, 2.0, derivative=1)
    assert np.allclose(w.coeffs, [14.0, 1.0, -14.0])


def test_harmonic_spec_validation():
    with pytest.raises(ValueError):
        HarmonicSpec(-1)
    with pytest.raises(ValueError):
        HarmonicSpec(2, ((1.0,),))


@given(st.integers(0, 9), st.lists(coef, min_size=2, max_size=2), st.floats(-3, 3))
def test_harmonic_laplacian_zero(k, c, t):
    lists = ((c[0],),) if k == 0 else ((c[0], 1.0), (c[1],))
    w = harmonic_eval(HarmonicSpec(k, lists), t)
    assert np.max(np.abs(w.laplacian().coeffs)) <= 1e-12 * max(1.0, np.max(np.abs(w.coeffs)))


def test_laplacian_of_w2_is_zero():
    w = HPoly([0.7, -1.3, -0.7])
    assert np.allclose(w.laplacian().coeffs, 0.0)


def test_eval_examples():
    assert hp_eval(HPoly([0.0, 1.0, 0.0]), (2.0, 3.0)) == 6.0
    assert hp_eval(HPoly([1.0, 2.0, 3.0]), (0.0, 0.0)) == 0.0
    assert hp_eval(X2, (3.0, 4.0)) == 25.0
    vals = hp_eval(X2, (np.array([1.0, 3.0]), np.array([0.0, 4.0])))
    assert np.allclose(vals, [1.0, 25.0])


@settings(max_examples=50)
@given(hpolys(max_degree=4), hpolys(max_degree=4), hpolys(max_degree=4))
def test_mul_commutative_distributive(p, q, r):
    assert np.allclose((p * q).coeffs, (q * p).coeffs, atol=1e-9)
    if q.degree == r.degree:
        lhs = p * (q + r)
        rhs = p * q + p * r
        assert np.allclose(lhs.coeffs, rhs.coeffs, atol=1e-9 * max(1.0, np.max(np.abs(lhs.coeffs))))


@given(hpolys(max_degree=5), st.floats(-4, 4), st.floats(-2, 2), st.floats(-2, 2))
def test_rotation_moves_the_graph(p, theta, x1, x2):
    c, s = np.cos(theta), np.sin(theta)
    rx = (c * x1 - s * x2, s * x1 + c * x2)
    val = hp_eval(hp_rotate(p, theta), rx)
    assert val == pytest.approx(hp_eval(p, (x1, x2)), abs=1e-9 * max(1.0, np.max(np.abs(p.coeffs))) * 100)


def test_values_are_immutable():
    p = HPoly([1.0, 2.0])
    with pytest.raises(ValueError):
        p.coeffs[0] = 5.0


def test_numpy_scalar_times_poly_stays_poly():
    p = HPoly([1.0, 2.0])
    assert isinstance(np.float64(2.0) * p, HPoly)
