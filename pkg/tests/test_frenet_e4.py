import mpmath as mp
import numpy as np
import pytest
import sympy as sp
from hypothesis import given, settings, strategies as st

from mannheim_s3.errors import EmptyInput, FrameDegenerate
from mannheim_s3.frenet_e4 import (ParamCurveE4, frames_e4_from_samples, frenet_apparatus_e4,
                                   frenet_residuals_e4, generalized_mannheim_condition,
                                   sample_frames_e4)

t = sp.symbols("t", real=True)


def oracle(expr, t0, dps=40):
    """Curvatures of a symbolic R^4 curve at ``t0`` in extended precision."""
    with mp.workdps(dps):
        d = [mp.matrix([mp.mpf(str(sp.N(c.diff(t, k).subs(t, t0), dps))) for c in expr])
             for k in range(1, 5)]
        dot = lambda u, w: sum(u[i] * w[i] for i in range(4))  # noqa: E731
        basis = []
        for vec in d[:3]:
            w = vec.copy()
            for e in basis:
                w -= dot(w, e) * e
            basis.append(w / mp.sqrt(dot(w, w)))
        m = mp.matrix([[basis[r][c] for c in range(4)] for r in range(3)] + [[0, 0, 0, 0]])
        e4 = mp.matrix(4, 1)
        for j in range(4):
            minor = mp.matrix([[m[r, c] for c in range(4) if c != j] for r in range(3)])
            e4[j] = (-1) ** (3 + j) * mp.det(minor)
        e4 /= mp.sqrt(dot(e4, e4))
        v = mp.sqrt(dot(d[0], d[0]))
        k1 = dot(d[1], basis[1]) / v**2
        k2 = dot(d[2], basis[2]) / (v**3 * k1)
        k3 = dot(d[3], e4) / (v**4 * k1 * k2)
        return float(k1), float(k2), float(k3)


def lambdified(expr, domain=(-2.0, 2.0), analytic=False):
    f = sp.lambdify(t, list(expr), "numpy")
    derivs = None
    if analytic:
        derivs = [sp.lambdify(t, [c.diff(t, k) for c in expr], "numpy") for k in range(1, 5)]
        derivs = [lambda x, g=g: np.array(g(x), float) for g in derivs]
    return ParamCurveE4(lambda x: np.array(f(x), float), domain, derivs)


W_CURVE = sp.Matrix([sp.Rational(1, 2) * sp.cos(t), sp.Rational(1, 2) * sp.sin(t),
                     sp.Rational(1, 2) * sp.cos(sp.sqrt(3) * t),
                     sp.Rational(1, 2) * sp.sin(sp.sqrt(3) * t)])
MOMENT = sp.Matrix([t, t**2 / 2, t**3 / 6, t**4 / 24])


@pytest.mark.parametrize("expr, t0", [(W_CURVE, 0.3), (MOMENT, 0.4), (MOMENT, -1.1),
                                      (sp.Matrix([sp.cos(t), sp.sin(2 * t), t**3, sp.exp(t / 2)]),
                                       0.2)])
@pytest.mark.parametrize("analytic", [True, False])
def test_curvatures_against_extended_precision(expr, t0, analytic):
    k_ref = oracle(expr, t0)
    f = frenet_apparatus_e4(lambdified(expr, analytic=analytic), t0)
    tol = 1e-11 if analytic else 1e-6
    assert np.allclose([f.k1, f.k2, f.k3], k_ref, rtol=tol, atol=tol)
    assert np.linalg.det(f.matrix()) == pytest.approx(1.0)


def test_w_curve_constant_curvatures():
    ff = sample_frames_e4(lambdified(W_CURVE, analytic=True), np.linspace(0, 3, 7))
    assert np.ptp(ff.k1) < 1e-12 and np.ptp(ff.k2) < 1e-12 and np.ptp(ff.k3) < 1e-12
    assert ff.is_special_frenet()


def test_frenet_equations_hold():
    r = frenet_residuals_e4(lambdified(MOMENT, analytic=True), 0.5)
    assert max(r.values()) < 1e-9


def test_straight_line_degenerate():
    line = ParamCurveE4(lambda x: np.array([x, 2 * x, 0.0, -x]), (0, 1))
    with pytest.raises(FrameDegenerate):
        frenet_apparatus_e4(line, 0.5)


def test_planar_curve_has_no_second_curvature():
    circle = ParamCurveE4(lambda x: np.array([np.cos(x), np.sin(x), 0.0, 0.0]), (0, 1))
    with pytest.raises(FrameDegenerate, match="second"):
        frenet_apparatus_e4(circle, 0.5)


def test_frames_from_samples():
    curve = lambdified(W_CURVE)
    tt = np.linspace(0.0, 2.0, 801)
    ff = frames_e4_from_samples(tt, np.array([curve(x) for x in tt]))
    k = oracle(W_CURVE, 1.0)
    assert np.allclose(ff.k1, k[0], atol=1e-6)
    assert np.allclose(ff.k3, k[2], atol=1e-5)
    with pytest.raises(EmptyInput):
        frames_e4_from_samples(np.array([]), np.zeros((0, 4)))


def test_condition_exact():
    k2 = np.linspace(0.1, 2.0, 64)
    # k1 = c (k1^2 + k2^2) with c = 1/2 has the root k1 = 1 - sqrt(1 - k2^2) for k2 < 1
    k2 = k2[k2 < 1]
    k1 = 1 - np.sqrt(1 - k2**2)
    c, res = generalized_mannheim_condition(k1, k2)
    assert c == pytest.approx(0.5, abs=1e-12)
    assert res <= 1e-12


def test_condition_detects_perturbation():
    k2 = np.linspace(0.1, 0.9, 64)
    k1 = 1 - np.sqrt(1 - k2**2)
    _, res = generalized_mannheim_condition(k1 + 0.01, k2)
    assert res >= 1e-3


@settings(max_examples=50, deadline=None)
@given(st.floats(0.05, 5.0), st.lists(st.floats(0.01, 0.99), min_size=2, max_size=30, unique=True))
def test_condition_recovers_any_c(c, xs):
    # parametrise the circle k1 = c (k1^2 + k2^2) by k1 in (0, 1/c)
    k1 = np.array(xs) / c
    k2 = np.sqrt(k1 / c - k1**2)
    c_fit, res = generalized_mannheim_condition(k1, k2)
    assert c_fit == pytest.approx(c, rel=1e-10)
    assert res <= 1e-10


def test_condition_input_errors():
    with pytest.raises(EmptyInput):
        generalized_mannheim_condition([], [])
    with pytest.raises(ValueError):
        generalized_mannheim_condition([1.0, 2.0], [1.0])
    with pytest.raises(FrameDegenerate):
        generalized_mannheim_condition([0.0], [0.0])
