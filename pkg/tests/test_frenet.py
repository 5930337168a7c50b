import numpy as np
import pytest
import sympy as sp
from hypothesis import given, settings, strategies as st

from mannheim_s3.errors import FrameDegenerate, IntegrationFailure, NotImmersed
from mannheim_s3.frenet import (CurvatureProfile, FrenetFrameS3, ParamCurveS3,
                                arclength_reparametrize, check_immersed, frame_from_derivatives,
                                frames_from_samples, frenet_apparatus, frenet_residuals,
                                plane_curve_test, sample_frames, standard_frame,
                                synthesize_from_curvatures, uniform_grid)


def small_circle(rho):
    """Circle at spherical distance ``rho`` from e4, with speed sin(rho)."""
    sr, cr = np.sin(rho), np.cos(rho)
    return ParamCurveS3(
        lambda t: np.array([sr * np.cos(t), sr * np.sin(t), 0.0, cr]), (0.0, 2 * np.pi),
        derivs=[lambda t: np.array([-sr * np.sin(t), sr * np.cos(t), 0, 0]),
                lambda t: np.array([-sr * np.cos(t), -sr * np.sin(t), 0, 0]),
                lambda t: np.array([sr * np.sin(t), -sr * np.cos(t), 0, 0])],
        name="small circle")


def great_circle_curve():
    return ParamCurveS3(lambda t: np.array([np.cos(t), np.sin(t), 0.0, 0.0]), (0.0, 2 * np.pi))


def clifford_helix_symbolic(phi, p, q):
    t = sp.symbols("t", real=True)
    c = sp.Matrix([sp.cos(phi) * sp.cos(p * t), sp.cos(phi) * sp.sin(p * t),
                   sp.sin(phi) * sp.cos(q * t), sp.sin(phi) * sp.sin(q * t)])
    return t, c


def sympy_curvatures(t, c, t0):
    """Geodesic curvature and torsion in S^3 from the Gram determinant formulas."""
    d1, d2, d3 = (c.diff(t, k) for k in (1, 2, 3))
    sub = {t: t0}
    a, v1, v2, v3 = (np.array(m.subs(sub).evalf(30), dtype=float).ravel() for m in (c, d1, d2, d3))
    v = np.linalg.norm(v1)
    T = v1 / v
    acc = v2 - (v2 @ a) * a - (v2 @ T) * T
    kappa = np.linalg.norm(acc) / v**2
    N = acc / np.linalg.norm(acc)
    B = np.linalg.solve(np.array([a, T, N, np.eye(4)[0]]), [0, 0, 0, 1.0])
    B = B / np.linalg.norm(B)
    if np.linalg.det(np.array([a, T, N, B])) < 0:
        B = -B
    return kappa, float(v3 @ B) / (kappa * v**3)


@pytest.mark.parametrize("rho, kappa", [(np.pi / 4, 1.0), (np.pi / 3, 1 / np.sqrt(3)),
                                         (0.3, 1 / np.tan(0.3))])
def test_small_circle(rho, kappa):
    c = small_circle(rho)
    for curve in (c, c.with_fd()):
        f = frenet_apparatus(curve, 0.7)
        assert f.kappa == pytest.approx(kappa, abs=1e-9)
        assert abs(f.tau) <= 1e-8
        assert f.speed == pytest.approx(np.sin(rho))
        f.validate()


def test_great_circle_is_degenerate():
    with pytest.raises(FrameDegenerate) as info:
        frenet_apparatus(great_circle_curve(), 0.4)
    assert info.value.measured <= 1e-8


def test_mask_records_geodesic_points():
    ff = sample_frames(great_circle_curve(), np.linspace(0, 1, 5), on_degenerate="mask")
    assert ff.degenerate.all()
    assert np.all(ff.kappa <= 1e-8)
    assert np.all(np.isnan(ff.tau))


@pytest.mark.parametrize("phi, p, q", [(np.pi / 6, 1, 2), (0.4, 3, -1), (1.1, 2, 5)])
def test_clifford_helix_against_sympy(phi, p, q):
    t, c = clifford_helix_symbolic(sp.nsimplify(phi) if phi == np.pi / 6 else phi, p, q)
    f_num = sp.lambdify(t, list(c), "numpy")
    curve = ParamCurveS3(lambda x: np.array(f_num(x), float), (0, 2 * np.pi))
    kappa, tau = sympy_curvatures(t, c, 0.9)
    f = frenet_apparatus(curve, 0.9)
    assert f.kappa == pytest.approx(kappa, rel=1e-9)
    assert f.tau == pytest.approx(tau, rel=1e-8, abs=1e-9)


def test_frame_validate_and_orientation():
    f = frenet_apparatus(small_circle(0.5), 1.0)
    assert np.linalg.det(f.matrix()) == pytest.approx(1.0)
    bad = FrenetFrameS3(0.0, f.point, f.T, f.N, -f.B, f.kappa, f.tau)
    with pytest.raises(FrameDegenerate):
        bad.validate()


def test_frame_from_derivatives_radius_mismatch():
    d = small_circle(0.5).derivatives(0.1)
    with pytest.raises(ValueError):
        frame_from_derivatives(d, radius=2.0)


def test_frenet_residuals_small():
    prof = CurvatureProfile(lambda s: 1.2 + 0.3 * np.cos(s), lambda s: 0.4 - 0.2 * s, (0, 2))
    curve = synthesize_from_curvatures(prof, density=256)
    r = frenet_residuals(curve, 1.0)
    assert max(r.values()) < 1e-9


profiles = st.tuples(st.floats(0.3, 2.5), st.floats(-0.2, 0.2), st.floats(-1.5, 1.5),
                     st.floats(-0.5, 0.5))


@settings(max_examples=10, deadline=None)
@given(profiles)
def test_synthesis_round_trip(params):
    k0, k1, t0, t1 = params
    prof = CurvatureProfile(lambda s: k0 + k1 * np.sin(2 * s), lambda s: t0 + t1 * s, (0.0, 1.5))
    curve = synthesize_from_curvatures(prof, density=512)
    s = np.linspace(0.1, 1.4, 7)
    ff = sample_frames(curve.with_fd(), s)
    assert np.max(np.abs(ff.kappa - prof.kappa(s))) < 1e-7
    assert np.max(np.abs(ff.tau - prof.tau(s))) < 1e-6
    assert np.max(curve.frames().sphere_drift()) < 1e-12
    assert np.max(curve.frames().gram_error()) < 1e-12


def test_synthesis_radius_two():
    prof = CurvatureProfile(1.0, 0.5, (0.0, 3.0))
    curve = synthesize_from_curvatures(prof, initial=standard_frame(2.0), radius=2.0)
    f = frenet_apparatus(curve.with_fd(), 1.5)
    assert f.kappa == pytest.approx(1.0, abs=1e-8)
    assert f.tau == pytest.approx(0.5, abs=1e-7)
    assert np.linalg.norm(curve(2.0)) == pytest.approx(2.0)


def test_synthesis_error_estimate_and_refinement():
    prof = CurvatureProfile(lambda s: 1 + 0.5 * np.sin(5 * s), 0.3, (0.0, 4.0))
    curve = synthesize_from_curvatures(prof, density=16, tol=1e-11)
    assert curve.error_estimate <= 1e-11
    with pytest.raises(IntegrationFailure):
        synthesize_from_curvatures(prof, density=16, tol=1e-14, max_density=64)


def test_synthesis_rejects_bad_input():
    with pytest.raises(FrameDegenerate):
        synthesize_from_curvatures(CurvatureProfile(lambda s: s - 0.5, 0.0, (0, 1)))
    f = standard_frame()
    flipped = FrenetFrameS3(0.0, f.point, f.T, f.N, -f.B, 1.0, 0.0)
    with pytest.raises(FrameDegenerate):
        synthesize_from_curvatures(CurvatureProfile(1.0, 0.0, (0, 1)), initial=flipped)


def test_frames_from_samples_matches_profile():
    prof = CurvatureProfile(lambda s: 1 + 0.3 * np.sin(s), lambda s: 0.5 + 0.2 * s, (0.0, 2.0))
    curve = synthesize_from_curvatures(prof, density=1024)
    ff = frames_from_samples(curve.grid, curve.states[:, 0])
    assert np.max(np.abs(ff.kappa - prof.kappa(curve.grid))) < 1e-6
    assert np.max(np.abs(ff.tau - prof.tau(curve.grid))) < 1e-6
    assert np.max(np.abs(ff.s - curve.grid)) < 1e-9


def test_frames_from_samples_shape_check():
    with pytest.raises(ValueError):
        frames_from_samples(np.arange(10.0), np.zeros((10, 3)))


def test_arclength_of_reparametrised_circle():
    rho = 0.8
    base = small_circle(rho)
    curve = ParamCurveS3(lambda u: base(u**2), (0.5, 2.0))
    table = arclength_reparametrize(curve)
    assert table.length == pytest.approx(np.sin(rho) * (4.0 - 0.25), rel=1e-10)
    assert table.t_of_s(table.s_of_t(1.3)) == pytest.approx(1.3, abs=1e-8)


def test_check_immersed():
    assert check_immersed(small_circle(0.5))[0] == pytest.approx(np.sin(0.5))
    stalled = ParamCurveS3(lambda u: np.array([np.cos(u**3), np.sin(u**3), 0, 0]), (-1, 1))
    with pytest.raises(NotImmersed):
        check_immersed(stalled)


def test_plane_curve_test():
    assert plane_curve_test(small_circle(0.4))
    prof = CurvatureProfile(1.0, 0.2, (0, 1))
    assert not plane_curve_test(synthesize_from_curvatures(prof))
    assert plane_curve_test(synthesize_from_curvatures(CurvatureProfile(1.0, 0.0, (0, 1))))


def test_uniform_grid_density():
    g = uniform_grid((0.0, 2.0), 512)
    assert g.size == 1025 and g[-1] == 2.0


def test_unit_curvature_plane_curve_closes():
    length = np.pi * np.sqrt(2)
    curve = synthesize_from_curvatures(CurvatureProfile(1.0, 0.0, (0.0, length)))
    assert np.max(np.abs(curve.states[-1] - curve.states[0])) <= 1e-6
    # it is the circle at distance pi/4 from its centre
    centre = (curve.states[0, 0] + curve.states[0, 2]) / np.sqrt(2)
    assert np.allclose(curve.states[:, 0] @ centre, np.cos(np.pi / 4), atol=1e-10)
