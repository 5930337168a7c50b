"""Mannheim pairs in the unit 3-sphere.

A curve ``alpha`` is Mannheim with partner ``beta`` when the great circle
leaving ``alpha`` along its principal normal is the great circle leaving
``beta`` along its binormal, at corresponding points.  With the (constant)
angle ``a`` between the position vectors::

    alpha = cos(a) beta - sin(a) B_beta
    beta  = cos(a) alpha + sin(a) N_alpha
    N_alpha = sin(a) beta + cos(a) B_beta
    B_beta  = -sin(a) alpha + cos(a) N_alpha

The principal normal of ``alpha`` is oriented so that the second line holds;
where that disagrees with the unsigned Frenet normal, ``N_alpha``, ``B_alpha``
and ``kappa_alpha`` all flip sign (a signed-curvature frame, still positively
oriented).  Verification never relies on how a pair was constructed.
"""

from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import cumulative_simpson

from . import numdiff
from .errors import (DegenerateAngle, FrameDegenerate, NotAdmissible,
                     PlaneCurveNotAllowed, TangentPole)
from .frenet import (CurvatureProfile, ParamCurveS3, SynthesizedCurve,
                     frenet_apparatus, plane_curve_test, sample_frames,
                     synthesize_from_curvatures)
from .sphere import great_circle

RESIDUAL_NAMES = (
    "geodesic_coincidence", "normal_decomposition", "binormal_decomposition",
    "partner_torsion", "mannheim_torsion", "cos_theta", "sin_theta",
    "theta_derivative", "arclength_ratio", "linear_relation",
    "binormal_angle_constancy", "a_constancy",
)
DEFAULT_TOL = 1e-6
NOT_MANNHEIM = "NotMannheimCandidate"
CANDIDATE_ONLY = "CandidateOnly"


# --- construction ----------------------------------------------------------


class FrameOffsetCurve(ParamCurveS3):
    """``t -> sum coeffs_i F_i(t)`` over the extracted Frenet frame of a curve.

    Derivatives are finite differences of an already differentiated curve, so
    this is markedly less accurate than offsets of synthesized curves.
    """

    def __init__(self, base, coeffs, name="offset"):
        self.base = base
        self.coeffs = np.asarray(coeffs, float)
        super().__init__(self._position, base.domain, base.radius,
                         fd_step=base.fd_step, name=name)

    def _position(self, t):
        t = np.asarray(t, float)
        if t.ndim:
            return np.array([self._position(x) for x in t.ravel()]).reshape(t.shape + (4,))
        m = frenet_apparatus(self.base, float(t)).matrix()
        m[0] *= self.base.radius
        return self.coeffs @ m


def _offset(curve, coeffs, name):
    if isinstance(curve, SynthesizedCurve):
        return curve.offset(coeffs, name)
    return FrameOffsetCurve(curve, coeffs, name)


def _require_unit_sphere(*curves):
    for c in curves:
        if not np.isclose(c.radius, 1.0):
            raise ValueError("Mannheim pairs are modelled on the unit sphere only")


def check_angle(a, tol=1e-12):
    """The pair collapses when ``a`` is a multiple of pi/2."""
    a = float(a)
    if not np.isfinite(a) or abs(np.sin(a) * np.cos(a)) < tol:
        raise DegenerateAngle(f"angle a = {a:.6g} makes sin(a) cos(a) vanish")
    return a


def base_to_mannheim(beta, a, plane_tol=1e-8):
    """Mannheim curve ``cos(a) beta - sin(a) B_beta`` of a non-planar ``beta``."""
    _require_unit_sphere(beta)
    a = check_angle(a)
    if plane_curve_test(beta, plane_tol):
        raise PlaneCurveNotAllowed("the Mannheim partner must not be a plane curve")
    return _offset(beta, [np.cos(a), 0.0, 0.0, -np.sin(a)], "mannheim")


def mate_from_mannheim(alpha, a):
    """Partner candidate ``cos(a) alpha + sin(a) N_alpha``."""
    _require_unit_sphere(alpha)
    a = check_angle(a)
    return _offset(alpha, [np.cos(a), 0.0, np.sin(a), 0.0], "partner")


def admissible_base_curvature(tau_beta, a, domain=(0.0, 1.0), n_check=257,
                              fd_step=numdiff.DEFAULT_STEP):
    """Curvature that makes ``(kappa, tau_beta)`` the partner of a Mannheim curve.

    Tangential components of ``d T_alpha / d sigma`` must vanish, giving
    ``kappa_beta = -tau_beta' sin(a) cos(a) / (cos^2 a + tau_beta^2 sin^2 a)``.
    ``tau_beta sin(a)`` must stay positive so the tangent angle has a branch
    in (0, pi).
    """
    a = check_angle(a)
    c, s = np.cos(a), np.sin(a)

    def tau_jet(x0, n):
        return numdiff.function_jet(tau_beta, x0, n, fd_step)

    def kappa(x):
        if isinstance(x, numdiff.Jet):
            n = x.c.size
            if n > 1 and (x.c[1] != 1.0 or np.any(x.c[2:])):
                raise TypeError("only the identity jet is supported")
            tj = tau_jet(x.c[0], n + 1)
            tau, dtau = numdiff.Jet(tj[:n]), numdiff.Jet(numdiff.jet_diff(tj)[:n])
            return -dtau * (s * c) / (c * c + tau * tau * (s * s))
        x = np.asarray(x, float)
        d = np.array([tau_jet(v, 2) for v in x.ravel()]).reshape(x.shape + (2,))
        return -d[..., 1] * s * c / (c * c + d[..., 0] ** 2 * s * s)

    grid = np.linspace(*domain, n_check)
    # tan(theta) = tau_beta tan(a) with theta in (0, pi) needs tau_beta sin(a) > 0
    tb = numdiff.evaluate(tau_beta, grid) * s
    if not np.all(tb > 0):
        i = int(np.argmin(tb))
        raise NotAdmissible(
            f"tau_beta sin(a) = {tb[i]:.3g} <= 0 at sigma = {grid[i]:.6g}; "
            "the tangent angle would leave (0, pi)")
    k = numdiff.evaluate(kappa, grid)
    if not np.all(k > 0):
        i = int(np.argmin(k))
        raise NotAdmissible(
            f"partner curvature {k[i]:.3g} <= 0 at sigma = {grid[i]:.6g}; "
            "reverse the slope of tau_beta or move a to the other quadrant")
    return kappa


# --- verification ----------------------------------------------------------


@dataclass
class PairCorrespondence:
    """Sampled correspondence between the partner's and the curve's arc lengths."""

    sigma: np.ndarray
    s_of_sigma: np.ndarray
    sprime: np.ndarray
    sprime_from_torsion: np.ndarray
    sprime_from_angle: np.ndarray
    theta: np.ndarray
    sign_consistent: bool

    @property
    def discrepancy(self):
        return float(np.max(np.abs(self.sprime_from_torsion - self.sprime_from_angle)))


def build_correspondence(alpha, beta, a, angle_tol=1e-10):
    """Angle between tangents and the two closed forms for ds/dsigma."""
    _check_aligned(alpha, beta)
    c, s = np.cos(a), np.sin(a)
    cos_t = np.clip(np.einsum("ni,ni->n", alpha.T, beta.T), -1.0, 1.0)
    theta = np.arccos(cos_t)
    if np.min(np.sin(theta)) <= angle_tol:
        i = int(np.argmin(np.sin(theta)))
        raise DegenerateAngle(
            f"tangent angle theta = {theta[i]:.3g} at sigma = {beta.s[i]:.6g}; "
            "the pair degenerates")
    tau_b = beta.tau
    sp_torsion = np.sqrt(c * c + tau_b**2 * s * s)
    sp_angle = c * np.cos(theta) + tau_b * s * np.sin(theta)
    s_of_sigma = alpha.s[0] + cumulative_simpson(sp_angle, x=beta.s, initial=0.0)
    return PairCorrespondence(
        sigma=beta.s.copy(), s_of_sigma=s_of_sigma, sprime=alpha.speed.copy(),
        sprime_from_torsion=sp_torsion, sprime_from_angle=sp_angle, theta=theta,
        sign_consistent=bool(np.all(tau_b * s > 0)),
    )


def extract_lambda_mu(a, corr):
    """``lambda = tan a`` and ``mu = tan a cot theta`` on the grid."""
    if abs(np.cos(a)) < 1e-12:
        raise TangentPole("tan a is undefined at a = pi/2")
    lam = float(np.tan(a))
    return lam, lam / np.tan(corr.theta)


@dataclass
class MannheimPairReport:
    a: float
    d: float
    lam: float
    mu: np.ndarray
    theta: np.ndarray
    sigma: np.ndarray
    theta_variance: float
    residuals: dict
    diagnostics: dict = field(default_factory=dict)

    def passed(self, tol=DEFAULT_TOL):
        return all(v <= tol for v in self.residuals.values())

    def failures(self, tol=DEFAULT_TOL):
        return {k: v for k, v in self.residuals.items() if not v <= tol}

    def to_dict(self):
        return {
            "a": self.a, "d": self.d, "lambda": self.lam,
            "residuals": dict(self.residuals),
            "theta": self.theta.tolist(), "mu": self.mu.tolist(),
            "sigma": self.sigma.tolist(),
            "theta_variance": self.theta_variance,
            "diagnostics": dict(self.diagnostics),
        }


def _check_aligned(alpha, beta):
    if len(alpha) != len(beta):
        raise ValueError("curves must be sampled at corresponding points")
    if not (np.isclose(alpha.radius, 1.0) and np.isclose(beta.radius, 1.0)):
        raise ValueError("Mannheim pairs are modelled on the unit sphere only")
    if np.any(beta.degenerate):
        raise FrameDegenerate("partner curve has geodesic points")


def _sup(x):
    x = np.asarray(x, float)
    if x.ndim > 1:
        x = np.linalg.norm(x, axis=-1)
    x = x[np.isfinite(x)]
    return float(np.max(np.abs(x))) if x.size else float("nan")


def verify_pair(alpha, beta, a):
    """Check every stated property of a candidate pair sampled on a common grid.

    ``alpha`` and ``beta`` are FrameFields whose i-th samples correspond;
    ``beta.s`` is the partner's arc length sigma. Samples where alpha has a
    geodesic point are excluded from the normal-dependent residuals and
    counted in ``diagnostics["excluded_samples"]``.
    """
    a = check_angle(a)
    corr = build_correspondence(alpha, beta, a)
    lam, mu = extract_lambda_mu(a, corr)
    c, s = np.cos(a), np.sin(a)
    pa, pb = alpha.points, beta.points
    ok = ~alpha.degenerate

    # orient N_alpha along the pair's common great circle
    toward = pb - c * pa
    sign = np.where(np.einsum("ni,ni->n", alpha.N, toward) * np.sign(s) < 0, -1.0, 1.0)
    sign[~ok] = np.nan
    n_a = alpha.N * sign[:, None]
    b_a = alpha.B * sign[:, None]
    k_a = alpha.kappa * sign
    t_a = alpha.tau
    k_b, t_b = beta.kappa, beta.tau
    th = corr.theta
    sth, cth = np.sin(th), np.cos(th)
    sp = corr.sprime

    # 4th-order central differences, one-sided at the ends
    theta_prime = numdiff.grid_derivatives(beta.param, th, 1, points=5)[1] / beta.speed
    measured = np.arccos(np.clip(np.einsum("ni,ni->n", pa, pb), -1.0, 1.0))
    a_mod = np.mod(a, 2 * np.pi)
    d = float(min(a_mod, 2 * np.pi - a_mod))
    bb = np.einsum("ni,ni->n", b_a, beta.B)

    residuals = {
        # both great circles must agree: beta on alpha's normal circle and
        # alpha on beta's binormal circle
        "geodesic_coincidence": max(_sup(pb - great_circle(pa, n_a, a)),
                                    _sup(pa - great_circle(pb, beta.B, -a))),
        "normal_decomposition": _sup(n_a - (s * pb + c * beta.B)),
        "binormal_decomposition": _sup(beta.B - (-s * pa + c * n_a)),
        "partner_torsion": _sup(t_b - np.tan(th) / np.tan(a)),
        "mannheim_torsion": _sup(t_a * s * cth - (c - k_a * s) * sth),
        "cos_theta": _sup(cth**2 - c * c + k_a * s * c),
        "sin_theta": _sup(sth**2 - t_a * t_b * s * s),
        "theta_derivative": _sup(theta_prime + k_b * t_b * s / (sp * sth)),
        "arclength_ratio": _sup(sp - corr.sprime_from_angle),
        "linear_relation": _sup(1.0 - lam * k_a - mu * t_a),
        "binormal_angle_constancy": _sup(bb - np.nanmean(bb)),
        "a_constancy": _sup(measured - a),
    }
    valid_signs = sign[ok]
    if valid_signs.size and np.all(valid_signs > 0):
        orientation = "+1"
    elif valid_signs.size and np.all(valid_signs < 0):
        orientation = "-1"
    else:
        orientation = "mixed"
    diagnostics = {
        "excluded_samples": int(np.count_nonzero(~ok)),
        "normal_orientation": orientation,
        "sign_consistent": corr.sign_consistent,
        "sprime_discrepancy": corr.discrepancy,
        "arclength_reconstruction": _sup(corr.s_of_sigma - alpha.s),
        "distance_deviation": _sup(measured - d),
        "frame_dictionary_T": _sup(beta.T - (cth[:, None] * alpha.T + sth[:, None] * b_a)),
        "frame_dictionary_N": _sup(beta.N - (sth[:, None] * alpha.T - cth[:, None] * b_a)),
        "cos_sin_consistency": _sup(c * c - k_a * s * c + t_a * t_b * s * s - 1.0),
        "mu_spread": float(np.ptp(mu)),
        "alpha_max_abs_torsion": _sup(t_a),
        "alpha_curvature_spread": float(np.nanmax(k_a) - np.nanmin(k_a)) if ok.any() else 0.0,
        "alpha_torsion_spread": float(np.nanmax(t_a) - np.nanmin(t_a)) if ok.any() else 0.0,
    }
    return MannheimPairReport(
        a=float(a), d=d, lam=lam, mu=mu, theta=th, sigma=beta.s.copy(),
        theta_variance=float(np.var(th, ddof=1)), residuals=residuals,
        diagnostics=diagnostics,
    )


def pair_frames(alpha, beta, sigma):
    """Sample both curves at the same parameter values (the partner's arc length)."""
    fb = beta.frames() if isinstance(beta, SynthesizedCurve) and np.array_equal(
        beta.grid, sigma) else sample_frames(beta, sigma)
    fa = sample_frames(alpha, sigma, on_degenerate="mask")
    return fa, fb


def generate_pair(tau_beta, a, domain=(0.0, 1.0), initial=None, density=512):
    """Build a Mannheim pair from a partner torsion profile and verify it.

    Returns ``(beta, alpha, report)``.
    """
    kappa_beta = admissible_base_curvature(tau_beta, a, domain)
    profile = CurvatureProfile(kappa_beta, tau_beta, domain, name="partner")
    beta = synthesize_from_curvatures(profile, initial, 1.0, density)
    alpha = base_to_mannheim(beta, a)
    fa, fb = pair_frames(alpha, beta, beta.grid)
    return beta, alpha, verify_pair(fa, fb, a)


def mannheim_candidacy(kappa, tau, const_tol=1e-8):
    """Classify sampled curvatures against the constancy obstruction.

    A Mannheim curve cannot have both curvature and torsion constant, nor be
    planar; such samples are ``NotMannheimCandidate``. Anything else is only a
    candidate: the curvature condition is necessary, not sufficient.
    """
    kappa = np.asarray(kappa, float)
    tau = np.asarray(tau, float)
    if np.ptp(kappa) <= const_tol and np.ptp(tau) <= const_tol:
        return NOT_MANNHEIM
    if np.max(np.abs(tau)) <= const_tol:
        return NOT_MANNHEIM
    return CANDIDATE_ONLY
