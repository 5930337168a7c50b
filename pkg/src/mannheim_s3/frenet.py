"""Frenet apparatus of curves immersed in S^3(r).

Extraction works from derivatives up to order three, supplied analytically or
by finite differences.  Synthesis integrates the Frenet system written in the
ambient R^4::

    alpha' = T
    T'     = kappa N - alpha / r^2
    N'     = -kappa T + tau B
    B'     = -tau N

with classical RK4 and a modified Gram-Schmidt projection after every step.
The binormal is always the vector completing ``(alpha/r, T, N)`` to a
positively oriented basis of R^4, so torsion carries a sign.
"""

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np
from scipy.integrate import cumulative_simpson, quad
from scipy.interpolate import CubicHermiteSpline
from scipy.optimize import minimize_scalar

from . import numdiff
from .errors import FrameDegenerate, IntegrationFailure, NotImmersed, RadiusMismatch
from .expr import as_function
from .sphere import cofactor_complement

KAPPA_MIN = 1e-7
GRID_STEP = 0.006


# --- profiles and curves ---------------------------------------------------


@dataclass
class CurvatureProfile:
    """Prescribed curvature ``kappa(s) > 0`` and torsion ``tau(s)`` on a domain."""

    kappa: Callable
    tau: Callable
    domain: tuple = (0.0, 1.0)
    name: str = "profile"
    flags: tuple = ()
    fd_step: float = numdiff.DEFAULT_STEP

    def __post_init__(self):
        s0, s1 = map(float, self.domain)
        if not s1 > s0:
            raise ValueError(f"empty domain {self.domain}")
        self.domain = (s0, s1)
        self.kappa = as_function(self.kappa)
        self.tau = as_function(self.tau)

    def sample(self, n=257):
        s = np.linspace(*self.domain, n)
        return s, numdiff.evaluate(self.kappa, s), numdiff.evaluate(self.tau, s)

    def jets(self, s, n_terms):
        """Taylor jets of curvature and torsion at ``s`` (exact when the callables allow it)."""
        k = numdiff.function_jet(self.kappa, s, n_terms, self.fd_step)
        t = numdiff.function_jet(self.tau, s, n_terms, self.fd_step)
        return k, t


class ParamCurveS3:
    """A parametrised curve ``t -> alpha(t)`` in S^3(radius).

    ``derivs`` may hold analytic first, second and third derivative callables;
    otherwise derivatives come from 9-point central differences with step
    ``fd_step`` (which must stay well inside the scale of the curve).
    """

    def __init__(self, func, domain, radius=1.0, derivs=None, fd_step=None,
                 unit_speed=False, name="curve"):
        self.func = func
        self.domain = (float(domain[0]), float(domain[1]))
        self.radius = float(radius)
        self.derivs = list(derivs) if derivs else []
        self.fd_step = numdiff.DEFAULT_STEP if fd_step is None else fd_step
        self.unit_speed = unit_speed
        self.name = name

    @property
    def derivative_mode(self):
        return "analytic" if len(self.derivs) >= 3 else "finite-difference"

    def __call__(self, t):
        return np.asarray(self.func(t), dtype=float)

    def derivatives(self, t, order=3):
        """Array ``(order + 1, 4)`` holding ``alpha(t), alpha'(t), ...``."""
        if len(self.derivs) >= order:
            return np.array([self(t)] + [np.asarray(d(t), float) for d in self.derivs[:order]])
        return numdiff.central_derivatives(self.func, t, order, self.fd_step)

    def frame(self, t, kappa_min=KAPPA_MIN):
        return frenet_apparatus(self, t, kappa_min=kappa_min)

    def grid(self, density=512):
        return uniform_grid(self.domain, density)

    def with_fd(self):
        """Same curve, derivatives forced to finite differences."""
        return ParamCurveS3(self.func, self.domain, self.radius, None, self.fd_step,
                            self.unit_speed, self.name)


def uniform_grid(domain, density):
    s0, s1 = domain
    n = max(int(np.ceil((s1 - s0) * density)), 8)
    return np.linspace(s0, s1, n + 1)


# --- frames ----------------------------------------------------------------


@dataclass(frozen=True)
class FrenetFrameS3:
    """Frenet data at one point: position, ``T, N, B`` and ``kappa, tau``."""

    s: float
    point: np.ndarray
    T: np.ndarray
    N: np.ndarray
    B: np.ndarray
    kappa: float
    tau: float
    radius: float = 1.0
    speed: float = 1.0

    def matrix(self):
        """Rows ``alpha/r, T, N, B``."""
        return np.array([self.point / self.radius, self.T, self.N, self.B])

    def validate(self, tol=1e-8):
        m = self.matrix()
        err = np.max(np.abs(m @ m.T - np.eye(4)))
        if err > tol:
            raise FrameDegenerate(f"frame is not orthonormal (error {err:.3g})", err)
        det = np.linalg.det(m)
        if abs(det - 1.0) > tol:
            raise FrameDegenerate(f"frame is not positively oriented (det {det:.6g})", det)
        if self.kappa < 0:
            raise FrameDegenerate("negative curvature", self.kappa)
        return self


def standard_frame(radius=1.0):
    """The frame ``alpha = r e1, T = e2, N = e3, B = e4`` (``s = 0``)."""
    e = np.eye(4)
    return FrenetFrameS3(0.0, radius * e[0], e[1], e[2], e[3], 0.0, 0.0, radius)


def frame_from_derivatives(d, radius=1.0, kappa_min=KAPPA_MIN, s=0.0):
    """Frenet frame from ``(alpha, alpha', alpha'', alpha''')`` in any parameter.

    ``kappa`` is the length of the part of alpha'' normal to both ``alpha``
    and ``T``, divided by speed squared; torsion is the binormal component of
    alpha''' over ``kappa * speed^3``.
    """
    a, d1, d2, d3 = d[0], d[1], d[2], d[3]
    r2 = radius * radius
    if abs(np.linalg.norm(a) - radius) > 1e-6 * radius:
        raise RadiusMismatch(f"point has norm {np.linalg.norm(a):.9g}, sphere radius {radius:g}")
    speed = float(np.linalg.norm(d1))
    if speed == 0.0:
        raise NotImmersed("zero speed")
    T = d1 / speed
    acc = d2 - (d2 @ a / r2) * a
    acc = acc - (acc @ T) * T
    kappa = float(np.linalg.norm(acc) / speed**2)
    if kappa < kappa_min:
        raise FrameDegenerate(
            f"geodesic point: frame undefined (kappa = {kappa:.3g})", kappa
        )
    N = acc / np.linalg.norm(acc)
    # re-orthogonalise once; a, T, N feed the cofactor expansion
    N = N - (N @ a / r2) * a - (N @ T) * T
    N /= np.linalg.norm(N)
    B = cofactor_complement(a / np.linalg.norm(a), T, N)
    B /= np.linalg.norm(B)
    tau = float(d3 @ B / (kappa * speed**3))
    return FrenetFrameS3(float(s), np.array(a, float), T, N, B, kappa, tau, radius, speed)


def frenet_apparatus(curve, t, kappa_min=KAPPA_MIN, s=None):
    """Frenet frame of ``curve`` at parameter ``t``.

    For arc-length parametrised curves ``t`` is the arc length; otherwise the
    arc length ``s`` may be passed through for bookkeeping.
    """
    d = curve.derivatives(t, 3)
    return frame_from_derivatives(d, curve.radius, kappa_min, t if s is None else s)


def frenet_residuals(curve, t, h=1e-3):
    """Sup-norm mismatch of the three Frenet equations at ``t``.

    Frame derivatives are taken by 5-point differences of extracted frames.
    """
    offs = np.array([-2, -1, 0, 1, 2], dtype=float)
    frames = [frenet_apparatus(curve, t + h * o) for o in offs]
    w = numdiff.fd_weights(offs, 1) / h
    f0 = frames[2]
    v = f0.speed

    def ds(attr):
        return sum(wi * getattr(f, attr) for wi, f in zip(w, frames)) / v

    r2 = curve.radius**2
    return {
        "T": float(np.max(np.abs(ds("T") - (f0.kappa * f0.N - f0.point / r2)))),
        "N": float(np.max(np.abs(ds("N") - (-f0.kappa * f0.T + f0.tau * f0.B)))),
        "B": float(np.max(np.abs(ds("B") + f0.tau * f0.N))),
    }


@dataclass
class FrameField:
    """Frenet frames sampled on an increasing grid.

    ``s`` is arc length, ``param`` the curve parameter at each sample and
    ``speed`` is ds/dparam. Degenerate samples (geodesic points) are marked in
    ``degenerate`` and carry NaN in ``N, B, kappa, tau``.
    """

    s: np.ndarray
    points: np.ndarray
    T: np.ndarray
    N: np.ndarray
    B: np.ndarray
    kappa: np.ndarray
    tau: np.ndarray
    radius: float = 1.0
    param: Optional[np.ndarray] = None
    speed: Optional[np.ndarray] = None
    degenerate: Optional[np.ndarray] = None

    def __post_init__(self):
        self.s = np.asarray(self.s, float)
        if self.s.ndim != 1 or self.s.size == 0:
            raise ValueError("grid must be a non-empty 1-d array")
        if np.any(np.diff(self.s) <= 0):
            raise ValueError("arc-length grid must be strictly increasing")
        if self.param is None:
            self.param = self.s.copy()
        if self.speed is None:
            self.speed = np.ones_like(self.s)
        if self.degenerate is None:
            self.degenerate = np.zeros(self.s.size, bool)

    def __len__(self):
        return self.s.size

    def frame(self, i):
        return FrenetFrameS3(float(self.s[i]), self.points[i], self.T[i], self.N[i],
                             self.B[i], float(self.kappa[i]), float(self.tau[i]),
                             self.radius, float(self.speed[i]))

    def gram_error(self):
        """Max deviation of each sample's Gram matrix from the identity."""
        m = np.stack([self.points / self.radius, self.T, self.N, self.B], axis=1)
        g = np.einsum("nij,nkj->nik", m, m)
        return np.nanmax(np.abs(g - np.eye(4)), axis=(1, 2))

    def orientation(self):
        m = np.stack([self.points / self.radius, self.T, self.N, self.B], axis=1)
        return np.linalg.det(m)

    def sphere_drift(self):
        return np.abs(np.einsum("ni,ni->n", self.points, self.points) - self.radius**2)


def sample_frames(curve, params, on_degenerate="raise", kappa_min=KAPPA_MIN,
                  arclength=None):
    """Frames of ``curve`` at each parameter value.

    With ``on_degenerate="mask"`` geodesic points are recorded instead of
    raising.
    """
    params = np.asarray(params, float)
    n = params.size
    pts, T, N, B = (np.full((n, 4), np.nan) for _ in range(4))
    kap, tau, speed = np.full(n, np.nan), np.full(n, np.nan), np.empty(n)
    bad = np.zeros(n, bool)
    for i, t in enumerate(params):
        d = curve.derivatives(t, 3)
        pts[i], speed[i] = d[0], np.linalg.norm(d[1])
        T[i] = d[1] / speed[i]
        try:
            f = frame_from_derivatives(d, curve.radius, kappa_min)
        except FrameDegenerate as exc:
            if on_degenerate == "raise":
                raise FrameDegenerate(
                    f"{exc} at parameter {t:.6g}", exc.measured) from None
            bad[i] = True
            kap[i] = exc.measured
            continue
        N[i], B[i], kap[i], tau[i] = f.N, f.B, f.kappa, f.tau
    if getattr(curve, "unit_speed", False):
        s = params.copy()
    elif arclength is not None:
        s = arclength.s_of_t(params)
    else:
        s = params[0] + cumulative_simpson(speed, x=params, initial=0.0)
    return FrameField(s, pts, T, N, B, kap, tau, curve.radius, params, speed, bad)


def frames_from_samples(t, points, radius=None, stride=None, on_degenerate="raise",
                        kappa_min=KAPPA_MIN, target_step=GRID_STEP):
    """Frames of a uniformly sampled curve using grid finite differences only.

    Stencils use every ``stride``-th sample; by default the stride is chosen
    so the effective step is near ``target_step`` (one-sided end stencils are
    the accuracy bottleneck, hence a smaller step than for callables).
    """
    t = np.asarray(t, float)
    X = np.asarray(points, float)
    if X.ndim != 2 or X.shape[1] != 4:
        raise ValueError("points must have shape (n, 4)")
    if radius is None:
        radius = float(np.mean(np.linalg.norm(X, axis=1)))
    if stride is None:
        stride = numdiff.choose_stride(t[1] - t[0], target_step, n=t.size)
    D = numdiff.grid_derivatives(t, X, 3, stride)
    curve = _SampledDerivs(t, D, radius)
    ff = sample_frames(curve, np.arange(t.size), on_degenerate, kappa_min,
                       arclength=_GridArcLength(t, D[1]))
    ff.param = t.copy()
    return ff


class _SampledDerivs:
    unit_speed = False

    def __init__(self, t, D, radius):
        self.t, self.D, self.radius = t, D, radius

    def derivatives(self, i, order=3):
        i = int(i)
        return self.D[: order + 1, i]


class _GridArcLength:
    def __init__(self, t, d1):
        self.s = t[0] + cumulative_simpson(np.linalg.norm(d1, axis=1), x=t, initial=0.0)

    def s_of_t(self, idx):
        return self.s[np.asarray(idx, int)]


# --- arc length ------------------------------------------------------------


class ArcLengthTable:
    """Monotone map between a curve parameter ``t`` and arc length ``s``.

    Interval lengths come from adaptive quadrature of the speed; both
    directions are cubic Hermite interpolants using the exact speed as slope
    data.
    """

    def __init__(self, t_nodes, s_nodes, speed):
        self.t = np.asarray(t_nodes, float)
        self.s = np.asarray(s_nodes, float)
        self.speed = np.asarray(speed, float)
        if np.any(np.diff(self.s) <= 0):
            raise NotImmersed("arc length is not strictly increasing")
        self._s_of_t = CubicHermiteSpline(self.t, self.s, self.speed)
        self._t_of_s = CubicHermiteSpline(self.s, self.t, 1.0 / self.speed)

    @property
    def length(self):
        return float(self.s[-1] - self.s[0])

    def s_of_t(self, t):
        return self._s_of_t(t)

    def t_of_s(self, s):
        return self._t_of_s(s)

    def ds_dt(self, t):
        return self._s_of_t.derivative()(t)


def curve_speed(curve, t):
    return float(np.linalg.norm(curve.derivatives(t, 1)[1]))


def check_immersed(curve, n=1025, rel_tol=1e-8):
    """Raise NotImmersed if the speed vanishes somewhere on the domain."""
    t = np.linspace(*curve.domain, n)
    v = np.array([curve_speed(curve, x) for x in t])
    vmax = v.max()
    i = int(np.argmin(v))
    lo, hi = t[max(i - 1, 0)], t[min(i + 1, n - 1)]
    vmin = v[i]
    if hi > lo:
        res = minimize_scalar(lambda x: curve_speed(curve, x), bounds=(lo, hi),
                              method="bounded", options={"xatol": 1e-12})
        vmin = min(vmin, float(res.fun))
    if vmax == 0.0 or vmin <= rel_tol * vmax:
        raise NotImmersed(f"speed vanishes near t = {t[i]:.6g} (|c'| = {vmin:.3g})")
    return vmin, vmax


def arclength_reparametrize(curve, tol=1e-10, nodes=257):
    """Arc-length table of ``curve`` over its domain."""
    check_immersed(curve)
    t = np.linspace(*curve.domain, nodes)
    speed = np.array([curve_speed(curve, x) for x in t])
    pieces = [quad(lambda x: curve_speed(curve, x), a, b, epsabs=tol, epsrel=tol,
                   limit=200)[0] for a, b in zip(t[:-1], t[1:])]
    s = np.concatenate([[0.0], np.cumsum(pieces)])
    return ArcLengthTable(t, s, speed)


# --- synthesis -------------------------------------------------------------


def _frenet_rhs(kappa, tau, inv_r2):
    def rhs(s, y):
        k, t = float(kappa(s)), float(tau(s))
        a, T, N, B = y
        return np.array([T, k * N - inv_r2 * a, -k * T + t * B, -t * N])

    return rhs


def _rk4_step(rhs, s, y, h):
    k1 = rhs(s, y)
    k2 = rhs(s + 0.5 * h, y + 0.5 * h * k1)
    k3 = rhs(s + 0.5 * h, y + 0.5 * h * k2)
    k4 = rhs(s + h, y + h * k3)
    return y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


def reorthonormalize(y, radius=1.0):
    """Modified Gram-Schmidt on ``(alpha/r, T, N, B)``, alpha first."""
    e = y.copy()
    e[0] = e[0] / radius
    for i in range(4):
        for j in range(i):
            e[i] -= (e[i] @ e[j]) * e[j]
        e[i] /= np.linalg.norm(e[i])
    e[0] *= radius
    return e


def _integrate(rhs, grid, y0, radius):
    ys = np.empty((grid.size, 4, 4))
    ys[0] = y0
    for i in range(grid.size - 1):
        h = grid[i + 1] - grid[i]
        y = _rk4_step(rhs, grid[i], ys[i], h)
        if not np.all(np.isfinite(y)):
            raise IntegrationFailure(f"non-finite state at s = {grid[i + 1]:.6g}")
        ys[i + 1] = reorthonormalize(y, radius)
    return ys


def synthesize_from_curvatures(profile, initial=None, radius=1.0, density=512,
                               tol=None, max_density=2**16, estimate_error=True):
    """Integrate the Frenet system for ``profile`` from ``initial``.

    ``density`` is RK4 steps per unit arc length. The Richardson estimate
    compares the end state against a run with half the step; if ``tol`` is
    given the density doubles until the estimate falls below it.
    """
    if initial is None:
        initial = standard_frame(radius)
    if not np.isclose(initial.radius, radius):
        raise FrameDegenerate("initial frame lives on a different sphere")
    y0 = np.array([initial.point, initial.T, initial.N, initial.B], float)
    m = y0.copy()
    m[0] /= radius
    err = np.max(np.abs(m @ m.T - np.eye(4)))
    if err > 1e-8:
        raise FrameDegenerate(f"initial frame is not orthonormal (error {err:.3g})", err)
    if np.linalg.det(m) < 0:
        raise FrameDegenerate("initial frame is not positively oriented")
    s0, s1 = profile.domain
    _, k, _ = profile.sample()
    if np.any(~(k > 0)):
        raise FrameDegenerate("profile curvature must be positive on its domain",
                              float(np.nanmin(k)))
    rhs = _frenet_rhs(profile.kappa, profile.tau, 1.0 / radius**2)
    while True:
        grid = uniform_grid((s0, s1), density)
        if grid[1] - grid[0] < 1e-9:
            raise IntegrationFailure("step size underflow")
        ys = _integrate(rhs, grid, y0, radius)
        estimate = None
        if estimate_error:
            fine = _integrate(rhs, uniform_grid((s0, s1), 2 * (grid.size - 1) / (s1 - s0)),
                              y0, radius)
            estimate = float(np.max(np.abs(fine[-1] - ys[-1])) / 15.0)
        if tol is None or estimate is None or estimate <= tol:
            break
        density *= 2
        if density > max_density:
            raise IntegrationFailure(
                f"error estimate {estimate:.3g} above tolerance at maximum density")
    return SynthesizedCurve(profile, grid, ys, radius, estimate)


class SynthesizedCurve(ParamCurveS3):
    """Curve produced by Frenet integration, parametrised by arc length.

    Off-grid states come from a single RK4 step off the nearest node; the
    derivatives are analytic, obtained by transporting the frame with the
    Taylor jets of the profile.
    """

    def __init__(self, profile, grid, states, radius, error_estimate=None):
        super().__init__(self._position, profile.domain, radius, unit_speed=True,
                         name=profile.name)
        self.profile = profile
        self.grid = grid
        self.states = states
        self.error_estimate = error_estimate
        self._rhs = _frenet_rhs(profile.kappa, profile.tau, 1.0 / radius**2)

    @property
    def derivative_mode(self):
        return "analytic"

    def state_at(self, s):
        s = float(s)
        i = int(np.clip(np.searchsorted(self.grid, s), 0, self.grid.size - 1))
        if i > 0 and abs(self.grid[i - 1] - s) < abs(self.grid[i] - s):
            i -= 1
        h = s - self.grid[i]
        if h == 0.0:
            return self.states[i]
        return reorthonormalize(_rk4_step(self._rhs, self.grid[i], self.states[i], h),
                                self.radius)

    def _position(self, s):
        s = np.asarray(s, float)
        if s.ndim == 0:
            return self.state_at(s)[0]
        return np.array([self.state_at(x)[0] for x in s.ravel()]).reshape(s.shape + (4,))

    def combination_derivatives(self, coeffs, s, order=3):
        """Derivatives of ``sum coeffs_i F_i`` where F = (alpha, T, N, B)."""
        state = self.state_at(s)
        kj, tj = self.profile.jets(s, order + 1)
        c = numdiff.frame_transport(coeffs, kj, tj, order, self.radius)
        return c @ state

    def derivatives(self, s, order=3):
        return self.combination_derivatives(np.array([1.0, 0, 0, 0]), s, order)

    def frame(self, s, kappa_min=KAPPA_MIN):
        a, T, N, B = self.state_at(s)
        return FrenetFrameS3(float(s), a, T, N, B, float(self.profile.kappa(s)),
                             float(self.profile.tau(s)), self.radius)

    def frames(self):
        """FrameField on the integration grid, curvatures from the profile."""
        ys = self.states
        k = numdiff.evaluate(self.profile.kappa, self.grid)
        t = numdiff.evaluate(self.profile.tau, self.grid)
        return FrameField(self.grid.copy(), ys[:, 0].copy(), ys[:, 1].copy(),
                          ys[:, 2].copy(), ys[:, 3].copy(), k, t, self.radius)

    def offset(self, coeffs, name="offset"):
        return FrameCombinationCurve(self, coeffs, name)


class FrameCombinationCurve(ParamCurveS3):
    """``t -> sum coeffs_i F_i(t)`` for the moving frame of a synthesized curve.

    Parametrised by the base curve's arc length, so generally not unit speed.
    """

    def __init__(self, base, coeffs, name="offset"):
        super().__init__(self._position, base.domain, base.radius, name=name)
        self.base = base
        self.coeffs = np.asarray(coeffs, float)

    @property
    def derivative_mode(self):
        return "analytic"

    def _position(self, s):
        s = np.asarray(s, float)
        if s.ndim == 0:
            return self.coeffs @ self.base.state_at(s)
        return np.array([self.coeffs @ self.base.state_at(x) for x in s.ravel()]
                        ).reshape(s.shape + (4,))

    def derivatives(self, s, order=3):
        return self.base.combination_derivatives(self.coeffs, s, order)


# --- tests on curves -------------------------------------------------------


def plane_curve_test(curve, tol=1e-8, params=None, density=64):
    """True iff ``sup |tau| <= tol`` over the sampling grid."""
    if params is None:
        params = uniform_grid(curve.domain, density)
    if isinstance(curve, SynthesizedCurve):
        tau = numdiff.evaluate(curve.profile.tau, np.asarray(params, float))
    else:
        tau = sample_frames(curve, params).tau
    return bool(np.max(np.abs(tau)) <= tol)
