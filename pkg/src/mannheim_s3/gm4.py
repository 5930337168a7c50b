"""From a curve in S^3 to a unit-speed curve in E^4 through its binormal.

Given ``alpha`` with curvature ``kappa`` and torsion ``tau`` and a constant
``lam`` with ``lam * tau > 0``, reparametrise by

    s'(t) = lam * tau / (tau^2 + kappa^2)

and set ``gamma(t) = integral of B_alpha(s(t)) dt``. Differentiating gives

    k1 = eps s' tau,   k2 = s' kappa,   k3 = eps s',   eps = sign(tau)

for the positively oriented E^4 frame ``(B, -eps N, eps T, -alpha)``, and so
``k1 = c (k1^2 + k2^2)`` with ``c = eps / lam``.
"""

from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import quad

from . import numdiff
from .errors import FrameDegenerate, IntegrationFailure, SignMismatch
from .frenet import (CurvatureProfile, SynthesizedCurve, reorthonormalize,
                     synthesize_from_curvatures)
from .frenet_e4 import ParamCurveE4, frenet_apparatus_e4, generalized_mannheim_condition


def _speed_function(profile, lam):
    def g(s):
        k, t = profile.kappa(s), profile.tau(s)
        return lam * t / (t * t + k * k)

    return g


def _rhs(profile, g):
    def rhs(t, y):
        s = y[0]
        k, tau, rate = float(profile.kappa(s)), float(profile.tau(s)), float(g(s))
        F = y[1:17].reshape(4, 4)
        a, T, N, B = F
        dF = rate * np.array([T, k * N - a, -k * T + tau * B, -tau * N])
        return np.concatenate([[rate], dF.ravel(), B])

    return rhs


def _rk4(rhs, t, y, h):
    k1 = rhs(t, y)
    k2 = rhs(t + 0.5 * h, y + 0.5 * h * k1)
    k3 = rhs(t + 0.5 * h, y + 0.5 * h * k2)
    k4 = rhs(t + h, y + h * k3)
    y = y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
    y[1:17] = reorthonormalize(y[1:17].reshape(4, 4)).ravel()
    return y


class GM4Curve(ParamCurveE4):
    """``gamma(t)`` with its reparametrisation ``s(t)`` and the moving frame of alpha.

    States ``(s, alpha, T, N, B, gamma)`` live on a uniform ``t`` grid; off-grid
    values take one RK4 step from the nearest node. Derivatives are analytic.
    """

    def __init__(self, profile, lam, t_grid, states):
        super().__init__(self._position, (t_grid[0], t_grid[-1]), name="gm4")
        self.profile = profile
        self.lam = float(lam)
        self.t = t_grid
        self.states = states
        self._g = _speed_function(profile, self.lam)
        self._rhs = _rhs(profile, self._g)

    @property
    def s(self):
        return self.states[:, 0]

    @property
    def points(self):
        return self.states[:, 17:]

    def state_at(self, t):
        t = float(t)
        i = int(np.clip(np.searchsorted(self.t, t), 0, self.t.size - 1))
        if i > 0 and abs(self.t[i - 1] - t) < abs(self.t[i] - t):
            i -= 1
        h = t - self.t[i]
        if h == 0.0:
            return self.states[i]
        return _rk4(self._rhs, self.t[i], self.states[i], h)

    def _position(self, t):
        t = np.asarray(t, float)
        if t.ndim == 0:
            return self.state_at(t)[17:]
        return np.array([self.state_at(x)[17:] for x in t.ravel()]).reshape(t.shape + (4,))

    def s_of_t(self, t):
        return float(self.state_at(t)[0])

    def derivatives(self, t, order=4):
        y = self.state_at(t)
        s = y[0]
        F = y[1:17].reshape(4, 4)
        kj, tj = self.profile.jets(s, order)
        gj = numdiff.function_jet(self._g, s, order, self.profile.fd_step)
        # gamma^(k+1) = (d/dt)^k B
        c = numdiff.frame_transport(np.array([0.0, 0, 0, 1]), kj, tj, order - 1, rate=gj)
        return np.vstack([y[17:], c @ F])


@dataclass
class GM4Result:
    gamma: GM4Curve
    lam: float
    epsilon: int = 0
    curvature_residuals: dict = field(default_factory=dict)
    fit_c: float = float("nan")
    fit_residual: float = float("nan")
    t: np.ndarray = None
    k: np.ndarray = None  # (n, 3) measured k1, k2, k3
    excluded: int = 0
    mixed_epsilon: bool = False

    @property
    def s_of_t(self):
        return self.gamma.s

    def speed_error(self):
        """``sup | |gamma'| - 1 |`` over the construction grid."""
        B = self.gamma.states[:, 13:17]
        return float(np.max(np.abs(np.linalg.norm(B, axis=1) - 1.0)))

    def passed(self, tol=1e-5, c_tol=1e-5, fit_tol=1e-6):
        return (not self.mixed_epsilon and self.epsilon in (1, -1)
                and max(self.curvature_residuals.values()) <= tol
                and abs(self.fit_c - self.epsilon / self.lam) <= c_tol
                and self.fit_residual <= fit_tol)

    def to_dict(self):
        return {"lambda": self.lam, "epsilon": self.epsilon,
                "curvature_residuals": dict(self.curvature_residuals), "fit_c": self.fit_c,
                "fit_residual": self.fit_residual}

    def table(self):
        """Rows ``(t, s, gamma_1..gamma_4, k1, k2, k3)`` at the verified samples."""
        s = np.array([self.gamma.s_of_t(x) for x in self.t])
        pts = self.gamma(self.t)
        return np.column_stack([self.t, s, pts, self.k])


def _as_profile_curve(alpha):
    if isinstance(alpha, CurvatureProfile):
        return alpha, synthesize_from_curvatures(alpha)
    if isinstance(alpha, SynthesizedCurve):
        return alpha.profile, alpha
    raise TypeError("alpha must be a CurvatureProfile or a synthesized curve")


def gm4_construct(alpha, lam, t_range=None, density=512):
    """Integrate ``(s(t), frame, gamma(t))`` jointly with RK4.

    ``alpha`` is a CurvatureProfile or a SynthesizedCurve on S^3(1). By
    default ``t`` runs over the whole ``s`` domain, i.e. ``[0, int ds/s'(s)]``.
    """
    profile, curve = _as_profile_curve(alpha)
    if curve.radius != 1.0:
        raise FrameDegenerate("the binormal construction assumes the unit sphere")
    lam = float(lam)
    s0, s1 = profile.domain
    g = _speed_function(profile, lam)
    ss = np.linspace(s0, s1, 513)
    gs = numdiff.evaluate(g, ss)
    if np.any(~(gs > 0)):
        bad = ss[np.argmax(~(gs > 0))]
        raise SignMismatch(f"lambda * tau must be positive (fails at s = {bad:.6g})")
    if t_range is None:
        length, _ = quad(lambda x: 1.0 / g(x), s0, s1, limit=200)
        t_range = (0.0, length)
    t0, t1 = map(float, t_range)
    n = max(int(np.ceil((t1 - t0) * density)), 8)
    t = np.linspace(t0, t1, n + 1)
    y0 = np.concatenate([[s0], curve.state_at(s0).ravel(), np.zeros(4)])
    rhs = _rhs(profile, g)
    ys = np.empty((t.size, y0.size))
    ys[0] = y0
    for i in range(n):
        ys[i + 1] = _rk4(rhs, t[i], ys[i], t[i + 1] - t[i])
        s = ys[i + 1, 0]
        if not np.isfinite(s):
            raise IntegrationFailure(f"non-finite state at t = {t[i + 1]:.6g}")
        if s > s1 + 1e-9 or s < s0:
            raise SignMismatch(f"s(t) left the domain {profile.domain} at t = {t[i + 1]:.6g}")
    if np.any(np.diff(ys[:, 0]) <= 0):
        raise SignMismatch("s(t) is not strictly increasing")
    return GM4Result(GM4Curve(profile, lam, t, ys), lam)


def predicted_curvatures(profile, lam, s, eps):
    g = numdiff.evaluate(_speed_function(profile, lam), s)
    k, tau = numdiff.evaluate(profile.kappa, s), numdiff.evaluate(profile.tau, s)
    return np.column_stack([eps * g * tau, g * k, eps * g * np.ones_like(s)])


def gm4_verify(res, n_samples=201, method="analytic"):
    """Measure E^4 curvatures of ``gamma`` and compare against the closed forms.

    ``method="fd"`` differentiates the integrated positions numerically instead
    of transporting the frame, which makes the check independent of the jets.

    ``eps`` is chosen per residual; a disagreement between the three choices
    is recorded as ``mixed_epsilon``. Samples where the E^4 frame degenerates
    are skipped and counted.
    """
    gamma = res.gamma
    t0, t1 = gamma.domain
    if method == "analytic":
        probe = gamma
    else:
        probe = ParamCurveE4(gamma.func, gamma.domain)
        # keep the stencil inside the integrated range
        pad = (numdiff.STENCIL_POINTS // 2) * probe.fd_step
        t0, t1 = t0 + pad, t1 - pad
    ts, ks, ss = [], [], []
    excluded = 0
    for t in np.linspace(t0, t1, n_samples):
        try:
            f = frenet_apparatus_e4(probe, t)
        except FrameDegenerate:
            excluded += 1
            continue
        ts.append(t)
        ks.append((f.k1, f.k2, f.k3))
        ss.append(gamma.s_of_t(t))
    if not ts:
        raise FrameDegenerate("no sample admits an E^4 Frenet frame")
    t = np.array(ts)
    k = np.array(ks)
    s = np.array(ss)
    best = {}
    for name, col in (("k1", 0), ("k2", 1), ("k3", 2)):
        errs = {e: float(np.max(np.abs(k[:, col] - predicted_curvatures(
            gamma.profile, res.lam, s, e)[:, col]))) for e in (1, -1)}
        best[name] = min(errs, key=errs.get) if errs[1] != errs[-1] else 0
        res.curvature_residuals[name] = errs[best[name] or 1]
    votes = {e for e in best.values() if e != 0}
    res.mixed_epsilon = len(votes) > 1
    res.epsilon = votes.pop() if len(votes) == 1 else 0
    if res.epsilon:
        pred = predicted_curvatures(gamma.profile, res.lam, s, res.epsilon)
        res.curvature_residuals = {n: float(np.max(np.abs(k[:, i] - pred[:, i])))
                                   for i, n in enumerate(("k1", "k2", "k3"))}
    res.fit_c, res.fit_residual = generalized_mannheim_condition(k[:, 0], k[:, 1])
    res.t, res.k, res.excluded = t, k, excluded
    return res


def gm4_table(res):
    """Rows ``(t, s, gamma, k1, k2, k3)`` at every integration node."""
    g = res.gamma
    k = np.array([[f.k1, f.k2, f.k3] for f in (frenet_apparatus_e4(g, t) for t in g.t)])
    return np.column_stack([g.t, g.s, g.points, k])
