"""Special Frenet curves in Euclidean 4-space.

Frames come from Gram-Schmidt on the first three derivatives, with the fourth
vector fixed by orientation; the curvatures are read off the leading
components of the higher derivatives::

    k1 = <c'', e2> / v^2,   k2 = <c''', e3> / (v^3 k1),
    k3 = <c'''', e4> / (v^4 k1 k2)

which holds in any regular parameter (``v = |c'|``).
"""

from dataclasses import dataclass

import numpy as np

from . import numdiff
from .errors import EmptyInput, FrameDegenerate
from .sphere import cofactor_complement

RANK_TOL = 1e-9


class ParamCurveE4:
    """A curve ``t -> gamma(t)`` in R^4, analytic or finite-difference derivatives."""

    def __init__(self, func, domain, derivs=None, fd_step=None, name="curve"):
        self.func = func
        self.domain = (float(domain[0]), float(domain[1]))
        self.derivs = list(derivs) if derivs else []
        self.fd_step = numdiff.DEFAULT_STEP if fd_step is None else fd_step
        self.name = name

    def __call__(self, t):
        return np.asarray(self.func(t), float)

    def derivatives(self, t, order=4):
        if len(self.derivs) >= order:
            return np.array([self(t)] + [np.asarray(d(t), float) for d in self.derivs[:order]])
        return numdiff.central_derivatives(self.func, t, order, self.fd_step)


@dataclass(frozen=True)
class FrenetFrameE4:
    s: float
    e1: np.ndarray
    e2: np.ndarray
    e3: np.ndarray
    e4: np.ndarray
    k1: float
    k2: float
    k3: float
    speed: float = 1.0

    def matrix(self):
        return np.array([self.e1, self.e2, self.e3, self.e4])


def _gram_schmidt(v, basis):
    # twice is enough
    for _ in range(2):
        for e in basis:
            v = v - (v @ e) * e
    return v


def frame_from_derivatives_e4(d, s=0.0, rank_tol=RANK_TOL):
    """E^4 Frenet frame from ``(c, c', c'', c''', c'''')``."""
    v = float(np.linalg.norm(d[1]))
    if v == 0.0:
        raise FrameDegenerate("zero speed", 0.0)
    e1 = d[1] / v
    w2 = _gram_schmidt(d[2], [e1])
    n2 = np.linalg.norm(w2)
    if n2 <= rank_tol * max(v * v, 1.0):
        raise FrameDegenerate(f"first curvature vanishes (k1 = {n2 / v**2:.3g})", n2 / v**2)
    e2 = w2 / n2
    w3 = _gram_schmidt(d[3], [e1, e2])
    n3 = np.linalg.norm(w3)
    if n3 <= rank_tol * max(v**3, 1.0):
        raise FrameDegenerate("second curvature vanishes", n3)
    e3 = w3 / n3
    e4 = cofactor_complement(e1, e2, e3)
    e4 /= np.linalg.norm(e4)
    k1 = float(d[2] @ e2 / v**2)
    k2 = float(d[3] @ e3 / (v**3 * k1))
    k3 = float(d[4] @ e4 / (v**4 * k1 * k2))
    return FrenetFrameE4(float(s), e1, e2, e3, e4, k1, k2, k3, v)


def frenet_apparatus_e4(curve, t, s=None):
    return frame_from_derivatives_e4(curve.derivatives(t, 4), t if s is None else s)


def frenet_residuals_e4(curve, t, h=1e-3):
    """Sup-norm mismatch of the four E^4 Frenet equations at ``t``."""
    offs = np.array([-2, -1, 0, 1, 2], dtype=float)
    frames = [frenet_apparatus_e4(curve, t + h * o) for o in offs]
    w = numdiff.fd_weights(offs, 1) / h
    f = frames[2]

    def ds(attr):
        return sum(wi * getattr(g, attr) for wi, g in zip(w, frames)) / f.speed

    return {
        "e1": float(np.max(np.abs(ds("e1") - f.k1 * f.e2))),
        "e2": float(np.max(np.abs(ds("e2") - (-f.k1 * f.e1 + f.k2 * f.e3)))),
        "e3": float(np.max(np.abs(ds("e3") - (-f.k2 * f.e2 + f.k3 * f.e4)))),
        "e4": float(np.max(np.abs(ds("e4") + f.k3 * f.e3))),
    }


@dataclass
class FrameFieldE4:
    s: np.ndarray
    e: np.ndarray  # (n, 4, 4): rows e1..e4 per sample
    k1: np.ndarray
    k2: np.ndarray
    k3: np.ndarray

    def __len__(self):
        return self.s.size

    def is_special_frenet(self):
        """Positive k1, k2 and non-vanishing k3 at every sample."""
        return bool(np.all(self.k1 > 0) and np.all(self.k2 > 0) and np.all(self.k3 != 0))


def _field(s, frames):
    return FrameFieldE4(np.asarray(s, float), np.array([f.matrix() for f in frames]),
                        np.array([f.k1 for f in frames]), np.array([f.k2 for f in frames]),
                        np.array([f.k3 for f in frames]))


def sample_frames_e4(curve, params, arclength=None):
    params = np.asarray(params, float)
    frames = [frenet_apparatus_e4(curve, t) for t in params]
    return _field(params if arclength is None else arclength, frames)


def frames_e4_from_samples(t, points, stride=None, target_step=0.02):
    """E^4 frames of a uniformly sampled curve from grid finite differences.

    Fourth derivatives are rounding-limited, so the effective step is coarser
    than for the S^3 extraction.
    """
    t = np.asarray(t, float)
    X = np.asarray(points, float)
    if t.size == 0:
        raise EmptyInput("no samples")
    if stride is None:
        stride = numdiff.choose_stride(t[1] - t[0], target_step, n=t.size)
    D = numdiff.grid_derivatives(t, X, 4, stride)
    frames = [frame_from_derivatives_e4(D[:, i], t[i]) for i in range(t.size)]
    return _field(t, frames)


def generalized_mannheim_condition(k1, k2):
    """Least-squares ``c`` in ``k1 = c (k1^2 + k2^2)`` and the relative sup residual."""
    k1 = np.asarray(k1, float).ravel()
    k2 = np.asarray(k2, float).ravel()
    if k1.size == 0 or k2.size == 0:
        raise EmptyInput("no curvature samples")
    if k1.shape != k2.shape:
        raise ValueError("k1 and k2 must be sampled on the same grid")
    q = k1**2 + k2**2
    if np.any(q <= 0):
        raise FrameDegenerate("k1^2 + k2^2 vanishes")
    c = float(k1 @ q / (q @ q))
    residual = float(np.max(np.abs(k1 - c * q)) / np.max(np.abs(k1)))
    return c, residual
