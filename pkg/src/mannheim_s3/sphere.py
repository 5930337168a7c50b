"""Exact geometry of the round 3-sphere S^3(r) sitting in R^4."""

from dataclasses import dataclass, field

import numpy as np

from .errors import FrameDegenerate, PoleOnCurve, RadiusMismatch

_REL_TOL = 1e-9


def as_vec4(x):
    v = np.asarray(x, dtype=float)
    if v.shape != (4,):
        raise ValueError(f"expected a 4-vector, got shape {v.shape}")
    if not np.all(np.isfinite(v)):
        raise ValueError("vector has non-finite components")
    return v


@dataclass(frozen=True)
class SpherePoint:
    """A point of S^3(r); ``coords`` must have norm ``radius``."""

    coords: np.ndarray
    radius: float = 1.0

    def __post_init__(self):
        c = as_vec4(self.coords)
        object.__setattr__(self, "coords", c)
        if not self.radius > 0:
            raise ValueError("radius must be positive")
        if abs(np.linalg.norm(c) - self.radius) > _REL_TOL * self.radius:
            raise ValueError(
                f"point is not on S^3({self.radius}): |x| = {np.linalg.norm(c)!r}"
            )


@dataclass(frozen=True)
class TangentVector:
    base: SpherePoint
    dir: np.ndarray

    def __post_init__(self):
        d = as_vec4(self.dir)
        object.__setattr__(self, "dir", d)
        r = self.base.radius
        if abs(d @ self.base.coords) > _REL_TOL * r * max(np.linalg.norm(d), 1.0):
            raise ValueError("direction is not tangent to the sphere at base")


@dataclass(frozen=True)
class GeodesicS3:
    """Unit-speed great circle through ``base`` with initial velocity ``dir``."""

    base: SpherePoint
    dir: TangentVector = field(repr=False)

    def __post_init__(self):
        if self.dir.base is not self.base and not np.allclose(
            self.dir.base.coords, self.base.coords
        ):
            raise ValueError("direction is attached to a different point")
        if abs(np.linalg.norm(self.dir.dir) - 1.0) > 1e-9:
            raise ValueError("geodesic direction must be a unit vector")

    @classmethod
    def through(cls, base, direction, radius=1.0):
        p = base if isinstance(base, SpherePoint) else SpherePoint(base, radius)
        return cls(p, TangentVector(p, direction))


def great_circle(p, v, u, radius=1.0):
    """Array form of the geodesic ``cos(u/r) p + r sin(u/r) v``.

    ``u`` may be an array, in which case the result has shape ``u.shape + (4,)``.
    """
    u = np.asarray(u, dtype=float)[..., None]
    return np.cos(u / radius) * p + radius * np.sin(u / radius) * v


def geodesic_eval(g, u):
    """Point at signed arc length ``u`` along ``g``."""
    r = g.base.radius
    x = great_circle(g.base.coords, g.dir.dir, u, r)
    # renormalise away the last ulp so the result validates as a SpherePoint
    x = x * (r / np.linalg.norm(x))
    return SpherePoint(x, r)


def tangent_project(p, x):
    """Remove the radial component of ``x`` at ``p``."""
    c = p.coords if isinstance(p, SpherePoint) else as_vec4(p)
    r2 = c @ c
    x = as_vec4(x)
    return x - (x @ c / r2) * c


def cofactor_complement(u, v, w):
    """Generalised cross product in R^4.

    Returns the vector ``b`` with ``<b, x> = det(u, v, w, x)`` for all ``x``;
    it is orthogonal to ``u, v, w`` and ``det(u, v, w, b) = |b|^2``.
    """
    m = np.array([u, v, w], dtype=float)
    b = np.empty(4)
    for i in range(4):
        minor = np.delete(m, i, axis=1)
        b[i] = (-1) ** (i + 3) * np.linalg.det(minor)
    return b


def oriented_complement(p, t, n, tol=1e-8):
    """Unit ``b`` completing ``(p/|p|, t, n)`` to a positively oriented basis."""
    c = p.coords if isinstance(p, SpherePoint) else as_vec4(p)
    e0 = c / np.linalg.norm(c)
    basis = np.array([e0, as_vec4(t), as_vec4(n)])
    gram = basis @ basis.T
    err = np.max(np.abs(gram - np.eye(3)))
    if err > tol:
        raise FrameDegenerate(f"inputs are not orthonormal (Gram error {err:.3g})", err)
    b = cofactor_complement(*basis)
    return b / np.linalg.norm(b)


def geodesic_distance(p, q):
    """Spherical distance ``r * arccos(<p, q> / r^2)`` in ``[0, pi r]``."""
    if not np.isclose(p.radius, q.radius, rtol=1e-12, atol=0.0):
        raise RadiusMismatch(f"radii differ: {p.radius} vs {q.radius}")
    r = p.radius
    cosang = np.clip(p.coords @ q.coords / r**2, -1.0, 1.0)
    return float(r * np.arccos(cosang))


def det4(a, b, c, d):
    return float(np.linalg.det(np.array([a, b, c, d], dtype=float).T))


def stereographic(points, pole=(0.0, 0.0, 0.0, 1.0), tol=1e-9):
    """Stereographic projection of points on S^3(1) from ``pole`` into R^3.

    A reflection taking ``pole`` to ``e4`` fixes the coordinates of the image
    hyperplane, so the north pole gives ``(x1, x2, x3) / (1 - x4)``.
    """
    P = as_vec4(pole)
    if abs(np.linalg.norm(P) - 1.0) > 1e-9:
        raise RadiusMismatch("projection pole must be a unit vector")
    X = np.atleast_2d(np.asarray(points, float))
    v = P - np.array([0.0, 0.0, 0.0, 1.0])
    if np.linalg.norm(v) > 1e-15:
        X = X - 2.0 * np.outer(X @ v, v) / (v @ v)
    gap = 1.0 - X[:, 3]
    if np.any(gap <= tol):
        i = int(np.argmin(gap))
        raise PoleOnCurve(f"sample {i} coincides with the projection pole")
    out = X[:, :3] / gap[:, None]
    return out if np.ndim(points) > 1 else out[0]
