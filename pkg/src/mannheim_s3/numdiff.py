"""Finite-difference stencils and truncated Taylor arithmetic.

Third and fourth derivatives are needed for torsion and for the E^4 third
curvature, so stencils default to nine points (order 6 or better) with a
step near ``eps**(1/9)``, which balances truncation against rounding.
"""

from math import factorial

import numpy as np

EPS = np.finfo(float).eps
DEFAULT_STEP = EPS ** (1.0 / 9.0)  # ~0.018
STENCIL_POINTS = 9


def fd_weights(offsets, order):
    """Weights ``w`` with ``f^(order)(0) ~ sum w_j f(offsets_j)`` (unit spacing)."""
    x = np.asarray(offsets, dtype=float)
    n = x.size
    if order >= n:
        raise ValueError("need more points than the derivative order")
    vander = np.vander(x, n, increasing=True).T
    rhs = np.zeros(n)
    rhs[order] = factorial(order)
    return np.linalg.solve(vander, rhs)


_CENTRAL = np.arange(-(STENCIL_POINTS // 2), STENCIL_POINTS // 2 + 1, dtype=float)
_CENTRAL_WEIGHTS = {k: fd_weights(_CENTRAL, k) for k in range(STENCIL_POINTS)}


def evaluate(f, x):
    """Call ``f`` on an array, falling back to elementwise calls."""
    x = np.asarray(x, dtype=float)
    try:
        y = np.asarray(f(x), dtype=float)
        if y.shape[: x.ndim] == x.shape:
            return y
    except (TypeError, ValueError):
        pass
    flat = [np.asarray(f(float(v)), dtype=float) for v in x.ravel()]
    return np.array(flat).reshape(x.shape + flat[0].shape)


def central_derivatives(f, t, max_order, h=DEFAULT_STEP):
    """Derivatives ``f^(k)(t)`` for ``k = 0..max_order`` from one 9-point stencil.

    ``f`` may be scalar- or vector-valued; the result has shape
    ``(max_order + 1,) + f(t).shape``.
    """
    values = evaluate(f, t + h * _CENTRAL)
    out = [values[len(_CENTRAL) // 2]]
    for k in range(1, max_order + 1):
        out.append(np.tensordot(_CENTRAL_WEIGHTS[k], values, axes=1) / h**k)
    return np.array(out)


def taylor_coefficients(f, t, n_terms, h=DEFAULT_STEP):
    """Truncated Taylor series ``f^(k)(t) / k!`` for ``k < n_terms``."""
    d = central_derivatives(f, t, n_terms - 1, h)
    return np.array([d[k] / factorial(k) for k in range(n_terms)])


def grid_derivatives(t, values, max_order, stride=1, points=STENCIL_POINTS):
    """Derivatives of uniformly sampled data at every sample.

    Uses ``points``-point stencils with spacing ``stride`` samples; central
    where the stencil fits and shifted (one-sided) near the ends.
    """
    t = np.asarray(t, dtype=float)
    y = np.asarray(values, dtype=float)
    n = t.size
    if n < 2:
        raise ValueError("need at least two samples")
    dt = np.diff(t)
    if np.any(dt <= 0):
        raise ValueError("sample grid must be strictly increasing")
    h = dt.mean()
    if np.max(np.abs(dt - h)) > 1e-9 * max(abs(t[0]), abs(t[-1]), h):
        raise ValueError("sample grid must be uniform")
    span = (points - 1) * stride
    if n <= span:
        raise ValueError(f"need more than {span} samples for a {points}-point stencil")
    half = span // 2
    out = np.empty((max_order + 1,) + y.shape)
    out[0] = y
    cache = {}
    for i in range(n):
        start = min(max(i - half, 0), n - 1 - span)
        idx = start + stride * np.arange(points)
        shift = (start - i) / stride
        if shift not in cache:
            offs = np.arange(points) + shift
            cache[shift] = [fd_weights(offs, k) for k in range(max_order + 1)]
        block = y[idx]
        for k in range(1, max_order + 1):
            out[k, i] = np.tensordot(cache[shift][k], block, axes=1) / (h * stride) ** k
    return out


def choose_stride(spacing, target=DEFAULT_STEP, n=None):
    """Sample stride whose effective step is closest to ``target``."""
    stride = max(1, int(round(target / spacing)))
    if n is not None:
        stride = max(1, min(stride, (n - 1) // (STENCIL_POINTS - 1)))
    return stride


# --- truncated Taylor series ("jets") -------------------------------------


class Jet:
    """Truncated Taylor series ``sum c_k h^k`` with exact arithmetic rules.

    Functions written with numpy operators and ufuncs (sin, cos, tan, exp,
    sqrt, log, power) can be evaluated on a Jet to get their Taylor
    coefficients without finite differences.
    """

    __array_priority__ = 100

    def __init__(self, coeffs):
        self.c = np.asarray(coeffs, dtype=float)

    @classmethod
    def variable(cls, x0, n_terms):
        c = np.zeros(n_terms)
        c[0] = x0
        if n_terms > 1:
            c[1] = 1.0
        return cls(c)

    def _lift(self, other):
        if isinstance(other, Jet):
            return other
        if np.ndim(other) != 0:
            raise TypeError("jets only combine with scalars")
        c = np.zeros_like(self.c)
        c[0] = float(other)
        return Jet(c)

    def __add__(self, o):
        return Jet(self.c + self._lift(o).c)

    __radd__ = __add__

    def __sub__(self, o):
        return Jet(self.c - self._lift(o).c)

    def __rsub__(self, o):
        return Jet(self._lift(o).c - self.c)

    def __mul__(self, o):
        if not isinstance(o, Jet) and np.ndim(o) == 0:
            return Jet(self.c * float(o))
        return Jet(jet_mul(self.c, self._lift(o).c))

    __rmul__ = __mul__

    def __truediv__(self, o):
        return Jet(_jet_div(self.c, self._lift(o).c))

    def __rtruediv__(self, o):
        return Jet(_jet_div(self._lift(o).c, self.c))

    def __neg__(self):
        return Jet(-self.c)

    def __pos__(self):
        return self

    def __pow__(self, p):
        if isinstance(p, Jet):
            return _jet_exp(jet_mul(p.c, _jet_log(self.c)))
        p = float(p)
        if p.is_integer() and abs(p) <= 16:
            out = Jet(np.eye(1, self.c.size)[0])
            for _ in range(int(abs(p))):
                out = out * self
            return out if p >= 0 else 1.0 / out
        if p == 0.5:
            return Jet(_jet_sqrt(self.c))
        return _jet_exp(p * _jet_log(self.c))

    def __rpow__(self, base):
        return _jet_exp(np.log(float(base)) * self.c)

    _UFUNCS = {
        np.add: lambda a, b: a + b, np.subtract: lambda a, b: a - b,
        np.multiply: lambda a, b: a * b, np.true_divide: lambda a, b: a / b,
        np.power: lambda a, b: a ** b, np.negative: lambda a: -a,
        np.positive: lambda a: a,
    }

    def __array_ufunc__(self, ufunc, method, *inputs, **kwargs):
        if method != "__call__" or kwargs:
            return NotImplemented
        if ufunc in self._UFUNCS:
            args = [x if isinstance(x, Jet) else float(x) for x in inputs]
            return self._UFUNCS[ufunc](*args)
        (x,) = inputs
        u = x.c
        if ufunc is np.exp:
            return _jet_exp(u)
        if ufunc is np.log:
            return Jet(_jet_log(u))
        if ufunc is np.sqrt:
            return Jet(_jet_sqrt(u))
        if ufunc in (np.sin, np.cos, np.tan):
            s, c = _jet_sincos(u)
            if ufunc is np.tan:
                return Jet(_jet_div(s, c))
            return Jet(s if ufunc is np.sin else c)
        return NotImplemented


def _jet_div(a, b):
    q = np.zeros_like(a)
    for k in range(a.size):
        q[k] = (a[k] - b[1:k + 1] @ q[k - 1::-1][:k]) / b[0] if k else a[0] / b[0]
    return q


def _jet_exp(u):
    u = u.c if isinstance(u, Jet) else u
    e = np.zeros_like(u)
    e[0] = np.exp(u[0])
    for k in range(1, u.size):
        j = np.arange(1, k + 1)
        e[k] = (j * u[j]) @ e[k - j] / k
    return Jet(e)


def _jet_log(u):
    if u[0] <= 0:
        raise ValueError("log of a non-positive jet")
    out = np.zeros_like(u)
    out[0] = np.log(u[0])
    for k in range(1, u.size):
        j = np.arange(1, k)
        out[k] = (u[k] - (j * out[j]) @ u[k - j] / k) / u[0]
    return out


def _jet_sqrt(u):
    r = np.zeros_like(u)
    r[0] = np.sqrt(u[0])
    for k in range(1, u.size):
        r[k] = (u[k] - r[1:k] @ r[k - 1:0:-1]) / (2.0 * r[0])
    return r


def _jet_sincos(u):
    s, c = np.zeros_like(u), np.zeros_like(u)
    s[0], c[0] = np.sin(u[0]), np.cos(u[0])
    for k in range(1, u.size):
        j = np.arange(1, k + 1)
        s[k] = (j * u[j]) @ c[k - j] / k
        c[k] = -(j * u[j]) @ s[k - j] / k
    return s, c


def function_jet(f, t, n_terms, h=DEFAULT_STEP):
    """Taylor coefficients of ``f`` at ``t``: exact if ``f`` accepts a Jet, else by stencil."""
    try:
        out = f(Jet.variable(float(t), n_terms))
    except (TypeError, ValueError, AttributeError, ZeroDivisionError):
        out = None
    if isinstance(out, Jet) and out.c.size == n_terms and np.all(np.isfinite(out.c)):
        return out.c
    if out is not None and np.ndim(out) == 0 and not isinstance(out, Jet):
        try:
            c = np.zeros(n_terms)
            c[0] = float(out)
            return c
        except (TypeError, ValueError):
            pass
    return taylor_coefficients(f, t, n_terms, h)


def jet_mul(a, b):
    return np.convolve(a, b)[: len(a)]


def jet_diff(a):
    k = np.arange(1, len(a))
    return np.concatenate([a[1:] * k, [0.0]])


def frame_transport(coeffs, kappa, tau, order, radius=1.0, rate=None):
    """Derivatives of ``v = x0*alpha + x1*T + x2*N + x3*B`` along a Frenet frame.

    ``coeffs`` are the constant coordinates of ``v`` in the moving frame
    ``(alpha, T, N, B)`` of a curve in S^3(radius); ``kappa`` and ``tau`` are
    Taylor jets in arc length. If ``rate`` (a jet of ds/dt) is given, the
    derivatives are taken with respect to ``t`` instead of ``s``.

    Returns an array ``(order + 1, 4)``: frame coordinates of ``v^(k)``.
    """
    n = len(kappa)
    if order >= n:
        raise ValueError("jets are too short for the requested order")
    x = np.zeros((4, n))
    x[:, 0] = coeffs
    inv_r2 = 1.0 / radius**2
    out = [x[:, 0].copy()]
    for _ in range(order):
        dx = np.array([jet_diff(row) for row in x])
        dx[0] -= inv_r2 * x[1]
        dx[1] += x[0] - jet_mul(kappa, x[2])
        dx[2] += jet_mul(kappa, x[1]) - jet_mul(tau, x[3])
        dx[3] += jet_mul(tau, x[2])
        if rate is not None:
            dx = np.array([jet_mul(rate, row) for row in dx])
        x = dx
        out.append(x[:, 0].copy())
    return np.array(out)
