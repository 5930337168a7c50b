"""Example curvature profiles satisfying ``lam * kappa + mu * tau = 1``.

Each generator returns a :class:`ZooProfile`: a curvature profile together
with the constant ``lam`` and the function ``mu`` that certify the linear
relation. Profiles whose ``mu`` is constant are flagged as not Mannheim
candidates. The explicit constant-curvature curve on S^3(1) is also here.
"""

import json
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import numdiff
from .errors import DomainError
from .expr import as_function
from .frenet import CurvatureProfile, ParamCurveS3
from .mannheim import CANDIDATE_ONLY, NOT_MANNHEIM

CHECK_POINTS = 1025
CONST_TOL = 1e-8


@dataclass
class ZooProfile(CurvatureProfile):
    lam: float = 1.0
    mu: Callable = None
    family: str = ""
    params: dict = field(default_factory=dict)


def _grid(domain, n=CHECK_POINTS):
    return np.linspace(float(domain[0]), float(domain[1]), n)


def _finalize(profile, s):
    mu = numdiff.evaluate(profile.mu, s)
    flag = NOT_MANNHEIM if np.ptp(mu) <= CONST_TOL else CANDIDATE_ONLY
    profile.flags = tuple(profile.flags) + (flag,)
    return profile


def _require_positive_kappa(kappa, s, what):
    k = numdiff.evaluate(kappa, s)
    if not np.all(np.isfinite(k)) or np.any(k <= 0):
        raise DomainError(f"{what}: curvature must be positive and finite on the domain")


def _require_no_zero(values, what):
    v = np.asarray(values, float)
    if not np.all(np.isfinite(v)) or np.any(v == 0) or np.any(np.sign(v[1:]) != np.sign(v[:-1])):
        raise DomainError(f"{what} vanishes or changes sign on the domain")


def certificate(profile, n=CHECK_POINTS):
    """``lam``, sampled ``mu`` and ``sup |1 - lam kappa - mu tau|`` on the domain."""
    s = _grid(profile.domain, n)
    k = numdiff.evaluate(profile.kappa, s)
    t = numdiff.evaluate(profile.tau, s)
    mu = numdiff.evaluate(profile.mu, s)
    residual = float(np.max(np.abs(1.0 - profile.lam * k - mu * t)))
    return {"lambda": profile.lam, "mu": mu, "residual": residual,
            "mu_spread": float(np.ptp(mu)), "s": s}


def ccr_profile(c, a, theta, domain=(0.0, 1.0)):
    """Constant ratio ``kappa / tau = c`` with ``lam = tan a`` and ``mu = tan a cot theta``."""
    c = float(c)
    a = float(a)
    if c == 0:
        raise DomainError("curvature ratio must be nonzero")
    ta = np.tan(a)
    if not np.isfinite(ta) or abs(ta) < 1e-12 or abs(np.cos(a)) < 1e-12:
        raise DomainError("tan a must be finite and nonzero")
    theta = as_function(theta)
    s = _grid(domain)
    _require_no_zero(np.sin(numdiff.evaluate(theta, s)), "sin(theta)")

    def denom(x):
        return ta * (c + 1.0 / np.tan(theta(x)))

    _require_no_zero(numdiff.evaluate(denom, s), "c + cot(theta)")
    prof = ZooProfile(lambda x: c / denom(x), lambda x: 1.0 / denom(x), domain,
                      name="ccr", lam=float(ta), mu=lambda x: ta / np.tan(theta(x)),
                      family="ccr", params={"c": c, "a": a})
    _require_positive_kappa(prof.kappa, s, "ccr")
    return _finalize(prof, s)


def conical_helix_profile(gamma, delta, r0, r1, domain=(0.0, 1.0)):
    """``kappa = gamma/(s + r0)``, ``tau = delta/(s + r1)``.

    The certificate uses ``lam = 1/delta`` and ``mu = (1 - lam kappa) / tau``,
    which reduces to ``(s + r1)(s + r0 - 1) / (delta (s + r0))`` when
    ``gamma = delta``.
    """
    gamma, delta, r0, r1 = map(float, (gamma, delta, r0, r1))
    if delta == 0:
        raise DomainError("delta must be nonzero")
    if not gamma > 0:
        raise DomainError("gamma must be positive")
    s0, s1 = map(float, domain)
    for r, name in ((r0, "r0"), (r1, "r1")):
        if min(s0 + r, s1 + r) <= 0:
            raise DomainError(f"s + {name} must stay positive on [{s0:g}, {s1:g}]")
    lam = 1.0 / delta
    if gamma == delta:
        def mu(x):
            return (x + r1) * (x + r0 - 1.0) / (delta * (x + r0))
    else:
        def mu(x):
            return (1.0 - lam * gamma / (x + r0)) * (x + r1) / delta
    prof = ZooProfile(lambda x: gamma / (x + r0), lambda x: delta / (x + r1), domain,
                      name="conical_helix", lam=lam, mu=mu, family="conical_helix",
                      params={"gamma": gamma, "delta": delta, "r0": r0, "r1": r1})
    return _finalize(prof, _grid(domain))


def conical_helix_mu_closed_form(s, r0, r1):
    """``(s^2 + (r0 + r1 - 1) s + r0 r1 - r1) / (s + r0)``, valid for ``delta = 1``."""
    s = np.asarray(s, float)
    return (s**2 + (r0 + r1 - 1.0) * s + (r0 * r1 - r1)) / (s + r0)


def general_helix_profile(b, lam, mu, sign=1, domain=(0.0, 1.0)):
    """``tau = b kappa + sign`` with ``kappa = (1 - sign mu) / (lam + b mu)``."""
    b, lam = float(b), float(lam)
    if sign not in (1, -1):
        raise DomainError("sign must be +1 or -1")
    if lam == 0:
        raise DomainError("lambda must be nonzero")
    mu = as_function(mu)
    s = _grid(domain)
    _require_no_zero(lam + b * numdiff.evaluate(mu, s), "lambda + b mu")

    def kappa(x):
        return (1.0 - sign * mu(x)) / (lam + b * mu(x))

    prof = ZooProfile(kappa, lambda x: b * kappa(x) + sign, domain, name="general_helix",
                      lam=lam, mu=mu, family="general_helix",
                      params={"b": b, "lambda": lam, "sign": sign})
    _require_positive_kappa(kappa, s, "general helix")
    return _finalize(prof, s)


# the explicit curve: amplitudes and angular frequencies
KNOT_AMPLITUDES = (1.0 / np.sqrt(3.0), np.sqrt(2.0) / np.sqrt(3.0))
KNOT_FREQUENCIES = (2.0 * np.sqrt(2.0) / np.sqrt(3.0), 1.0 / np.sqrt(6.0))
KNOT_KAPPA = 5.0 * np.sqrt(2.0) / 6.0
KNOT_TAU = 2.0 / 3.0
KNOT_PERIOD = 2.0 * np.pi * np.sqrt(6.0)  # frequencies are in ratio 4:1


def _knot_derivative(k):
    (A, B), (p, q) = KNOT_AMPLITUDES, KNOT_FREQUENCIES

    def f(s):
        s = np.asarray(s, float)
        u, v = p * s + k * np.pi / 2, q * s + k * np.pi / 2
        return np.stack([A * p**k * np.cos(u), A * p**k * np.sin(u),
                         B * q**k * np.cos(v), B * q**k * np.sin(v)], axis=-1)

    return f


def torus_knot_curve(domain=(0.0, KNOT_PERIOD)):
    """Unit-speed curve on S^3(1) with constant curvature and torsion."""
    return ParamCurveS3(_knot_derivative(0), domain, 1.0,
                        derivs=[_knot_derivative(k) for k in (1, 2, 3)],
                        unit_speed=True, name="torus_knot")


def torus_knot_profile(domain=(0.0, 1.0)):
    """Constant curvature and torsion of the explicit curve, flagged as such."""
    return CurvatureProfile(KNOT_KAPPA, KNOT_TAU, domain, name="torus_knot",
                            flags=(NOT_MANNHEIM,))


FAMILIES = {
    "ccr": {"params": {"c": 2.0, "a": np.pi / 4, "theta": "pi/4 + s/10"},
            "doc": "constant curvature ratio kappa/tau = c"},
    "conical_helix": {"params": {"gamma": 1.0, "delta": 1.0, "r0": 2.0, "r1": 3.0},
                      "doc": "curvature and torsion radii linear in s"},
    "general_helix": {"params": {"b": 0.5, "lambda": 1.0, "mu": "0.2 + 0.3*s", "sign": 1},
                      "doc": "tau = b kappa +/- 1"},
    "torus_knot": {"params": {}, "doc": "explicit curve with constant kappa and tau",
                  "domain": (0.0, KNOT_PERIOD)},
}


@dataclass
class ZooSpec:
    """A named family with parameters and a domain, as read from JSON."""

    family: str
    params: dict = field(default_factory=dict)
    domain: tuple = None

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise DomainError(f"unknown family {self.family!r}; "
                              f"choose from {', '.join(sorted(FAMILIES))}")
        merged = dict(FAMILIES[self.family]["params"])
        merged.update(self.params or {})
        self.params = merged
        if self.domain is None:
            self.domain = FAMILIES[self.family].get("domain", (0.0, 1.0))
        s0, s1 = map(float, self.domain)
        if not s1 > s0:
            raise DomainError(f"empty domain [{s0:g}, {s1:g}]")
        self.domain = (s0, s1)

    @classmethod
    def from_dict(cls, d):
        if "family" not in d:
            raise DomainError("zoo spec needs a 'family'")
        dom = d.get("domain")
        return cls(d["family"], dict(d.get("params", {})), None if dom is None else tuple(dom))

    @classmethod
    def from_json(cls, text):
        return cls.from_dict(json.loads(text))

    def to_dict(self):
        return {"family": self.family, "params": dict(self.params), "domain": list(self.domain)}

    def profile(self):
        p, dom = self.params, self.domain
        if self.family == "ccr":
            return ccr_profile(p["c"], p["a"], p["theta"], dom)
        if self.family == "conical_helix":
            return conical_helix_profile(p["gamma"], p["delta"], p["r0"], p["r1"], dom)
        if self.family == "general_helix":
            return general_helix_profile(p["b"], p["lambda"], p["mu"], int(p["sign"]), dom)
        return torus_knot_profile(dom)

    def curve(self):
        """Explicit parametrisation when the family has one."""
        if self.family == "torus_knot":
            return torus_knot_curve(self.domain)
        return None
