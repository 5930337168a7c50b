"""Command-line front end.

Exit codes: 0 success, 1 input/output or usage error, 2 degenerate geometry
or violated precondition, 3 verification ran but failed.
"""

import argparse
import json
import os
import sys

import numpy as np

from . import io
from .errors import GeometryError
from .expr import Expression
from .frenet import (CurvatureProfile, frames_from_samples, sample_frames,
                     synthesize_from_curvatures, uniform_grid)
from .gm4 import gm4_construct, gm4_table, gm4_verify
from .mannheim import DEFAULT_TOL, generate_pair, verify_pair
from .sphere import stereographic
from .zoo import FAMILIES, ZooSpec

EXIT_OK, EXIT_IO, EXIT_GEOMETRY, EXIT_FAILED = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _positive(text):
    v = float(text)
    if not v > 0:
        raise argparse.ArgumentTypeError("must be positive")
    return v


def _density(text):
    v = int(text)
    if v < 16:
        raise argparse.ArgumentTypeError("grid density must be at least 16")
    return v


def _domain(text):
    try:
        s0, s1 = (float(x) for x in text.split(":"))
    except ValueError:
        raise argparse.ArgumentTypeError("expected S0:S1") from None
    if not s1 > s0:
        raise argparse.ArgumentTypeError("domain must have S1 > S0")
    return s0, s1


def _pole(text):
    try:
        v = np.array([float(x) for x in text.split(",")])
    except ValueError:
        raise argparse.ArgumentTypeError("expected X,Y,Z,W") from None
    if v.shape != (4,):
        raise argparse.ArgumentTypeError("expected four comma-separated numbers")
    return v


def _common(p, fmt=True):
    p.add_argument("--tol", type=_positive, default=DEFAULT_TOL,
                   help="verification tolerance (default %(default)g)")
    p.add_argument("--grid", type=_density, default=512,
                   help="samples per unit arc length (default %(default)d)")
    if fmt:
        p.add_argument("--format", choices=("csv", "json"), default=None,
                       help="output format (default: from --out suffix, else csv)")
    p.add_argument("--out", default="-", help="output path, '-' for stdout")


def _source(p, profile=False):
    p.add_argument("--zoo", help="family name, JSON file or inline JSON zoo spec")
    p.add_argument("--input", help="sampled curve CSV with header t,x1,x2,x3,x4")
    p.add_argument("--domain", type=_domain, help="parameter interval S0:S1")
    if profile:
        p.add_argument("--kappa", help="curvature expression in s")
        p.add_argument("--tau", help="torsion expression in s")


def build_parser():
    parser = _Parser(prog="mannheim-s3", description="Curves in S^3: Frenet frames, "
                     "Mannheim pairs and the binormal curve in E^4.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("frenet", help="Frenet frames of a curve")
    _source(p)
    _common(p)

    p = sub.add_parser("synthesize", help="integrate a curve from curvature and torsion")
    _source(p, profile=True)
    _common(p)

    pair = sub.add_parser("pair", help="generate or verify Mannheim pairs")
    psub = pair.add_subparsers(dest="action", required=True, parser_class=_Parser)
    p = psub.add_parser("generate", help="build a pair from the partner torsion")
    p.add_argument("--a", type=float, required=True, help="angle a in radians")
    p.add_argument("--tau", required=True, help="partner torsion expression in s")
    p.add_argument("--domain", type=_domain, default=(0.0, 1.0))
    p.add_argument("--alpha-out", help="write the Mannheim curve as t,x1..x4 CSV")
    p.add_argument("--beta-out", help="write the partner curve as t,x1..x4 CSV")
    _common(p, fmt=False)
    p = psub.add_parser("verify", help="verify two sampled curves as a pair")
    p.add_argument("--a", type=float, required=True, help="angle a in radians")
    p.add_argument("--alpha", required=True, help="Mannheim curve CSV")
    p.add_argument("--beta", required=True, help="partner curve CSV (uniform in arc length)")
    _common(p, fmt=False)

    p = sub.add_parser("gm4", help="binormal curve in E^4 and its curvature checks")
    _source(p, profile=True)
    p.add_argument("--lambda", dest="lam", type=float, required=True)
    p.add_argument("--csv", help="also write t,s,x1..x4,k1,k2,k3 to this path")
    _common(p, fmt=False)

    zoo = sub.add_parser("zoo", help="example families")
    zsub = zoo.add_subparsers(dest="action", required=True, parser_class=_Parser)
    p = zsub.add_parser("list", help="list families and default parameters")
    p.add_argument("--format", choices=("text", "json"), default="text")

    p = sub.add_parser("project", help="stereographic projection to R^3")
    _source(p)
    p.add_argument("--pole", type=_pole, default=np.array([0.0, 0.0, 0.0, 1.0]))
    _common(p)
    return parser


# --- helpers --------------------------------------------------------------


def _zoo_spec(args):
    text = args.zoo
    if text in FAMILIES:
        spec = ZooSpec(text)
    elif os.path.exists(text):
        with open(text) as fh:
            spec = ZooSpec.from_json(fh.read())
    elif text.lstrip().startswith("{"):
        spec = ZooSpec.from_json(text)
    else:
        raise UsageError(f"unknown zoo family or file: {text}")
    if args.domain is not None:
        spec = ZooSpec(spec.family, spec.params, args.domain)
    return spec


def _profile(args):
    if args.zoo:
        return _zoo_spec(args).profile()
    if args.kappa is None or args.tau is None:
        raise UsageError("give --zoo or both --kappa and --tau")
    return CurvatureProfile(Expression(args.kappa), Expression(args.tau),
                            args.domain or (0.0, 1.0), name="profile")


def _sampled_curve(args):
    """``(t, points)`` from --input, or sampled from the zoo."""
    if args.input:
        return io.read_curve_csv(args.input)
    if not args.zoo:
        raise UsageError("give --zoo or --input")
    spec = _zoo_spec(args)
    curve = spec.curve()
    if curve is not None:
        t = uniform_grid(spec.domain, args.grid)
        return t, curve(t)
    syn = synthesize_from_curvatures(spec.profile(), density=args.grid)
    return syn.grid, syn.states[:, 0]


def _format(args):
    if args.format:
        return args.format
    return "json" if str(args.out).endswith(".json") else "csv"


# --- commands -------------------------------------------------------------


def cmd_frenet(args):
    if args.input:
        t, pts = io.read_curve_csv(args.input)
        ff = frames_from_samples(t, pts)
    elif args.zoo:
        spec = _zoo_spec(args)
        curve = spec.curve()
        if curve is not None:
            ff = sample_frames(curve, uniform_grid(spec.domain, args.grid))
        else:
            ff = synthesize_from_curvatures(spec.profile(), density=args.grid).frames()
    else:
        raise UsageError("give --zoo or --input")
    text = io.frames_to_json(ff) if _format(args) == "json" else io.frames_to_csv(ff)
    io.write_text(args.out, text)
    return EXIT_OK


def cmd_synthesize(args):
    curve = synthesize_from_curvatures(_profile(args), density=args.grid, tol=args.tol)
    if _format(args) == "json":
        text = io.frames_to_json(curve.frames())
    else:
        text = io.curve_to_csv(curve.grid, curve.states[:, 0])
    io.write_text(args.out, text)
    return EXIT_OK


def cmd_pair_generate(args):
    beta, alpha, report = generate_pair(Expression(args.tau), args.a, args.domain,
                                        density=args.grid)
    if args.beta_out:
        io.write_text(args.beta_out, io.curve_to_csv(beta.grid, beta.states[:, 0]))
    if args.alpha_out:
        io.write_text(args.alpha_out, io.curve_to_csv(beta.grid, alpha(beta.grid)))
    return _report(args, report)


def cmd_pair_verify(args):
    ta, pa = io.read_curve_csv(args.alpha)
    tb, pb = io.read_curve_csv(args.beta)
    if ta.shape != tb.shape or np.max(np.abs(ta - tb)) > 1e-12:
        raise ValueError("the two curves must be sampled at the same parameters")
    fa = frames_from_samples(ta, pa, on_degenerate="mask")
    fb = frames_from_samples(tb, pb)
    return _report(args, verify_pair(fa, fb, args.a))


def _report(args, report):
    io.write_text(args.out, io.dumps(report.to_dict()))
    failed = report.failures(args.tol)
    if failed:
        print("verification failed: " + ", ".join(
            f"{k}={report.residuals[k]:.3g}" for k in failed), file=sys.stderr)
        return EXIT_FAILED
    return EXIT_OK


def cmd_gm4(args):
    res = gm4_verify(gm4_construct(_profile(args), args.lam, density=args.grid), method="fd")
    io.write_text(args.out, io.dumps(res.to_dict()))
    if args.csv:
        io.write_text(args.csv, io.table_to_csv(io.GM4_COLUMNS, gm4_table(res)))
    if not res.passed(tol=max(args.tol, 1e-5), c_tol=1e-5, fit_tol=args.tol):
        print("verification failed: " + json.dumps(res.to_dict()), file=sys.stderr)
        return EXIT_FAILED
    return EXIT_OK


def cmd_zoo_list(args):
    if args.format == "json":
        io.write_text("-", io.dumps({k: {"params": v["params"], "doc": v["doc"]}
                                      for k, v in FAMILIES.items()}))
        return EXIT_OK
    for name in sorted(FAMILIES):
        fam = FAMILIES[name]
        params = ", ".join(f"{k}={v}" for k, v in fam["params"].items())
        print(f"{name:15s} {fam['doc']}" + (f"  [{params}]" if params else ""))
    return EXIT_OK


def cmd_project(args):
    _, pts = _sampled_curve(args)
    xyz = stereographic(pts, args.pole)
    if _format(args) == "json":
        text = io.dumps({"x": xyz[:, 0], "y": xyz[:, 1], "z": xyz[:, 2]})
    else:
        text = io.table_to_csv(io.PROJECTION_COLUMNS, xyz)
    io.write_text(args.out, text)
    return EXIT_OK


COMMANDS = {
    ("frenet", None): cmd_frenet,
    ("synthesize", None): cmd_synthesize,
    ("pair", "generate"): cmd_pair_generate,
    ("pair", "verify"): cmd_pair_verify,
    ("gm4", None): cmd_gm4,
    ("zoo", "list"): cmd_zoo_list,
    ("project", None): cmd_project,
}


def main(argv=None):
    try:
        args = build_parser().parse_args(argv)
        return COMMANDS[(args.command, getattr(args, "action", None))](args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except GeometryError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_GEOMETRY
    except (OSError, ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
