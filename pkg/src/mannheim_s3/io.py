"""CSV and JSON input/output with deterministic number rendering."""

import csv
import io
import json
import math
import sys

import numpy as np

from .frenet import FrameField

FRAME_COLUMNS = ["s", "kappa", "tau"] + [f"{v}{c}" for v in ("a", "T", "N", "B")
                                         for c in "xyzw"]
E4_COLUMNS = ["s", "k1", "k2", "k3"] + [f"e{i}{c}" for i in range(1, 5) for c in "xyzw"]
CURVE_COLUMNS = ["t", "x1", "x2", "x3", "x4"]
GM4_COLUMNS = ["t", "s", "x1", "x2", "x3", "x4", "k1", "k2", "k3"]
PROJECTION_COLUMNS = ["x", "y", "z"]


def fmt(x):
    """17 significant digits; non-finite values become ``NaN``/``Infinity``."""
    x = float(x)
    if math.isnan(x):
        return "NaN"
    if math.isinf(x):
        return "Infinity" if x > 0 else "-Infinity"
    return "%.17g" % x


def _render(obj, indent, level):
    pad = " " * (indent * (level + 1))
    end = " " * (indent * level)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(str(k))}: {_render(obj[k], indent, level + 1)}"
                 for k in sorted(obj, key=str)]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, np.ndarray):
        obj = obj.tolist()
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        if all(isinstance(v, (int, float, np.number)) and not isinstance(v, bool) for v in obj):
            return "[" + ", ".join(_render(v, indent, level + 1) for v in obj) + "]"
        return "[\n" + ",\n".join(pad + _render(v, indent, level + 1) for v in obj) + "\n" + end + "]"
    if isinstance(obj, (bool, np.bool_)):
        return "true" if obj else "false"
    if obj is None:
        return "null"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return fmt(obj) if math.isfinite(obj) else "null"
    return json.dumps(str(obj))


def dumps(obj, indent=2):
    """JSON with sorted keys and 17-digit floats, byte-identical across runs."""
    return _render(obj, indent, 0) + "\n"


def loads(text):
    return json.loads(text)


def write_text(path, text):
    if path is None or path == "-":
        sys.stdout.write(text)
        return
    with open(path, "w", newline="") as fh:
        fh.write(text)


def table_to_csv(columns, rows):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for row in rows:
        w.writerow([fmt(v) for v in row])
    return buf.getvalue()


def read_table(path, columns=None):
    """Read a numeric CSV, optionally checking the header; returns ``(header, array)``."""
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    if not rows:
        raise ValueError(f"{path}: empty file")
    header = [h.strip() for h in rows[0]]
    if columns is not None and header[: len(columns)] != list(columns):
        raise ValueError(f"{path}: expected header {','.join(columns)}")
    try:
        data = np.array([[float(v) for v in r] for r in rows[1:] if r], float)
    except ValueError as exc:
        raise ValueError(f"{path}: non-numeric entry ({exc})") from None
    if data.size == 0:
        raise ValueError(f"{path}: no data rows")
    if data.shape[1] != len(header):
        raise ValueError(f"{path}: ragged rows")
    return header, data


# --- frame fields ---------------------------------------------------------


def frame_rows(ff):
    return np.column_stack([ff.s, ff.kappa, ff.tau, ff.points, ff.T, ff.N, ff.B])


def frames_to_csv(ff):
    return table_to_csv(FRAME_COLUMNS, frame_rows(ff))


def frames_to_dict(ff):
    return {"radius": ff.radius, "s": ff.s, "kappa": ff.kappa, "tau": ff.tau,
            "alpha": ff.points, "T": ff.T, "N": ff.N, "B": ff.B}


def frames_to_json(ff):
    return dumps(frames_to_dict(ff))


def frames_from_csv(path, radius=1.0):
    _, d = read_table(path, FRAME_COLUMNS)
    return FrameField(d[:, 0], d[:, 3:7], d[:, 7:11], d[:, 11:15], d[:, 15:19],
                      d[:, 1], d[:, 2], radius)


def frames_from_json(text):
    d = json.loads(text)
    arr = {k: np.asarray(d[k], float) for k in ("s", "kappa", "tau", "alpha", "T", "N", "B")}
    return FrameField(arr["s"], arr["alpha"], arr["T"], arr["N"], arr["B"], arr["kappa"],
                      arr["tau"], float(d.get("radius", 1.0)))


def frames_e4_to_csv(field):
    rows = np.column_stack([field.s, field.k1, field.k2, field.k3, field.e.reshape(len(field), 16)])
    return table_to_csv(E4_COLUMNS, rows)


# --- curves ---------------------------------------------------------------


def curve_to_csv(t, points):
    return table_to_csv(CURVE_COLUMNS, np.column_stack([t, points]))


def read_curve_csv(path):
    """``(t, points)`` from a ``t,x1,x2,x3,x4`` file."""
    _, d = read_table(path, CURVE_COLUMNS)
    return d[:, 0], d[:, 1:5]
