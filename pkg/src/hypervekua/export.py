"""CSV and JSON writers with fixed headers.

Floats are written with ``repr`` so values round-trip exactly and repeated
runs produce byte-identical files.
"""

from __future__ import annotations

import csv
import json
from pathlib import Path

import numpy as np

GRID_HEADER = ("x", "t", "re", "im")
POWER_HEADER = ("x", "t", "re", "im", "n", "a_label")
RESIDUAL_HEADER = ("probe_x", "probe_t", "residual_kind", "magnitude")
TABLE_HEADER = ("x", "t", "numeric_re", "oracle_re", "abs_err", "rel_err")


def _f(v) -> str:
    return repr(float(v))


def _write(path, header, rows):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)
    return path


def write_probe_grid(path, x, t, values):
    x, t = np.ravel(x), np.ravel(t)
    re, im = np.ravel(values.re), np.ravel(values.im)
    return _write(path, GRID_HEADER,
                  ((_f(a), _f(b), _f(c), _f(d)) for a, b, c, d in zip(x, t, re, im)))


def write_powers(path, x, t, values, n: int, a_label: str):
    x, t = np.ravel(x), np.ravel(t)
    re, im = np.ravel(values.re), np.ravel(values.im)
    return _write(path, POWER_HEADER,
                  ((_f(a), _f(b), _f(c), _f(d), str(n), a_label)
                   for a, b, c, d in zip(x, t, re, im)))


def write_residual_report(path, rows):
    """``rows`` yields (probe_x, probe_t, kind, magnitude)."""
    return _write(path, RESIDUAL_HEADER,
                  ((_f(px), _f(pt), kind, _f(m)) for px, pt, kind, m in rows))


def relative_errors(numeric, oracle):
    """|numeric - oracle| / |oracle|, falling back to the absolute error where oracle is 0."""
    numeric, oracle = np.asarray(numeric, dtype=float), np.asarray(oracle, dtype=float)
    abs_err = np.abs(numeric - oracle)
    denom = np.abs(oracle)
    rel = np.where(denom > 0, abs_err / np.where(denom > 0, denom, 1.0), abs_err)
    return abs_err, rel


def write_table(path, x, t, numeric_re, oracle_re):
    abs_err, rel = relative_errors(numeric_re, oracle_re)
    return _write(path, TABLE_HEADER,
                  ((_f(a), _f(b), _f(c), _f(d), _f(e), _f(g))
                   for a, b, c, d, e, g in zip(np.ravel(x), np.ravel(t), np.ravel(numeric_re),
                                               np.ravel(oracle_re), abs_err, rel)))


def read_csv(path) -> dict[str, np.ndarray | list]:
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        rows = list(reader)
        fields = reader.fieldnames or []
    out = {}
    for name in fields:
        col = [r[name] for r in rows]
        try:
            out[name] = np.array([float(v) for v in col])
        except ValueError:
            out[name] = col
    return out


def write_json(path, doc: dict):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n")
    return path


def read_json(path) -> dict:
    return json.loads(Path(path).read_text())
