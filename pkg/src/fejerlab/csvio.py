"""CSV serialization of the package's value types.

One format everywhere: RFC-4180-style rows, a header line, UTF-8, '.' as the
decimal separator.  Floats are written with repr (shortest round-trip), so a
fixed input produces byte-identical files on re-runs.
"""

from __future__ import annotations

import csv
from pathlib import Path

import numpy as np


def _fmt(x) -> str:
    if isinstance(x, (np.floating, float)):
        return repr(float(x))
    if isinstance(x, (np.integer, int)):
        return str(int(x))
    if isinstance(x, (np.complexfloating, complex)):
        z = complex(x)
        return f"{z.real!r}{z.imag:+}j"
    return str(x)


def write_rows(path, header, rows) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        for row in rows:
            writer.writerow([_fmt(x) for x in row])
    return path


def sampled_to_csv(f, path) -> Path:
    """Columns: angle, real, imag."""
    samples = np.asarray(f.samples, dtype=complex)
    rows = zip(f.grid.nodes, samples.real, samples.imag)
    return write_rows(path, ["angle", "real", "imag"], rows)


def coeffs_to_csv(f, path) -> Path:
    """Columns: index, real, imag."""
    rows = zip(f.ks, f.coeffs.real, f.coeffs.imag)
    return write_rows(path, ["index", "real", "imag"], rows)


def piecewise_to_csv(pc, path) -> Path:
    """Columns: start, end, value (real part; imag column when complex)."""
    vals = np.asarray(pc.values)
    if np.iscomplexobj(vals):
        rows = zip(pc.edges[:-1], pc.edges[1:], vals.real, vals.imag)
        return write_rows(path, ["start", "end", "real", "imag"], rows)
    rows = zip(pc.edges[:-1], pc.edges[1:], vals)
    return write_rows(path, ["start", "end", "value"], rows)


def curve_to_csv(xs, errors, path, x_name="n") -> Path:
    return write_rows(path, [x_name, "error"], zip(xs, errors))


def maximal_profile_to_csv(profile, path) -> Path:
    """Columns: angle, value."""
    return write_rows(path, ["angle", "value"], zip(profile.grid.nodes, profile.values))
