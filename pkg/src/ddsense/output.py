"""CSV tables and static SVG charts for sweep results."""

from __future__ import annotations

import math
from pathlib import Path

import numpy as np

from .sweep import CSV_COLUMNS

__all__ = ["emit_csv", "emit_plot", "format_number", "PLOT_COLUMNS"]

PLOT_COLUMNS = ("crlb_tau_s2", "crlb_nu_hz2", "crlb_amp", "crlb_phase_rad2", "fim_condition")

_PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#e377c2", "#17becf")
_DASHES = ("", "6,3", "2,2", "8,3,2,3")


def format_number(x) -> str:
    """Shortest round-trip scientific notation; blank for missing values."""
    if x is None:
        return ""
    return np.format_float_scientific(float(x), unique=True, trim="-")


def _csv_field(value) -> str:
    if isinstance(value, str):
        if any(ch in value for ch in ',"\n\r'):
            return '"' + value.replace('"', '""') + '"'
        return value
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return format_number(value)


def emit_csv(rows, path) -> Path:
    """Write rows as UTF-8 CSV with LF line endings."""
    path = Path(path)
    lines = [",".join(CSV_COLUMNS)]
    for row in rows:
        lines.append(",".join(_csv_field(getattr(row, col)) for col in CSV_COLUMNS))
    path.write_text("\n".join(lines) + "\n", encoding="utf-8", newline="\n")
    return path


def _x_axis(rows):
    varying = []
    if len({r.snr_db for r in rows}) > 1:
        varying.append("snr_db")
    if len({r.scs_hz for r in rows}) > 1:
        varying.append("scs_hz")
    if len({(r.M, r.N) for r in rows}) > 1:
        varying.append("grid_mn")
    if len(varying) > 1:
        raise ValueError(f"rows mix several sweep axes: {', '.join(varying)}")
    axis = varying[0] if varying else "snr_db"
    if axis == "snr_db":
        return axis, "SNR (dB)", lambda r: r.snr_db
    if axis == "scs_hz":
        return axis, "SCS (kHz)", lambda r: r.scs_hz / 1e3
    return axis, "M*N", lambda r: r.M * r.N


def _series(rows, y_column, xval):
    series = {}
    for r in rows:
        y = getattr(r, y_column)
        if r.error or y is None or not y > 0:
            continue
        series.setdefault((r.scheme, r.path_index), []).append((xval(r), y))
    return series


def emit_plot(rows, path, y_column: str = "crlb_tau_s2", width: int = 640, height: int = 420) -> Path:
    """Log-y line chart with one polyline per (scheme, path).

    A whitespace separated ``.dat`` file with the same data is written next
    to the SVG.  Output is byte-for-byte deterministic.
    """
    if y_column not in PLOT_COLUMNS:
        raise ValueError(f"y_column must be one of {PLOT_COLUMNS}")
    rows = list(rows)
    path = Path(path)
    axis, xlabel, xval = _x_axis(rows)
    series = _series(rows, y_column, xval)

    with open(path.with_suffix(".dat"), "w", encoding="utf-8", newline="\n") as fh:
        fh.write(f"# scheme path {axis} {y_column}\n")
        for (scheme, p), pts in series.items():
            for x, y in pts:
                fh.write(f"{scheme} {p} {format_number(x)} {format_number(y)}\n")

    left, right, top, bottom = 80, 190, 30, 50
    pw, ph = width - left - right, height - top - bottom
    xs = [x for pts in series.values() for x, _ in pts] or [0.0, 1.0]
    ys = [y for pts in series.values() for _, y in pts] or [1.0, 10.0]
    x0, x1 = min(xs), max(xs)
    if x1 == x0:
        x0, x1 = x0 - 1, x1 + 1
    d0, d1 = math.floor(math.log10(min(ys))), math.ceil(math.log10(max(ys)))
    if d1 == d0:
        d1 += 1

    def px(x):
        return left + (x - x0) / (x1 - x0) * pw

    def py(y):
        return top + (d1 - math.log10(y)) / (d1 - d0) * ph

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}" font-family="sans-serif" font-size="11">',
        f'<rect x="{left}" y="{top}" width="{pw}" height="{ph}" fill="white" stroke="black"/>',
    ]
    for d in range(d0, d1 + 1):
        y = py(10.0 ** d)
        out.append(f'<line x1="{left}" y1="{y:.2f}" x2="{left + pw}" y2="{y:.2f}" stroke="#ddd"/>')
        out.append(f'<text x="{left - 6}" y="{y + 4:.2f}" text-anchor="end">1e{d}</text>')
    for x in sorted(set(xs)):
        out.append(f'<text x="{px(x):.2f}" y="{top + ph + 16}" text-anchor="middle">{x:g}</text>')
    out.append(f'<text x="{left + pw / 2:.2f}" y="{height - 10}" text-anchor="middle">{xlabel}</text>')
    out.append(
        f'<text x="16" y="{top + ph / 2:.2f}" text-anchor="middle" '
        f'transform="rotate(-90 16 {top + ph / 2:.2f})">{y_column}</text>'
    )
    for i, ((scheme, p), pts) in enumerate(series.items()):
        colour = _PALETTE[i % len(_PALETTE)]
        dash = _DASHES[p % len(_DASHES)]
        dash_attr = f' stroke-dasharray="{dash}"' if dash else ""
        coords = " ".join(f"{px(x):.2f},{py(y):.2f}" for x, y in pts)
        out.append(
            f'<polyline fill="none" stroke="{colour}" stroke-width="1.5"{dash_attr} '
            f'points="{coords}"><title>{scheme} path {p}</title></polyline>'
        )
        ly = top + 12 + 16 * i
        out.append(f'<line x1="{left + pw + 10}" y1="{ly}" x2="{left + pw + 34}" y2="{ly}" stroke="{colour}"{dash_attr}/>')
        out.append(f'<text x="{left + pw + 40}" y="{ly + 4}">{scheme} p{p}</text>')
    out.append("</svg>")
    path.write_text("\n".join(out) + "\n", encoding="utf-8", newline="\n")
    return path
