"""Two-dimensional slices of a chamber region: CSV grid and SVG polygon.

Phases here are plain rationals. A slice keeps two phase coordinates free and
fixes the rest; every inequality becomes a half-plane ``a x + b y < c``.
"""

from __future__ import annotations

import csv
import io
from fractions import Fraction
from typing import Sequence
from xml.sax.saxutils import escape

from .chambers import ChamberError, ChamberRegion


def _half_planes(R: ChamberRegion, axes: tuple, fixed: dict) -> list[tuple]:
    out = []
    for q in R.inequalities:
        # phi_low - phi_high < alpha
        a = b = Fraction(0)
        c = Fraction(q.alpha)
        for idx, sign in ((q.low, 1), (q.high, -1)):
            if idx == axes[0]:
                a += sign
            elif idx == axes[1]:
                b += sign
            else:
                c -= sign * fixed[idx]
        out.append((a, b, c))
    return out


def _slice_setup(R: ChamberRegion, fixed: dict | None):
    if R.size < 2:
        raise ChamberError("a slice needs at least two objects")
    if R.size > 3:
        raise ChamberError("slices are supported for two or three objects")
    fixed = {int(k): Fraction(v) for k, v in (fixed or {}).items()}
    free = [i for i in range(R.size) if i not in fixed]
    if len(free) != 2:
        raise ChamberError("fix all but two phase coordinates")
    return tuple(free), fixed


def inside(halfplanes, x: Fraction, y: Fraction) -> bool:
    return all(a * x + b * y < c for a, b, c in halfplanes)


def slice_grid(R: ChamberRegion, lo, hi, resolution: int, fixed: dict | None = None) -> list[tuple]:
    """(x, y, inside) on a (resolution + 1)^2 grid over [lo, hi]^2."""
    axes, fixed = _slice_setup(R, fixed)
    hp = _half_planes(R, axes, fixed)
    lo, hi = Fraction(lo), Fraction(hi)
    step = (hi - lo) / resolution
    rows = []
    for r in range(resolution + 1):
        for c in range(resolution + 1):
            x, y = lo + c * step, lo + r * step
            rows.append((x, y, inside(hp, x, y)))
    return rows


def _clip(poly: list, a, b, c) -> list:
    """Keep the part of a convex polygon with a x + b y <= c."""
    out = []
    n = len(poly)
    for k in range(n):
        P, Qp = poly[k], poly[(k + 1) % n]
        fp = a * P[0] + b * P[1] - c
        fq = a * Qp[0] + b * Qp[1] - c
        if fp <= 0:
            out.append(P)
        if (fp < 0 < fq) or (fq < 0 < fp):
            t = fp / (fp - fq)
            out.append((P[0] + t * (Qp[0] - P[0]), P[1] + t * (Qp[1] - P[1])))
    dedup = []
    for v in out:
        if not dedup or dedup[-1] != v:
            dedup.append(v)
    if len(dedup) > 1 and dedup[0] == dedup[-1]:
        dedup.pop()
    return dedup


def slice_polygon(R: ChamberRegion, lo, hi, fixed: dict | None = None) -> list[tuple]:
    """Closure of the slice inside the viewport, as exact vertices."""
    axes, fixed = _slice_setup(R, fixed)
    lo, hi = Fraction(lo), Fraction(hi)
    poly = [(lo, lo), (hi, lo), (hi, hi), (lo, hi)]
    for a, b, c in _half_planes(R, axes, fixed):
        if a == 0 and b == 0:
            if not 0 < c:
                return []
            continue
        poly = _clip(poly, a, b, c)
        if not poly:
            break
    return poly


def grid_csv(rows: Sequence[tuple], axes: tuple) -> str:
    buf = io.StringIO()
    w = csv.writer(buf)  # RFC 4180 line endings
    w.writerow([f"phi_{axes[0]}", f"phi_{axes[1]}", "phi_display_x", "phi_display_y", "inside"])
    for x, y, ins in rows:
        w.writerow([str(x), str(y), f"{float(x):.6f}", f"{float(y):.6f}", int(ins)])
    return buf.getvalue()


def _fmt(v: Fraction) -> str:
    return f"{float(v):.4f}"


def slice_svg(R: ChamberRegion, lo, hi, fixed: dict | None = None, size: int = 400) -> str:
    axes, fixed_q = _slice_setup(R, fixed)
    poly = slice_polygon(R, lo, hi, fixed)
    lo, hi = Fraction(lo), Fraction(hi)
    scale = Fraction(size) / (hi - lo)

    def px(p):
        return (p[0] - lo) * scale, (hi - p[1]) * scale

    pts = " ".join(f"{_fmt(x)},{_fmt(y)}" for x, y in map(px, poly))
    title = ", ".join(str(q) for q in R.inequalities)
    if fixed_q:
        title += "; " + ", ".join(f"phi_{k} = {v}" for k, v in sorted(fixed_q.items()))
    lines = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" viewBox="0 0 {size} {size}">',
        f"<title>{escape(title)}</title>",
        f'<rect x="0" y="0" width="{size}" height="{size}" fill="white" stroke="black"/>',
    ]
    if poly:
        lines.append(
            f'<polygon points="{pts}" fill="#9ecae1" fill-opacity="0.6" stroke="#08519c" stroke-dasharray="6,4"/>'
        )
    lines.append(f'<text x="4" y="{size - 4}" font-size="12">phi_{axes[0]} in [{lo}, {hi}] (right)</text>')
    lines.append(f'<text x="4" y="14" font-size="12">phi_{axes[1]} (up)</text>')
    lines.append("</svg>")
    return "\n".join(lines) + "\n"
