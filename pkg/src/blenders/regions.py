"""Sampling the (A, B) sections of P, Q and K for binary sextics g_{A,B}."""
from __future__ import annotations

import csv
import io
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .convexity import p_boundary_curve, psi_curve, q_section_expected, sextic_section

HEADER = ("A", "B", "in_P", "in_Q", "in_K")


class RegionError(ValueError):
    pass


@dataclass(frozen=True)
class Grid:
    a_lo: Fraction
    a_hi: Fraction
    b_lo: Fraction
    b_hi: Fraction
    step: Fraction

    def __post_init__(self):
        if self.step <= 0:
            raise RegionError("step must be positive")
        if self.a_hi < self.a_lo or self.b_hi < self.b_lo:
            raise RegionError("empty grid: upper end below lower end")

    def axis(self, lo, hi) -> list[Fraction]:
        n = int((hi - lo) / self.step)
        return [lo + k * self.step for k in range(n + 1)]

    @property
    def a_values(self):
        return self.axis(self.a_lo, self.a_hi)

    @property
    def b_values(self):
        return self.axis(self.b_lo, self.b_hi)

    def points(self):
        return [(a, b) for b in self.b_values for a in self.a_values]


def worker_count() -> int:
    env = os.environ.get("BLENDER_LAB_THREADS")
    cpus = os.cpu_count() or 1
    if env:
        try:
            return max(1, min(int(env), cpus * 4))
        except ValueError:
            raise RegionError(f"BLENDER_LAB_THREADS must be an integer, got {env!r}") from None
    return cpus


def _row(args):
    b, a_values = args
    return [(a, b) + sextic_section(a, b).codes() for a in a_values]


def sample(grid: Grid, workers: int | None = None) -> list[tuple]:
    """Rows (A, B, P, Q, K) in B-major, A-minor order regardless of worker count."""
    b_values, a_values = grid.b_values, grid.a_values
    if not a_values or not b_values:
        raise RegionError("empty grid")
    workers = worker_count() if workers is None else workers
    jobs = [(b, a_values) for b in b_values]
    if workers <= 1 or len(jobs) == 1:
        rows = [_row(j) for j in jobs]
    else:
        with ProcessPoolExecutor(max_workers=workers) as ex:
            rows = list(ex.map(_row, jobs, chunksize=max(1, len(jobs) // (4 * workers))))
    return [r for chunk in rows for r in chunk]


def to_csv(rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(HEADER)
    for a, b, p, q, k in rows:
        w.writerow((str(a), str(b), p, q, k))
    return buf.getvalue()


def read_csv(text: str) -> list[tuple]:
    r = csv.reader(io.StringIO(text))
    head = tuple(next(r))
    if head != HEADER:
        raise RegionError(f"unexpected header {head}")
    return [(Fraction(a), Fraction(b), p, q, k) for a, b, p, q, k in r]


@dataclass
class ChainReport:
    points: int
    chain_violations: list
    q_parabola_mismatches: list

    @property
    def ok(self) -> bool:
        return not self.chain_violations and not self.q_parabola_mismatches


def check_rows(rows) -> ChainReport:
    """Q member => K member => P member, and Q codes match the parabola description."""
    member = {"I", "B"}
    chain, qbad = [], []
    for a, b, p, q, k in rows:
        if (q in member and k not in member) or (k in member and p not in member):
            chain.append((a, b, p, q, k))
        if q != q_section_expected(a, b).code:
            qbad.append((a, b, q))
    return ChainReport(len(rows), chain, qbad)


# -- SVG ---------------------------------------------------------------------------------

_FILL = {"P": "#dce9f5", "K": "#8fb8de", "Q": "#2f6ea5"}


def psi_polyline(n: int = 512) -> np.ndarray:
    lam = np.linspace(-0.5, 0.5, n)
    return np.array([(psi_curve(t), psi_curve(-t)) for t in lam])


def p_curve(n: int = 512, r_lo: float = 0.35, r_hi: float = 1 / 0.35) -> np.ndarray:
    r = np.geomspace(r_lo, r_hi, n)
    return np.array([p_boundary_curve(t) for t in r])


def to_svg(rows, grid: Grid, size: int = 640) -> str:
    a0, a1 = float(grid.a_lo), float(grid.a_hi)
    b0, b1 = float(grid.b_lo), float(grid.b_hi)
    h = float(grid.step)
    span_a = max(a1 - a0 + h, h)
    span_b = max(b1 - b0 + h, h)
    sx, sy = size / span_a, size / span_b

    def X(a):
        return (a - a0 + h / 2) * sx

    def Y(b):
        return size - (b - b0 + h / 2) * sy

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" '
        f'viewBox="0 0 {size} {size}">',
        '<defs><clipPath id="view"><rect x="0" y="0" width="{0}" height="{0}"/></clipPath></defs>'.format(size),
        f'<rect x="0" y="0" width="{size}" height="{size}" fill="white"/>',
    ]
    cells = {"P": [], "K": [], "Q": []}
    for a, b, p, q, k in rows:
        for name, code in (("P", p), ("K", k), ("Q", q)):
            if code in ("I", "B"):
                cells[name].append((float(a), float(b)))
    w, hh = h * sx, h * sy
    for name in ("P", "K", "Q"):
        out.append(f'<g id="{name}" fill="{_FILL[name]}" stroke="none">')
        for a, b in cells[name]:
            out.append(f'<rect x="{X(a) - w / 2:.3f}" y="{Y(b) - hh / 2:.3f}" width="{w:.3f}" height="{hh:.3f}"/>')
        out.append("</g>")

    def poly(pts, color, ident):
        coords = " ".join(f"{X(a):.3f},{Y(b):.3f}" for a, b in pts if math.isfinite(a) and math.isfinite(b))
        return (f'<polyline id="{ident}" clip-path="url(#view)" fill="none" stroke="{color}" '
                f'stroke-width="1.5" points="{coords}"/>')

    out.append(poly(psi_polyline(), "#c0392b", "psi"))
    out.append(poly(p_curve(), "#27ae60", "p_boundary"))
    out.append("</svg>")
    return "\n".join(out) + "\n"
