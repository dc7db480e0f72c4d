"""CSV serialization and minimal self-contained SVG plotting.

All CSV output uses 17 significant digits, '.' decimal point, comma
separators and a header row, so identical inputs give byte-identical
files.  Plots are plain SVG (axes, polylines, points) with no plotting
dependency.
"""
from __future__ import annotations

import csv
import math
from typing import Iterable, Sequence

from .engine import SimResult
from .model import Params, hamiltonian


def _fmt(x: float) -> str:
    return f"{x:.17g}"


def write_csv(path: str, header: Sequence[str], rows: Iterable[Sequence],
              comments: Sequence[str] = ()) -> None:
    with open(path, "w", newline="") as fh:
        for c in comments:
            fh.write(f"# {c}\n")
        writer = csv.writer(fh)
        writer.writerow(header)
        for row in rows:
            writer.writerow([_fmt(v) if isinstance(v, float) else v for v in row])


def write_trajectory_csv(path: str, result: SimResult, stride: float) -> None:
    rows = [
        (t, x.theta, x.phi, int(on), hamiltonian(x))
        for (t, x, on) in result.sample(stride)
    ]
    write_csv(path, ("t", "theta", "phi", "control_on", "H"), rows)


def write_events_csv(path: str, result: SimResult) -> None:
    rows = [
        (e.t, e.kind.value, e.state.theta, e.state.phi)
        for e in result.events
    ]
    write_csv(path, ("t", "kind", "theta", "phi"), rows)


# ---------------------------------------------------------------------------
# SVG


class SvgPlot:
    """Fixed-size line plot with linear axes and light decoration."""

    WIDTH = 640
    HEIGHT = 480
    MARGIN = 56

    def __init__(self, xlabel: str = "", ylabel: str = "", title: str = ""):
        self.xlabel = xlabel
        self.ylabel = ylabel
        self.title = title
        self.series: list[tuple[list[float], list[float], str, bool]] = []

    def add_line(self, xs: Sequence[float], ys: Sequence[float], color: str = "#1f6fb2") -> None:
        self.series.append((list(xs), list(ys), color, False))

    def add_points(self, xs: Sequence[float], ys: Sequence[float], color: str = "#c23b22") -> None:
        self.series.append((list(xs), list(ys), color, True))

    def _bounds(self) -> tuple[float, float, float, float]:
        xs = [x for s in self.series for x in s[0] if math.isfinite(x)]
        ys = [y for s in self.series for y in s[1] if math.isfinite(y)]
        if not xs or not ys:
            return 0.0, 1.0, 0.0, 1.0
        x0, x1 = min(xs), max(xs)
        y0, y1 = min(ys), max(ys)
        if x0 == x1:
            x0, x1 = x0 - 0.5, x1 + 0.5
        if y0 == y1:
            y0, y1 = y0 - 0.5, y1 + 0.5
        px, py = 0.04 * (x1 - x0), 0.04 * (y1 - y0)
        return x0 - px, x1 + px, y0 - py, y1 + py

    def write(self, path: str) -> None:
        x0, x1, y0, y1 = self._bounds()
        m, w, h = self.MARGIN, self.WIDTH, self.HEIGHT

        def sx(x: float) -> float:
            return m + (x - x0) / (x1 - x0) * (w - 2 * m)

        def sy(y: float) -> float:
            return h - m - (y - y0) / (y1 - y0) * (h - 2 * m)

        parts = [
            f'<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" '
            f'viewBox="0 0 {w} {h}">',
            f'<rect width="{w}" height="{h}" fill="white"/>',
            f'<rect x="{m}" y="{m}" width="{w - 2 * m}" height="{h - 2 * m}" '
            'fill="none" stroke="#444" stroke-width="1"/>',
        ]
        for frac in (0.0, 0.25, 0.5, 0.75, 1.0):
            xv = x0 + frac * (x1 - x0)
            yv = y0 + frac * (y1 - y0)
            parts.append(
                f'<text x="{sx(xv):.1f}" y="{h - m + 18}" font-size="11" '
                f'text-anchor="middle" fill="#333">{xv:.3g}</text>'
            )
            parts.append(
                f'<text x="{m - 6}" y="{sy(yv):.1f}" font-size="11" '
                f'text-anchor="end" dominant-baseline="middle" fill="#333">{yv:.3g}</text>'
            )
        if self.title:
            parts.append(
                f'<text x="{w / 2}" y="{m - 14}" font-size="14" '
                f'text-anchor="middle" fill="#111">{self.title}</text>'
            )
        if self.xlabel:
            parts.append(
                f'<text x="{w / 2}" y="{h - 12}" font-size="12" '
                f'text-anchor="middle" fill="#111">{self.xlabel}</text>'
            )
        if self.ylabel:
            parts.append(
                f'<text x="16" y="{h / 2}" font-size="12" text-anchor="middle" '
                f'transform="rotate(-90 16 {h / 2})" fill="#111">{self.ylabel}</text>'
            )
        for xs, ys, color, is_points in self.series:
            if is_points:
                for x, y in zip(xs, ys):
                    if math.isfinite(x) and math.isfinite(y):
                        parts.append(
                            f'<circle cx="{sx(x):.2f}" cy="{sy(y):.2f}" r="2.5" fill="{color}"/>'
                        )
            else:
                pts = " ".join(
                    f"{sx(x):.2f},{sy(y):.2f}"
                    for x, y in zip(xs, ys)
                    if math.isfinite(x) and math.isfinite(y)
                )
                parts.append(
                    f'<polyline points="{pts}" fill="none" stroke="{color}" stroke-width="1.2"/>'
                )
        parts.append("</svg>")
        with open(path, "w") as fh:
            fh.write("\n".join(parts))


def phase_plot(path: str, result: SimResult, p: Params, stride: float,
               title: str = "") -> None:
    """Phase-plane plot with switching manifolds and the H = 1 level set."""
    samples = result.sample(stride)
    plot = SvgPlot(xlabel="theta", ylabel="phi", title=title)
    thetas = [x.theta for (_, x, _) in samples]
    phis = [x.phi for (_, x, _) in samples]
    plot.add_line(thetas, phis, "#1f6fb2")
    if thetas:
        lo, hi = min(thetas + [-0.1]), max(thetas + [0.1])
        grid = [lo + (hi - lo) * i / 100 for i in range(101)]
        from .model import Manifold, Rule, active_manifolds

        if p.rule is Rule.RULE1:
            plot.add_line(grid, [p.s * th for th in grid], "#888888")
            phr = [min(phis), max(phis)] if phis else [-1, 1]
            plot.add_line([0.0, 0.0], phr, "#888888")
        else:
            phr = [min(phis), max(phis)] if phis else [-1, 1]
            plot.add_line([p.sigma, p.sigma], phr, "#888888")
            plot.add_line([-p.sigma, -p.sigma], phr, "#888888")
        # stable-manifold level set H = 1: phi = +-2 sin(theta/2)
        ws_up = [2 * math.sin(th / 2) for th in grid]
        plot.add_line(grid, ws_up, "#3aa655")
        plot.add_line(grid, [-v for v in ws_up], "#3aa655")
    plot.write(path)
