"""Minimal deterministic SVG plots.

Hand-rolled SVG 1.1 output with fixed float formatting and no timestamps:
identical inputs give identical bytes, so figures are diffable and can sit
under checksum verification.  Four plot kinds cover the diagnostics:
line overlays, bars with per-seed points, mean+-std band trajectories, and
a confusion heatmap.
"""

from __future__ import annotations

from typing import Sequence

_WIDTH = 640.0
_HEIGHT = 420.0
_MARGIN_L = 64.0
_MARGIN_R = 20.0
_MARGIN_T = 40.0
_MARGIN_B = 52.0

_PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#8c564b", "#e377c2")


def _f(x: float) -> str:
    return f"{x:.3f}"


class _Canvas:
    def __init__(self, title: str, x_label: str, y_label: str,
                 x_range: tuple[float, float], y_range: tuple[float, float]):
        self.parts: list[str] = [
            f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
            f'width="{_f(_WIDTH)}" height="{_f(_HEIGHT)}" '
            f'viewBox="0 0 {_f(_WIDTH)} {_f(_HEIGHT)}">',
            f'<rect width="{_f(_WIDTH)}" height="{_f(_HEIGHT)}" fill="#ffffff"/>',
            f'<text x="{_f(_WIDTH / 2)}" y="22" font-family="sans-serif" '
            f'font-size="15" text-anchor="middle">{title}</text>',
        ]
        self.x0, self.x1 = x_range
        self.y0, self.y1 = y_range
        if self.x1 == self.x0:
            self.x1 = self.x0 + 1.0
        if self.y1 == self.y0:
            self.y1 = self.y0 + 1.0
        self._axes(x_label, y_label)

    def px(self, x: float) -> float:
        span = _WIDTH - _MARGIN_L - _MARGIN_R
        return _MARGIN_L + (x - self.x0) / (self.x1 - self.x0) * span

    def py(self, y: float) -> float:
        span = _HEIGHT - _MARGIN_T - _MARGIN_B
        return _HEIGHT - _MARGIN_B - (y - self.y0) / (self.y1 - self.y0) * span

    def _axes(self, x_label: str, y_label: str) -> None:
        left, bottom = _MARGIN_L, _HEIGHT - _MARGIN_B
        right, top = _WIDTH - _MARGIN_R, _MARGIN_T
        self.parts.append(
            f'<line x1="{_f(left)}" y1="{_f(bottom)}" x2="{_f(right)}" '
            f'y2="{_f(bottom)}" stroke="#000000" stroke-width="1"/>'
        )
        self.parts.append(
            f'<line x1="{_f(left)}" y1="{_f(bottom)}" x2="{_f(left)}" '
            f'y2="{_f(top)}" stroke="#000000" stroke-width="1"/>'
        )
        self.parts.append(
            f'<text x="{_f((left + right) / 2)}" y="{_f(_HEIGHT - 12.0)}" '
            f'font-family="sans-serif" font-size="12" text-anchor="middle">'
            f"{x_label}</text>"
        )
        self.parts.append(
            f'<text x="16" y="{_f((top + bottom) / 2)}" font-family="sans-serif" '
            f'font-size="12" text-anchor="middle" '
            f'transform="rotate(-90 16 {_f((top + bottom) / 2)})">{y_label}</text>'
        )
        for frac in (0.0, 0.25, 0.5, 0.75, 1.0):
            yv = self.y0 + frac * (self.y1 - self.y0)
            ypix = self.py(yv)
            self.parts.append(
                f'<line x1="{_f(left - 4.0)}" y1="{_f(ypix)}" x2="{_f(left)}" '
                f'y2="{_f(ypix)}" stroke="#000000" stroke-width="1"/>'
            )
            self.parts.append(
                f'<text x="{_f(left - 8.0)}" y="{_f(ypix + 4.0)}" '
                f'font-family="sans-serif" font-size="10" text-anchor="end">'
                f"{yv:.2f}</text>"
            )

    def polyline(self, xs: Sequence[float], ys: Sequence[float], color: str) -> None:
        pts = " ".join(f"{_f(self.px(x))},{_f(self.py(y))}" for x, y in zip(xs, ys))
        self.parts.append(
            f'<polyline points="{pts}" fill="none" stroke="{color}" '
            f'stroke-width="1.5"/>'
        )

    def band(self, xs, lo, hi, color: str) -> None:
        fwd = [f"{_f(self.px(x))},{_f(self.py(y))}" for x, y in zip(xs, hi)]
        back = [
            f"{_f(self.px(x))},{_f(self.py(y))}"
            for x, y in zip(reversed(list(xs)), reversed(list(lo)))
        ]
        self.parts.append(
            f'<polygon points="{" ".join(fwd + back)}" fill="{color}" '
            f'fill-opacity="0.15" stroke="none"/>'
        )

    def circle(self, x: float, y: float, color: str, r: float = 3.0) -> None:
        self.parts.append(
            f'<circle cx="{_f(self.px(x))}" cy="{_f(self.py(y))}" r="{_f(r)}" '
            f'fill="{color}" fill-opacity="0.7"/>'
        )

    def bar(self, x: float, width: float, y: float, color: str) -> None:
        base = self.py(max(self.y0, 0.0))
        top = self.py(y)
        self.parts.append(
            f'<rect x="{_f(self.px(x - width / 2))}" y="{_f(min(top, base))}" '
            f'width="{_f(self.px(x + width / 2) - self.px(x - width / 2))}" '
            f'height="{_f(abs(base - top))}" fill="{color}" fill-opacity="0.5"/>'
        )

    def x_tick(self, x: float, label: str) -> None:
        xpix = self.px(x)
        bottom = _HEIGHT - _MARGIN_B
        self.parts.append(
            f'<line x1="{_f(xpix)}" y1="{_f(bottom)}" x2="{_f(xpix)}" '
            f'y2="{_f(bottom + 4.0)}" stroke="#000000" stroke-width="1"/>'
        )
        self.parts.append(
            f'<text x="{_f(xpix)}" y="{_f(bottom + 16.0)}" '
            f'font-family="sans-serif" font-size="10" text-anchor="middle">'
            f"{label}</text>"
        )

    def legend(self, entries: Sequence[tuple[str, str]]) -> None:
        x = _MARGIN_L + 10.0
        y = _MARGIN_T + 8.0
        for i, (name, color) in enumerate(entries):
            yy = y + 16.0 * i
            self.parts.append(
                f'<rect x="{_f(x)}" y="{_f(yy - 8.0)}" width="12" height="8" '
                f'fill="{color}"/>'
            )
            self.parts.append(
                f'<text x="{_f(x + 18.0)}" y="{_f(yy)}" font-family="sans-serif" '
                f'font-size="11">{name}</text>'
            )

    def render(self) -> str:
        return "\n".join(self.parts + ["</svg>"]) + "\n"


def _padded_range(values: Sequence[float]) -> tuple[float, float]:
    lo, hi = min(values), max(values)
    pad = 0.05 * (hi - lo) if hi > lo else max(abs(hi), 1.0) * 0.1
    return lo - pad, hi + pad


def trajectory_overlay_svg(
    series: Sequence[tuple[str, Sequence[float]]],
    title: str,
    y_label: str = "test accuracy (%)",
) -> str:
    """Per-epoch line overlay; one color per named series."""
    epochs = max(len(ys) for _, ys in series)
    all_vals = [v for _, ys in series for v in ys]
    canvas = _Canvas(title, "epoch", y_label, (1.0, float(epochs)), _padded_range(all_vals))
    for i, (name, ys) in enumerate(series):
        color = _PALETTE[i % len(_PALETTE)]
        canvas.polyline(range(1, len(ys) + 1), ys, color)
    for e in range(1, epochs + 1, max(1, epochs // 9)):
        canvas.x_tick(float(e), str(e))
    canvas.legend([(n, _PALETTE[i % len(_PALETTE)]) for i, (n, _) in enumerate(series)])
    return canvas.render()


def bars_with_points_svg(
    groups: Sequence[tuple[str, Sequence[float]]],
    title: str,
    y_label: str = "test accuracy (%)",
) -> str:
    """Bar per group at the mean, overlaid with one point per seed."""
    all_vals = [v for _, vals in groups for v in vals]
    lo, hi = _padded_range(all_vals)
    canvas = _Canvas(title, "", y_label, (-0.5, len(groups) - 0.5), (lo, hi))
    for i, (name, vals) in enumerate(groups):
        color = _PALETTE[i % len(_PALETTE)]
        mean = sum(vals) / len(vals)
        canvas.bar(float(i), 0.6, mean, color)
        for v in vals:
            canvas.circle(float(i), v, "#000000", r=2.5)
        canvas.x_tick(float(i), name)
    return canvas.render()


def band_trajectories_svg(
    series: Sequence[tuple[str, Sequence[float], Sequence[float]]],
    title: str,
    y_label: str,
) -> str:
    """Mean trajectory with a +-std band per named series."""
    epochs = max(len(m) for _, m, _ in series)
    all_vals = [m + s for _, ms, ss in series for m, s in zip(ms, ss)]
    all_vals += [m - s for _, ms, ss in series for m, s in zip(ms, ss)]
    canvas = _Canvas(title, "epoch", y_label, (1.0, float(epochs)), _padded_range(all_vals))
    for i, (name, means, stds) in enumerate(series):
        color = _PALETTE[i % len(_PALETTE)]
        xs = list(range(1, len(means) + 1))
        canvas.band(xs, [m - s for m, s in zip(means, stds)],
                    [m + s for m, s in zip(means, stds)], color)
        canvas.polyline(xs, means, color)
    for e in range(1, epochs + 1, max(1, epochs // 9)):
        canvas.x_tick(float(e), str(e))
    canvas.legend([(n, _PALETTE[i % len(_PALETTE)]) for i, (n, _, _) in enumerate(series)])
    return canvas.render()


def confusion_heatmap_svg(matrix, title: str) -> str:
    """Row-normalized confusion heatmap with cell annotations."""
    n = len(matrix)
    cell = min(
        (_WIDTH - _MARGIN_L - _MARGIN_R) / n,
        (_HEIGHT - _MARGIN_T - _MARGIN_B) / n,
    )
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'width="{_f(_WIDTH)}" height="{_f(_HEIGHT)}" '
        f'viewBox="0 0 {_f(_WIDTH)} {_f(_HEIGHT)}">',
        f'<rect width="{_f(_WIDTH)}" height="{_f(_HEIGHT)}" fill="#ffffff"/>',
        f'<text x="{_f(_WIDTH / 2)}" y="22" font-family="sans-serif" '
        f'font-size="15" text-anchor="middle">{title}</text>',
    ]
    for i in range(n):
        for j in range(n):
            v = float(matrix[i][j])
            shade = int(round(255.0 * (1.0 - v)))
            fill = f"#{shade:02x}{shade:02x}ff"
            x = _MARGIN_L + j * cell
            y = _MARGIN_T + i * cell
            parts.append(
                f'<rect x="{_f(x)}" y="{_f(y)}" width="{_f(cell)}" '
                f'height="{_f(cell)}" fill="{fill}" stroke="#cccccc" '
                f'stroke-width="0.5"/>'
            )
            if v > 0.0:
                text_fill = "#000000" if v < 0.6 else "#ffffff"
                parts.append(
                    f'<text x="{_f(x + cell / 2)}" y="{_f(y + cell / 2 + 3.0)}" '
                    f'font-family="sans-serif" font-size="9" '
                    f'text-anchor="middle" fill="{text_fill}">{v:.2f}</text>'
                )
    for i in range(n):
        parts.append(
            f'<text x="{_f(_MARGIN_L - 8.0)}" '
            f'y="{_f(_MARGIN_T + i * cell + cell / 2 + 3.0)}" '
            f'font-family="sans-serif" font-size="10" text-anchor="end">{i}</text>'
        )
        parts.append(
            f'<text x="{_f(_MARGIN_L + i * cell + cell / 2)}" '
            f'y="{_f(_MARGIN_T + n * cell + 14.0)}" '
            f'font-family="sans-serif" font-size="10" text-anchor="middle">{i}</text>'
        )
    parts.append(
        f'<text x="{_f(_MARGIN_L + n * cell / 2)}" '
        f'y="{_f(_MARGIN_T + n * cell + 32.0)}" font-family="sans-serif" '
        f'font-size="12" text-anchor="middle">predicted class</text>'
    )
    parts.append(
        f'<text x="16" y="{_f(_MARGIN_T + n * cell / 2)}" '
        f'font-family="sans-serif" font-size="12" text-anchor="middle" '
        f'transform="rotate(-90 16 {_f(_MARGIN_T + n * cell / 2)})">true class</text>'
    )
    return "\n".join(parts + ["</svg>"]) + "\n"
