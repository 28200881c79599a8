"""Minimal dependency-free SVG line charts (byte-stable output)."""

from __future__ import annotations

from xml.sax.saxutils import escape

W, H = 480, 320
LEFT, RIGHT, TOP, BOTTOM = 56, 150, 36, 44


def _f(x: float) -> str:
    return f"{x:.2f}"


def line_chart(title: str, xs, series: list[tuple[str, str, bool, list]], x_label="k", y_label="count") -> str:
    """``series`` items are (name, colour, dashed, ys)."""
    ys_all = [y for *_, ys in series for y in ys]
    y_max = max(ys_all + [1.0]) * 1.05
    x_min, x_max = min(xs), max(xs)
    span = (x_max - x_min) or 1.0
    pw, ph = W - LEFT - RIGHT, H - TOP - BOTTOM

    def px(x):
        return LEFT + (x - x_min) / span * pw

    def py(y):
        return TOP + ph - y / y_max * ph

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}">',
        f'<rect width="{W}" height="{H}" fill="white"/>',
        f'<text x="{W / 2 - RIGHT / 2:.0f}" y="20" text-anchor="middle" font-size="13">{escape(title)}</text>',
        f'<line x1="{LEFT}" y1="{TOP + ph}" x2="{LEFT + pw}" y2="{TOP + ph}" stroke="black"/>',
        f'<line x1="{LEFT}" y1="{TOP}" x2="{LEFT}" y2="{TOP + ph}" stroke="black"/>',
    ]
    for x in xs:
        out.append(f'<text x="{_f(px(x))}" y="{TOP + ph + 16}" text-anchor="middle" font-size="11">{x:g}</text>')
    for i in range(5):
        y = y_max * i / 4
        out.append(f'<text x="{LEFT - 6}" y="{_f(py(y) + 4)}" text-anchor="end" font-size="11">{y:.0f}</text>')
    out.append(f'<text x="{LEFT + pw / 2:.0f}" y="{H - 8}" text-anchor="middle" font-size="12">{escape(x_label)}</text>')
    out.append(
        f'<text x="14" y="{TOP + ph / 2:.0f}" text-anchor="middle" font-size="12" '
        f'transform="rotate(-90 14 {TOP + ph / 2:.0f})">{escape(y_label)}</text>'
    )
    for idx, (name, colour, dashed, ys) in enumerate(series):
        pts = " ".join(f"{_f(px(x))},{_f(py(y))}" for x, y in zip(xs, ys))
        dash = ' stroke-dasharray="6 4"' if dashed else ""
        out.append(f'<polyline points="{pts}" fill="none" stroke="{colour}" stroke-width="2"{dash}/>')
        ly = TOP + 14 + idx * 18
        lx = LEFT + pw + 12
        out.append(f'<line x1="{lx}" y1="{ly}" x2="{lx + 22}" y2="{ly}" stroke="{colour}" stroke-width="2"{dash}/>')
        out.append(f'<text x="{lx + 28}" y="{ly + 4}" font-size="11">{escape(name)}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def retained_counts_chart(alpha: float, cells: list[dict]) -> str:
    cells = sorted((c for c in cells if c["alpha"] == alpha), key=lambda c: c["k"])
    ks = [c["k"] for c in cells]
    series = [
        ("#Normal (consensus)", "green", True, [c["mean_retained_normal"] for c in cells]),
        ("#Normal (sub-model)", "green", False, [c["mean_submodel_retained_normal"] for c in cells]),
        ("#Anomaly (consensus)", "red", True, [c["mean_retained_anomalous"] for c in cells]),
        ("#Anomaly (sub-model)", "red", False, [c["mean_submodel_retained_anomalous"] for c in cells]),
    ]
    return line_chart(f"retained samples, alpha={alpha:g}", ks, series)
