"""Debug renderings of a curve graph: SVG over a sign raster, and DOT."""

from __future__ import annotations

import numpy as np

from .poly.exact import IntPoly2
from .topology import CurveGraph

__all__ = ["sign_raster", "render_svg", "write_dot"]


def sign_raster(F: IntPoly2, box: tuple, size: int = 400) -> np.ndarray:
    """Sign of ``F`` on a ``size x size`` pixel grid over ``box = (x0, x1, y0, y1)``.

    Floating point, so only a visual backdrop: nothing certified depends on it.
    """
    x0, x1, y0, y1 = (float(b) for b in box)
    xs = np.linspace(x0, x1, size)
    ys = np.linspace(y0, y1, size)
    X, Y = np.meshgrid(xs, ys)
    V = np.zeros_like(X)
    for (i, j), c in F.terms.items():
        V += float(c) * X**i * Y**j
    return np.sign(V)


def render_svg(g: CurveGraph, path: str, size: int = 400, title: str | None = None) -> None:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    x0, x1, y0, y1 = (float(b) for b in g.box)
    fig, ax = plt.subplots(figsize=(6, 6))
    if g.curve is not None:
        S = sign_raster(g.curve, g.box, size)
        ax.imshow(S, extent=(x0, x1, y0, y1), origin="lower", cmap="coolwarm",
                  vmin=-3, vmax=3, alpha=0.5, rasterized=True, aspect="auto")
    pts = [(float(x), float(y)) for x, y in g.vertices]
    for a, b in g.edges:
        ax.plot([pts[a][0], pts[b][0]], [pts[a][1], pts[b][1]], color="black", lw=1.2)
    reg = [p for i, p in enumerate(pts) if i not in g.singular]
    if reg:
        ax.scatter(*zip(*reg), s=12, color="black", zorder=3)
    sing = [pts[i] for i in g.singular]
    if sing:
        ax.scatter(*zip(*sing), s=40, color="red", marker="s", zorder=4)
    for fib in g.fibers:
        ax.axvline(float(fib.x_value), color="gray", lw=0.4, ls=":")
    ax.set_xlim(x0, x1)
    ax.set_ylim(y0, y1)
    ax.set_title(title or f"shear s = {g.shear_s}")
    # SVG unless the path names another matplotlib format
    fmt = None if path.rsplit(".", 1)[-1].lower() in ("png", "pdf") else "svg"
    fig.savefig(path, format=fmt)
    plt.close(fig)


def write_dot(g: CurveGraph, path: str) -> None:
    with open(path, "w") as fh:
        fh.write(g.to_dot())
