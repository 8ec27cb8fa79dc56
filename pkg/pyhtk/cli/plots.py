"""配置の静的な図 (SVG)

実配置は a∨_R の中の超平面として、楕円配置は E_τ^d の基本領域を
格子座標 (s, t) の二枚の平面に射影して描き、固定点に印を付けます。
"""

import logging
from pathlib import Path
from typing import List, Sequence

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from pyhtk.core.errors import UnsupportedDimension  # noqa: E402
from pyhtk.runtime.arrangements import CombinedArrangement, FixedPoint  # noqa: E402

logger = logging.getLogger(__name__)

MAX_PLOT_DIMENSION = 2
_SVG_METADATA = {"Date": None, "Creator": "pyhtk"}


def _save(fig, path: Path) -> Path:
    # 同じ入力から同じバイト列を得るため日付と id の塩を固定
    with matplotlib.rc_context({"svg.hashsalt": "pyhtk"}):
        fig.savefig(path, format="svg", metadata=_SVG_METADATA)
    plt.close(fig)
    logger.debug(f"図を書き出しました: {path}")
    return path


def _real_window(points: Sequence[Sequence[float]], d: int) -> np.ndarray:
    if not points:
        return np.array([[-2.0, 2.0]] * d)
    arr = np.array(points, dtype=float)
    low, high = arr.min(axis=0), arr.max(axis=0)
    margin = np.maximum((high - low) * 0.5, 1.0)
    return np.stack([low - margin, high + margin], axis=1)


def plot_real(arr: CombinedArrangement, points: List[FixedPoint], path: Path) -> Path:
    fig, ax = plt.subplots(figsize=(5, 5))
    ax.set_title("real arrangement")
    real = [[float(c) for c in p.real] for p in points]
    if arr.d == 1:
        window = _real_window(real, 1)[0]
        for (hyperplane, _), u in zip(arr.pairs, arr.config.vectors):
            ax.axvline(float(hyperplane.level) / u[0], color="tab:blue", linewidth=1)
        ax.set_xlim(*window)
        ax.set_ylim(-1, 1)
        ax.set_yticks([])
        if real:
            ax.plot([r[0] for r in real], [0.0] * len(real), "o", color="tab:red")
    elif arr.d == 2:
        window = _real_window(real, 2)
        xs = np.linspace(window[0, 0], window[0, 1], 200)
        for hyperplane, _ in arr.pairs:
            a, b = hyperplane.normal
            level = float(hyperplane.level)
            if b == 0:
                ax.axvline(level / a, color="tab:blue", linewidth=1)
            else:
                ax.plot(xs, (level - a * xs) / b, color="tab:blue", linewidth=1)
        ax.set_xlim(*window[0])
        ax.set_ylim(*window[1])
        if real:
            ax.plot([r[0] for r in real], [r[1] for r in real], "o", color="tab:red")
    ax.set_xlabel("a1")
    return _save(fig, path)


def _level_lines(ax, normal: Sequence[int], level: float, color: str):
    """単位正方形の中の u·s ≡ level (mod 1)"""
    a, b = normal
    reach = abs(a) + abs(b) + 1
    grid = np.linspace(0.0, 1.0, 200)
    for k in range(-reach, reach + 1):
        if b == 0:
            x = (level + k) / a
            if 0.0 <= x < 1.0:
                ax.axvline(x, color=color, linewidth=1)
            continue
        y = (level + k - a * grid) / b
        inside = (y >= 0.0) & (y <= 1.0)
        if inside.any():
            ax.plot(grid[inside], y[inside], color=color, linewidth=1)


def plot_elliptic(arr: CombinedArrangement, points: List[FixedPoint], path: Path) -> Path:
    if arr.d == 2:
        fig, axes = plt.subplots(1, 2, figsize=(10, 5))
        for panel, (ax, label) in enumerate(zip(axes, ("s", "t"))):
            for (_, hyperplane), u in zip(arr.pairs, arr.config.vectors):
                _level_lines(ax, u, float(hyperplane.level.coords[panel]), "tab:green")
            for p in points:
                coords = [c.coords[panel] for c in p.elliptic]
                ax.plot(coords[0], coords[1], "o", color="tab:red")
            ax.set_title(f"elliptic arrangement ({label} coordinates)")
            ax.set_xlim(0, 1)
            ax.set_ylim(0, 1)
            ax.set_aspect("equal")
        return _save(fig, path)

    fig, ax = plt.subplots(figsize=(5, 5))
    ax.set_title("elliptic arrangement (fundamental domain)")
    ax.set_xlim(0, 1)
    ax.set_ylim(0, 1)
    ax.set_aspect("equal")
    ax.set_xlabel("s")
    ax.set_ylabel("t")
    if arr.d == 1:
        for (_, hyperplane), u in zip(arr.pairs, arr.config.vectors):
            level = hyperplane.level if u[0] > 0 else -hyperplane.level
            marks = [y.coords for y in level.divisions(abs(u[0]))]
            ax.plot([c[0] for c in marks], [c[1] for c in marks], "x", color="tab:green")
        for p in points:
            s, t = p.elliptic[0].coords
            ax.plot(s, t, "o", markerfacecolor="none", color="tab:red", markersize=10)
    return _save(fig, path)


def plot_arrangement(
    arr: CombinedArrangement, points: List[FixedPoint], out_dir: Path, stem: str
) -> List[Path]:
    """実配置と楕円配置の図を書き出し、パスを返す"""
    if arr.d > MAX_PLOT_DIMENSION:
        raise UnsupportedDimension(f"d={arr.d} の配置は描けません (d ≤ {MAX_PLOT_DIMENSION})")
    out_dir.mkdir(parents=True, exist_ok=True)
    return [
        plot_real(arr, points, out_dir / f"{stem}_real.svg"),
        plot_elliptic(arr, points, out_dir / f"{stem}_elliptic.svg"),
    ]
