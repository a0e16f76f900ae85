"""Matplotlib renderings of run outputs, written next to the data files.

All figures use the Agg backend and carry a fixed Software tag instead of
any timestamp metadata, so rerunning a computation rewrites identical
figure files.
"""
from __future__ import annotations

import math
from pathlib import Path

_PNG_METADATA = {"Software": "proxburden"}


def _plt():
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    return plt


def _zone_paths(zone):
    """One matplotlib Path per zone polygon, holes included (even-odd fill)."""
    from matplotlib.path import Path as MplPath

    paths = []
    for poly in zone.polygons:
        vertices = []
        codes = []
        for ring in poly.rings():
            pts = [(p.lon, p.lat) for p in ring]
            vertices.extend(pts)
            codes.extend(
                [MplPath.MOVETO] + [MplPath.LINETO] * (len(pts) - 2) + [MplPath.CLOSEPOLY]
            )
        paths.append(MplPath(vertices, codes))
    return paths


def save_choropleth(dataset, result, out_path: str | Path) -> Path:
    """Zone map shaded by burden class; zero-school zones hatched gray."""
    plt = _plt()
    from matplotlib.cm import ScalarMappable
    from matplotlib.colors import Normalize
    from matplotlib.patches import PathPatch, Patch

    zones = dataset.zone_set(result.request.scale).by_id()
    break_set = result.break_set
    cmap = plt.get_cmap("YlOrRd")
    k = break_set.k
    colors = [cmap(0.15 + 0.8 * i / max(k - 1, 1)) for i in range(k)]

    fig, ax = plt.subplots(figsize=(8, 8))
    lats = []
    for zb, ci in zip(result.surface.burdens, result.surface.class_indices):
        zone = zones[zb.zone_id]
        for path in _zone_paths(zone):
            if zb.n_schools == 0:
                patch = PathPatch(
                    path, facecolor="0.88", edgecolor="0.4", hatch="///", linewidth=0.6
                )
            else:
                patch = PathPatch(
                    path, facecolor=colors[ci], edgecolor="0.25", linewidth=0.6
                )
            ax.add_patch(patch)
        lats.extend(p.lat for poly in zone.polygons for p in poly.outer)

    unit = dataset.layer(result.request.layer_id).exposure_unit
    handles = []
    lo = None
    for i in range(k):
        hi = break_set.breaks[i] if i < k - 1 else None
        if lo is None and hi is not None:
            span = f"<= {hi:.3g}"
        elif hi is not None:
            span = f"{lo:.3g} - {hi:.3g}"
        elif lo is not None:
            span = f"> {lo:.3g}"
        else:
            span = "all values"
        handles.append(Patch(facecolor=colors[i], label=f"{break_set.labels[i]} ({span})"))
        lo = hi
    handles.append(
        Patch(facecolor="0.88", hatch="///", edgecolor="0.4", label="no schools")
    )
    ax.legend(
        handles=handles,
        loc="upper left",
        fontsize=8,
        title=f"cpb ({unit} x share)",
        title_fontsize=8,
    )

    ax.autoscale_view()
    if lats:
        mid = math.radians(sum(lats) / len(lats))
        ax.set_aspect(1.0 / max(math.cos(mid), 0.05))
    ax.set_xlabel("longitude")
    ax.set_ylabel("latitude")
    ax.set_title(
        f"Collective proximity burden by {result.request.scale.replace('_', ' ')}"
    )
    out_path = Path(out_path)
    fig.savefig(out_path, dpi=150, metadata=_PNG_METADATA)
    plt.close(fig)
    return out_path


def save_class_counts(result, out_path: str | Path) -> Path:
    """Bar chart: number of zones per burden class."""
    plt = _plt()
    break_set = result.break_set
    counts = [0] * break_set.k
    for ci in result.surface.class_indices:
        counts[ci] += 1

    fig, ax = plt.subplots(figsize=(6, 4))
    ax.bar(range(break_set.k), counts, color="#c23b22")
    ax.set_xticks(range(break_set.k))
    ax.set_xticklabels(break_set.labels, rotation=20, ha="right")
    ax.set_ylabel("zones")
    ax.set_title(f"Zones per burden class ({result.request.scale.replace('_', ' ')})")
    fig.tight_layout()
    out_path = Path(out_path)
    fig.savefig(out_path, dpi=150, metadata=_PNG_METADATA)
    plt.close(fig)
    return out_path


def save_maup_histograms(report, out_path: str | Path) -> Path:
    """Side-by-side class histograms for the two zone scales."""
    plt = _plt()
    import numpy as np

    k = max(len(report.coarse_histogram), len(report.fine_histogram))
    coarse = list(report.coarse_histogram) + [0] * (k - len(report.coarse_histogram))
    fine = list(report.fine_histogram) + [0] * (k - len(report.fine_histogram))
    x = np.arange(k)

    fig, ax = plt.subplots(figsize=(6, 4))
    ax.bar(x - 0.2, coarse, width=0.4, label=report.coarse_scale.replace("_", " "))
    ax.bar(x + 0.2, fine, width=0.4, label=report.fine_scale.replace("_", " "))
    ax.set_xticks(x)
    ax.set_xticklabels([f"class {i}" for i in range(k)])
    ax.set_ylabel("zones")
    ax.set_title(f"Class distribution by scale (rank corr {report.rank_correlation:.3f})")
    ax.legend()
    fig.tight_layout()
    out_path = Path(out_path)
    fig.savefig(out_path, dpi=150, metadata=_PNG_METADATA)
    plt.close(fig)
    return out_path


def save_demographics_chart(report, out_path: str | Path) -> Path:
    """Mean zone share and school-weighted share per burden class."""
    plt = _plt()
    import numpy as np

    x = np.arange(report.k)
    zone_means = [
        r.mean_latinx_share if r.mean_latinx_share is not None else 0.0
        for r in report.rows
    ]
    weighted = [
        r.weighted_school_latinx_share
        if r.weighted_school_latinx_share is not None
        else 0.0
        for r in report.rows
    ]

    fig, ax = plt.subplots(figsize=(6, 4))
    ax.bar(x - 0.2, zone_means, width=0.4, label="mean zone share")
    ax.bar(x + 0.2, weighted, width=0.4, label="school-weighted share")
    ax.set_xticks(x)
    ax.set_xticklabels([r.label for r in report.rows], rotation=20, ha="right")
    ax.set_ylim(0, 1)
    ax.set_ylabel("Latinx share")
    ax.set_title("Demographics by burden class")
    ax.legend()
    fig.tight_layout()
    out_path = Path(out_path)
    fig.savefig(out_path, dpi=150, metadata=_PNG_METADATA)
    plt.close(fig)
    return out_path
