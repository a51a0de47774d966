#!/usr/bin/env python3
"""Render class-faceted persistence diagrams from ppm JSONL output.

Consumes the files written by ``ambient-cycles ppm`` (one JSONL record per
persistent quadruple plus a summary JSON) and draws one scatter facet per
distinct homology class, alongside an "all" facet annotated with the
empirical persistent fraction phi_bar.  Facets with at least 50 points are
colour-shaded by a Gaussian kernel density estimate (Silverman bandwidth
unless overridden); smaller facets are plain scatters.  Optional markers:
the surface diameter (dotted lines on both axes) and a user-supplied bound
curve read from a two-column CSV (plotted as a dashed line).

Usage:
    plots/render.py --in out/ppm.jsonl --summary out/summary.json \
        --out figs/ [--diameter D] [--bandwidth BW] [--bounds-csv curve.csv]

Writes <out>/diagram.png and <out>/diagram.svg.  Exit codes: 0 ok,
2 missing or invalid input.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import os
import sys
from dataclasses import dataclass, field

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np
from scipy.stats import gaussian_kde

KDE_MIN_POINTS = 50


@dataclass
class DiagramSpec:
    jsonl_path: str
    summary_path: str
    out_dir: str
    only_class: str | None = None          # restrict to one class facet
    axis_max: float | None = None          # axes run over [0, axis_max]
    bandwidth: float | None = None         # KDE bandwidth factor (None = Silverman)
    diameter: float | None = None          # surface diameter marker
    bounds: list[tuple[float, float]] = field(default_factory=list)
    stem: str = "diagram"


class RenderError(Exception):
    pass


def class_label(free: list[int], torsion: list[int]) -> str:
    body = ",".join(str(v) for v in free)
    if torsion:
        return f"({body};{','.join(str(v) for v in torsion)})"
    return f"({body})"


def load_records(path: str) -> list[dict]:
    try:
        with open(path) as fh:
            lines = [line for line in fh if line.strip()]
    except OSError as exc:
        raise RenderError(f"cannot read {path}: {exc}")
    records = []
    for lineno, line in enumerate(lines, start=1):
        try:
            rec = json.loads(line)
            rec["label"] = class_label(rec["class_free"], rec["class_torsion"])
            birth, death = float(rec["birth"]), float(rec["death"])
        except (ValueError, KeyError) as exc:
            raise RenderError(f"{path}:{lineno}: bad record ({exc})")
        if not (death > birth > 0.0):
            raise RenderError(
                f"{path}:{lineno}: point below the diagonal (birth={birth}, death={death})"
            )
        records.append(rec)
    return records


def load_summary(path: str) -> dict:
    try:
        with open(path) as fh:
            summary = json.load(fh)
    except (OSError, ValueError) as exc:
        raise RenderError(f"cannot read summary {path}: {exc}")
    for key in ("total", "persistent", "phi_bar", "class_counts"):
        if key not in summary:
            raise RenderError(f"summary {path} lacks key {key!r}")
    return summary


def load_bounds_csv(path: str) -> list[tuple[float, float]]:
    try:
        with open(path, newline="") as fh:
            rows = [row for row in csv.reader(fh) if row]
    except OSError as exc:
        raise RenderError(f"cannot read bounds {path}: {exc}")
    pts = []
    for row in rows:
        try:
            pts.append((float(row[0]), float(row[1])))
        except (ValueError, IndexError):
            continue  # header or comment row
    if not pts:
        raise RenderError(f"bounds file {path} has no numeric rows")
    return pts


def build_facets(records: list[dict]) -> dict[str, list[dict]]:
    """Facets keyed by class label (non-degenerate), plus one for
    degenerate records if any exist."""
    facets: dict[str, list[dict]] = {}
    for rec in records:
        key = "degenerate" if rec.get("degenerate") else rec["label"]
        facets.setdefault(key, []).append(rec)
    return dict(sorted(facets.items()))


def _draw_facet(ax, title, recs, lim, bandwidth, diameter, bounds):
    ax.set_xlim(0, lim)
    ax.set_ylim(0, lim)
    ax.plot([0, lim], [0, lim], color="0.6", linewidth=0.8)
    if diameter is not None:
        ax.axvline(diameter, color="0.4", linestyle=":", linewidth=0.8)
        ax.axhline(diameter, color="0.4", linestyle=":", linewidth=0.8)
    if bounds:
        bx, by = zip(*sorted(bounds))
        ax.plot(bx, by, color="tab:orange", linestyle="--", linewidth=1.0)
    if recs:
        births = np.array([r["birth"] for r in recs])
        deaths = np.array([r["death"] for r in recs])
        if len(recs) >= KDE_MIN_POINTS:
            xy = np.vstack([births, deaths])
            density = gaussian_kde(xy, bw_method=bandwidth)(xy)
            order = np.argsort(density)
            ax.scatter(
                births[order], deaths[order], c=density[order],
                s=4, cmap="viridis", rasterized=True,
            )
        else:
            ax.scatter(births, deaths, s=6, color="tab:blue")
    ax.set_title(title, fontsize=9)
    ax.set_xlabel("birth", fontsize=8)
    ax.set_ylabel("death", fontsize=8)
    ax.tick_params(labelsize=7)


def render(spec: DiagramSpec) -> dict[str, int]:
    """Render the facet grid; returns {facet name: point count}.

    The "all" facet holds every record and carries the phi_bar
    annotation; class facets hold non-degenerate points of one class.
    """
    records = load_records(spec.jsonl_path)
    summary = load_summary(spec.summary_path)
    facets = build_facets(records)
    if spec.only_class is not None:
        facets = {k: v for k, v in facets.items() if k == spec.only_class}

    if not records:
        print("render: no persistent points; drawing an empty diagram", file=sys.stderr)

    counts = {"all": len(records)}
    counts.update({k: len(v) for k, v in facets.items()})

    lim = spec.axis_max
    if lim is None:
        top = max((r["death"] for r in records), default=1.0)
        if spec.diameter is not None:
            top = max(top, spec.diameter)
        lim = 1.1 * top

    n_panels = 1 + len(facets)
    ncols = min(3, n_panels)
    nrows = math.ceil(n_panels / ncols)
    fig, axes = plt.subplots(
        nrows, ncols, figsize=(3.2 * ncols, 3.2 * nrows), squeeze=False
    )
    flat = axes.ravel()
    _draw_facet(
        flat[0], f"all (phi_bar = {summary['phi_bar']:.4g})",
        records, lim, spec.bandwidth, spec.diameter, spec.bounds,
    )
    for ax, (label, recs) in zip(flat[1:], facets.items()):
        _draw_facet(
            ax, f"{label} ({len(recs)})", recs, lim,
            spec.bandwidth, spec.diameter, spec.bounds,
        )
    for ax in flat[n_panels:]:
        ax.set_visible(False)
    fig.tight_layout()

    os.makedirs(spec.out_dir, exist_ok=True)
    for ext in ("png", "svg"):
        fig.savefig(os.path.join(spec.out_dir, f"{spec.stem}.{ext}"), dpi=150)
    plt.close(fig)
    return counts


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--in", dest="jsonl", required=True, help="ppm JSONL file")
    parser.add_argument("--summary", required=True, help="summary JSON file")
    parser.add_argument("--out", required=True, help="output directory for figures")
    parser.add_argument("--diameter", type=float, default=None)
    parser.add_argument("--bandwidth", type=float, default=None)
    parser.add_argument("--axis-max", type=float, default=None)
    parser.add_argument("--class", dest="only_class", default=None,
                        help="render only this class facet (plus the all facet)")
    parser.add_argument("--bounds-csv", default=None,
                        help="two-column CSV curve drawn as a dashed bound")
    args = parser.parse_args(argv)
    try:
        bounds = load_bounds_csv(args.bounds_csv) if args.bounds_csv else []
        spec = DiagramSpec(
            jsonl_path=args.jsonl,
            summary_path=args.summary,
            out_dir=args.out,
            only_class=args.only_class,
            axis_max=args.axis_max,
            bandwidth=args.bandwidth,
            diameter=args.diameter,
            bounds=bounds,
        )
        counts = render(spec)
    except RenderError as exc:
        print(f"render: {exc}", file=sys.stderr)
        return 2
    print(json.dumps(counts))
    return 0


if __name__ == "__main__":
    sys.exit(main())
