"""Command-line interface.

Subcommands
-----------
* ``dist``     base distance between two cover points, with minimisers
* ``classify`` classify the cycles of a lifted cloud read from CSV
* ``ppm``      sample the principal persistence measure to JSONL + summary
* ``surfaces`` list the four surfaces and their class-vector shapes

CSV convention for ``classify``: one point per row, with a header naming
the per-surface coordinates -- ``x,y`` (torus, klein), ``x,y,z`` (rp2,
unit vectors), ``re,im`` (genus2, |z| < 1).

Exit codes: 0 ok, 2 usage or input error, 3 resource limit, 4 I/O error.
``--threads`` falls back to the AMBIENT_CYCLES_THREADS environment
variable, then 1.  Identical invocations produce byte-identical outputs.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys

from .errors import InputError, ResourceLimitError
from .genus2 import GenusTwoConfig
from .kinds import COORD_DIM, SurfaceKind, parse_kind
from .complexes import LiftedPointCloud
from .orbit import base_distance
from .persistence import principal_persistence_measure, write_jsonl
from .surfaces import CoverPoint, element_to_payload, surface_info
from .transition import classify_cloud

_HEADERS = {
    SurfaceKind.TORUS: ["x", "y"],
    SurfaceKind.KLEIN_BOTTLE: ["x", "y"],
    SurfaceKind.PROJECTIVE_PLANE: ["x", "y", "z"],
    SurfaceKind.GENUS_TWO: ["re", "im"],
}


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ambient-cycles",
        description="Classify point-cloud cycles on model surfaces by ambient "
        "homology class and sample class-decomposed persistence measures.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--surface", required=True, help="torus | klein | rp2 | genus2")
        p.add_argument("--tie-tolerance", type=float, default=1e-9)
        p.add_argument(
            "--max-word-length",
            type=int,
            default=12,
            help="genus-2 word-ball cap before a resource error",
        )

    p = sub.add_parser("dist", help="base distance between two cover points")
    common(p)
    p.add_argument("coords", type=float, nargs="+", help="coordinates of both points")

    p = sub.add_parser("classify", help="classify cycles of a CSV point cloud")
    common(p)
    p.add_argument("--epsilon", type=float, required=True)
    p.add_argument("input", help="CSV of lifted points (see --help header rules)")
    p.add_argument("-o", "--output", help="write the JSON report here (default stdout)")

    p = sub.add_parser("ppm", help="sample the principal persistence measure")
    common(p)
    p.add_argument("-n", "--samples", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("-o", "--output", required=True, help="output directory")
    p.add_argument(
        "--threads",
        type=int,
        default=int(os.environ.get("AMBIENT_CYCLES_THREADS", "1")),
    )

    sub.add_parser("surfaces", help="print the four surfaces and class shapes")
    return parser


def _parse_points(kind: SurfaceKind, coords: list[float], count: int) -> list[CoverPoint]:
    dim = COORD_DIM[kind]
    if len(coords) != dim * count:
        raise InputError(
            f"{kind.value} points take {dim} coordinates each; expected "
            f"{dim * count} numbers, got {len(coords)}"
        )
    return [
        CoverPoint(kind, tuple(coords[k * dim : (k + 1) * dim])) for k in range(count)
    ]


def _read_csv_cloud(kind: SurfaceKind, path: str) -> LiftedPointCloud:
    expected = _HEADERS[kind]
    try:
        with open(path, newline="") as fh:
            rows = list(csv.reader(fh))
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}")
    rows = [row for row in rows if row and any(cell.strip() for cell in row)]
    if not rows:
        raise InputError(f"{path} is empty")
    header = [cell.strip().lower() for cell in rows[0]]
    if header != expected:
        raise InputError(
            f"{kind.value} CSV must have header {','.join(expected)}, got "
            f"{','.join(header)}"
        )
    if len(rows) < 2:
        raise InputError(f"{path} has a header but no points")
    points = []
    for lineno, row in enumerate(rows[1:], start=2):
        try:
            values = tuple(float(cell) for cell in row)
        except ValueError:
            raise InputError(f"{path}:{lineno}: non-numeric coordinate")
        if len(values) != len(expected):
            raise InputError(f"{path}:{lineno}: expected {len(expected)} columns")
        points.append(CoverPoint(kind, values))
    return LiftedPointCloud(kind, tuple(points))


def _cmd_dist(args) -> int:
    kind = parse_kind(args.surface)
    p, q = _parse_points(kind, args.coords, 2)
    config = GenusTwoConfig(max_word_length=args.max_word_length)
    dist, mins = base_distance(kind, p, q, args.tie_tolerance, config)
    print(
        json.dumps(
            {
                "surface": kind.value,
                "distance": dist,
                "minimizers": [element_to_payload(g) for g in mins],
                "tied": len(mins) > 1,
            }
        )
    )
    return 0


def _cmd_classify(args) -> int:
    kind = parse_kind(args.surface)
    if args.epsilon <= 0:
        raise InputError("epsilon must be positive")
    cloud = _read_csv_cloud(kind, args.input)
    report = classify_cloud(cloud, args.epsilon, args.tie_tolerance)
    text = json.dumps(report.to_json(), indent=2)
    if args.output:
        _write_text(args.output, text + "\n")
    else:
        print(text)
    return 0


def _cmd_ppm(args) -> int:
    kind = parse_kind(args.surface)
    if args.samples < 1:
        raise InputError("-n must be >= 1")
    if args.threads < 1:
        raise InputError("--threads must be >= 1")
    config = GenusTwoConfig(max_word_length=args.max_word_length)

    def progress(done, total):
        print(f"ppm {kind.value}: {done}/{total} quadruples", file=sys.stderr)

    sample = principal_persistence_measure(
        kind,
        args.samples,
        args.seed,
        tie_tol=args.tie_tolerance,
        config=config,
        threads=args.threads,
        progress=progress,
    )
    try:
        os.makedirs(args.output, exist_ok=True)
        with open(os.path.join(args.output, "ppm.jsonl"), "w") as fh:
            write_jsonl(sample, fh)
        with open(os.path.join(args.output, "summary.json"), "w") as fh:
            json.dump(sample.summary(), fh, indent=2)
            fh.write("\n")
    except OSError as exc:
        print(f"ambient-cycles: I/O error: {exc}", file=sys.stderr)
        return 4
    return 0


def _write_text(path: str, text: str) -> None:
    try:
        with open(path, "w") as fh:
            fh.write(text)
    except OSError as exc:
        raise _IOFailure(str(exc))


class _IOFailure(Exception):
    pass


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "dist":
            return _cmd_dist(args)
        if args.command == "classify":
            return _cmd_classify(args)
        if args.command == "ppm":
            return _cmd_ppm(args)
        if args.command == "surfaces":
            print(json.dumps([surface_info(k) for k in SurfaceKind], indent=2))
            return 0
        parser.error(f"unknown command {args.command}")
    except (InputError, ValueError) as exc:
        print(f"ambient-cycles: {exc}", file=sys.stderr)
        return 2
    except ResourceLimitError as exc:
        print(f"ambient-cycles: {exc}", file=sys.stderr)
        return 3
    except _IOFailure as exc:
        print(f"ambient-cycles: I/O error: {exc}", file=sys.stderr)
        return 4
    return 0


if __name__ == "__main__":
    sys.exit(main())
