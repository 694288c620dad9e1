"""``disasm-advisor`` command line.

Exit codes: 0 success, 2 usage or validation failure, 3 I/O failure.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from . import report
from .assembly import AssemblyBundle, BundleParseError, BundleValidationError, load_bundle
from .influence import influence_scores
from .pipeline import DEFAULT_R_MAX, random_baseline, recommend, sensitivity_sweep
from .report import MeshError

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_IO = 3

log = logging.getLogger("disasm_advisor")


def _positive(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {value}")
    return value


def _non_negative(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if value < 0:
        raise argparse.ArgumentTypeError(f"must be >= 0, got {value}")
    return value


def _range(text: str) -> list[int]:
    try:
        lo, hi = (int(x) for x in text.split(":"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected A:B, got {text!r}") from None
    if lo < 1 or hi < lo:
        raise argparse.ArgumentTypeError(f"need 1 <= A <= B, got {text!r}")
    return list(range(lo, hi + 1))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="disasm-advisor",
        description="Influence scores and fastener-reduction recommendations for robotic disassembly.",
    )
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name: str, help_text: str) -> argparse.ArgumentParser:
        p = sub.add_parser(name, help=help_text)
        p.add_argument("bundle", type=Path, help="bundle JSON document")
        if name != "validate":
            p.add_argument("--out", type=Path, default=Path("."), help="output directory (default: .)")
        return p

    add("validate", "check a bundle document")
    add("influence", "write per-component influence scores")
    p = add("recommend", "rank fastener-reduction candidates")
    p.add_argument("--rmax", type=_positive, default=DEFAULT_R_MAX)
    p = add("heatmap", "export normalized influence scores")
    p.add_argument("--kind", choices=report.SCORE_KINDS, default="combined")
    p.add_argument("--fasteners-only", action="store_true", help="keep only fasteners of multi-fastened groups")
    p.add_argument("--paint", action="store_true", help="write colored PLY copies of the bundle meshes")
    p = add("baseline", "random fastener-selection baseline")
    p.add_argument("--r", type=_positive, default=DEFAULT_R_MAX)
    p.add_argument("--trials", type=_positive, default=20)
    p.add_argument("--seed", type=_non_negative, default=42)
    p = add("sensitivity", "sweep the removal limit")
    p.add_argument("--rmax-range", type=_range, default=[1, 2, 3, 4])
    return parser


def _read_bundle(path: Path) -> AssemblyBundle:
    with open(path, "rb") as fh:
        return load_bundle(fh)


def _write(out: Path, name: str, text: str) -> Path:
    out.mkdir(parents=True, exist_ok=True)
    target = out / name
    target.write_text(text, encoding="utf-8")
    return target


def _run(args: argparse.Namespace) -> int:
    bundle = _read_bundle(args.bundle)
    if args.command == "validate":
        print(f"{args.bundle}: ok ({bundle.n} parts)")
        return EXIT_OK

    out: Path = args.out
    written: list[Path] = []
    if args.command == "influence":
        written.append(_write(out, "influence.csv", report.influence_csv(bundle, influence_scores(bundle))))

    elif args.command == "recommend":
        ranked = recommend(bundle, args.rmax)
        written.append(_write(out, "candidates.csv", report.candidates_csv(ranked)))
        written.append(_write(out, "candidates.md", report.candidates_markdown(ranked, bundle, args.rmax)))
        written.append(_write(out, "candidates.json", report.candidates_json(ranked)))

    elif args.command == "heatmap":
        heat = report.heatmap_scores(bundle, influence_scores(bundle), args.kind, args.fasteners_only)
        written.append(_write(out, f"heatmap_{args.kind}.json", heat.to_json()))
        if args.paint:
            if not bundle.meshes:
                log.warning("--paint given but the bundle lists no meshes")
            written += report.paint_meshes(bundle, heat, args.bundle.parent, out / "painted")

    elif args.command == "baseline":
        stats = random_baseline(bundle, args.r, args.trials, args.seed)
        ranked = recommend(bundle, args.r)
        written.append(_write(out, "baseline.csv", report.baseline_csv(stats, ranked[0] if ranked else None)))

    elif args.command == "sensitivity":
        curve = sensitivity_sweep(bundle, args.rmax_range)
        written.append(_write(out, "sensitivity.csv", report.sensitivity_csv(curve)))

    for path in written:
        print(path)
    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return _run(args)
    except BundleValidationError as exc:
        for line in exc.violations:
            print(f"{args.bundle}: {line}", file=sys.stderr)
        return EXIT_USAGE
    except BundleParseError as exc:
        print(f"{args.bundle}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (OSError, MeshError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
