"""Command line: ``transform``, ``fuse``, ``ablate`` and ``bench``.

Exit codes: 0 ok, 2 parse error, 3 invalid input, 4 math-domain error
(zero commonality, total conflict), 5 resource cap.
"""

from __future__ import annotations

import argparse
import logging
import sys
from functools import reduce
from typing import Sequence

from .ablation import AblationSession
from .bench import BenchConfig, run_bench, to_csv
from .engines import ENGINES, TRANSFORMS, EngineConfig, transform
from .errors import FocalPointsError, ParseError
from .fusion import (
    DEFAULT_ALPHA,
    cautious_combine,
    conjunctive_combine,
    dempster_combine,
    disjunctive_combine,
    normalize_conflict,
)
from .io import align, atomic_write, dumps, evidence_document, load_evidence, representation_document
from .lattice import DEFAULT_MEM_CAP_BYTES

log = logging.getLogger("focalpoints")

RULES = ("dempster", "conjunctive", "disjunctive", "cautious")


def _int_list(text: str) -> list[int]:
    try:
        return [int(part) for part in text.split(",") if part.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _emit(text: str, output: str | None) -> None:
    if output:
        atomic_write(output, text)
    else:
        sys.stdout.write(text)


def cmd_transform(args) -> int:
    m = load_evidence(args.input)
    result = transform(m, args.to, args.engine, EngineConfig(args.mem_cap_bytes))
    if args.show_focal_points:
        listing = sys.stdout if args.output else sys.stderr
        fp = result.fp
        print(f"# {len(fp)} focal points ({fp.direction.value} order)", file=listing)
        for point, gens in fp.generator_provenance().items():
            joined = " v ".join(fp.frame.format(g) for g in gens)
            mark = " (generator)" if point in fp.generators else ""
            print(f"{fp.frame.format(point)} = {joined}{mark}", file=listing)
    _emit(dumps(representation_document(result)), args.output)
    return 0


def cmd_fuse(args) -> int:
    masses = [load_evidence(path) for path in args.inputs]
    frame = masses[0].frame
    masses = [align(m, frame) for m in masses]
    if args.rule == "dempster":
        rule = dempster_combine
    elif args.rule == "conjunctive":
        rule = conjunctive_combine
    elif args.rule == "disjunctive":
        rule = disjunctive_combine
    else:
        rule = lambda a, b: cautious_combine(a, b, alpha=args.alpha)  # noqa: E731
    fused = reduce(rule, masses)
    if args.normalize and len(masses) > 1 and args.rule != "dempster":
        fused = normalize_conflict(fused)
    _emit(dumps(evidence_document(fused)), args.output)
    return 0


def _parse_point(text: str, frame) -> int:
    text = text.strip()
    if text in ("", "{}"):
        return 0
    return frame.mask(label.strip() for label in text.strip("{}").split(","))


def cmd_ablate(args) -> int:
    m = load_evidence(args.input)
    x = _parse_point(args.point, m.frame)
    session = AblationSession(m)
    old = session.w(x)
    m_new, q_new = session.ablate(x, args.new_weight)
    frame = m.frame
    report = {
        "frame": list(frame.labels),
        "point": list(frame.labels_of(x)),
        "old_weight": old,
        "new_weight": args.new_weight,
        "is_valid_mass": m_new.is_valid_mass,
        "commonality": [{"set": list(frame.labels_of(p)), "value": v} for p, v in q_new.items()],
        "mass": [{"set": list(frame.labels_of(p)), "mass": v} for p, v in m_new.inner.items()],
    }
    _emit(dumps(report), args.output)
    return 0


def cmd_bench(args) -> int:
    config = BenchConfig(
        sizes=args.sizes,
        supports=args.supports,
        seeds=args.seeds,
        seed=args.seed,
        operations=tuple(args.operations.split(",")),
        mem_cap_bytes=args.mem_cap_bytes,
    )
    _emit(to_csv(run_bench(config)), args.output)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="focalpoints", description="Belief-function transforms on focal points.")
    parser.add_argument("-v", "--verbose", action="store_true", help="log informational messages")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("transform", help="convert a mass file to another representation")
    p.add_argument("input")
    p.add_argument("--to", required=True, choices=TRANSFORMS)
    p.add_argument("--engine", default="focal", choices=ENGINES)
    p.add_argument("--show-focal-points", action="store_true", help="list focal points with their generators")
    p.add_argument("--mem-cap-bytes", type=int, default=DEFAULT_MEM_CAP_BYTES)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_transform)

    p = sub.add_parser("fuse", help="combine mass files, folding left to right")
    p.add_argument("inputs", nargs="+")
    p.add_argument("--rule", default="dempster", choices=RULES)
    p.add_argument("--alpha", type=float, default=DEFAULT_ALPHA, help="discount factor used when the cautious rule needs one")
    p.add_argument("--normalize", action="store_true", help="remove conflict mass after fusing")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_fuse)

    p = sub.add_parser("ablate", help="change one conjunctive weight and report the new mass")
    p.add_argument("input")
    p.add_argument("--point", required=True, help="comma-separated labels; empty for the empty set")
    p.add_argument("--new-weight", type=float, required=True)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_ablate)

    p = sub.add_parser("bench", help="time all engines on seeded random masses (CSV)")
    p.add_argument("--sizes", type=_int_list, default=[8, 12])
    p.add_argument("--supports", type=_int_list, default=[8, 16])
    p.add_argument("--seeds", type=int, default=3)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--operations", default="q,b,w,v,mass-from-q,dempster")
    p.add_argument("--mem-cap-bytes", type=int, default=DEFAULT_MEM_CAP_BYTES)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s: %(message)s")
    try:
        return args.func(args)
    except FocalPointsError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code
    except ValueError as exc:
        # argument values rejected below the CLI layer
        print(f"error: {exc}", file=sys.stderr)
        return ParseError.exit_code


if __name__ == "__main__":
    sys.exit(main())
