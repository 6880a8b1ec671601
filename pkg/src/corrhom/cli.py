"""Command line: homology | analyze | demo henon | demo winding."""
from __future__ import annotations

import argparse
import os
import sys
import tempfile
from datetime import datetime, timezone
from pathlib import Path

from . import __version__
from .covers import acyclic_enlargement, is_acyclic_valued, sliding_box_cover
from .documents import (
    ParseError,
    analysis_section,
    dumps,
    homology_section,
    load_map,
    load_pair,
    map_to_document,
    text_report,
)
from .experiments import HenonConfig, WindingConfig, config_dict, occupancy_pgm, run_henon, run_winding
from .homology import homology
from .induced import (
    NotEndomorphism,
    analyze,
    is_enlargement,
    nilpotency_check,
    selector_conclusion,
    verify_homological_extension,
)


def _provenance(args, inputs: dict, seed=None) -> dict:
    prov = {"tool": "corrhom", "version": __version__, "command": args.command, "inputs": inputs}
    if seed is not None:
        prov["seed"] = seed
    if not args.no_timestamp:
        prov["timestamp"] = datetime.now(timezone.utc).isoformat(timespec="seconds")
    return prov


def _write_atomic(path: Path, data: bytes) -> None:
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=path.parent or ".", prefix=f".{path.name}.")
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(data)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _emit(args, doc: dict) -> None:
    text = dumps(doc) if args.format == "json" else text_report(doc)
    if args.output:
        _write_atomic(Path(args.output), text.encode())
    else:
        sys.stdout.write(text)


def cmd_homology(args) -> dict:
    grid, pair = load_pair(args.pair_file)
    h = homology(pair)
    return {
        "provenance": _provenance(args, {"pair_file": str(args.pair_file)}),
        "homology": homology_section(h, generators=True),
        "betti": h.betti_numbers(),
        "text": h.describe(),
    }


def cmd_analyze(args) -> dict:
    m = load_map(args.map_file)
    report = analyze(m)
    doc = {"provenance": _provenance(args, {"map_file": str(args.map_file)})}
    doc.update(analysis_section(report))
    doc["verdict"] = selector_conclusion(m, report=report).kind
    if args.nilpotency:
        try:
            doc["nilpotency"] = {"degree": 1, "nilpotent": nilpotency_check(report, 1)}
        except (NotEndomorphism, IndexError) as exc:
            doc["nilpotency"] = {"degree": 1, "nilpotent": None, "reason": str(exc)}
    if args.check_extension:
        other = load_map(args.check_extension)
        res = verify_homological_extension(m, other, report)
        doc["extension"] = {"other": str(args.check_extension), "holds": res.holds,
                            "failures": [list(f) for f in res.failures]}
    if args.enlarge_window:
        cover = sliding_box_cover(m.target_grid, args.enlarge_window, support=m.codomain)
        g = acyclic_enlargement(m, cover)
        grep = analyze(g, report.domain_homology)
        iso = all(grep.p_star.is_surjective(k) for k in range(len(grep.degrees))) and \
            all(d.ker_p.is_trivial for d in grep.degrees)
        res = verify_homological_extension(m, g, report, grep)
        doc["enlargement"] = {
            "window": args.enlarge_window,
            "map": map_to_document(g),
            "acyclic_valued": is_acyclic_valued(g).acyclic,
            "is_enlargement": is_enlargement(m, g),
            "respects_pairs": g.respects_pairs,
            "p_star_isomorphism": iso,
            "complete": grep.complete,
            "consistent": grep.consistent,
            "homological_extension": res.holds,
            "extension_failures": [list(f) for f in res.failures],
        }
    return doc


def cmd_demo_henon(args) -> dict:
    cfg = HenonConfig(a=args.a, b=args.b, n=args.n, skip=args.skip, divisions=args.divisions,
                      bounds=tuple(args.bounds))
    res = run_henon(cfg)
    if args.image:
        _write_atomic(Path(args.image), occupancy_pgm(res.grid, res.map.codomain))
    doc = {"provenance": _provenance(args, {"config": config_dict(cfg)})}
    doc["summary"] = res.summary()
    doc.update(analysis_section(res.report))
    return doc


def cmd_demo_winding(args) -> dict:
    cfg = WindingConfig(samples=args.samples, noise=args.noise, seed=args.seed, divisions=args.divisions,
                        tol=args.tol, window=args.window)
    res = run_winding(cfg)
    doc = {"provenance": _provenance(args, {"config": config_dict(cfg)}, seed=cfg.seed)}
    doc["summary"] = res.summary()
    doc.update(analysis_section(res.report))
    return doc


def _globals() -> argparse.ArgumentParser:
    # global flags are accepted before or after the subcommand
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--format", choices=("json", "text"), default=argparse.SUPPRESS)
    p.add_argument("--output", default=argparse.SUPPRESS, help="write the document here (atomically)")
    p.add_argument("--no-timestamp", action="store_true", default=argparse.SUPPRESS)
    return p


def build_parser() -> argparse.ArgumentParser:
    g = _globals()
    parser = argparse.ArgumentParser(prog="corrhom", parents=[g],
                                     description="Homology of combinatorial multivalued maps.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("homology", parents=[g], help="homology of a cubical pair document")
    p.add_argument("pair_file")
    p.set_defaults(func=cmd_homology)

    p = sub.add_parser("analyze", parents=[g], help="full analysis of a map document")
    p.add_argument("map_file")
    p.add_argument("--check-extension", metavar="OTHER_MAP")
    p.add_argument("--enlarge-window", type=int, metavar="K")
    p.add_argument("--nilpotency", action="store_true")
    p.set_defaults(func=cmd_analyze)

    demo = sub.add_parser("demo", help="reproduce the example computations")
    dsub = demo.add_subparsers(dest="demo", required=True)
    p = dsub.add_parser("henon", parents=[g])
    p.add_argument("--a", type=float, default=1.4)
    p.add_argument("--b", type=float, default=0.3)
    p.add_argument("--n", type=int, default=100000)
    p.add_argument("--skip", type=int, default=100)
    p.add_argument("--divisions", type=int, default=256)
    p.add_argument("--bounds", type=float, nargs=2, default=(-2.0, 2.0))
    p.add_argument("--image", metavar="PGM")
    p.set_defaults(func=cmd_demo_henon, command="demo henon")

    p = dsub.add_parser("winding", parents=[g])
    p.add_argument("--samples", type=int, default=3000)
    p.add_argument("--noise", type=float, default=0.1)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--divisions", type=int, default=256)
    p.add_argument("--tol", type=float, default=0.01)
    p.add_argument("--window", type=int, default=32, help="box size of the enlargement cover")
    p.set_defaults(func=cmd_demo_winding, command="demo winding")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    for name, default in (("format", "json"), ("output", None), ("no_timestamp", False)):
        if not hasattr(args, name):
            setattr(args, name, default)
    try:
        doc = args.func(args)
        _emit(args, doc)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, ArithmeticError, OSError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
