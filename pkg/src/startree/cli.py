"""Command-line front end.

Exit codes: 0 success, 1 a check failed, 2 unparseable input,
3 horizon failure, 4 inconclusive / margin-unstable result.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from collections import Counter

from .addr import AddrParseError, RayV, addr_key, addr_level, parse_addr, render, wrap
from .construction import InvalidAddress, LevelSpec, ball_at, build_tower
from .iso import WordSyntaxError, parse_word
from .orbits import MarginInstability, Region, default_margin, orbit
from .tree_kernel import FRONTIER, LEAF, export
from .verifier import FAIL, INCONCLUSIVE, Config, reports_to_json, run_suite

log = logging.getLogger("startree")

EXIT_OK, EXIT_FAIL, EXIT_PARSE, EXIT_HORIZON, EXIT_INCONCLUSIVE = 0, 1, 2, 3, 4

_CONFIG_KEYS = {"level", "max_level", "radius", "margin", "stability_k", "format", "center",
                "word", "addr", "gens"}


class UsageError(Exception):
    pass


def _parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--level", type=int)
    common.add_argument("--max-level", type=int, dest="max_level")
    common.add_argument("--radius", type=int)
    common.add_argument("--margin", type=int)
    common.add_argument("--stability-k", type=int, dest="stability_k")
    common.add_argument("--center")
    common.add_argument("--format", choices=("dot", "json", "edgelist"))
    common.add_argument("--config", metavar="PATH")
    common.add_argument("--out", metavar="PATH")

    p = argparse.ArgumentParser(prog="startree", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)
    sub.add_parser("truncate", parents=[common], help="emit a ball of T_n")
    sub.add_parser("verify", parents=[common], help="run the property checks")
    m = sub.add_parser("map", parents=[common], help="apply a generator word to an address")
    m.add_argument("--word")
    m.add_argument("--addr")
    o = sub.add_parser("orbit", parents=[common], help="orbit of an address within a ball")
    o.add_argument("--gens")
    o.add_argument("--addr")
    sub.add_parser("stats", parents=[common], help="summary counts for a ball")
    return p


def _merge_config(args):
    opts = {}
    if args.config:
        try:
            with open(args.config, encoding="utf-8") as fh:
                doc = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise UsageError(f"cannot read config {args.config}: {exc}") from exc
        unknown = set(doc) - _CONFIG_KEYS
        if unknown:
            raise UsageError(f"unknown config keys: {', '.join(sorted(unknown))}")
        opts.update(doc)
    for k, v in vars(args).items():
        if v is not None and k not in ("config", "command"):
            opts[k] = v
    return opts


def _emit(data: bytes, out):
    if out:
        with open(out, "wb") as fh:
            fh.write(data)
    else:
        sys.stdout.buffer.write(data)
        sys.stdout.flush()


def _level(opts, default=0):
    n = opts.get("level", opts.get("max_level", default))
    if n < 0:
        raise UsageError("level must be >= 0")
    return n


def _addr_at(text, level, what="address"):
    try:
        a = parse_addr(text)
    except AddrParseError as exc:
        raise UsageError(f"bad {what}: {exc}") from exc
    m = addr_level(a)
    if m > level:
        raise UsageError(f"{what} {text!r} needs level {m}, above {level}")
    return wrap(a, level - m)


def _spec(level):
    return build_tower(level)[level]


def _center(opts, level):
    text = opts.get("center")
    return wrap(RayV(0), level) if text is None else _addr_at(text, level, "center")


def cmd_truncate(opts):
    level = _level(opts)
    spec = _spec(level)
    radius = opts.get("radius", 2)
    if radius < 0:
        raise UsageError("radius must be >= 0")
    center = _center(opts, level)
    spec.check(center)
    tree = ball_at(spec, center, radius)
    _emit(export(tree, opts.get("format", "edgelist")), opts.get("out"))
    return EXIT_OK


def cmd_verify(opts):
    cfg = Config(
        max_level=opts.get("max_level", opts.get("level", 1)),
        radius=opts.get("radius", 10),
        margin=opts.get("margin"),
        stability_k=opts.get("stability_k", 3),
        center=opts.get("center"),
    )
    if cfg.center is not None:
        parse_addr(cfg.center)
    reports = run_suite(cfg)
    _emit(reports_to_json(reports).encode("utf-8"), opts.get("out"))
    verdicts = {r.verdict for r in reports}
    for r in reports:
        if r.verdict != "pass":
            log.warning("%s level %d radius %d: %s", r.check, r.level, r.radius, r.verdict)
    if FAIL in verdicts:
        return EXIT_FAIL
    if INCONCLUSIVE in verdicts:
        return EXIT_INCONCLUSIVE
    return EXIT_OK


def cmd_map(opts):
    level = _level(opts)
    if opts.get("word") is None or opts.get("addr") is None:
        raise UsageError("map needs --word and --addr")
    try:
        word = parse_word(opts["word"])
    except WordSyntaxError as exc:
        raise UsageError(str(exc)) from exc
    for j, _ in word:
        if j > level:
            raise UsageError(f"generator g{j} does not exist at level {level}")
    spec = _spec(level)
    a = _addr_at(opts["addr"], level)
    spec.check(a)
    img = spec.apply_word(word, a)
    _emit(((render(img) if img is not None else "undefined") + "\n").encode(), opts.get("out"))
    return EXIT_OK


def _parse_gens(text, level):
    if text is None or not text.strip():
        return []
    try:
        gens = sorted({int(tok) for tok in text.replace(",", " ").split()})
    except ValueError as exc:
        raise UsageError(f"bad generator list {text!r}") from exc
    if any(not 0 <= j <= level for j in gens):
        raise UsageError(f"generators must lie in 0..{level}")
    return gens


def cmd_orbit(opts):
    level = _level(opts)
    if opts.get("addr") is None:
        raise UsageError("orbit needs --addr")
    spec = _spec(level)
    gens = _parse_gens(opts.get("gens"), level)
    a = _addr_at(opts["addr"], level)
    spec.check(a)
    region = Region(_center(opts, level), opts.get("radius", 6),
                    opts.get("margin", default_margin(level)))
    code = EXIT_OK
    try:
        result = orbit(spec, gens, [a], region, audit=True)
    except MarginInstability as exc:
        log.warning("%s", exc)
        result = orbit(spec, gens, [a], region)
        code = EXIT_INCONCLUSIVE
    body = "".join(render(b) + "\n" for b in sorted(result, key=addr_key))
    _emit(body.encode(), opts.get("out"))
    return code


def cmd_stats(opts):
    level = _level(opts)
    spec = _spec(level)
    radius = opts.get("radius", 10)
    center = _center(opts, level)
    spec.check(center)
    tree = ball_at(spec, center, radius)
    addrs = [parse_addr(tree.label(v)) for v in tree]
    kinds = Counter(tree.kind(v) for v in tree)
    doc = {
        "level": level,
        "center": render(center),
        "radius": radius,
        "vertices": len(tree),
        "edges": max(len(tree) - 1, 0),
        "degree_histogram": {str(d): c for d, c in sorted(Counter(spec.degree(a) for a in addrs).items())},
        "leaves": kinds[LEAF],
        "frontier": kinds[FRONTIER],
        "hosts": sum(spec.is_host(a) for a in addrs),
        "witness_orbit": sum(spec.in_witness_orbit(a) for a in addrs),
        "witness": render(spec.witness),
        "x_leaves": [render(x) for x in spec.x_leaves()],
    }
    _emit((json.dumps(doc, sort_keys=True) + "\n").encode(), opts.get("out"))
    return EXIT_OK


COMMANDS = {
    "truncate": cmd_truncate,
    "verify": cmd_verify,
    "map": cmd_map,
    "orbit": cmd_orbit,
    "stats": cmd_stats,
}


def main(argv=None) -> int:
    logging.basicConfig(level=logging.WARNING, stream=sys.stderr, format="startree: %(message)s")
    args = _parser().parse_args(argv)
    try:
        opts = _merge_config(args)
        return COMMANDS[args.command](opts)
    except (UsageError, AddrParseError, InvalidAddress, ValueError) as exc:
        print(f"startree {args.command}: {exc}", file=sys.stderr)
        return EXIT_PARSE


if __name__ == "__main__":
    sys.exit(main())
