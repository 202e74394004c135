"""Command-line front end.

Trees are given inline (``-S "((e))"``) or read from a file with
``-S @path``; a file may hold the tree grammar or the JSON tree format.

Exit codes: 0 success, 1 internal invariant failure, 2 parse error,
3 resource cap exceeded, 4 ``verify`` rejected its input.
"""

import argparse
import json
import os
import shlex
import sys

from . import geometry, io, lattice
from .counting import ShuffleCounter, count_bounds, shuffle_polynomial
from .errors import InvariantError, ResourceLimitError, TreeSyntaxError
from .shuffles import (DEFAULT_MAX_SHUFFLES, enumerate_shuffles, shuffles_with_stumps,
                       verify_all)
from .tree import Tree, parse_tree, prune_stumps

CACHE_ENV = "TREESHUFFLE_CACHE"

EXIT_OK, EXIT_INVARIANT, EXIT_PARSE, EXIT_RESOURCE, EXIT_REJECTED = 0, 1, 2, 3, 4


class InputError(Exception):
    """Unreadable input that is not a tree-grammar error (bad JSON, missing file)."""


def read_tree(text):
    if text.startswith("@"):
        try:
            with open(text[1:], encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            raise InputError(f"cannot read {text[1:]}: {exc.strerror}") from exc
        if text.lstrip().startswith("{"):
            return _load_json(Tree.from_json, text)
    return parse_tree(text)


def _load_json(loader, text):
    try:
        return loader(json.loads(text))
    except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
        raise InputError(f"bad JSON input: {exc}") from exc


def read_shuffle(path):
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from exc
    return _load_json(io.shuffle_from_json, text)


# -- subcommands --------------------------------------------------------------------

def cmd_count(args, out):
    counter = ShuffleCounter()
    cache = os.environ.get(CACHE_ENV)
    if cache and os.path.exists(cache):
        counter.load(cache)
    out.write(f"{counter.count(args.S, args.T)}\n")
    if cache:
        counter.dump(cache)


def cmd_enumerate(args, out):
    stumped = args.S.has_stumps or args.T.has_stumps
    if stumped:
        decorated = shuffles_with_stumps(args.S, args.T, max_shuffles=args.max_shuffles)
        items = [(d.shuffle, d.stumps) for d in decorated]
    else:
        shuffles = enumerate_shuffles(args.S, args.T, max_shuffles=args.max_shuffles,
                                      threads=args.threads)
        items = [(A, {}) for A in shuffles]
    if args.verify:
        for i, (A, _) in enumerate(items):
            for verdict in verify_all(A.S, A.T, A):
                if not verdict:
                    raise InvariantError(f"shuffle {i} fails a check: {verdict.reason}")
    if args.summary:
        out.write(f"{len(items)}\n")
        return
    for i, (A, stumps) in enumerate(items):
        if args.format == "json":
            data = io.shuffle_to_json(A)
            if stumped:
                data["stumps"] = {f"{s},{t}": m for (s, t), m in sorted(stumps.items())}
            out.write(json.dumps(data, sort_keys=True, separators=(",", ":")) + "\n")
        elif args.format == "dot":
            out.write(io.shuffle_to_dot(A, stumps, name=f"shuffle{i}"))
        else:
            out.write(f"{i}\t{A.picture(stumps)}\n")


def cmd_poly(args, out):
    S = args.S
    if S.has_stumps:
        S, _ = prune_stumps(S)
    out.write(f"{shuffle_polynomial(S)}\n")


def cmd_bounds(args, out):
    b = count_bounds(args.S, args.T)
    out.write(f"lower {b.lower}\nupper_sharp {b.upper_sharp}\nupper_coarse {b.upper_coarse}\n")


def cmd_lattice(args, out):
    h = lattice.hasse(args.S, args.T, max_shuffles=args.max_shuffles)
    if args.hasse:
        out.write(h.to_dot())
        return
    for i, A in enumerate(h.nodes):
        gens = " ".join(f"({v},{w})" for v, w in sorted(lattice.to_open_set(A).minimal))
        out.write(f"{i}\t{A.picture()}\t{{{gens}}}\n")
    out.write(f"{len(h.nodes)} shuffles, {len(h.edges)} covers\n")


def cmd_compose(args, out):
    f, g = read_shuffle(args.f), read_shuffle(args.g)
    out.write(io.dumps_shuffle(lattice.compose(f, g)) + "\n")


def cmd_aut(args, out):
    group = lattice.poset_automorphisms(args.S, args.T)
    out.write(f"order {group.order}\n")
    for cyc in group.generators:
        text = " ".join("(" + " ".join(f"{v},{w}" for v, w in c) + ")" for c in cyc)
        out.write(f"generator {text}\n")
    out.write(f"{lattice.check_aut_theorem(args.S, args.T)}\n")


def cmd_intersect(args, out):
    if args.chains:
        for c in geometry.maximal_chains(args.S, args.T):
            out.write(json.dumps([list(p) for p in c.pairs], separators=(",", ":")) + "\n")
        return
    diagram = geometry.intersection_diagram(args.S, args.T, max_shuffles=args.max_shuffles)
    if args.dot:
        out.write(diagram.to_dot())
        return
    for k, I in enumerate(diagram.index_sets):
        out.write(f"{k}\t{{{','.join(str(i) for i in sorted(I))}}}\t{len(diagram.nodes[k])} edges\n")
    out.write(f"{len(diagram.nodes)} nodes, {len(diagram.arrows)} arrows\n")


def cmd_verify(args, out):
    A = read_shuffle(args.file)
    names = ("definition", "branches", "maximality")
    ok = True
    for name, verdict in zip(names, verify_all(A.S, A.T, A)):
        out.write(f"{name}: {'ok' if verdict else 'FAIL ' + verdict.reason}\n")
        ok = ok and bool(verdict)
    return EXIT_OK if ok else EXIT_REJECTED


def cmd_batch(args, out):
    """Run one command per line of a file; blank lines and ``#`` comments are skipped."""
    try:
        with open(args.file, encoding="utf-8") as fh:
            lines = fh.read().splitlines()
    except OSError as exc:
        raise InputError(f"cannot read {args.file}: {exc.strerror}") from exc
    worst = EXIT_OK
    for line in lines:
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        argv = shlex.split(line)
        if argv[0] == "batch":
            raise InputError("nested batch files are not supported")
        worst = max(worst, run(argv, out))
    return worst


# -- parser ------------------------------------------------------------------------

def build_parser():
    parser = argparse.ArgumentParser(prog="treeshuffle", description="Shuffles of rooted trees.")
    sub = parser.add_subparsers(dest="command", required=True)

    def trees(p, both=True):
        p.add_argument("-S", required=True, help='tree expression, e.g. "((e)(e))", or @file')
        if both:
            p.add_argument("-T", required=True, help="second tree")

    def cap(p):
        p.add_argument("--max-shuffles", type=int, default=DEFAULT_MAX_SHUFFLES,
                       help="refuse to enumerate more shuffles than this (default 10^6)")

    p = sub.add_parser("count", help="number of shuffles")
    trees(p)
    p.set_defaults(func=cmd_count)

    p = sub.add_parser("enumerate", help="list all shuffles in canonical order")
    trees(p)
    cap(p)
    p.add_argument("--format", choices=("text", "json", "dot"), default="text")
    p.add_argument("--verify", action="store_true", help="check each shuffle three ways first")
    p.add_argument("--summary", action="store_true", help="print only the number of shuffles")
    p.add_argument("--threads", type=int, default=1)
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("poly", help="coefficients of P_S, ascending")
    trees(p, both=False)
    p.set_defaults(func=cmd_poly)

    p = sub.add_parser("bounds", help="lower and upper bounds on the count")
    trees(p)
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("lattice", help="open sets and covers of the shuffle lattice")
    trees(p)
    cap(p)
    p.add_argument("--hasse", action="store_true", help="emit the Hasse diagram as DOT")
    p.set_defaults(func=cmd_lattice)

    p = sub.add_parser("compose", help="compose two shuffles given as JSON files")
    p.add_argument("f", help="shuffle in Sh(S,T)")
    p.add_argument("g", help="shuffle in Sh(R,S)")
    p.set_defaults(func=cmd_compose)

    p = sub.add_parser("aut", help="automorphisms of the shuffle lattice")
    trees(p)
    p.set_defaults(func=cmd_aut)

    p = sub.add_parser("intersect", help="intersection diagram of all shuffles")
    trees(p)
    cap(p)
    group = p.add_mutually_exclusive_group()
    group.add_argument("--dot", action="store_true")
    group.add_argument("--chains", action="store_true", help="list maximal chains as JSON lines")
    p.set_defaults(func=cmd_intersect)

    p = sub.add_parser("verify", help="check a shuffle JSON file")
    p.add_argument("file")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("batch", help="run commands listed in a file")
    p.add_argument("file")
    p.set_defaults(func=cmd_batch)
    return parser


def run(argv, out=None, err=None):
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_PARSE if exc.code else EXIT_OK
    try:
        for name in ("S", "T"):
            if hasattr(args, name):
                setattr(args, name, read_tree(getattr(args, name)))
        code = args.func(args, out)
    except (TreeSyntaxError, InputError) as exc:
        err.write(f"error: {exc}\n")
        return EXIT_PARSE
    except ResourceLimitError as exc:
        err.write(f"error: {exc}\n")
        return EXIT_RESOURCE
    except InvariantError as exc:
        err.write(f"internal error: {exc}\n")
        return EXIT_INVARIANT
    except ValueError as exc:
        err.write(f"error: {exc}\n")
        return EXIT_PARSE
    return EXIT_OK if code is None else code


def main():
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
