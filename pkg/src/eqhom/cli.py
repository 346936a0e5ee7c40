"""Command-line interface.

Subcommands: ``check``, ``reduce``, ``chains``, ``resolution``,
``homology``, ``inequality`` and ``monoid {chains,homology}``.

Exit codes: 0 ok, 1 input error, 2 completeness check failed, 3 budget
exceeded, 4 unsupported coefficient modulus.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .chains import Cell, enumerate_chains
from .coeff import RingoidElement
from .homology import (
    CoefficientError,
    boundary_matrices,
    homology_group,
    inequality_report,
)
from .monoid import (
    Srs,
    certify_srs,
    enumerate_word_chains,
    monoid_homology,
    render_word,
)
from .morse import morse_differential
from .parser import ParseError, parse_presentation, parse_srs, print_presentation
from .rewrite import (
    BudgetExceeded,
    CompletenessError,
    Trs,
    check_complete,
    degree,
    reduce_trs,
)
from .terms import Morphism, render_term

JSON_VERSION = 1


def emit_json(payload: dict) -> str:
    """Deterministic JSON with a leading version field."""
    body = {"version": JSON_VERSION}
    body.update(payload)
    return json.dumps(body, indent=2, ensure_ascii=False)


def morphism_json(m: Morphism) -> dict:
    return {
        "context": list(m.domain_sorts),
        "terms": [render_term(t) for t in m.terms],
    }


def cell_json(cell: Cell) -> dict:
    return {"sort": cell.sort, "entries": [morphism_json(m) for m in cell.entries]}


def _load_trs(path: str) -> Trs:
    return parse_presentation(Path(path).read_text(encoding="utf-8"))


def _load_srs(path: str) -> Srs:
    return parse_srs(Path(path).read_text(encoding="utf-8"))


def _resolve_modulus(trs: Trs, coeff: str) -> int:
    if coeff == "auto":
        return degree(trs)
    try:
        return int(coeff)
    except ValueError as exc:
        raise CoefficientError(f"bad --coeff value {coeff!r}") from exc


def _cmd_check(args) -> int:
    trs = _load_trs(args.file)
    if args.cp_budget or args.term_budget:
        trs = Trs(
            trs.signature,
            trs.rules,
            args.term_budget or trs.step_budget,
            args.cp_budget or trs.join_budget,
        )
    report = check_complete(trs, assume_terminating=args.assume_terminating)
    for line in report.lines():
        print(line)
    if report.certified:
        return 0
    return 3 if report.budget_exceeded else 2


def _cmd_reduce(args) -> int:
    trs = _load_trs(args.file)
    print(print_presentation(reduce_trs(trs)), end="")
    return 0


def _cmd_chains(args) -> int:
    trs = _load_trs(args.file)
    chains = enumerate_chains(trs, args.max_dim)
    if args.json:
        payload = {
            "chains": [
                {"dim": dim, "count": len(cells), "cells": [cell_json(c) for c in cells]}
                for dim, cells in sorted(chains.items())
            ]
        }
        print(emit_json(payload))
        return 0
    for dim, cells in sorted(chains.items()):
        print(f"dimension {dim}: {len(cells)} chain(s)")
        for c in cells:
            print(f"  {c!r}")
    return 0


def _render_coeff(coeff) -> str:
    if isinstance(coeff, RingoidElement):
        return repr(coeff)
    return f"{coeff:+d}"


def _cmd_resolution(args) -> int:
    trs = _load_trs(args.file)
    chains = enumerate_chains(trs, args.max_dim)
    for dim in range(args.max_dim + 1):
        cells = chains[dim]
        print(f"dimension {dim}: {len(cells)} generator(s)")
        for c in cells:
            print(f"  {c!r}")
            if dim >= 1:
                terms = morse_differential(c, trs, args.mode)
                if not terms:
                    print("    d = 0")
                for target, coeff in sorted(terms.items(), key=lambda kv: repr(kv[0])):
                    print(f"    d -> [{_render_coeff(coeff)}] {target!r}")
    return 0


def _cmd_homology(args) -> int:
    trs = _load_trs(args.file)
    d = _resolve_modulus(trs, args.coeff)
    chains = enumerate_chains(trs, args.max_dim + 1)
    counts = {k: len(v) for k, v in chains.items()}
    matrices = boundary_matrices(trs, chains, args.max_dim + 1, d)
    groups = {n: homology_group(matrices, n, d, counts) for n in range(args.max_dim + 1)}
    if args.json:
        payload = {
            "coefficients": d,
            "homology": [
                {
                    "dim": n,
                    "chains": counts[n],
                    "H": {"rank": groups[n].rank, "torsion": list(groups[n].torsion)},
                }
                for n in range(args.max_dim + 1)
            ],
            "matrices": [
                {"dim": n, "entries": matrices[n].entries}
                for n in range(1, args.max_dim + 2)
            ],
        }
        print(emit_json(payload))
        return 0
    print(f"coefficients: {'Z' if d == 0 else f'Z/{d}'}  (degree {degree(trs)})")
    for n in range(args.max_dim + 1):
        print(f"H_{n}: {groups[n].describe(d)}   ({counts[n]} chain(s))")
    if args.max_dim >= 2:
        rep = inequality_report(trs, d, 2, chains)
        print(rep.lines()[-1])
    return 0


def _cmd_inequality(args) -> int:
    trs = _load_trs(args.file)
    d = _resolve_modulus(trs, args.coeff)
    rep = inequality_report(trs, d, args.dim)
    for line in rep.lines():
        print(line)
    if not (rep.weak_holds and rep.strong_holds):
        print("internal error: a Morse inequality was violated", file=sys.stderr)
        return 1
    return 0


def _cmd_monoid(args) -> int:
    srs = _load_srs(args.file)
    certify_srs(srs)
    if args.what == "chains":
        chains = enumerate_word_chains(srs, args.max_dim)
        for dim, cells in sorted(chains.items()):
            print(f"dimension {dim}: {len(cells)} chain(s)")
            for c in cells:
                print("  (" + "; ".join(render_word(w) for w in c) + ")")
        return 0
    groups = monoid_homology(srs, args.max_dim)
    for n in range(args.max_dim + 1):
        print(f"H_{n}: {groups[n].describe(0)}")
    return 0


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="eqhom", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("check", help="certify reducedness, confluence, termination probe")
    c.add_argument("file")
    c.add_argument("--cp-budget", type=int, default=0, metavar="N")
    c.add_argument("--term-budget", type=int, default=0, metavar="N")
    c.add_argument("--assume-terminating", action="store_true")
    c.set_defaults(func=_cmd_check)

    r = sub.add_parser("reduce", help="print an equivalent reduced system")
    r.add_argument("file")
    r.set_defaults(func=_cmd_reduce)

    ch = sub.add_parser("chains", help="enumerate chains per dimension")
    ch.add_argument("file")
    ch.add_argument("--max-dim", type=int, required=True)
    ch.add_argument("--json", action="store_true")
    ch.set_defaults(func=_cmd_chains)

    rs = sub.add_parser("resolution", help="chains with their differentials")
    rs.add_argument("file")
    rs.add_argument("--max-dim", type=int, required=True)
    rs.add_argument("--mode", choices=("symbolic", "count"), default="symbolic")
    rs.set_defaults(func=_cmd_resolution)

    h = sub.add_parser("homology", help="homology groups of the collapsed complex")
    h.add_argument("file")
    h.add_argument("--max-dim", type=int, required=True)
    h.add_argument("--coeff", default="auto")
    h.add_argument("--json", action="store_true")
    h.set_defaults(func=_cmd_homology)

    iq = sub.add_parser("inequality", help="weak and strong inequalities at a dimension")
    iq.add_argument("file")
    iq.add_argument("--dim", type=int, required=True)
    iq.add_argument("--coeff", default="auto")
    iq.set_defaults(func=_cmd_inequality)

    mo = sub.add_parser("monoid", help="string-rewriting engine")
    mo.add_argument("what", choices=("chains", "homology"))
    mo.add_argument("file")
    mo.add_argument("--max-dim", type=int, required=True)
    mo.set_defaults(func=_cmd_monoid)
    return p


def cli_dispatch(argv: list[str]) -> int:
    try:
        args = _parser().parse_args(argv)
    except SystemExit as exc:
        # argparse exits 0 for --help, 2 for usage errors; remap the latter
        return 0 if exc.code == 0 else 1
    try:
        return args.func(args)
    except FileNotFoundError as exc:
        print(f"error: no such file: {exc.filename}", file=sys.stderr)
        return 1
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except CoefficientError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 4
    except CompletenessError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except BudgetExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


def main() -> None:
    sys.exit(cli_dispatch(sys.argv[1:]))


if __name__ == "__main__":
    main()
