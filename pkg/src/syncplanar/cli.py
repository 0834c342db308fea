"""Command-line entry point.

Exit codes: 0 success, 2 validation error, 3 cap or budget exceeded,
4 property violation found by ``scan`` or ``verify``.
"""

from __future__ import annotations

import argparse
import math
import sys
from pathlib import Path

from . import __version__
from .automata import gen_cerny, gen_random, parse, render, render_word
from .errors import BudgetExceeded, SubsetNotSynchronizable, SyncPlanarError
from .gadgets import CLOCK_VARIANTS, build_clock, build_instance, planarize, render_map
from .harness import CAMPAIGN_KINDS, render_scan, scan_extremal, verify_campaign
from .planar import compute_drawing, is_planar, parse_drawing, render_drawing
from .reductions import LCS_VARIANTS, binarize, lcs_to_synch, ou_construct, ou_planarize, parse_dimacs, parse_lcs
from .sync import (
    exact_reset_word,
    greedy_reset_word,
    hardest_subset,
    is_synchronizing,
    kmerge_approx,
    subset_min_word,
    subset_sync_within,
)

EXIT_OK, EXIT_VALIDATION, EXIT_CAP, EXIT_VIOLATION = 0, 2, 3, 4


def _read(path) -> str:
    return Path(path).read_text(encoding="utf-8")


def _emit(text: str, out=None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)


def _load(path):
    return parse(_read(path))


def _states(doc, spec: str):
    """``--states`` takes ``i,j,...`` or the name of a subset in the file."""
    if spec in doc.subsets:
        return doc.subsets[spec]
    try:
        states = frozenset(int(tok) for tok in spec.split(",") if tok.strip())
    except ValueError:
        raise SyncPlanarError(f"--states expects i,j,... or a subset name, got {spec!r}") from None
    bad = [q for q in states if not 0 <= q < doc.dfa.n]
    if bad or not states:
        raise SyncPlanarError(f"states {sorted(bad) or spec!r} out of range")
    return states


def _word_line(m, word) -> str:
    return render_word(m, word) or "-"


# --- commands ------------------------------------------------------------------

def cmd_info(args):
    doc = _load(args.file)
    m = doc.dfa
    lines = [
        f"states {m.n}",
        f"letters {' '.join(m.alphabet)}",
        f"synchronizing {'yes' if is_synchronizing(m) else 'no'}",
        f"planar {'yes' if is_planar(m) else 'no'}",
        f"id {m.canonical_id()}",
    ]
    for name, states in doc.subsets.items():
        lines.append(f"subset {name} {' '.join(map(str, sorted(states)))}")
    if doc.budget is not None:
        lines.append(f"budget {doc.budget}")
    _emit("\n".join(lines) + "\n")
    return EXIT_OK


def cmd_solve(args):
    m = _load(args.file).dfa
    if args.method == "exact":
        res = exact_reset_word(m)
    elif args.method == "greedy":
        res = greedy_reset_word(m)
    else:
        res = kmerge_approx(m, range(m.n), args.k)
    _emit(f"method {res.method}\nlength {res.length}\nword {_word_line(m, res.word)}\n")
    return EXIT_OK


def cmd_subset(args):
    doc = _load(args.file)
    m = doc.dfa
    states = _states(doc, args.states)
    if args.budget is not None:
        ok = subset_sync_within(m, states, args.budget)
        _emit(f"within {args.budget} {'yes' if ok else 'no'}\n")
        return EXIT_OK
    try:
        res = subset_min_word(m, states)
    except SubsetNotSynchronizable:
        _emit("synchronizable no\n")
        return EXIT_OK
    _emit(f"length {res.length}\nword {_word_line(m, res.word)}\n")
    return EXIT_OK


def cmd_hardest(args):
    m = _load(args.file).dfa
    subset, value = hardest_subset(m, args.k)
    shown = "inf" if value == math.inf else str(value)
    _emit(f"subset {','.join(map(str, sorted(subset)))}\nlength {shown}\n")
    return EXIT_OK


def cmd_gen(args):
    if args.family == "cerny":
        m = gen_cerny(args.n)
    else:
        m = gen_random(args.n, args.sigma, args.seed)
    _emit(render(m), args.output)
    return EXIT_OK


def cmd_draw(args):
    m = _load(args.file).dfa
    _emit(render_drawing(compute_drawing(m, seed=args.seed), m), args.output)
    return EXIT_OK


def _drawing(m, path):
    return parse_drawing(_read(path), m) if path else compute_drawing(m)


def cmd_planarize(args):
    m = _load(args.file).dfa
    n_net, pmap = planarize(m, _drawing(m, args.drawing))
    _emit(render(n_net), args.output)
    if args.map:
        _emit(render_map(pmap, m), args.map)
    return EXIT_OK


def cmd_clock(args):
    clock = build_clock(args.m, args.q, variant=args.variant)
    subsets = {"entry": frozenset({clock.entry}), "exit": frozenset({clock.exit})}
    _emit(render(clock.dfa, subsets, clock.period), args.output)
    return EXIT_OK


def cmd_instance(args):
    doc = _load(args.file)
    m = doc.dfa
    states = _states(doc, args.states)
    inst = build_instance(m, _drawing(m, args.drawing), states, args.m, args.p, variant=args.variant)
    _emit(render(inst.dfa, {"target": inst.states}, inst.budget), args.output)
    return EXIT_OK


def cmd_reduce(args):
    if args.kind == "lcs":
        if len(args.inputs) != 1:
            raise SyncPlanarError("reduce lcs takes one instance file")
        inst = lcs_to_synch(parse_lcs(_read(args.inputs[0])), variant=args.variant)
        text = render(inst.dfa, {"target": inst.states}, inst.budget)
    elif args.kind == "ou":
        if len(args.inputs) != 2:
            raise SyncPlanarError("reduce ou takes two CNF files (alpha, beta)")
        alpha, beta = (parse_dimacs(_read(p)) for p in args.inputs)
        build = ou_planarize if args.planar else ou_construct
        m, target = build(alpha, beta)
        text = render(m, None, target)
    else:
        if len(args.inputs) != 1:
            raise SyncPlanarError("reduce binarize takes one automaton file")
        doc = _load(args.inputs[0])
        if args.states is None:
            raise SyncPlanarError("reduce binarize needs --states")
        budget = args.budget if args.budget is not None else doc.budget
        if budget is None:
            raise SyncPlanarError("reduce binarize needs --budget (or a budget comment in the file)")
        b, states, t = binarize(doc.dfa, _states(doc, args.states), budget)
        text = render(b, {"target": states}, t)
    _emit(text, args.output)
    return EXIT_OK


def cmd_verify(args):
    report = verify_campaign(args.kind, args.seed, args.trials, out_dir=args.out_dir)
    _emit(report.render())
    return EXIT_VIOLATION if report.failures else EXIT_OK


def cmd_scan(args):
    if args.sample is not None and args.seed is None:
        raise SyncPlanarError("--sample needs --seed")
    try:
        report = scan_extremal(args.n, args.sigma, args.planar_only, args.budget, args.sample, args.seed)
        code = EXIT_OK
    except BudgetExceeded as err:
        report = err.report
        code = EXIT_CAP
        print(f"error: {err}", file=sys.stderr)
    _emit(render_scan(report), args.output)
    if report.cerny_violations():
        print(f"violation: {len(report.cerny_violations())} automata exceed (n-1)^2", file=sys.stderr)
        return EXIT_VIOLATION
    return code


# --- parser ------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="syncplanar", description="Synchronizing automata toolkit.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("info", help="summarize an automaton file")
    s.add_argument("file")
    s.set_defaults(func=cmd_info)

    s = sub.add_parser("solve", help="reset word of the whole automaton")
    s.add_argument("file")
    s.add_argument("--method", choices=("exact", "greedy", "kmerge"), default="exact")
    s.add_argument("--k", type=int, default=2)
    s.set_defaults(func=cmd_solve)

    s = sub.add_parser("subset", help="synchronize a subset of states")
    s.add_argument("file")
    s.add_argument("--states", required=True, help="i,j,... or a subset name from the file")
    s.add_argument("--budget", type=int)
    s.set_defaults(func=cmd_subset)

    s = sub.add_parser("hardest", help="subset of size <= k with the longest minimal word")
    s.add_argument("file")
    s.add_argument("--k", type=int, required=True)
    s.set_defaults(func=cmd_hardest)

    s = sub.add_parser("gen", help="generate an automaton")
    fam = s.add_subparsers(dest="family", required=True)
    c = fam.add_parser("cerny")
    c.add_argument("--n", type=int, required=True)
    c.add_argument("-o", "--output")
    c.set_defaults(func=cmd_gen)
    r = fam.add_parser("random")
    r.add_argument("--n", type=int, required=True)
    r.add_argument("--sigma", type=int, required=True)
    r.add_argument("--seed", type=int, required=True)
    r.add_argument("-o", "--output")
    r.set_defaults(func=cmd_gen)

    s = sub.add_parser("draw", help="compute a good drawing")
    s.add_argument("file")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("-o", "--output")
    s.set_defaults(func=cmd_draw)

    s = sub.add_parser("planarize", help="crossing-free automaton over {a,b}x{0,1}")
    s.add_argument("file")
    s.add_argument("--drawing")
    s.add_argument("--map", help="also write the state/path map here")
    s.add_argument("-o", "--output")
    s.set_defaults(func=cmd_planarize)

    s = sub.add_parser("clock", help="clock gadget")
    s.add_argument("--m", type=int, required=True)
    s.add_argument("--q", type=int, required=True, help="state count of the host automaton")
    s.add_argument("--variant", choices=CLOCK_VARIANTS, default="first")
    s.add_argument("-o", "--output")
    s.set_defaults(func=cmd_clock)

    s = sub.add_parser("instance", help="planar subset-synchronization instance")
    s.add_argument("file")
    s.add_argument("--states", required=True)
    s.add_argument("--m", type=int, required=True)
    s.add_argument("--p", type=int, required=True)
    s.add_argument("--drawing")
    s.add_argument("--variant", choices=CLOCK_VARIANTS, default="first")
    s.add_argument("-o", "--output")
    s.set_defaults(func=cmd_instance)

    s = sub.add_parser("reduce", help="run a reduction")
    s.add_argument("kind", choices=("lcs", "ou", "binarize"))
    s.add_argument("inputs", nargs="+")
    s.add_argument("--planar", action="store_true", help="ou: planar construction")
    s.add_argument("--variant", choices=LCS_VARIANTS, default="repaired", help="lcs: wiring of rejected tokens")
    s.add_argument("--states", help="binarize: distinguished states")
    s.add_argument("--budget", type=int, help="binarize: length budget")
    s.add_argument("-o", "--output")
    s.set_defaults(func=cmd_reduce)

    s = sub.add_parser("verify", help="oracle-equivalence campaign")
    s.add_argument("kind", choices=CAMPAIGN_KINDS)
    s.add_argument("--seed", type=int, required=True)
    s.add_argument("--trials", type=int, required=True)
    s.add_argument("--out-dir", default=".", help="where a counterexample is written")
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("scan", help="extremal reset-length scan")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--sigma", type=int, required=True)
    s.add_argument("--planar-only", action="store_true")
    s.add_argument("--sample", type=int)
    s.add_argument("--seed", type=int)
    s.add_argument("--budget", type=int, help="stop after this many automata")
    s.add_argument("-o", "--output")
    s.set_defaults(func=cmd_scan)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except SyncPlanarError as err:
        print(f"error: {err}", file=sys.stderr)
        return err.exit_code
    except (OSError, ValueError) as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_VALIDATION


if __name__ == "__main__":
    raise SystemExit(main())
