"""Experiment harness: extremal scans and oracle-equivalence campaigns."""

from __future__ import annotations

import csv
import io
import random
from dataclasses import dataclass, field
from itertools import product
from pathlib import Path

from .automata import Dfa, from_table, gen_random, render
from .errors import BudgetExceeded, SubsetNotSynchronizable
from .gadgets import decide_subset_sync_via_planar, planarize
from .planar import compute_drawing, is_planar
from .reductions import (
    binarize,
    lcs_brute,
    lcs_to_synch,
    ou_construct,
    ou_expected,
    ou_planarize,
    random_cnf,
    random_lcs,
    render_dimacs,
    render_lcs,
)
from .sync import exact_reset_word, is_synchronizing, subset_min_word, subset_sync_within

SCAN_FIELDS = ("id", "synchronizing", "planar", "reset_length")


@dataclass(frozen=True)
class ScanRow:
    id: str
    synchronizing: bool
    planar: bool
    reset_length: int | None


@dataclass
class ScanReport:
    n: int
    sigma: int
    planar_only: bool = False
    seed: int | None = None
    sample: int | None = None
    rows: list = field(default_factory=list)
    complete: bool = True

    @property
    def max_length(self):
        lengths = [r.reset_length for r in self.rows if r.reset_length is not None]
        return max(lengths, default=None)

    @property
    def argmax(self):
        best = self.max_length
        return next((r.id for r in self.rows if r.reset_length == best), None) if best is not None else None

    @property
    def count_at_max(self) -> int:
        best = self.max_length
        return sum(1 for r in self.rows if best is not None and r.reset_length == best)

    def cerny_violations(self) -> list:
        bound = (self.n - 1) ** 2
        return [r for r in self.rows if r.reset_length is not None and r.reset_length > bound]


def _flag(x: bool) -> str:
    return "1" if x else "0"


def _opt(x) -> str:
    return "none" if x is None else str(x)


def render_scan(report: ScanReport) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(SCAN_FIELDS)
    for r in report.rows:
        writer.writerow([r.id, _flag(r.synchronizing), _flag(r.planar), _opt(r.reset_length)])
    buf.write(
        f"# n={report.n} sigma={report.sigma} planar_only={_flag(report.planar_only)} "
        f"seed={_opt(report.seed)} sample={_opt(report.sample)} complete={_flag(report.complete)}\n"
    )
    buf.write(
        f"# max_length={_opt(report.max_length)} argmax={_opt(report.argmax)} "
        f"count_at_max={report.count_at_max}\n"
    )
    return buf.getvalue()


def parse_scan(text: str) -> ScanReport:
    body = [ln for ln in text.splitlines() if not ln.startswith("#")]
    meta = {}
    for ln in text.splitlines():
        if ln.startswith("#"):
            for tok in ln[1:].split():
                key, _, value = tok.partition("=")
                meta[key] = value

    def opt_int(v):
        return None if v in (None, "none") else int(v)

    reader = csv.reader(body)
    header = next(reader)
    if tuple(header) != SCAN_FIELDS:
        raise ValueError(f"unexpected scan header {header}")
    rows = [ScanRow(i, s == "1", p == "1", opt_int(length)) for i, s, p, length in reader]
    return ScanReport(
        int(meta["n"]), int(meta["sigma"]), meta["planar_only"] == "1",
        opt_int(meta.get("seed")), opt_int(meta.get("sample")), rows, meta["complete"] == "1",
    )


def _scan_row(m: Dfa) -> ScanRow:
    sync = is_synchronizing(m)
    length = exact_reset_word(m).length if sync else None
    return ScanRow(m.canonical_id(), sync, is_planar(m), length)


def all_tables(n: int, sigma: int):
    """Every transition table, in lexicographic order of the (state, letter) digit string."""
    for digits in product(range(n), repeat=n * sigma):
        yield [digits[q * sigma:(q + 1) * sigma] for q in range(n)]


def scan_extremal(n: int, sigma: int, planar_only: bool = False, budget: int | None = None,
                  sample: int | None = None, seed: int | None = None) -> ScanReport:
    """Exhaustive (or seeded-sample) sweep of reset lengths.

    ``budget`` caps the number of automata examined; when it runs out a
    :class:`BudgetExceeded` carrying the partial report (``complete=False``)
    is raised.
    """
    report = ScanReport(n, sigma, planar_only, seed, sample)
    if sample is None:
        machines = (from_table(t) for t in all_tables(n, sigma))
    else:
        rng = random.Random(seed)
        picked = {}
        for _ in range(sample):
            m = gen_random(n, sigma, rng.randrange(2**32))
            picked.setdefault(m.canonical_id(), m)
        machines = (picked[k] for k in sorted(picked))
    for count, m in enumerate(machines):
        if budget is not None and count >= budget:
            report.complete = False
            err = BudgetExceeded(f"scan stopped after {budget} automata")
            err.report = report
            raise err
        row = _scan_row(m)
        if planar_only and not row.planar:
            continue
        report.rows.append(row)
    return report


# --- verification campaigns ------------------------------------------------

CAMPAIGN_KINDS = ("lcs", "ou", "planarize", "binarize")


@dataclass
class CampaignReport:
    kind: str
    seed: int
    trials: int
    passes: int = 0
    failures: int = 0
    histogram: dict = field(default_factory=dict)
    counterexample: str | None = None  # serialized first failing instance
    counterexample_path: str | None = None

    def render(self) -> str:
        lines = [
            f"kind {self.kind}",
            f"seed {self.seed}",
            f"trials {self.trials}",
            f"passes {self.passes}",
            f"failures {self.failures}",
        ]
        for key in sorted(self.histogram):
            lines.append(f"case {key} {self.histogram[key]}")
        if self.counterexample_path:
            lines.append(f"counterexample {self.counterexample_path}")
        return "\n".join(lines) + "\n"


def _direct_subset(m: Dfa, states, t: int) -> bool:
    try:
        return subset_min_word(m, states).length <= t
    except SubsetNotSynchronizable:
        return False


def _trial_lcs(rng):
    x = random_lcs(rng)
    inst = lcs_to_synch(x)
    ok = lcs_brute(x) == subset_sync_within(inst.dfa, inst.states, inst.budget)
    return ok, None, render_lcs(x)


def _trial_ou(rng):
    ka = rng.randint(1, 2)
    kb = rng.randint(1, 3 - ka)
    alpha = random_cnf(rng, ka, rng.randint(1, 3))
    beta = random_cnf(rng, kb, rng.randint(1, 3))
    k = ka + kb
    want = ou_expected(alpha, beta)
    general, _ = ou_construct(alpha, beta)
    planar, _ = ou_planarize(alpha, beta)
    ok = (
        exact_reset_word(general, cap=None).length == want
        and exact_reset_word(planar, cap=None).length == want
        and is_planar(planar)
    )
    text = "c alpha\n" + render_dimacs(alpha) + "c beta\n" + render_dimacs(beta)
    return ok, f"k+{want - k}", text


def _trial_planarize(rng):
    n = rng.randint(1, 3)
    m = gen_random(n, 2, rng.randrange(2**32))
    states = tuple(sorted(rng.sample(range(n), min(2, n))))
    steps = rng.randint(0, 3)
    drawing = compute_drawing(m)
    n_net, _ = planarize(m, drawing)
    ok = is_planar(n_net) and decide_subset_sync_via_planar(m, states, steps, drawing) == _direct_subset(m, states, steps)
    subsets = {"target": frozenset(states)}
    return ok, None, render(m, subsets, steps)


def _trial_binarize(rng):
    n = rng.randint(1, 4)
    sigma = rng.randint(2, 4)
    m = gen_random(n, sigma, rng.randrange(2**32))
    states = tuple(sorted(rng.sample(range(n), rng.randint(1, min(3, n)))))
    t = rng.randint(0, 5)
    b, states2, t2 = binarize(m, states, t)
    ok = subset_sync_within(m, states, t) == subset_sync_within(b, states2, t2)
    return ok, None, render(m, {"target": frozenset(states)}, t)


_TRIALS = {
    "lcs": _trial_lcs,
    "ou": _trial_ou,
    "planarize": _trial_planarize,
    "binarize": _trial_binarize,
}


def trial_rng(seed: int, trial: int) -> random.Random:
    return random.Random(seed * 1_000_003 + trial)


def verify_campaign(kind: str, seed: int, trials: int, out_dir=None) -> CampaignReport:
    """Run ``trials`` seeded oracle comparisons; the first failure is kept for replay."""
    if kind not in _TRIALS:
        raise ValueError(f"kind must be one of {CAMPAIGN_KINDS}")
    report = CampaignReport(kind, seed, trials)
    run = _TRIALS[kind]
    for trial in range(trials):
        ok, case, text = run(trial_rng(seed, trial))
        if case is not None:
            report.histogram[case] = report.histogram.get(case, 0) + 1
        if ok:
            report.passes += 1
            continue
        report.failures += 1
        if report.counterexample is None:
            report.counterexample = f"# {kind} seed {seed} trial {trial}\n" + text
            if out_dir is not None:
                path = Path(out_dir) / f"counterexample-{kind}-{seed}-{trial}.txt"
                path.write_text(report.counterexample, encoding="utf-8")
                report.counterexample_path = str(path)
    return report

