"""Command-line front end.

Exit status: 0 when every requested check passes, 1 when a check fails,
2 when the instance or configuration is invalid (hypothesis failure, parse
error, size guard).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
import time
from pathlib import Path

import numpy as np

from . import __version__, arcs, expsum, lattice, minor, specseq

SWEEP_CHECKS = ("orthogonality", "infinity", "power", "factorisation", "mainterm",
                "residue", "stratum-sum")
MINOR_CHECKS = ("nalpha", "weyl", "shrink", "bound", "dimfit")


class Outcome:
    """Results of one subcommand: JSON-able payload, violations, pass flag."""

    def __init__(self, results, violations=None, passed=True, table=None, text=None):
        self.results = results
        self.violations = violations or []
        self.passed = passed
        self.table = table  # (header, rows) for csv
        self.text = text  # ascii rendering


def _load(args) -> expsum.MorInstance:
    return expsum.load_instance(args.instance, args.max_enum)


def _reports(reps) -> Outcome:
    reps = list(reps)
    violations = [dict(v, check=r.check) for r in reps for v in r.violations]
    return Outcome([r.to_json() for r in reps], violations, all(r.passed for r in reps))


# -- subcommands -----------------------------------------------------------------

def cmd_strata(args) -> Outcome:
    rows = arcs.enumerate_strata(args.p, args.kd, args.workers, args.max_enum)
    total = sum(r["card_stratum"] for r in rows)
    ok = total == args.p ** args.kd
    header = ["m", "card_stratum", "card_Um"]
    return Outcome({"rows": rows, "total": total}, [] if ok else [{"total": total}], ok,
                   table=(header, [[r[h] for h in header] for r in rows]))


def cmd_count_mor(args) -> Outcome:
    inst = _load(args)
    hist = expsum.histogram(inst)
    return Outcome({"instance": inst.to_params(), "count_mor": expsum.count_mor(inst, hist),
                    "total": hist.total, "distinct_coefficient_vectors": int(len(hist.cells))})


def cmd_sweep(args) -> Outcome:
    inst = _load(args)
    check = args.check
    if check in ("power", "factorisation"):
        m = args.m if args.m is not None else 2
        fn = expsum.check_power if check == "power" else expsum.check_factorisation
        return _reports([fn(inst, m)])
    if check == "mainterm":
        return _reports([expsum.check_mainterm(inst)])
    hist = expsum.histogram(inst)
    cl = arcs.classify_all(inst.p, inst.kd, args.workers, args.max_enum)
    if check == "orthogonality":
        return _reports([expsum.check_orthogonality(inst, hist, cl)])
    fn = {"infinity": expsum.check_infinity, "residue": expsum.check_residue,
          "stratum-sum": expsum.check_stratum_sum}[check]
    ms = [args.m] if args.m is not None else list(range(0, inst.d + 1))
    return _reports([fn(inst, m, hist, cl) for m in ms])


def render_e1_ascii(page: specseq.E1Page) -> str:
    lo, _ = page.s_range()
    cols = list(range(page.d + 1))
    cells = {(m, s): str(page.dim(m, s)) for m in cols for s in range(lo, 1)}
    head = [f"m={m}" for m in cols]
    labels = [f"s={s}" for s in range(0, lo - 1, -1)] + ["twist"]
    twists = [str(page.twist(m)) for m in cols]
    width = max(len(x) for x in list(cells.values()) + head + twists)
    lw = max(len(x) for x in labels)
    lines = [" " * lw + " | " + " ".join(h.rjust(width) for h in head)]
    lines.append("-" * len(lines[0]))
    for s in range(0, lo - 1, -1):
        lines.append(f"s={s}".rjust(lw) + " | " + " ".join(cells[(m, s)].rjust(width) for m in cols))
    lines.append("-" * len(lines[0]))
    lines.append("twist".rjust(lw) + " | " + " ".join(t.rjust(width) for t in twists))
    return "\n".join(lines) + "\n"


def cmd_e1(args) -> Outcome:
    page = specseq.e1_page(args.n, args.k, args.d)
    entries = [{"m": m, "s": s, "dim": v, "twist": page.twist(m)} for (m, s), v in sorted(page.entries.items())]
    rows = [[e["m"], e["s"], e["dim"], e["twist"]] for e in entries]
    return Outcome({"N": page.N, "entries": entries}, table=(["m", "s", "dim", "twist"], rows),
                   text=render_e1_ascii(page))


def cmd_window(args) -> Outcome:
    w = specseq.stable_window(args.d, args.k, args.n)
    return Outcome(w.to_json())


def cmd_diffs(args) -> Outcome:
    diffs = specseq.feasible_differentials(args.n, args.d)
    bound = -2 * (args.n - 2) * (args.n - 3)
    bad = [dict(m=m, s=s, r=r) for m, s, r in diffs if m + s > bound]
    rows = [[m, s, r] for m, s, r in diffs]
    return Outcome({"differentials": [dict(m=m, s=s, r=r) for m, s, r in diffs],
                    "empty": not diffs}, bad, not bad, table=(["m", "s", "r"], rows))


def _minor_nalpha(inst, args) -> Outcome:
    rng = np.random.default_rng(args.seed)
    n_samples = args.samples or 50
    rows, bad = [], []
    for _ in range(n_samples):
        b = rng.integers(0, inst.p, size=inst.kd).tolist()
        a = minor.count_system(inst.f0, b, inst.n, inst.k, inst.d, inst.p, args.max_enum)
        c = minor.count_Nalpha(inst.f0, b, inst.n, inst.k, inst.d, inst.p, args.max_enum)
        rows.append({"b": b, "system": a, "nalpha": c})
        if a != c:
            bad.append({"b": b, "system": a, "nalpha": c})
    return Outcome({"samples": rows}, bad, not bad)


def _minor_weyl(inst, args) -> Outcome:
    rng = np.random.default_rng(args.seed)
    out, bad = [], []
    for _ in range(args.samples or 100):
        N = int(rng.integers(1, 5))
        G = minor.random_form(N, inst.k, inst.p, rng)
        rep = minor.weyl_check(G, N, inst.p, max_enum=args.max_enum).to_json()
        rep["G"] = expsum.format_monomials(G)
        out.append(rep)
        if not rep["passed"]:
            bad.append(rep)
    return Outcome({"samples": out, "max_lhs_over_rhs": max(r["lhs"] / r["rhs"] for r in out)},
                   bad, not bad)


def _lattice_run(p: int, count: int, prec: int, seed: int) -> Outcome:
    out = []
    for gamma, a, c, s in lattice.random_cases(count, p, prec, seed):
        rep = lattice.lattice_suite(gamma, a, c, s, p)
        rep["n"] = int(gamma.shape[0])
        rep["gamma"] = gamma.tolist()
        out.append(rep)
    bad = [r for r in out if not r["passed"]]
    return Outcome({"cases": out}, bad, not bad)


def cmd_minor(args) -> Outcome:
    inst = _load(args)
    if args.check == "nalpha":
        return _minor_nalpha(inst, args)
    if args.check == "weyl":
        return _minor_weyl(inst, args)
    if args.check == "shrink":
        return _lattice_run(inst.p, args.samples or 50, 8, args.seed)
    if args.check == "dimfit":
        res = minor.dimv_fit(inst.f0, inst.n, inst.k, inst.p, args.max_enum)
        return Outcome(res, [] if res["passed"] else [res], res["passed"])
    m = args.m if args.m is not None else inst.d
    rep = minor.minor_bound_check(inst, m, args.samples, args.seed, args.workers)
    return _reports([rep])


def cmd_lattice(args) -> Outcome:
    return _lattice_run(args.p, args.count, args.prec, args.seed)


# -- plumbing ----------------------------------------------------------------------

def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--format", choices=("json", "csv", "ascii"), default=None)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", "--json", dest="out", default=None,
                   help="write the report here instead of stdout")
    p.add_argument("--max-enum", type=int, default=None, help="size-guard override")
    p.add_argument("--workers", type=int, default=1, help="worker threads (not echoed in reports)")
    p.add_argument("--no-timing", action="store_true", help="report elapsed_ms as null")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="arclab", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=f"arclab {__version__}")
    sub = ap.add_subparsers(dest="subcommand", required=True)

    s = sub.add_parser("strata", help="sizes of the arc strata")
    s.add_argument("--p", type=int, required=True)
    s.add_argument("--kd", type=int, required=True)
    _common(s)

    s = sub.add_parser("count-mor", help="count polynomial maps onto the hypersurface")
    s.add_argument("--instance", required=True)
    _common(s)

    s = sub.add_parser("sweep", help="exponential-sum identities over all b")
    s.add_argument("--instance", required=True)
    s.add_argument("--check", choices=SWEEP_CHECKS, required=True)
    s.add_argument("--m", type=int, default=None)
    _common(s)

    s = sub.add_parser("e1", help="first page of the spectral sequence")
    for name in ("n", "k", "d"):
        s.add_argument(f"--{name}", type=int, required=True)
    _common(s)

    s = sub.add_parser("window", help="stable-range thresholds")
    for name in ("d", "k", "n"):
        s.add_argument(f"--{name}", type=int, required=True)
    _common(s)

    s = sub.add_parser("diffs", help="differentials that could be nonzero")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--d", type=int, required=True)
    _common(s)

    s = sub.add_parser("minor", help="minor-arc checks")
    s.add_argument("--instance", required=True)
    s.add_argument("--m", type=int, default=None)
    s.add_argument("--check", choices=MINOR_CHECKS, required=True)
    s.add_argument("--samples", type=int, default=None)
    _common(s)

    s = sub.add_parser("lattice", help="lattice minima, Lee's count and shrinking on random gamma")
    s.add_argument("--p", type=int, default=5)
    s.add_argument("--count", type=int, default=50)
    s.add_argument("--prec", type=int, default=8)
    _common(s)
    return ap


COMMANDS = {"strata": cmd_strata, "count-mor": cmd_count_mor, "sweep": cmd_sweep, "e1": cmd_e1,
            "window": cmd_window, "diffs": cmd_diffs, "minor": cmd_minor, "lattice": cmd_lattice}
DEFAULT_FORMAT = {"strata": "csv", "e1": "ascii"}
NOT_ECHOED = {"subcommand", "out", "workers", "no_timing", "format"}


def _params(args) -> dict:
    return {k: v for k, v in sorted(vars(args).items()) if k not in NOT_ECHOED}


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _json_default(o):
    if isinstance(o, np.integer):
        return int(o)
    if isinstance(o, np.floating):
        return float(o)
    if isinstance(o, np.ndarray):
        return o.tolist()
    return str(o)


def run(argv=None) -> int:
    args = build_parser().parse_args(argv)
    fmt = args.format or DEFAULT_FORMAT.get(args.subcommand, "json")
    t0 = time.perf_counter()
    try:
        outcome = COMMANDS[args.subcommand](args)
    except (expsum.InstanceError, arcs.EnumerationTooLarge, FileNotFoundError) as exc:
        print(f"arclab: invalid instance or configuration: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"arclab: invalid parameters: {exc}", file=sys.stderr)
        return 2
    elapsed = None if args.no_timing else round((time.perf_counter() - t0) * 1000, 3)
    if fmt == "csv" and outcome.table is not None:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(outcome.table[0])
        w.writerows(outcome.table[1])
        text = buf.getvalue()
    elif fmt == "ascii" and outcome.text is not None:
        text = outcome.text
    else:
        report = {"tool": "arclab", "version": __version__, "subcommand": args.subcommand,
                  "params": _params(args), "results": outcome.results,
                  "violations": outcome.violations, "elapsed_ms": elapsed,
                  "passed": outcome.passed}
        text = json.dumps(report, sort_keys=True, indent=2, default=_json_default) + "\n"
    _emit(text, args.out)
    return 0 if outcome.passed else 1


def main(argv=None) -> None:
    sys.exit(run(argv))


if __name__ == "__main__":  # pragma: no cover
    main()
