"""Acceptance criteria 1-14.

Each test prints one ``CRITERION <n>: PASS|FAIL`` line (also collected into
the terminal summary) and then asserts. Run on its own with

    pytest tests/test_acceptance.py -v -s
"""

import json
import time

import numpy as np
import pytest

import conftest
from arclab import arcs, cli, expsum, specseq
from arclab.poly import FqPoly

INST = {name: str(conftest.instance_path(f"{name}.cfg")) for name in ("cubic7", "curve5", "curve7")}


def record(n: int, ok: bool, detail: str = "") -> None:
    line = f"CRITERION {n}: {'PASS' if ok else 'FAIL'}" + (f"  {detail}" if detail else "")
    print(line)
    conftest.ACCEPTANCE_LINES.append(line)
    assert ok, line


class Clock:
    def __enter__(self):
        self.t0 = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.elapsed = time.perf_counter() - self.t0


def cli_json(tmp_path, *argv):
    out = tmp_path / "report.json"
    code = cli.run([*argv, "--format", "json", "--no-timing", "--out", str(out)])
    return code, json.loads(out.read_text())


def test_criterion_01_strata_partition():
    with Clock() as c:
        rows = arcs.enumerate_strata(5, 6)
    total = sum(r["card_stratum"] for r in rows)
    um = {r["m"]: r["card_Um"] for r in rows}
    ok = total == 15625 and um[1] == 20 and um[2] == 500 and c.elapsed < 5
    record(1, ok, f"total={total} U1={um[1]} U2={um[2]} {c.elapsed:.2f}s (limit 5s)")


def test_criterion_02_chart_roundtrip(cl_5_6):
    failures = checked = 0
    for b in cl_5_6.tails[cl_5_6.in_um & (cl_5_6.level <= 3)]:
        chart = arcs.in_Um(b, 5)
        checked += 1
        if chart is None or arcs.roundtrip_chart(chart, 6) != tuple(int(v) for v in b):
            failures += 1
    record(2, failures == 0 and checked > 0, f"{checked} tails on U_0..U_3, {failures} failures")


def test_criterion_03_orthogonality(cubic7):
    with Clock() as c:
        rep = expsum.check_orthogonality(cubic7)
    det = rep.details
    ok = rep.passed and det["expected"] == 7 ** 3 * det["count_mor"] and c.elapsed < 10
    record(3, ok, f"count_mor={det['count_mor']} sum={det['sum_real']:.6f} "
                  f"expected={det['expected']} {c.elapsed:.2f}s (limit 10s)")


def test_criterion_04_infinity_vanishing(curve5, curve5_hist, cl_5_6):
    with Clock() as c:
        reps = [expsum.check_infinity(curve5, m, curve5_hist, cl_5_6) for m in (1, 2)]
    npts = sum(r.details["n_points"] for r in reps)
    bad = sum(len(r.violations) for r in reps)
    ok = all(r.passed for r in reps) and npts > 0 and c.elapsed < 120
    record(4, ok, f"{npts} tails off U_m checked, {bad} violators, {c.elapsed:.2f}s (limit 120s)")


def test_criterion_05_power_factorisation_mainterm(curve5, curve7):
    parts = []
    ok = True
    for inst in (curve5, curve7):
        p = inst.p
        power = expsum.check_power(inst, 2)
        fact = expsum.check_factorisation(inst, 2)
        split = expsum.factorisation_holds(inst, FqPoly(p, (-1, 1)), FqPoly(p, (-2, 1)))
        main = expsum.check_mainterm(inst)
        ok &= power.passed and fact.passed and split and main.passed
        ok &= main.details["expected_sum"] == p * main.details["affine_points"] - p ** inst.n
        parts.append(f"p={p}: power {power.details['n_moduli']} moduli, "
                     f"factorisation {fact.details['n_pairs']} pairs, mainterm sum {main.details['expected_sum']}")
    record(5, ok, "; ".join(parts))


def test_criterion_06_residue_and_stratum(curve5, curve5_hist, cl_5_6):
    res = [expsum.check_residue(curve5, m, curve5_hist, cl_5_6) for m in (1, 2)]
    strata = [expsum.check_stratum_sum(curve5, m, curve5_hist, cl_5_6) for m in (0, 1, 2)]
    err = max(r.details["abs_error"] for r in strata)
    ok = all(r.passed for r in res + strata) and err <= 1e-6
    record(6, ok, f"residue reduction on U_1, U_2: {sum(len(r.violations) for r in res)} violations; "
                  f"stratum sums max |error|={err:.2e}")


def test_criterion_07_e1_page():
    expected = {(0, 0): 1, (1, -2): 16, (2, -4): 120, (2, -5): 120, (3, -6): 560, (3, -7): 1920,
                (3, -8): 1360, (4, -8): 1820}
    with Clock() as c:
        page = specseq.e1_page(4, 3, 4)
        cells_ok = page.N == 16 and all(page.dim(*k) == v for k, v in expected.items())
        support_ok = all(specseq.in_support(m, s, 4) for m, s in page.entries)
        off = [(m, s) for m in range(5) for s in range(-4 * m - 3, 3)
               if not specseq.in_support(m, s, 4) and page.dim(m, s)]
        oracle_ok = all(page.dim(m, specseq.page_s(m, i, 4)) == v
                        for m in range(5) for i, v in specseq.oracle_dims(m, 4, 16).items())
        nonzero = {(m, s) for (m, s), v in page.entries.items() if v}
        oracle_cover = nonzero == {(m, specseq.page_s(m, i, 4))
                                   for m in range(5) for i in specseq.oracle_dims(m, 4, 16)}
    ok = cells_ok and support_ok and not off and oracle_ok and oracle_cover and c.elapsed < 10
    record(7, ok, f"N={page.N}, {len(nonzero)} nonzero cells, oracle agrees for m<=4, "
                  f"{c.elapsed:.2f}s (limit 10s)")


@pytest.mark.parametrize("n,k,d", [(4, 3, 4), (5, 3, 3), (4, 4, 4)])
def test_criterion_08_loop_space_rows(n, k, d):
    rep = specseq.row_consistent(n, k, d)
    page = specseq.e1_page(n, k, d)
    ok = rep["ok"] and page.N == (k - 1) ** n and rep["range"] == d * (n - 3)
    record(8, ok, f"(n,k,d)=({n},{k},{d}) N={page.N}, rows j<={rep['range']} agree")


def _product(es, K):
    acc = [1] + [0] * K
    for k, e in enumerate(es, start=1):
        fac = [0] * (K + 1)
        for j, c in enumerate(specseq.inv_power_series(e, K // k)):
            fac[j * k] = c
        acc = [sum(acc[a] * fac[t - a] for a in range(t + 1)) for t in range(K + 1)]
    return acc


def test_criterion_09_definitional_product():
    K = 12
    bad = []
    for N in (1, 2, 8, 16, 81):
        for n in (3, 4):
            want = [1, (-1) ** (n - 1) * N] + [0] * (K - 1)
            if _product(specseq.e_seq(N, n, K), K) != want:
                bad.append((N, n))
    record(9, not bad, f"N in {{1,2,8,16,81}}, n in {{3,4}}, to order T^{K}; mismatches {bad}")


def test_criterion_10_nalpha(tmp_path):
    with Clock() as c:
        code, rep = cli_json(tmp_path, "minor", "--instance", INST["curve5"], "--check", "nalpha",
                             "--samples", "50", "--seed", "0")
    n = len(rep["results"]["samples"])
    ok = code == 0 and n == 50 and not rep["violations"] and c.elapsed < 300
    record(10, ok, f"{n} random b, {len(rep['violations'])} exceptions, {c.elapsed:.1f}s (limit 300s)")


def test_criterion_11_weyl_chain(tmp_path):
    parts, ok = [], True
    for name in ("curve5", "curve7"):
        code, rep = cli_json(tmp_path, "minor", "--instance", INST[name], "--check", "weyl",
                             "--samples", "100", "--seed", "0")
        samples = rep["results"]["samples"]
        ok &= code == 0 and len(samples) == 100 and all(s["passed"] for s in samples)
        ok &= all(s["k"] == 3 and 1 <= s["N"] <= 4 for s in samples)
        parts.append(f"p={samples[0]['p']}: max lhs/rhs={rep['results']['max_lhs_over_rhs']:.4f}")
    record(11, ok, "100 cubic G per prime; " + "; ".join(parts))


def test_criterion_12_lattice(tmp_path):
    with Clock() as c:
        code, rep = cli_json(tmp_path, "lattice", "--p", "5", "--count", "50", "--prec", "8")
    cases = rep["results"]["cases"]
    ok = (code == 0 and len(cases) == 50 and c.elapsed < 120
          and all(x["lee_ok"] and x["duality_ok"] and x["shrink"]["passed"] for x in cases)
          and all(x["n"] in (1, 2) and max(x["a"], x["c"], x["s"]) <= 3 for x in cases))
    record(12, ok, f"{len(cases)} cases, {c.elapsed:.2f}s (limit 120s)")


def test_criterion_13_minor_bound(tmp_path):
    ratios, vacuous, ok = {}, {}, True
    for name in ("curve5", "curve7"):
        for m in (2, 3):
            code, rep = cli_json(tmp_path, "minor", "--instance", INST[name], "--check", "bound",
                                 "--m", str(m))
            det = rep["results"][0]["details"]
            ok &= code == 0
            vacuous[(det["p"], m)] = det["vacuous"]
            ratios[(det["p"], m)] = det["max_ratio"]
    r5, r7 = ratios[(5, 2)], ratios[(7, 2)]
    ok &= r5 is not None and r7 is not None and np.isfinite([r5, r7]).all()
    ok &= max(r5, r7) < 4 * min(r5, r7)
    # kd = 6 makes A_3 the whole space, so there is no b outside A_3 at either prime
    ok &= vacuous[(5, 3)] and vacuous[(7, 3)]
    record(13, bool(ok), f"m=2: ratio {r5:.4f} (p=5) vs {r7:.4f} (p=7), factor {max(r5, r7) / min(r5, r7):.3f} < 4; "
                         f"m=3: vacuous (no b outside A_3 when kd=6)")


DETERMINISM_RUNS = [
    ["strata", "--p", "5", "--kd", "6"],
    ["count-mor", "--instance", INST["cubic7"]],
    ["sweep", "--instance", INST["curve5"], "--check", "stratum-sum"],
    ["sweep", "--instance", INST["cubic7"], "--check", "orthogonality"],
    ["e1", "--n", "4", "--k", "3", "--d", "4"],
    ["window", "--d", "2", "--k", "3", "--n", "24"],
    ["diffs", "--n", "5", "--d", "8"],
    ["minor", "--instance", INST["curve5"], "--check", "nalpha", "--samples", "3", "--seed", "7"],
    ["minor", "--instance", INST["curve5"], "--check", "weyl", "--samples", "10", "--seed", "7"],
    ["minor", "--instance", INST["curve5"], "--check", "shrink", "--samples", "10", "--seed", "7"],
    ["minor", "--instance", INST["curve5"], "--check", "bound", "--m", "2", "--samples", "40", "--seed", "7"],
    ["minor", "--instance", INST["curve5"], "--check", "dimfit"],
    ["lattice", "--count", "10", "--seed", "7"],
]


def test_criterion_14_determinism(tmp_path):
    mismatched = []
    for argv in DETERMINISM_RUNS:
        outs = []
        for run in range(2):
            for w in (1, 2, 8):
                path = tmp_path / f"{argv[0]}_{run}_{w}"
                code = cli.run([*argv, "--workers", str(w), "--no-timing", "--out", str(path)])
                outs.append((code, path.read_bytes()))
        if len(set(outs)) != 1:
            mismatched.append(" ".join(argv[:1] + argv[2:4]))
    subs = sorted({a[0] for a in DETERMINISM_RUNS})
    record(14, not mismatched and set(subs) == set(cli.COMMANDS),
           f"{len(DETERMINISM_RUNS)} configurations over {len(subs)} subcommands, "
           f"2 runs x workers 1/2/8; mismatches {mismatched}")
