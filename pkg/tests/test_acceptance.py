"""End-to-end acceptance runs, one test per criterion.

Each test records a single PASS/FAIL line (shown in the terminal summary
and on stdout with ``-s``) and then asserts the same condition.
"""

import time

from tilinglab.regions import FamilySpec
from tilinglab.verify import SuiteConfig, check, thm34_pick


def run(suite, **kw):
    t0 = time.perf_counter()
    rep = check(SuiteConfig(suite, **kw))
    return rep, time.perf_counter() - t0


def summary(rep):
    c = rep.counts
    return f"{rep.suite} pass={c['pass']} fail={c['fail']} skip={c['skip']}"


def test_criterion_01_macmahon(record):
    rep, dt = run("macmahon", max=4)
    ok = rep.ok and rep.counts["pass"] == 125 and dt < 60
    record(1, ok, f"{summary(rep)} ({dt:.1f} s)")
    assert ok


def test_criterion_02_lemma41(record):
    rep, dt = run("lemma41", max=9, samples=100)
    # exhaustive grid: sum over s <= 9 of 2^s dent sets, plus 100 vanishing draws
    expected = sum(2**s for s in range(10)) + 100
    ok = rep.ok and rep.counts["pass"] == expected and dt < 600
    record(2, ok, f"{summary(rep)} ({dt:.1f} s)")
    assert ok


def test_criterion_03_lemma42(record):
    rep, dt = run("lemma42", max=7)
    ok = rep.ok and rep.counts["pass"] > 0 and rep.counts["skip"] == 0 and dt < 600
    record(3, ok, f"{summary(rep)} ({dt:.1f} s)")
    assert ok


def test_criterion_04_thmA1_and_kuo(record):
    a, dt_a = run("thmA1", max=6)
    k, dt_k = run("kuo", samples=40)
    dt = dt_a + dt_k
    ok = a.ok and k.ok and a.counts["pass"] > 0 and k.counts["pass"] >= 30 and dt < 900
    record(4, ok, f"{summary(a)}; {summary(k)} ({dt:.1f} s)")
    assert ok


def test_criterion_05_corA3(record):
    rep, dt = run("corA3", max=3)
    ok = rep.ok and rep.counts["pass"] == 4**3 * 3 and dt < 600
    record(5, ok, f"{summary(rep)} ({dt:.1f} s)")
    assert ok


def test_criterion_06_shuffling(record):
    parts, dt = [], 0.0
    ok = True
    for suite in ("thm31", "thm32"):
        pts, t1 = run(suite, samples=50, seed=7, mode="points:auto")
        sym, t2 = run(suite, samples=10, seed=7)
        dt += t1 + t2
        ok &= pts.ok and pts.counts["pass"] >= 50 and sym.ok and sym.counts["pass"] >= 10
        parts.append(f"{summary(pts)} points; {sym.counts['pass']} symbolic spot-checks")
    ok &= dt < 1800
    record(6, ok, "; ".join(parts) + f" ({dt:.1f} s)")
    assert ok


def test_criterion_07_remark33(record):
    rep, dt = run("remark33", samples=10)
    ok = rep.ok and rep.counts["pass"] == 50 and dt < 600
    record(7, ok, f"{summary(rep)} ({dt:.1f} s)")
    assert ok


def test_criterion_08_thm34_all_families(record):
    t0 = time.perf_counter()
    cfg = SuiteConfig("thm34-A", samples=3, max=2)
    verdicts, ok = [], True
    for fam in "ABCDE":
        cases = [FamilySpec.from_json(fs.to_json()).case for fs in thm34_pick(fam, cfg)]
        ok &= all(cases.count(c) >= 3 for c in (1, 2, 3))
        rep, _ = run(f"thm34-{fam}", samples=3, max=2, mode="points:auto", variant="both")
        holding = [k for k, v in rep.breakdown.items() if v["fail"] == 0 and v["pass"] >= 9]
        ok &= len(holding) == 1
        verdicts.append(f"{fam}:{'/'.join(holding) or 'none'}")
    dt = time.perf_counter() - t0
    ok &= dt < 3600
    record(8, ok, "variant holding per family " + " ".join(verdicts) + f" ({dt:.0f} s)")
    assert ok


def test_criterion_09_engine_agreement(record):
    rep, dt = run("engine-agreement", samples=200, max=3)
    ok = rep.ok and rep.counts["pass"] >= 200 and dt < 900
    record(9, ok, f"{summary(rep)} ({dt:.1f} s)")
    assert ok


def test_criterion_10_delta_and_fern_peel(record):
    d, t1 = run("delta-identities", samples=500)
    f, t2 = run("fern-weight-peel", samples=3, max=2)
    dt = t1 + t2
    ok = d.ok and f.ok and d.counts["pass"] >= 500 and f.counts["pass"] > 0 and dt < 300
    record(10, ok, f"{summary(d)}; {summary(f)} ({dt:.1f} s)")
    assert ok
