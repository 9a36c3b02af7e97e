"""Acceptance gate: one test per criterion, each emitting a PASS/FAIL line.

Every criterion builds a JSON-serializable report from fixed seeds.  The
reports are memoized so the exactness and determinism criteria can inspect
them; determinism is checked against a fresh interpreter.
"""

import functools
import json
import subprocess
import sys
import time
from itertools import combinations
from pathlib import Path

import numpy as np

from oracles import brute_isomorphic
from sylab.harness import check_lemmas, dumps, example_paper, fixture
from sylab.itcore import cached_decomposition, pd, phi, psi, sample_modules, self_injective, witness_search
from sylab.krulldecomp import Registry, decompose, is_isomorphic, merge_summands, modules_isomorphic, same_summands
from sylab.modrep import change_basis, direct_sum, module_to_json, random_invertible, random_presentation_module
from sylab.presentation import linear_path_algebra, nakayama_cyclic_algebra, paper_example_algebra

CAP = 200
TIMINGS = {}


def _phi_stats(reports):
    reports = list(reports)
    return {
        "count": len(reports),
        "exact": sum(1 for r in reports if r["exact"]),
        "nonincreasing": sum(
            1 for r in reports if all(x >= y for x, y in zip(r["rank_sequence"], r["rank_sequence"][1:]))
        ),
    }


def _timed(key):
    def wrap(fn):
        @functools.wraps(fn)
        def inner():
            start = time.perf_counter()
            out = fn()
            TIMINGS[key] = time.perf_counter() - start
            return out

        return functools.lru_cache(maxsize=None)(inner)

    return wrap


@_timed(1)
def criterion1():
    runs, seconds = [], []
    for n in range(2, 7):
        for p in (2, 5):
            start = time.perf_counter()
            res = example_paper(n, p, samples=200, seed=0, cap=CAP)
            seconds.append(time.perf_counter() - start)
            runs.append(res)
    phis = [r["phi_S1_Sn"] for r in runs]
    TIMINGS["1_slowest_run"] = max(seconds)
    return {"runs": runs, "phi_reports": _phi_stats(phis)}


def self_injective_fixtures():
    out = [nakayama_cyclic_algebra(1, m, 2) for m in (2, 3, 4)]
    for n in (1, 2, 3):
        for m in (2, 3, 4):
            for p in (2, 3):
                if (n, p) != (1, 2):
                    out.append(nakayama_cyclic_algebra(n, m, p))
    return out


@_timed(2)
def criterion2():
    rows, phis = [], []
    for a in self_injective_fixtures():
        reg = Registry(a)
        mods = sample_modules(a, 200, 3, seed=0)
        nonzero_phi = nonzero_psi = bad_pd = indecomposables = 0
        for m in mods:
            r = phi(m, CAP, reg)
            phis.append(r.as_dict())
            nonzero_phi += r.value != 0
            nonzero_psi += psi(m, CAP, reg).value != 0
            for x, _ in cached_decomposition(m).summands:
                indecomposables += 1
                d = pd(x, CAP, reg)
                bad_pd += not (d.infinite or (d.finite and d.value == 0))
        rows.append(
            {
                "algebra": repr(a),
                "self_injective": self_injective(a).verdict,
                "samples": len(mods),
                "nonzero_phi": nonzero_phi,
                "nonzero_psi": nonzero_psi,
                "indecomposables": indecomposables,
                "pd_not_zero_or_infinite": bad_pd,
            }
        )
    return {"algebras": rows, "phi_reports": _phi_stats(phis)}


@_timed(3)
def criterion3():
    algebras = [paper_example_algebra(n, 2) for n in range(2, 7)]
    algebras += [linear_path_algebra(2, 2), linear_path_algebra(3, 2)]
    rows = []
    for a in algebras:
        w = witness_search(a, CAP, Registry(a), seed=0)
        rows.append(
            {
                "algebra": repr(a),
                "found": w is not None,
                "construction": w.construction if w else None,
                "phi": w.phi.as_dict() if w else None,
                "module": module_to_json(w.module) if w else None,
            }
        )
    return {"algebras": rows, "phi_reports": _phi_stats(r["phi"] for r in rows if r["phi"])}


LEMMA_ALGEBRAS = [
    ("a2", None, None),
    ("path", 3, None),
    ("paper-example", 3, None),
    ("paper-example", 5, None),
    ("loop", None, 2),
    ("nakayama", 2, 3),
]


@_timed(4)
def criterion4():
    runs = []
    for name, n, m in LEMMA_ALGEBRAS:
        a = fixture(name, n, 2, m)
        for seed in (1, 2, 3):
            res = check_lemmas(a, samples=100, seed=seed, budget=3, cap=CAP)
            runs.append({"fixture": name, "n": n, "m": m, "seed": seed, "report": res})
    tested = sum(r["report"]["clauses"]["phi_exact"]["tested"] for r in runs)
    exact = tested - sum(r["report"]["clauses"]["phi_exact"]["violations"] for r in runs)
    mono = tested - sum(r["report"]["clauses"]["rank_sequence_nonincreasing"]["violations"] for r in runs)
    return {"runs": runs, "phi_reports": {"count": tested, "exact": exact, "nonincreasing": mono}}


ORACLE_ALGEBRAS = [
    lambda: linear_path_algebra(2, 2),
    lambda: linear_path_algebra(3, 2),
    lambda: nakayama_cyclic_algebra(1, 3, 2),
    lambda: nakayama_cyclic_algebra(1, 4, 2),
    lambda: paper_example_algebra(2, 2),
    lambda: paper_example_algebra(3, 2),
    lambda: nakayama_cyclic_algebra(2, 2, 2),
]


def _small_modules(a, rng, count):
    out = []
    while len(out) < count:
        m = random_presentation_module(a, 2, rng)
        if 0 < m.dim <= 4:
            out.append(m)
            # a base-changed copy guarantees isomorphic pairs with different matrices
            out.append(change_basis(m, [random_invertible(d, a.p, rng) for d in m.dims])[0])
    return out


@_timed(5)
def criterion5():
    rng = np.random.default_rng(2024)
    iso_pairs = iso_agree = iso_positive = 0
    mod_pairs = mod_agree = mod_positive = 0
    sum_pairs = sum_agree = 0
    for make in ORACLE_ALGEBRAS:
        a = make()
        mods = _small_modules(a, rng, 24)
        pieces = []
        for m in mods:
            pieces += [x for x in decompose(m).pieces]
        for x, y in combinations(pieces[:30], 2):
            truth = brute_isomorphic(x, y)
            iso_pairs += 1
            iso_positive += truth
            iso_agree += is_isomorphic(x, y) == truth
        for x, y in combinations(mods[:24], 2):
            truth = brute_isomorphic(x, y)
            mod_pairs += 1
            mod_positive += truth
            mod_agree += modules_isomorphic(x, y) == truth
        for k in range(30):
            m = random_presentation_module(a, 3, rng)
            n = random_presentation_module(a, 3, rng)
            whole = decompose(direct_sum([m, n])[0]).summands
            sum_pairs += 1
            sum_agree += same_summands(whole, merge_summands(decompose(m).summands, decompose(n).summands))
    return {
        "indecomposable_pairs": {"pairs": iso_pairs, "agree": iso_agree, "isomorphic": iso_positive},
        "module_pairs": {"pairs": mod_pairs, "agree": mod_agree, "isomorphic": mod_positive},
        "direct_sum_pairs": {"pairs": sum_pairs, "agree": sum_agree},
    }


CRITERIA = {1: criterion1, 2: criterion2, 3: criterion3, 4: criterion4, 5: criterion5}


def reports_text():
    """Serialized reports of criteria 1-5, used for the determinism check."""
    return "".join(dumps({"criterion": k, "report": fn()}) for k, fn in CRITERIA.items())


# -- tests ---------------------------------------------------------------------------


def test_criterion1_example(acceptance_line):
    rep = criterion1()
    failed = [(r["n"], r["p"], r.get("mismatch")) for r in rep["runs"] if not r["checks_passed"]]
    samples_ok = all(r["findim_sample"]["modules_tested"] >= 200 for r in rep["runs"])
    slowest = TIMINGS["1_slowest_run"]
    ok = not failed and samples_ok and slowest < 60
    acceptance_line(1, ok, f"{len(rep['runs'])} runs, mismatches={failed}, slowest run {slowest:.1f}s")
    assert ok


def test_criterion2_self_injective_forward(acceptance_line):
    rep = criterion2()
    bad = [
        r["algebra"]
        for r in rep["algebras"]
        if not r["self_injective"]
        or r["samples"] < 200
        or r["nonzero_phi"]
        or r["nonzero_psi"]
        or r["pd_not_zero_or_infinite"]
    ]
    total = sum(r["samples"] for r in rep["algebras"])
    ok = not bad
    acceptance_line(2, ok, f"{len(rep['algebras'])} algebras, {total} modules, failing={bad}")
    assert ok


def test_criterion3_witnesses(acceptance_line):
    rep = criterion3()
    bad = [r["algebra"] for r in rep["algebras"] if not (r["found"] and r["phi"]["exact"] and r["phi"]["value"] >= 1)]
    ok = not bad
    acceptance_line(3, ok, f"{len(rep['algebras'])} algebras, failing={bad}")
    assert ok


def test_criterion4_lemma_suites(acceptance_line):
    rep = criterion4()
    violations = sum(r["report"]["violations"] for r in rep["runs"])
    by_algebra = {}
    for r in rep["runs"]:
        key = (r["fixture"], r["n"], r["m"])
        f = r["report"]["clauses"]["lemma2f_short_exact_sequences"]["non_vacuous"]
        by_algebra[key] = by_algebra.get(key, 0) + f
    best_2f = max(by_algebra.values())
    elapsed = TIMINGS[4]
    ok = violations == 0 and best_2f >= 20 and elapsed <= 300
    acceptance_line(
        4, ok, f"{len(rep['runs'])} suites, violations={violations}, max 2(f) sequences={best_2f}, {elapsed:.0f}s"
    )
    assert ok


def test_criterion5_oracles(acceptance_line):
    rep = criterion5()
    ind, mods, sums = rep["indecomposable_pairs"], rep["module_pairs"], rep["direct_sum_pairs"]
    ok = (
        ind["pairs"] >= 500
        and ind["agree"] == ind["pairs"]
        and mods["pairs"] >= 500
        and mods["agree"] == mods["pairs"]
        and sums["pairs"] >= 200
        and sums["agree"] == sums["pairs"]
    )
    acceptance_line(
        5,
        ok,
        f"indecomposable pairs {ind['agree']}/{ind['pairs']} ({ind['isomorphic']} iso), "
        f"module pairs {mods['agree']}/{mods['pairs']} ({mods['isomorphic']} iso), "
        f"direct sums {sums['agree']}/{sums['pairs']}",
    )
    assert ok


def test_criterion6_exactness(acceptance_line):
    stats = [CRITERIA[k]()["phi_reports"] for k in (1, 2, 3, 4)]
    count = sum(s["count"] for s in stats)
    exact = sum(s["exact"] for s in stats)
    mono = sum(s["nonincreasing"] for s in stats)
    ok = count > 0 and exact == count and mono == count
    acceptance_line(6, ok, f"{count} phi reports, exact {exact}, non-increasing {mono}")
    assert ok


def test_criterion7_determinism(acceptance_line):
    here = reports_text()
    tests_dir = Path(__file__).parent
    code = "import sys; sys.path.insert(0, '.'); import test_acceptance as t; sys.stdout.write(t.reports_text())"
    fresh = subprocess.run(
        [sys.executable, "-c", code], cwd=tests_dir, capture_output=True, text=True, check=True
    ).stdout
    ok = fresh == here
    if not ok:
        diverge = next(i for i, (x, y) in enumerate(zip(fresh + "\0", here + "\1")) if x != y)
        print(here[max(0, diverge - 300) : diverge + 100])
    acceptance_line(7, ok, f"{len(here)} bytes of reports compared against a fresh interpreter")
    assert ok


if __name__ == "__main__":
    for k, fn in CRITERIA.items():
        fn()
        print(f"criterion {k} computed in {TIMINGS[k]:.1f}s")
    print(json.dumps({k: CRITERIA[k]()["phi_reports"] for k in (1, 2, 3, 4)}))
