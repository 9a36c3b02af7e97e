"""Command-line entry point: ``sylab <command> [options]``.

JSON reports go to standard output (or ``--out``); a short human-readable
table goes to standard error.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from typing import List, Optional

from .harness import (
    FIXTURE_NAMES,
    RunConfig,
    check_lemmas,
    decomposition_result,
    dumps,
    example_paper,
    load_module,
    make_report,
    table,
)
from .itcore import findim_sample, pd, phi, phidim_sample, psi, self_injective, witness_search
from .krulldecomp import Registry
from .modrep import ModuleError, module_to_json
from .presentation import PresentationError

COMMANDS = (
    "phi",
    "psi",
    "pd",
    "selfinj",
    "decompose",
    "check-lemmas",
    "example-paper",
    "phidim-sample",
    "findim-sample",
    "witness",
)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="sylab", description=__doc__.splitlines()[0])
    ap.add_argument("command", choices=COMMANDS)
    src = ap.add_argument_group("algebra")
    src.add_argument("--algebra", dest="algebra_file", help="algebra JSON file")
    src.add_argument("--fixture", choices=FIXTURE_NAMES)
    src.add_argument("--n", type=int)
    src.add_argument("--p", type=int, default=2)
    src.add_argument("--m", type=int)
    ap.add_argument("--module", help="module JSON file or expression such as S1+S4")
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--samples", type=int, default=100)
    ap.add_argument("--cap", type=int, default=200)
    ap.add_argument("--budget", type=int, default=3)
    ap.add_argument("--out", help="write the JSON report here instead of stdout")
    return ap


def _need_module(cfg: RunConfig, a):
    if not cfg.module:
        raise ValueError("this command needs --module")
    return load_module(a, cfg.module)


def run(command: str, cfg: RunConfig):
    """Execute one command; returns ``(report, table_rows, ok)``."""
    if command == "example-paper":
        n = cfg.n if cfg.n is not None else 3
        cfg.fixture, cfg.n = "paper-example", n
        samples = max(cfg.samples, 200)
        res = example_paper(n, cfg.p, samples, cfg.seed, cfg.budget, cfg.cap)
        rows = [
            ["quantity", "value", "expected"],
            ["phi(S1+Sn)", res["phi_S1_Sn"]["value"], n - 1],
            ["psi(S1+Sn)", res["psi_S1_Sn"]["value"], n - 1],
            ["findim_sample", res["findim_sample"]["value"], 0],
            ["self_injective", res["self_injective"]["self_injective"], False],
        ]
        return make_report(command, cfg, res), rows, res["checks_passed"]

    a = cfg.algebra()
    reg = Registry(a)
    if command in ("phi", "psi", "pd"):
        m = _need_module(cfg, a)
        if command == "phi":
            r = phi(m, cfg.cap, reg)
            res = r.as_dict()
            shown = str(r.value) if r.exact else f">= {r.value}"
            rows = [["phi", "rank sequence", "exact"], [shown, r.rank_sequence, r.exact]]
        elif command == "psi":
            r = psi(m, cfg.cap, reg)
            res = r.as_dict()
            shown = str(r.value) if r.exact else f">= {r.value}"
            rows = [["psi", "phi", "exact"], [shown, r.phi.value, r.exact]]
        else:
            r = pd(m, cfg.cap, reg)
            res = {"value": r.as_json(), "exact": not r.at_least}
            rows = [["pd"], [str(r)]]
        res["module"] = module_to_json(m)
        return make_report(command, cfg, res), rows, True
    if command == "decompose":
        m = _need_module(cfg, a)
        res = decomposition_result(m)
        rows = [["dims", "multiplicity", "projective"]] + [
            [s["module"]["dims"], s["multiplicity"], s["projective"]] for s in res["summands"]
        ]
        return make_report(command, cfg, res), rows, True
    if command == "selfinj":
        si = self_injective(a)
        res = si.as_dict()
        if not si.verdict:
            w = witness_search(a, cfg.cap, reg, cfg.seed)
            res["witness"] = None if w is None else {
                "construction": w.construction,
                "vertex": w.vertex,
                "phi": w.phi.as_dict(),
                "module": module_to_json(w.module),
            }
        rows = [["self-injective", "non-injective projectives"], [si.verdict, si.non_injective]]
        return make_report(command, cfg, res), rows, True
    if command == "witness":
        w = witness_search(a, cfg.cap, reg, cfg.seed)
        if w is None:
            res = {"found": False}
            rows = [["witness"], ["not found (algebra is self-injective)"]]
        else:
            res = {
                "found": True,
                "construction": w.construction,
                "vertex": w.vertex,
                "phi": w.phi.as_dict(),
                "module": module_to_json(w.module),
            }
            rows = [["construction", "vertex", "phi"], [w.construction, w.vertex, w.phi.value]]
        return make_report(command, cfg, res), rows, True
    if command in ("phidim-sample", "findim-sample"):
        fn = phidim_sample if command == "phidim-sample" else findim_sample
        r = fn(a, cfg.samples, cfg.budget, cfg.seed, cfg.cap, reg)
        res = {
            "lower_bound": r.value,
            "exact": r.exact,
            "modules_tested": r.modules_tested,
            "witness": module_to_json(r.witness) if r.witness is not None else None,
        }
        rows = [[command, "modules"], [r.value, r.modules_tested]]
        return make_report(command, cfg, res), rows, True
    if command == "check-lemmas":
        res = check_lemmas(a, cfg.samples, cfg.seed, cfg.budget, cfg.cap)
        rows = [["clause", "tested", "violations"]] + [
            [name, c["tested"], c["violations"]] for name, c in res["clauses"].items()
        ]
        return make_report(command, cfg, res), rows, res["violations"] == 0
    raise ValueError(f"unknown command {command}")


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    cfg = RunConfig(
        fixture=args.fixture,
        n=args.n,
        p=args.p,
        m=args.m,
        algebra_file=args.algebra_file,
        module=args.module,
        seed=args.seed,
        samples=args.samples,
        cap=args.cap,
        budget=args.budget,
    )
    start = time.perf_counter()
    try:
        report, rows, ok = run(args.command, cfg)
    except (PresentationError, ModuleError, ValueError, json.JSONDecodeError, OSError) as e:
        print(f"sylab: error: {e}", file=sys.stderr)
        return 2
    text = dumps(report)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    print(table(rows), file=sys.stderr)
    print(f"({time.perf_counter() - start:.2f}s)", file=sys.stderr)
    if not ok:
        print("sylab: checks failed", file=sys.stderr)
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
