"""Command line interface.

Exit codes: 0 = success / verdict positive, 1 = a mathematical negative
verdict (not an error), 2 = usage or validation error.
"""

from __future__ import annotations

import argparse
import json
import sys

from .gfmat import ContractViolation
from .report import (
    Problem,
    SpecError,
    load_schreier,
    negative_verdicts,
    run,
    run_schreier,
    verify_report,
)


def _load_json(path: str):
    try:
        with open(path) as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as e:
        raise SpecError(f"{path}: {e}")


def _cmd_analyze(args) -> int:
    obj = _load_json(args.spec)
    if args.seed is not None:
        obj["seed"] = args.seed
    if args.cap is not None:
        obj["cap"] = args.cap
    prob = Problem(obj)
    report = run(prob)
    text = json.dumps(report, indent=2, sort_keys=True)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    neg = negative_verdicts(report)
    if neg:
        print(f"negative verdict in: {', '.join(sorted(neg))}", file=sys.stderr)
        return 1
    return 0


def _cmd_verify(args) -> int:
    report = _load_json(args.report)
    fails = verify_report(report)
    if fails:
        for f in fails:
            print(f"FAIL {f}")
        return 1
    names = ", ".join(sorted(report.get("results", {}))) or "(empty)"
    print(f"ok: all witnesses re-certified ({names})")
    return 0


def _cmd_corpus(args) -> int:
    from . import corpus
    from .pipeline import obstruction_analysis, stability_cycle

    bad = 0

    def want(name):
        return args.filter is None or args.filter in name

    for inst in corpus.module_instances():
        if not want(inst.name):
            continue
        print(f"module {inst.name}: dim {inst.rho.dim} over GF({inst.rho.p})")
    for pair in corpus.stable_pairs():
        if not want(pair.name):
            continue
        status, _ = stability_cycle(pair.G, pair.nsub, pair.rho,
                                  pair.v_rows, pair.v_action)
        print(f"pair {pair.name}: cycle {status}")
        if status != "ok":
            bad += 1
    for case in corpus.extension_cases():
        if not want(case.name):
            continue
        out = obstruction_analysis(
            case.G, case.nsub, case.rho, v_rows=case.v_rows,
            v_action=case.v_action, ideal_mode=case.ideal_mode,
        )
        verdict = {"solved": "exists"}.get(out.status, out.status)
        mark = "ok" if verdict == case.expected else "MISMATCH"
        print(f"extension {case.name}: {verdict} (expected {case.expected}) {mark}")
        if verdict != case.expected:
            bad += 1
    return 1 if bad else 0


def _cmd_schreier(args) -> int:
    if args.system:
        sys_obj = load_schreier(_load_json(args.system))
        out = run_schreier(sys_obj, build=not args.no_build)
        print(json.dumps(out, indent=2, sort_keys=True))
        return 0 if out["valid"] else 1
    from . import corpus
    from .schreier import build_extension, complement_search, is_split, verify_schreier

    bad = 0
    for case in corpus.schreier_cases():
        if args.filter and args.filter not in case.name:
            continue
        rep = verify_schreier(case.system)
        if not rep.ok:
            print(f"{case.name}: INVALID {rep.failures[:3]}")
            bad += 1
            continue
        ext = build_extension(case.system, skip_verify=True)
        status, _ = is_split(case.system)
        comp = complement_search(ext)
        agree = (status == "split") == (comp is not None)
        expect = "split" if case.expect_split else "nonsplit"
        ok = status == expect and agree
        print(f"{case.name}: |E|={ext.group.n} {status} "
              f"(expected {expect}){'' if ok else ' MISMATCH'}")
        if not ok:
            bad += 1
    return 1 if bad else 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="stabext",
        description="Stability and extension analysis for modules over GF(p).",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    a = sub.add_parser("analyze", help="run the analyses requested in a problem spec")
    a.add_argument("spec", help="problem spec JSON file")
    a.add_argument("--out", help="write the report here instead of stdout")
    a.add_argument("--seed", type=int, default=None, help="override the seed")
    a.add_argument("--cap", type=int, default=None, help="search bound override")
    a.set_defaults(func=_cmd_analyze)

    v = sub.add_parser("verify", help="re-certify every witness in a report")
    v.add_argument("report", help="report JSON file")
    v.set_defaults(func=_cmd_verify)

    c = sub.add_parser("corpus", help="run the built-in example corpus")
    c.add_argument("--filter", default=None, help="substring filter on names")
    c.set_defaults(func=_cmd_corpus)

    s = sub.add_parser("schreier", help="verify and build extension systems")
    s.add_argument("system", nargs="?", default=None,
                   help="system JSON file (default: built-in cases)")
    s.add_argument("--no-build", action="store_true",
                   help="only verify the identities")
    s.add_argument("--filter", default=None, help="substring filter on names")
    s.set_defaults(func=_cmd_schreier)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.func(args)
    except (SpecError, ContractViolation) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
