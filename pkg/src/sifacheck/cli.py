"""Command-line front end.

    sifacheck verify  (--builtin NAME | PATH) [--json OUT] [--jobs N]
                      [--oracle] [--budget N] [--fault-inputs {on,off}]
    sifacheck explain (--builtin NAME | PATH) SITE [--oracle] [--budget N]
    sifacheck list    (--builtin NAME | PATH) [--fault-inputs {on,off}]

Exit codes: 0 all sites secure; 1 some site unknown or a confirmed leak;
2 usage or parse error; 3 analysis incomplete (budget or sweep cap).
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor

from . import __version__
from .analysis import DependencyAnalyzer
from .checker import SECURE, UNKNOWN, check_fault_detailed, xess, xfact
from .faults import build_detection, enumerate_fault_sites, find_fault_site
from .netlist import CircuitNetlist, NetlistError, builtin_circuit, builtin_names, parse_netlist
from .oracle import UniverseTooLarge, confirm_leak
from .report import SiteRecord, VerdictReport
from .sat import BudgetExhausted, SolverBudget

USAGE_ERROR = 2


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        circuit = _load_circuit(args)
    except (OSError, ValueError) as exc:
        print(f"sifacheck: error: {exc}", file=sys.stderr)
        return USAGE_ERROR
    try:
        if args.command == "verify":
            return _cmd_verify(args, circuit)
        if args.command == "explain":
            return _cmd_explain(args, circuit)
        return _cmd_list(args, circuit)
    except KeyError as exc:
        print(f"sifacheck: error: {exc.args[0]}", file=sys.stderr)
        return USAGE_ERROR


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sifacheck",
        description="Prove that single-fault detection cannot leak masked secrets.",
    )
    parser.add_argument("--version", action="version", version=f"sifacheck {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_input_args(p):
        p.add_argument("netlist", nargs="?", help="path to a .net netlist file")
        p.add_argument(
            "--builtin",
            choices=builtin_names(),
            help="use a bundled circuit instead of a netlist file",
        )
        p.add_argument(
            "--budget",
            type=int,
            metavar="DECISIONS",
            help="abort a site's analysis after this many solver decisions",
        )

    verify = sub.add_parser("verify", help="check every fault site of a circuit")
    add_input_args(verify)
    verify.add_argument("--json", metavar="PATH", help="also write a JSON report")
    verify.add_argument(
        "--jobs",
        type=int,
        default=os.cpu_count() or 1,
        help="number of parallel workers (default: available parallelism)",
    )
    verify.add_argument(
        "--oracle",
        action="store_true",
        help="confirm unknown verdicts by exhaustive enumeration when feasible",
    )
    verify.add_argument(
        "--fault-inputs",
        choices=("on", "off"),
        default="on",
        help="whether primary inputs are fault sites (default: on)",
    )

    explain = sub.add_parser("explain", help="trace the analysis of one fault site")
    add_input_args(explain)
    explain.add_argument("site", help="fault site id, e.g. gate:v0 or input:a0")
    explain.add_argument(
        "--oracle",
        action="store_true",
        help="append exact dependence results per secret",
    )

    lst = sub.add_parser("list", help="enumerate the fault sites of a circuit")
    add_input_args(lst)
    lst.add_argument(
        "--fault-inputs",
        choices=("on", "off"),
        default="on",
        help="whether primary inputs are fault sites (default: on)",
    )
    return parser


def _load_circuit(args) -> CircuitNetlist:
    if args.builtin and args.netlist:
        raise ValueError("give either a netlist path or --builtin, not both")
    if args.builtin:
        return builtin_circuit(args.builtin)
    if not args.netlist:
        raise ValueError("no input: give a netlist path or --builtin")
    with open(args.netlist, "rb") as handle:
        try:
            return parse_netlist(handle.read())
        except NetlistError as exc:
            raise ValueError(f"{args.netlist}: {exc}") from exc


def _budget(args) -> SolverBudget:
    return SolverBudget(args.budget)


def _analyze_site(payload) -> SiteRecord:
    circuit, site, max_decisions, run_oracle = payload
    budget = SolverBudget(max_decisions)
    start = time.perf_counter()
    detection = build_detection(circuit, site)
    verdict, _ = check_fault_detailed(detection, budget)
    record = SiteRecord(
        site_id=site.site_id,
        verdict=verdict,
        millis=int((time.perf_counter() - start) * 1000),
    )
    if run_oracle and verdict.status == UNKNOWN:
        try:
            record.oracle = confirm_leak(detection)
            if not record.dependent_secrets():
                record.oracle_note = "no dependent secret found by enumeration"
        except UniverseTooLarge as exc:
            record.oracle_note = str(exc)
    return record


def _cmd_verify(args, circuit: CircuitNetlist) -> int:
    sites = enumerate_fault_sites(circuit, include_inputs=args.fault_inputs == "on")
    payloads = [(circuit, site, args.budget, args.oracle) for site in sites]
    start = time.perf_counter()
    if args.jobs > 1 and len(payloads) > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            records = list(pool.map(_analyze_site, payloads))
    else:
        records = [_analyze_site(p) for p in payloads]
    report = VerdictReport(
        circuit=circuit.name,
        tool_version=__version__,
        records=records,
        total_millis=int((time.perf_counter() - start) * 1000),
    )
    print(report.to_text())
    if args.json:
        with open(args.json, "w", encoding="utf-8") as handle:
            json.dump(report.to_json_dict(), handle, indent=2)
            handle.write("\n")
    return report.exit_code()


def _cmd_explain(args, circuit: CircuitNetlist) -> int:
    site = find_fault_site(circuit, args.site)
    detection = build_detection(circuit, site)
    budget = _budget(args)
    analyzer = DependencyAnalyzer(budget)
    verdict, state = check_fault_detailed(detection, budget, analyzer=analyzer)

    print(f"circuit: {circuit.name}")
    print(f"site: {site.site_id} ({site.kind})")
    for i, delta_i in enumerate(detection.deltas, start=1):
        print(f"delta_{i} = {delta_i}")
    if state is not None:
        try:
            sets = analyzer.analyze(detection.delta)
            print(f"ess(delta)  = {_fmt_set(sets.ess)}")
            print(f"fact(delta) = {_fmt_set(sets.fact)}")
        except BudgetExhausted as exc:
            print(f"ess/fact of delta unavailable: {exc}")
        print(f"complete secrets K = {_fmt_list(state.complete_secrets)}")
        print(f"hiding candidates R = {_fmt_set(state.hiders)}")
        print(f"basis size = {len(state.basis_indices)}"
              + (f" (delta indices {state.basis_indices})" if state.basis_indices else ""))
    if verdict.status == SECURE:
        print(f"verdict: secure ({verdict.witness})")
    elif verdict.status == UNKNOWN:
        print(f"verdict: unknown (offending basis subset {list(verdict.subset)})")
        members = [state.basis_sets[i] for i in verdict.subset]
        print(f"  xess  = {_fmt_set(xess(members))}")
        print(f"  xfact = {_fmt_set(xfact(members))}")
    else:
        print(f"verdict: incomplete ({verdict.reason})")
    if args.oracle:
        try:
            for name, dependent in confirm_leak(detection):
                print(f"secret {name}: {'DEPENDENT' if dependent else 'independent'}")
        except UniverseTooLarge as exc:
            print(f"oracle: refused: {exc}")
    return 0


def _cmd_list(args, circuit: CircuitNetlist) -> int:
    sites = enumerate_fault_sites(circuit, include_inputs=args.fault_inputs == "on")
    for index, site in enumerate(sites):
        print(f"{index:3d}  {site.site_id}")
    return 0


def _fmt_set(values) -> str:
    return "{" + ", ".join(sorted(values)) + "}"


def _fmt_list(values) -> str:
    return "[" + ", ".join(values) + "]"


if __name__ == "__main__":
    sys.exit(main())
