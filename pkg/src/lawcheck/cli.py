"""The lawcheck command: select suites, run the catalog, replay failures.

Reports are deterministic for a given config: every sampling site
derives its seed from the config seed, so two runs with the same
resolved config produce the same outcomes, case counts, and witnesses.
The JSON document differs between such runs only in its timestamp and
per-law durations.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import replace
from datetime import datetime, timezone

from .kernel import Config, quick_config
from .report import witness_bytes
from .suites import (
    MUTANTS,
    SUITES,
    SuiteSelectionError,
    expand_selection,
    owning_suite,
    run_suite,
)

# numeric/flag fields copied verbatim into the report and back out on replay
CONFIG_FIELDS = (
    "seed", "max_carrier", "fn_enum_cap", "fn_sample", "value_cap",
    "list_maxlen", "law_cases", "build_cases", "probe_answer_max",
    "probe_k_cap", "probe_k_sample", "probe_budget",
    "fp_max_len", "fp_max_elem", "deep_diagrams", "enable_callcc",
)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="lawcheck",
        description="Run the law catalog over finite carriers.",
    )
    p.add_argument("--suite", action="append", default=None, metavar="GLOB",
                   help="suite id or glob; repeatable (default: all suites)")
    p.add_argument("--seed", type=int, default=None,
                   help="sampling seed (fallback: LAWCHECK_SEED, then 0)")
    p.add_argument("--max-carrier", type=int, default=None, metavar="N",
                   help="largest carrier admitted into the universe")
    p.add_argument("--fn-enum-cap", type=int, default=None, metavar="N",
                   help="exhaustive function-space bound before sampling")
    p.add_argument("--deep-diagrams", action="store_true",
                   help="check full commuting squares, not endpoints only")
    p.add_argument("--quick", action="store_true",
                   help="reduced budgets; the whole catalog in under 30s")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.add_argument("--out", metavar="FILE",
                   help="write the report here instead of stdout")
    p.add_argument("--replay", metavar="FILE",
                   help="re-run the failing suites recorded in a json report")
    p.add_argument("--mutant", action="append", default=None, metavar="NAME",
                   choices=sorted(MUTANTS),
                   help="enable a seeded regression; repeatable: "
                        + ", ".join(sorted(MUTANTS)))
    p.add_argument("--fp-max-len", type=int, default=None, metavar="N",
                   help="fastproduct sweep: max list length")
    p.add_argument("--fp-max-elem", type=int, default=None, metavar="N",
                   help="fastproduct sweep: max element value")
    p.add_argument("--with-callcc", action="store_true",
                   help="include callcc in the operation registry")
    p.add_argument("--list-suites", action="store_true",
                   help="print suite ids and anchors, then exit")
    return p


def resolve_config(args) -> Config:
    cfg = Config()
    if args.quick:
        cfg = quick_config(cfg)
    seed = args.seed
    if seed is None:
        seed = int(os.environ.get("LAWCHECK_SEED", "0"))
    over = {"seed": seed}
    if args.max_carrier is not None:
        over["max_carrier"] = args.max_carrier
    if args.fn_enum_cap is not None:
        over["fn_enum_cap"] = args.fn_enum_cap
    if args.fp_max_len is not None:
        over["fp_max_len"] = args.fp_max_len
    if args.fp_max_elem is not None:
        over["fp_max_elem"] = args.fp_max_elem
    if args.deep_diagrams:
        over["deep_diagrams"] = True
    if args.with_callcc:
        over["enable_callcc"] = True
    if args.mutant:
        over["mutants"] = frozenset(args.mutant)
    return replace(cfg, **over)


def config_dict(cfg: Config, selection, *, quick: bool) -> dict:
    d = {name: getattr(cfg, name) for name in CONFIG_FIELDS}
    d["mutants"] = sorted(cfg.mutants)
    d["quick"] = quick
    d["selection"] = list(selection)
    d["generated_at"] = datetime.now(timezone.utc).isoformat(timespec="seconds")
    return d


def config_from_dict(d: dict) -> Config:
    base = Config()
    over = {}
    for name in CONFIG_FIELDS:
        if name in d:
            over[name] = type(getattr(base, name))(d[name])
    over["mutants"] = frozenset(d.get("mutants", ()))
    return replace(base, **over)


def run_catalog(ids, cfg: Config):
    """Suites in registry order; the report re-sorts by suite id."""
    pairs = [(sid, run_suite(sid, cfg)) for sid in ids]
    pairs.sort(key=lambda p: p[0])
    return pairs


def report_document(cfg: Config, selection, pairs, *, quick: bool) -> dict:
    doc = {"config": config_dict(cfg, selection, quick=quick), "suites": []}
    for _sid, reports in pairs:
        doc["suites"] += [r.to_dict() for r in reports]
    return doc


def render_text(doc: dict, extra_lines=()) -> str:
    lines = []
    width = max((len(e["id"]) for e in doc["suites"]), default=0)
    fails = 0
    for e in doc["suites"]:
        mark = "pass" if e["outcome"] == "pass" else "FAIL"
        if e["outcome"] != "pass":
            fails += 1
        lines.append(
            f"[{mark}] {e['id']:<{width}}  ({e['anchor']})  "
            f"{e['mode']}  n={e['cases']}  {e['ms']:.1f}ms"
        )
        if e["outcome"] != "pass" and e.get("witness") is not None:
            lines.append(f"       witness: {json.dumps(e['witness'], sort_keys=True)}")
        if "witness_match" in e:
            lines.append(f"       witness match: {'yes' if e['witness_match'] else 'no'}")
    lines.extend(extra_lines)
    cfgd = doc["config"]
    lines.append(
        f"total: {len(doc['suites'])} laws, {fails} failures"
        f"  (seed={cfgd['seed']}, suites={len(set(map(_owner, doc['suites'])))})"
    )
    return "\n".join(lines) + "\n"


def _owner(entry) -> str:
    return owning_suite(entry["id"]) or entry["id"]


def emit(doc: dict, args) -> None:
    if args.format == "json":
        text = json.dumps(doc, indent=2, sort_keys=True) + "\n"
    else:
        text = render_text(doc)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def cmd_run(args) -> int:
    cfg = resolve_config(args)
    try:
        ids = expand_selection(args.suite)
    except SuiteSelectionError as e:
        print(f"lawcheck: {e}", file=sys.stderr)
        return 2
    pairs = run_catalog(ids, cfg)
    doc = report_document(cfg, ids, pairs, quick=args.quick)
    emit(doc, args)
    failed = any(e["outcome"] != "pass" for e in doc["suites"])
    return 1 if failed else 0


def cmd_replay(args) -> int:
    try:
        with open(args.replay) as fh:
            old = json.load(fh)
        old_cfg = old["config"]
        old_entries = old["suites"]
        if not isinstance(old_entries, list):
            raise TypeError("suites must be a list")
    except (OSError, ValueError, KeyError, TypeError) as e:
        print(f"lawcheck: cannot replay {args.replay}: {e}", file=sys.stderr)
        return 2
    failed = [e for e in old_entries if e.get("outcome") != "pass"]
    if not failed:
        print("nothing to replay: recorded report has no failures")
        return 0

    targets = []
    for e in failed:
        sid = owning_suite(e.get("id", ""))
        if sid is None:
            print(f"lawcheck: cannot replay {args.replay}: "
                  f"no suite owns law id {e.get('id')!r}", file=sys.stderr)
            return 2
        if sid not in targets:
            targets.append(sid)
    targets.sort()

    cfg = config_from_dict(old_cfg)
    pairs = run_catalog(targets, cfg)
    doc = report_document(cfg, targets, pairs, quick=bool(old_cfg.get("quick")))
    doc["replay"] = {"failed_laws": [e["id"] for e in failed]}

    by_id = {}
    for entry in doc["suites"]:
        by_id[entry["id"]] = entry
    for e in failed:
        new = by_id.get(e["id"])
        match = (
            new is not None
            and new["outcome"] == "fail"
            and witness_bytes(new.get("witness")) == witness_bytes(e.get("witness"))
        )
        if new is not None:
            new["witness_match"] = match
    emit(doc, args)
    still_failing = any(e["outcome"] != "pass" for e in doc["suites"])
    return 1 if still_failing else 0


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.list_suites:
        for sid, suite in SUITES.items():
            print(f"{sid:30s} {suite.anchor}")
        return 0
    if args.replay:
        return cmd_replay(args)
    return cmd_run(args)


if __name__ == "__main__":
    sys.exit(main())
