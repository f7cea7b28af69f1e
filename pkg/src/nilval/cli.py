"""Command-line scenario runner.

    nilval --scenario heisenberg-p2-counterexample --cutoff 8
    nilval --scenario all --format json --seed 3

Exit status: 0 when every check passes, 1 when one fails, 2 on a bad
configuration.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from fractions import Fraction
from typing import Optional

from .nilgroup import GroupError, GroupSpec
from .suites import (ALIASES, SUITES, Check, ConfigInvalid, ScenarioConfig, UnknownSuite,
                     property_suite)

SCENARIOS = tuple(SUITES) + tuple(ALIASES) + ("all",)
CUSTOM_BATTERY = ("group-oracle", "pval-axioms", "leading-term")


class UnknownScenario(KeyError):
    pass


def _load_spec(path: str) -> GroupSpec:
    try:
        return GroupSpec.load(path)
    except (OSError, ValueError, KeyError, TypeError, GroupError) as exc:
        raise ConfigInvalid(f"cannot load group document {path}: {exc}") from exc


def plan(cfg: ScenarioConfig) -> tuple[list, Optional[GroupSpec]]:
    """Suites to run and the user group (if any)."""
    custom = _load_spec(cfg.spec_path) if cfg.spec_path else None
    name = cfg.scenario
    if name == "all":
        return list(SUITES), custom
    if name in SUITES or name in ALIASES:
        return [name], custom
    if name.endswith(".json") or os.path.isfile(name):
        if not os.path.isfile(name):
            raise ConfigInvalid(f"no such group document: {name}")
        return list(CUSTOM_BATTERY), _load_spec(name)
    raise UnknownScenario(name)


def run_scenario(cfg: ScenarioConfig, timing: bool = False) -> tuple[dict, int]:
    cfg.validate()
    names, custom = plan(cfg)
    if custom is not None and custom.p != cfg.p:
        if cfg.p_explicit:
            raise ConfigInvalid(f"--p {cfg.p} disagrees with the group document (p = {custom.p})")
        cfg.p = custom.p
    start = time.perf_counter()
    checks: list[Check] = []
    for name in names:
        for check in property_suite(name, cfg, custom):
            check.details = dict(check.details, suite=ALIASES.get(name, name))
            checks.append(check)
    elapsed = time.perf_counter() - start
    report = {
        "scenario": cfg.scenario,
        "config": cfg.to_dict(),
        "checks": [c.to_dict() for c in checks],
        "elapsed": round(elapsed, 3) if timing else None,
    }
    return report, 0 if all(c.verdict for c in checks) else 1


def render_json(report: dict) -> str:
    return json.dumps(report, sort_keys=True, indent=2)


def render_text(report: dict) -> str:
    lines = [f"scenario {report['scenario']}  " +
             " ".join(f"{k}={v}" for k, v in sorted(report["config"].items()) if k != "scenario")]
    for c in report["checks"]:
        d = c["details"]
        extra = ", ".join(f"{k}={v}" for k, v in sorted(d.items())
                          if k != "suite" and not isinstance(v, (list, dict)))
        lines.append(f"{c['verdict'].upper():4}  [{d.get('suite', '')}] {c['anchor']}"
                     + (f"  ({extra})" if extra else ""))
    failed = sum(c["verdict"] == "fail" for c in report["checks"])
    lines.append(f"{len(report['checks']) - failed}/{len(report['checks'])} checks passed")
    if report["elapsed"] is not None:
        lines.append(f"elapsed {report['elapsed']} s")
    return "\n".join(lines)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="nilval", description="Run p-valuation scenarios and suites.")
    ap.add_argument("--scenario", default="all",
                    help="one of: " + ", ".join(SCENARIOS) + "; or a path to a group document")
    ap.add_argument("--p", type=int, default=None, help="prime (default 3, or the group document's prime)")
    ap.add_argument("--precision", type=int, default=6, help="p-adic precision N")
    ap.add_argument("--cutoff", type=Fraction, default=Fraction(6), help="degree cutoff D")
    ap.add_argument("--samples", type=int, default=500, help="random samples per property")
    ap.add_argument("--seed", type=int, default=0, help="seed shared by every suite")
    ap.add_argument("--format", default="text", choices=("text", "json"))
    ap.add_argument("--spec", default=None, help="group document replacing the built-in groups")
    ap.add_argument("--timing", action="store_true", help="record wall-clock time in the report")
    ap.add_argument("--list", action="store_true", help="list scenarios and exit")
    return ap


def config_from_args(args) -> ScenarioConfig:
    return ScenarioConfig(scenario=args.scenario, p=3 if args.p is None else args.p,
                          N=args.precision, D=args.cutoff, samples=args.samples, seed=args.seed,
                          format=args.format, spec_path=args.spec, p_explicit=args.p is not None)


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    if args.list:
        print("\n".join(SCENARIOS))
        return 0
    cfg = config_from_args(args)
    try:
        report, status = run_scenario(cfg, timing=args.timing)
    except UnknownScenario as exc:
        print(f"error: unknown scenario {exc.args[0]!r}", file=sys.stderr)
        return 2
    except UnknownSuite as exc:
        print(f"error: unknown suite {exc.args[0]!r}", file=sys.stderr)
        return 2
    except ConfigInvalid as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    print(render_json(report) if cfg.format == "json" else render_text(report))
    return status


if __name__ == "__main__":
    sys.exit(main())
