"""Command-line interface: run suites, list builtin scenarios, export operator matrices.

Verbs:
  run             execute check suites for a scenario config (or builtin name)
  list-scenarios  one line per builtin scenario
  export-matrix   write the operator matrix as CSV for external cross-checks

Exit codes: 0 all checks passed, 1 at least one check failed, 2 config error.
Reports are deterministic for a fixed config and seed, except the timing block.
The only environment override is ORLICZLAB_OUT_DIR, which prefixes relative
--out paths.
"""

from __future__ import annotations

import argparse
import json
import os
import platform
import sys
import time

import numpy as np

from . import __version__
from .errors import ConfigError
from .scenarios import BUILTIN_ORDER, builtin_scenario, from_config, materialize, to_config
from .suites import SUITE_ORDER, run_all_suites

__all__ = ["main"]


def _load_scenarios(config: str, seed_override: int | None) -> list:
    if config in BUILTIN_ORDER:
        return [builtin_scenario(config, seed_override)]
    if not os.path.exists(config):
        raise ConfigError(
            f"config: {config!r} is neither a builtin scenario nor an existing file; "
            f"builtins: {', '.join(BUILTIN_ORDER)}"
        )
    try:
        with open(config, encoding="utf-8") as fh:
            try:
                raw = json.load(fh)
            except json.JSONDecodeError as exc:
                raise ConfigError(
                    f"config: invalid JSON at line {exc.lineno} column {exc.colno}: {exc.msg}"
                ) from exc
    except OSError as exc:
        raise ConfigError(f"config: cannot read {config!r}: {exc.strerror or exc}") from exc
    if isinstance(raw, dict) and "scenarios" in raw:
        items = raw["scenarios"]
        if not isinstance(items, list) or not items:
            raise ConfigError("config.scenarios: expected a nonempty list")
    elif isinstance(raw, dict):
        items = [raw]
    else:
        raise ConfigError("config: expected a scenario object or {'scenarios': [...]}")
    scenarios = [from_config(item) for item in items]
    if seed_override is not None:
        from dataclasses import replace

        scenarios = [replace(s, seed=seed_override) for s in scenarios]
    return scenarios


def _validate_suites(names) -> tuple:
    if not names:
        return SUITE_ORDER
    for name in names:
        if name not in SUITE_ORDER:
            raise ConfigError(f"suite: unknown suite {name!r}; known: {', '.join(SUITE_ORDER)}")
    return tuple(names)


def _build_report(scenarios, suite_names) -> dict:
    t0 = time.perf_counter()
    sections = []
    for scenario in scenarios:
        mat = materialize(scenario)
        result = run_all_suites(mat, suite_names)
        sections.append(
            {
                "scenario": to_config(scenario),
                "suites": result["suites"],
                "passed": result["passed"],
            }
        )
    return {
        "schema": "orliczlab-report/1",
        "versions": {
            "orliczlab": __version__,
            "numpy": np.__version__,
            "python": platform.python_version(),
        },
        "scenarios": sections,
        "passed": all(s["passed"] for s in sections),
        "timing": {"total_seconds": time.perf_counter() - t0},
    }


def _render_table(report: dict) -> str:
    lines = []
    for section in report["scenarios"]:
        name = section["scenario"]["name"]
        status = "PASS" if section["passed"] else "FAIL"
        lines.append(f"scenario {name}: {status}")
        for suite_name, suite in section["suites"].items():
            for check in suite["checks"]:
                mark = "PASS" if check["passed"] else "FAIL"
                value = check.get("value")
                bound = check.get("bound")
                val_s = f"{value:.6g}" if isinstance(value, float) else "-"
                bnd_s = f"{bound:.6g}" if isinstance(bound, float) else "-"
                lines.append(
                    f"  {suite_name:<18} {check['name']:<38} {mark:<4} "
                    f"value={val_s:<12} bound={bnd_s}"
                )
    lines.append(f"overall: {'PASS' if report['passed'] else 'FAIL'}")
    return "\n".join(lines) + "\n"


def _resolve_out(path: str | None) -> str | None:
    if path is None:
        return None
    prefix = os.environ.get("ORLICZLAB_OUT_DIR")
    if prefix and not os.path.isabs(path):
        return os.path.join(prefix, path)
    return path


def _cmd_run(args) -> int:
    scenarios = _load_scenarios(args.config, args.seed)
    suite_names = _validate_suites(args.suite)
    report = _build_report(scenarios, suite_names)
    body = json.dumps(report, indent=2, sort_keys=True) + "\n"
    out = _resolve_out(args.out)
    if out:
        try:
            with open(out, "w", encoding="utf-8") as fh:
                fh.write(body)
        except OSError as exc:
            raise ConfigError(f"out: cannot write {out!r}: {exc.strerror or exc}") from exc
    if args.format == "table":
        sys.stdout.write(_render_table(report))
    else:
        sys.stdout.write(body)
    return 0 if report["passed"] else 1


def _cmd_list_scenarios(_args) -> int:
    for name in BUILTIN_ORDER:
        sys.stdout.write(f"{name}: {builtin_scenario(name).description}\n")
    return 0


def _cmd_export_matrix(args) -> int:
    scenarios = _load_scenarios(args.config, args.seed)
    op = materialize(scenarios[0]).representative()
    out = _resolve_out(args.out)
    if out:
        try:
            np.savetxt(out, op.matrix, delimiter=",", fmt="%.17g")
        except OSError as exc:
            raise ConfigError(f"out: cannot write {out!r}: {exc.strerror or exc}") from exc
    else:
        np.savetxt(sys.stdout, op.matrix, delimiter=",", fmt="%.17g")
    return 0


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="orliczlab",
        description="Numerical checks for weighted averaging operators on Orlicz spaces",
    )
    sub = parser.add_subparsers(dest="verb", required=True)

    run_p = sub.add_parser("run", help="run check suites for a scenario")
    run_p.add_argument(
        "--config", required=True, help="path to a JSON scenario config, or a builtin name"
    )
    run_p.add_argument(
        "--suite",
        action="append",
        metavar="NAME",
        help=f"suite to run (repeatable); default all: {', '.join(SUITE_ORDER)}",
    )
    run_p.add_argument("--out", help="write the JSON report to this path")
    run_p.add_argument("--seed", type=int, help="override the scenario seed")
    run_p.add_argument("--format", choices=("json", "table"), default="json")
    run_p.set_defaults(func=_cmd_run)

    ls_p = sub.add_parser("list-scenarios", help="list builtin scenarios")
    ls_p.set_defaults(func=_cmd_list_scenarios)

    ex_p = sub.add_parser("export-matrix", help="export the operator matrix as CSV")
    ex_p.add_argument(
        "--config", required=True, help="path to a JSON scenario config, or a builtin name"
    )
    ex_p.add_argument("--out", help="write CSV here instead of stdout")
    ex_p.add_argument("--seed", type=int, help="override the scenario seed")
    ex_p.set_defaults(func=_cmd_export_matrix)

    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        sys.stderr.write(f"config error: {exc}\n")
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
