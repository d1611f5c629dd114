"""Command-line interface for the thermal-noise-channel toolkit.

Subcommands: capacity, ci-curve, nc, verify, oracle.  Every run emits its
fully resolved configuration alongside the results, CSV output carries a
schema-version header comment and JSON a schema_version field, and all
output is deterministic for a fixed configuration.  Exit codes: 0 success,
1 numeric/tolerance failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor

from .channel import ThermalChannel, asymptotic_capacity, coherent_information, mutual_information
from .errors import DomainError, NoRootError, TruncationError
from .fock import (
    DEFAULT_QUAD,
    apply_thermal_channel,
    coherent_information_fock,
    exchange_shift_comparison,
    input_shift_comparison,
    ladder_identity_residual,
    mean_photons,
    output_shift_comparison,
    thermal_fock,
)
from .perturbation import (
    certify_capacity,
    exchange_entropy_shift_single,
    exchange_entropy_shift_two_mode,
    find_ns0,
    input_entropy_shift,
    nc_equation,
    output_entropy_shift_single,
    output_entropy_shift_two_mode,
    solve_nc,
)
from .symplectic import thermal_cm
from .verify import (
    ProbeEnsemble,
    scan_delta_ci,
    verify_directional,
    verify_local_max,
    verify_trace_bound,
)

CSV_SCHEMA = "thermocap-csv/1"
JSON_SCHEMA = "thermocap/1"

_DOC_DISCREPANCY_NOTE = (
    "the analytic recipe keeps only the diagonal (degenerate-pair) eigenvalue "
    "corrections of the joint state; the full second-order response includes "
    "off-diagonal kernel terms and is larger in magnitude, as quantified here"
)


def _threads() -> int:
    raw = os.environ.get("THERMOCAP_THREADS", "").strip()
    if raw:
        try:
            n = int(raw)
        except ValueError as exc:
            raise UsageError(f"THERMOCAP_THREADS must be an integer, got {raw!r}") from exc
        if n >= 1:
            return n
    return min(4, os.cpu_count() or 1)


def _map_ordered(fn, items):
    items = list(items)
    workers = min(_threads(), max(len(items), 1))
    if workers == 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=workers) as ex:
        return list(ex.map(fn, items))


def _fmt(x) -> str:
    if isinstance(x, bool):
        return "true" if x else "false"
    if x is None:
        return ""
    if isinstance(x, float):
        if math.isinf(x):
            return "inf"
        return format(x, ".12g")
    return str(x)


def _parse_grid(text: str, name: str = "grid") -> list[float]:
    """start:stop:step inclusive triple, or a comma-separated value list."""
    text = text.strip()
    try:
        if ":" in text:
            parts = [float(p) for p in text.split(":")]
            if len(parts) != 3:
                raise ValueError("expected start:stop:step")
            start, stop, step = parts
            if step <= 0 or stop < start:
                raise ValueError("need step > 0 and stop >= start")
            count = int(round((stop - start) / step)) + 1
            return [start + i * step for i in range(count)]
        return [float(p) for p in text.split(",") if p.strip()]
    except ValueError as exc:
        raise UsageError(f"bad {name} {text!r}: {exc}") from exc


def _merge_config(args: argparse.Namespace, keys: dict) -> dict:
    """Layer values: explicit flag > --config file > built-in default."""
    from_file = {}
    if getattr(args, "config", None):
        with open(args.config, encoding="utf-8") as fh:
            from_file = json.load(fh)
        if not isinstance(from_file, dict):
            raise DomainError("--config file must contain a JSON object")
    resolved = {}
    for key, default in keys.items():
        val = getattr(args, key.replace("-", "_"), None)
        if val is None:
            val = from_file.get(key, default)
        resolved[key] = val
    return resolved


def _write_text(path: str | None, text: str) -> None:
    if path:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _emit_csv(args, command: str, config: dict, columns: list[str], rows: list[dict]) -> None:
    lines = [
        f"# schema: {CSV_SCHEMA}",
        f"# command: {command}",
        "# config: " + json.dumps(config, sort_keys=True),
        ",".join(columns),
    ]
    for row in rows:
        lines.append(",".join(_fmt(row[c]) for c in columns))
    _write_text(args.output, "\n".join(lines) + "\n")


def _emit_json(args, command: str, config: dict, payload: dict) -> None:
    obj = {"schema_version": JSON_SCHEMA, "command": command, "config": config}
    obj.update(payload)
    _write_text(args.output, json.dumps(obj, indent=2) + "\n")


# ---------------------------------------------------------------------------
# capacity


def _capacity_row(N: float) -> dict:
    if N == 0.0:
        return {
            "N": 0.0,
            "Q": math.inf,
            "certified": True,
            "unbounded": True,
            "N_s0": None,
            "ci_bound": None,
        }
    rep = certify_capacity(N)
    ev = rep["evidence"]
    return {
        "N": N,
        "Q": rep["Q"],
        "certified": rep["certified"],
        "unbounded": False,
        "N_s0": ev.get("N_s0"),
        "ci_bound": ev.get("ci_bound_bits"),
    }


def cmd_capacity(args) -> int:
    config = _merge_config(args, {"noise": None, "grid": None, "format": "csv"})
    if (config["noise"] is None) == (config["grid"] is None):
        raise UsageError("capacity needs exactly one of --noise or --grid")
    if config["grid"] is not None:
        ns = sorted(_parse_grid(str(config["grid"]), "--grid"))
    else:
        ns = [float(config["noise"])]
    if any(n < 0 for n in ns):
        raise DomainError("noise values must be nonnegative")
    rows = _map_ordered(_capacity_row, ns)
    columns = ["N", "Q", "certified", "N_s0", "ci_bound"]
    if config["format"] == "json":
        out_rows = [
            {**row, "Q": None if row["unbounded"] else row["Q"]} for row in rows
        ]
        _emit_json(args, "capacity", config, {"rows": out_rows})
    else:
        _emit_csv(args, "capacity", config, columns, rows)
    return 0


# ---------------------------------------------------------------------------
# ci-curve


def _ci_row(pair) -> dict:
    n_s, N = pair
    cm = thermal_cm(n_s, 1)
    ch = ThermalChannel(N)
    ic = coherent_information(cm, ch)
    return {"N_s": n_s, "I_c": ic, "MI": mutual_information(cm, ch)}


def cmd_ci_curve(args) -> int:
    config = _merge_config(
        args, {"noise": 0.1, "ns-grid": "0.1,0.5,1,5,10,100,1000,10000", "format": "csv"}
    )
    N = float(config["noise"])
    grid = _parse_grid(str(config["ns-grid"]), "--ns-grid")
    if any(s < 0 for s in grid):
        raise DomainError("input photon numbers must be nonnegative")
    rows = _map_ordered(_ci_row, [(s, N) for s in grid])
    if config["format"] == "json":
        _emit_json(args, "ci-curve", config, {"rows": rows})
    else:
        _emit_csv(args, "ci-curve", config, ["N_s", "I_c", "MI"], rows)
    return 0


# ---------------------------------------------------------------------------
# nc


def cmd_nc(args) -> int:
    config = _merge_config(
        args, {"ns0-case": "single-mode", "bound": "entropy-sum"}
    )
    certifying = config == {"ns0-case": "single-mode", "bound": "entropy-sum"}
    nc = solve_nc(config["ns0-case"], config["bound"])
    payload = {
        "N_c": nc,
        "N_s0": find_ns0(nc, config["ns0-case"]),
        "residual": nc_equation(nc, config["ns0-case"], config["bound"]),
        "caveat": certify_capacity(min(nc, 0.1))["evidence"]["caveat"],
        "certifying": certifying,
    }
    _emit_json(args, "nc", config, payload)
    return 0 if abs(payload["residual"]) < 1e-4 else 1


# ---------------------------------------------------------------------------
# verify


def cmd_verify(args) -> int:
    kind = args.kind
    config = _merge_config(
        args,
        {
            "modes": 2,
            "energy": 1.5,
            "samples": 1000,
            "seed": 7,
            "noise": 0.1,
            "ns": 2.0,
            "generator": "squeeze-rotate",
            "ns-grid": "0.001,0.005,0.01,0.05,0.1,0.5,1,5,10",
            "case": "two-mode",
        },
    )
    if kind == "scan":
        report = scan_delta_ci(
            float(config["noise"]),
            _parse_grid(str(config["ns-grid"]), "--ns-grid"),
            str(config["case"]),
        )
        report["passed"] = True
    else:
        ensemble = ProbeEnsemble(
            int(config["modes"]),
            float(config["energy"]),
            int(config["samples"]),
            int(config["seed"]),
            str(config["generator"]),
        )
        if kind == "trace":
            report = verify_trace_bound(ensemble)
        elif kind == "directional":
            report = verify_directional(ensemble, float(config["noise"]))
        else:  # local-max
            report = verify_local_max(float(config["ns"]), float(config["noise"]), ensemble)
    _emit_json(args, f"verify {kind}", config, {"report": report})
    return 0 if report["passed"] else 1


# ---------------------------------------------------------------------------
# oracle


def _oracle_ci(config) -> dict:
    n_s, N, d = float(config["ns"]), float(config["noise"]), int(config["dim"])
    rho = thermal_fock(n_s, d)
    analytic = coherent_information(thermal_cm(n_s, 1), ThermalChannel(N))
    oracle = coherent_information_fock(rho, N)
    tol = float(config["tolerance"])
    out = apply_thermal_channel(rho, N) if N > 0 else rho
    return {
        "analytic": analytic,
        "oracle": oracle,
        "abs_diff": abs(analytic - oracle),
        "tolerance": tol,
        "passed": abs(analytic - oracle) < tol,
        "truncation": {
            "dim": d,
            "input_trace_deficit": rho.trace_deficit,
            "output_trace_deficit": out.trace_deficit,
        },
    }


def _oracle_identity(config) -> dict:
    j, n_s, N, d = (
        int(config["j"]),
        float(config["ns"]),
        float(config["noise"]),
        int(config["dim"]),
    )
    default_tol = 1e-6 if j == 1 else 1e-5
    tol = float(config["tolerance"]) if config["tolerance"] is not None else default_tol
    res = ladder_identity_residual(j, n_s, N, d)
    return {
        "analytic": 0.0,
        "oracle": res,
        "abs_diff": res,
        "tolerance": tol,
        "passed": res < tol,
        "truncation": {"dim": d},
    }


def _oracle_perturb(config) -> dict:
    case = str(config["case"])
    n_s, N = float(config["ns"]), float(config["noise"])
    d = int(config["dim"]) if config["dim"] is not None else (40 if case == "single-mode" else 18)
    eps = float(config["eps"])
    tol = float(config["tolerance"])
    components = {}

    def compare(name, analytic, oracle_fd, extra=None):
        rel = abs(analytic - oracle_fd) / max(abs(oracle_fd), 1e-300)
        entry = {
            "analytic": analytic,
            "oracle": oracle_fd,
            "abs_diff": abs(analytic - oracle_fd),
            "rel_diff": rel,
            "tolerance": tol,
            "passed": rel <= tol,
        }
        if extra:
            entry.update(extra)
        components[name] = entry

    if case == "single-mode":
        inp = input_shift_comparison(n_s, d, eps)
        compare("input", input_entropy_shift(n_s), inp["finite_difference"])
        out = output_shift_comparison("single-mode", n_s, N, d, eps)
        conv = out["reduced_to_characteristic"]
        compare(
            "output",
            output_entropy_shift_single(n_s, N),
            out["finite_difference"] * conv,
        )
        exch = exchange_shift_comparison("single-mode", n_s, N, d, eps)
        analytic_exch = exchange_entropy_shift_single(n_s, N)
    elif case == "two-mode":
        out = output_shift_comparison("two-mode", n_s, N, d, eps)
        conv = out["reduced_to_characteristic"]
        compare(
            "output",
            output_entropy_shift_two_mode(n_s, N),
            out["finite_difference"] * conv,
        )
        exch = exchange_shift_comparison("two-mode", n_s, N, d, eps)
        analytic_exch = exchange_entropy_shift_two_mode(n_s, N)
    else:
        raise UsageError(f"unknown case {case!r}")

    conv = exch["reduced_to_characteristic"]
    compare(
        "exchange",
        analytic_exch,
        exch["finite_difference"] * conv,
        extra={
            "degenerate_recipe": exch["degenerate_recipe"] * conv,
            "exact_second_order": exch["exact_second_order"] * conv,
        },
    )
    e = components["exchange"]
    if not e["passed"]:
        e["documented_discrepancy"] = True
        e["note"] = _DOC_DISCREPANCY_NOTE
    passed = all(
        c["passed"] or c.get("documented_discrepancy", False) for c in components.values()
    )
    return {
        "components": components,
        "passed": passed,
        "truncation": {"dim": d, "eps": eps},
    }


def cmd_oracle(args) -> int:
    task = args.task
    config = _merge_config(
        args,
        {
            "ns": 1.0,
            "noise": 0.1,
            "dim": None,
            "j": 1,
            "case": "two-mode",
            "eps": 1e-3,
            "tolerance": None,
        },
    )
    certifying = config["tolerance"] is None
    if task == "ci":
        if config["dim"] is None:
            config["dim"] = 40
        if config["tolerance"] is None:
            config["tolerance"] = 1e-3
        report = _oracle_ci(config)
    elif task == "identity":
        if config["dim"] is None:
            config["dim"] = 30
        report = _oracle_identity(config)
    elif task == "perturb-compare":
        if config["tolerance"] is None:
            config["tolerance"] = 0.05
        report = _oracle_perturb(config)
    elif task == "vacuum":
        if config["dim"] is None:
            config["dim"] = 40
        if config["tolerance"] is None:
            config["tolerance"] = 1e-4
        N, d = float(config["noise"]), int(config["dim"])
        out = apply_thermal_channel(thermal_fock(0.0, d), N) if N > 0 else thermal_fock(0.0, d)
        measured = mean_photons(out)
        report = {
            "analytic": N,
            "oracle": measured,
            "abs_diff": abs(measured - N),
            "tolerance": float(config["tolerance"]),
            "passed": abs(measured - N) < float(config["tolerance"]),
            "truncation": {"dim": d, "output_trace_deficit": out.trace_deficit},
        }
    else:
        raise UsageError(f"unknown oracle task {task!r}")
    report["certifying"] = certifying
    _emit_json(args, f"oracle {task}", config, {"report": report})
    return 0 if report["passed"] else 1


# ---------------------------------------------------------------------------
# parser


class UsageError(Exception):
    pass


def _add_common(p):
    p.add_argument("--config", help="JSON config file; explicit flags take precedence")
    p.add_argument("--output", help="output file path (default: stdout)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="thermocap",
        description="Coherent information and quantum capacity of the thermal-noise channel.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("capacity", help="quantum capacity with certification status")
    p.add_argument("--noise", type=float, help="channel noise photon number N")
    p.add_argument("--grid", help="noise grid start:stop:step or comma list")
    p.add_argument("--format", choices=["csv", "json"])
    _add_common(p)
    p.set_defaults(fn=cmd_capacity)

    p = sub.add_parser("ci-curve", help="coherent/mutual information vs input strength")
    p.add_argument("--noise", type=float)
    p.add_argument("--ns-grid", help="input-strength grid start:stop:step or comma list")
    p.add_argument("--format", choices=["csv", "json"])
    _add_common(p)
    p.set_defaults(fn=cmd_ci_curve)

    p = sub.add_parser("nc", help="critical noise below which the capacity is certified")
    p.add_argument("--ns0-case", choices=["single-mode", "two-mode"])
    p.add_argument("--bound", choices=["entropy-sum", "mutual-information"])
    _add_common(p)
    p.set_defaults(fn=cmd_nc)

    p = sub.add_parser("verify", help="seeded randomized extremality checks")
    p.add_argument("kind", choices=["directional", "trace", "local-max", "scan"])
    p.add_argument("--modes", type=int)
    p.add_argument("--energy", type=float, help="per-mode energy Ebar = N_s + 1/2")
    p.add_argument("--samples", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--noise", type=float)
    p.add_argument("--ns", type=float, help="thermal input strength for local-max")
    p.add_argument("--generator", choices=["squeeze-rotate", "correlated-two-mode"])
    p.add_argument("--ns-grid", help="scan grid for the CI-difference tabulation")
    p.add_argument("--case", choices=["single-mode", "two-mode"])
    _add_common(p)
    p.set_defaults(fn=cmd_verify)

    p = sub.add_parser("oracle", help="truncated-Fock-space cross-checks")
    p.add_argument("task", choices=["ci", "identity", "perturb-compare", "vacuum"])
    p.add_argument("--ns", type=float)
    p.add_argument("--noise", type=float)
    p.add_argument("--dim", type=int)
    p.add_argument("--j", type=int, choices=[1, 2])
    p.add_argument("--case", choices=["single-mode", "two-mode"])
    p.add_argument("--eps", type=float)
    p.add_argument(
        "--tolerance", type=float, help="override the default tolerance (marks the run non-certifying)"
    )
    _add_common(p)
    p.set_defaults(fn=cmd_oracle)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except UsageError as exc:
        parser.exit(2, f"usage error: {exc}\n")
    except (OSError, json.JSONDecodeError) as exc:
        parser.exit(2, f"usage error: {exc}\n")
    except (DomainError, NoRootError, TruncationError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 1


if __name__ == "__main__":
    sys.exit(main())
