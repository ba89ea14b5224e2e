"""Command-line interface: batch computations and verification suites.

Exit codes: 0 success, 2 validation/configuration error, 3 accuracy
failure (an invariant beyond tolerance), 64 usage error.  Result
documents are emitted once on stdout, deterministically serialized
(sorted keys, floats at 17 significant digits).
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from . import constants
from .errors import (
    AccuracyFailure,
    ChartError,
    ConfigurationError,
    FiberquantError,
    InvalidArgument,
    ParseError,
    UnsupportedPolarization,
    ValidationError,
)
from .fiberq import build_basis, prequant_matrix, quantize_transition
from .gauge import BasePoint, BaseTangent, connection_quadrature, connection_rep
from .orbit import moment_hamiltonian
from .scenario import Scenario, default_scenario, load_scenario
from .su2 import su2_exp
from .transport import covariant_section_solve, transport, wilson_loop
from .verify import run_suite

USAGE = """usage: fiberquant COMMAND [options]

commands:
  gram        monomial Gram matrix and closed-form deviation
  prequant    operator matrix of a moment Hamiltonian
  transition  quantized transition matrix of an SU(2) element
  connection  connection value at a base point and tangent
  transport   path-ordered transport along a named path
  wilson      holonomy matrix and trace around a named loop
  section     covariant-constant section on a T*Q grid
  verify      run a verification suite (orbit|fiber|gauge|transport|all)

common options: --config FILE --spin TWO_J --hamiltonian a1,a2,a3
  --point q1,q2[;p1,p2] --tangent dq1,dq2[;dp1,dp2] --chart NAME
  --path NAME --source rep|quad --steps N --tol X --output json|table
"""

_COMMANDS = ("gram", "prequant", "transition", "connection", "transport",
             "wilson", "section", "verify")

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_ACCURACY = 3
EXIT_USAGE = 64


def _fmt(value) -> str:
    if isinstance(value, float):
        return format(value, ".17g")
    return repr(value)


def _serialize(obj, indent: int = 0) -> str:
    """Deterministic JSON: sorted keys, floats at 17 significant digits."""
    pad = " " * indent
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        parts = []
        for key in sorted(obj):
            parts.append(f'{pad}  "{key}": {_serialize(obj[key], indent + 2).lstrip()}')
        return "{\n" + ",\n".join(parts) + "\n" + pad + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        inner = ", ".join(_serialize(item, indent + 2).lstrip() for item in obj)
        return "[" + inner + "]"
    if isinstance(obj, (bool, np.bool_)):
        return "true" if obj else "false"
    if obj is None:
        return "null"
    if isinstance(obj, (float, np.floating)):
        return format(float(obj), ".17g")
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, str):
        return '"' + obj.replace("\\", "\\\\").replace('"', '\\"') + '"'
    raise InvalidArgument(f"cannot serialize {type(obj)}")


def matrix_payload(m: np.ndarray) -> list:
    m = np.atleast_2d(np.asarray(m, dtype=complex))
    return [[[float(entry.real), float(entry.imag)] for entry in row] for row in m]


def make_document(command: str, scenario: Scenario | None, payload: dict) -> dict:
    return {
        "version": constants.VERSION,
        "command": command,
        "scenario": scenario.echo() if scenario is not None else None,
        "conventions": constants.conventions_record(),
        "payload": payload,
    }


def render_table(doc: dict) -> str:
    lines = [f"fiberquant {doc['version']} :: {doc['command']}"]
    payload = doc["payload"]
    if "checks" in payload:
        lines.append(f"{'check':<42} {'value':>12} {'tolerance':>12}  status")
        for row in payload["checks"]:
            bound = "≥" if row["mode"] == "min" else "≤"
            status = "pass" if row["pass"] else "FAIL"
            lines.append(f"{row['name']:<42} {row['value']:>12.3e} {bound}{row['tolerance']:>11.1e}  {status}")
    for key, value in sorted(payload.items()):
        if key == "checks":
            continue
        if isinstance(value, list):
            lines.append(f"{key}:")
            for row in value:
                lines.append("  " + _serialize(row).replace("\n", " "))
        else:
            lines.append(f"{key}: {_serialize(value)}")
    return "\n".join(lines)


def _parse_vector(text: str, length: int = 3) -> np.ndarray:
    try:
        parts = [float(tok) for tok in text.split(",")]
    except ValueError as exc:
        raise ValidationError(f"cannot parse vector {text!r}") from exc
    if len(parts) != length:
        raise ValidationError(f"expected {length} components, got {len(parts)} in {text!r}")
    return np.array(parts)


def _parse_phase_point(text: str) -> tuple[np.ndarray, np.ndarray]:
    if ";" in text:
        q_text, p_text = text.split(";", 1)
        return _parse_vector(q_text, 2), _parse_vector(p_text, 2)
    return _parse_vector(text, 2), np.zeros(2)


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="fiberquant", add_help=False, exit_on_error=False)
    parser.add_argument("command", choices=_COMMANDS)
    parser.add_argument("suite", nargs="?", default=None)
    parser.add_argument("--config", default=None)
    parser.add_argument("--spin", type=int, default=None)
    parser.add_argument("--hamiltonian", default=None)
    parser.add_argument("--point", default=None)
    parser.add_argument("--tangent", default=None)
    parser.add_argument("--chart", default=None)
    parser.add_argument("--path", dest="path_name", default=None)
    parser.add_argument("--source", choices=("rep", "quad"), default="rep")
    parser.add_argument("--steps", type=int, default=None)
    parser.add_argument("--tol", type=float, default=None)
    parser.add_argument("--output", choices=("json", "table"), default=None)
    parser.add_argument("--axis", default=None)
    parser.add_argument("--angle", type=float, default=None)
    return parser


def _scenario_from_args(args) -> Scenario:
    if args.config:
        scenario = load_scenario(args.config)
    else:
        scenario = default_scenario(two_j=args.spin if args.spin is not None else 1)
    if args.spin is not None and args.config:
        raise ValidationError("--spin conflicts with --config; set orbit.two_j in the file")
    if args.tol is not None:
        if args.tol <= 0:
            raise ValidationError(f"--tol must be positive, got {args.tol}")
        for key in scenario.tolerances | dict.fromkeys(("equivalence", "gauge_law", "holonomy")):
            scenario.tolerances[key] = args.tol
    return scenario


def _cmd_gram(args, scenario: Scenario) -> dict:
    from .fiberq import exact_monomial_norms_sq

    spec = scenario.spec()
    basis = build_basis(spec, scenario.rule())
    exact = exact_monomial_norms_sq(spec)
    rel = float(np.max(np.abs(basis.norms**2 - exact) / exact))
    return {
        "two_j": spec.two_j,
        "gram": matrix_payload(basis.gram),
        "closed_form_relative_error": rel,
        "tolerance": scenario.tolerance("gram"),
        "pass": rel <= scenario.tolerance("gram"),
    }


def _cmd_prequant(args, scenario: Scenario) -> dict:
    if args.hamiltonian is None:
        raise ValidationError("prequant requires --hamiltonian a1,a2,a3")
    a = _parse_vector(args.hamiltonian, 3)
    spec = scenario.spec()
    geom = scenario.geometry()
    basis = build_basis(spec, scenario.rule())
    op = prequant_matrix(geom, basis, moment_hamiltonian(spec, a), scenario.rule())
    herm = float(np.linalg.norm(op.matrix - op.matrix.conj().T, 2))
    return {
        "two_j": spec.two_j,
        "direction": [float(x) for x in a],
        "matrix": matrix_payload(op.matrix),
        "hermiticity_deviation": herm,
        "tolerance": scenario.tolerance("hermiticity"),
        "pass": herm <= scenario.tolerance("hermiticity"),
    }


def _cmd_transition(args, scenario: Scenario) -> dict:
    if args.axis is None or args.angle is None:
        raise ValidationError("transition requires --axis x,y,z and --angle t")
    axis = _parse_vector(args.axis, 3)
    norm = np.linalg.norm(axis)
    if norm == 0:
        raise ValidationError("--axis must be nonzero")
    g = su2_exp(axis / norm * args.angle)
    spec = scenario.spec()
    basis = build_basis(spec, scenario.rule())
    trans = quantize_transition(spec, basis, g)
    dev = float(np.linalg.norm(trans.matrix.conj().T @ trans.matrix - np.eye(spec.dim), 2))
    return {
        "two_j": spec.two_j,
        "group_element": matrix_payload(g),
        "matrix": matrix_payload(trans.matrix),
        "unitarity_deviation": dev,
        "tolerance": scenario.tolerance("unitarity"),
        "pass": dev <= scenario.tolerance("unitarity"),
    }


def _cmd_connection(args, scenario: Scenario) -> dict:
    if args.point is None or args.tangent is None:
        raise ValidationError("connection requires --point and --tangent")
    ctx = scenario.build_context()
    model = ctx["model"]
    chart = args.chart or next(iter(model.charts))
    q, p = _parse_phase_point(args.point)
    dq, dp = _parse_phase_point(args.tangent)
    b = BasePoint(chart, q, p)
    v = BaseTangent(dq=dq, dp=dp)
    if args.source == "quad":
        a_val = connection_quadrature(model, ctx["geom"], ctx["basis"], b, v, ctx["rule"])
    else:
        a_val = connection_rep(model, ctx["rep"], b, v)
    anti = float(np.linalg.norm(a_val + a_val.conj().T, 2))
    return {
        "source": args.source,
        "chart": chart,
        "matrix": matrix_payload(a_val),
        "anti_hermiticity_deviation": anti,
        "tolerance": 1e-9,
        "pass": anti <= 1e-9,
    }


def _cmd_transport(args, scenario: Scenario) -> dict:
    if args.path_name is None:
        raise ValidationError("transport requires --path NAME")
    ctx = scenario.build_context()
    path = scenario.path(args.path_name)
    result = transport(ctx["model"], ctx["basis"], path, source=args.source,
                       rep=ctx["rep"], geom=ctx["geom"], rule=ctx["rule"],
                       steps=args.steps)
    return {
        "path": args.path_name,
        "source": args.source,
        "steps": result.steps,
        "unitary": matrix_payload(result.unitary),
        "alpha_phase": float(result.alpha_phase),
        "unitarity_deviation": result.unitarity_deviation,
        "tolerance": 1e-8,
        "pass": result.unitarity_deviation <= 1e-8,
        "chart_log": [[float(t), name] for t, name in result.chart_log],
    }


def _cmd_wilson(args, scenario: Scenario) -> dict:
    if args.path_name is None:
        raise ValidationError("wilson requires --path NAME")
    ctx = scenario.build_context()
    loop = scenario.path(args.path_name)
    hol, trace = wilson_loop(ctx["model"], ctx["basis"], loop, rep=ctx["rep"],
                             source=args.source, steps=args.steps)
    dev = float(np.linalg.norm(hol.conj().T @ hol - np.eye(hol.shape[0]), 2))
    return {
        "path": args.path_name,
        "holonomy": matrix_payload(hol),
        "trace": [float(trace.real), float(trace.imag)],
        "diagonal_phases": [[float(x.real), float(x.imag)] for x in np.diag(hol)],
        "unitarity_deviation": dev,
        "tolerance": 1e-8,
        "pass": dev <= 1e-8,
    }


def _cmd_section(args, scenario: Scenario) -> dict:
    ctx = scenario.build_context()
    model = ctx["model"]
    n = ctx["spec"].dim
    q_grid = np.stack(np.meshgrid(np.linspace(-1, 1, 5), np.linspace(-1, 1, 5),
                                  indexing="ij"), axis=-1).reshape(-1, 2)
    p_grid = np.stack(np.meshgrid(np.linspace(-1, 1, 3), np.linspace(-1, 1, 3),
                                  indexing="ij"), axis=-1).reshape(-1, 2)
    psi0 = lambda q: np.exp(1j * (q[0] + 0.5 * q[1])) * np.ones(n) / np.sqrt(n)
    section = covariant_section_solve(model, psi0, q_grid, p_grid)
    return {
        "grid": {"q_points": int(q_grid.shape[0]), "p_points": int(p_grid.shape[0])},
        "residual": section.residual,
        "tolerance": scenario.tolerance("section"),
        "pass": section.residual <= scenario.tolerance("section"),
    }


def _cmd_verify(args, scenario: Scenario) -> tuple[dict, bool]:
    suite = args.suite or "all"
    checks = run_suite(suite, scenario)
    rows = [
        {
            "name": c.name,
            "value": float(c.value),
            "tolerance": float(c.tolerance),
            "mode": c.mode,
            "pass": c.passed,
        }
        for c in checks
    ]
    all_pass = all(c.passed for c in checks)
    return {"suite": suite, "checks": rows, "all_pass": all_pass}, all_pass


def run_command(argv) -> tuple[int, str]:
    """Execute a CLI invocation; returns (exit_code, rendered output)."""
    if not argv or argv[0] in ("-h", "--help", "help"):
        return (EXIT_OK if argv and argv[0] in ("-h", "--help", "help") else EXIT_USAGE, USAGE)
    if argv[0] not in _COMMANDS:
        return EXIT_USAGE, USAGE

    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except (argparse.ArgumentError, SystemExit):
        return EXIT_USAGE, USAGE

    try:
        scenario = _scenario_from_args(args)
        exit_code = EXIT_OK
        if args.command == "verify":
            payload, all_pass = _cmd_verify(args, scenario)
            if not all_pass:
                exit_code = EXIT_ACCURACY
        else:
            handler = {
                "gram": _cmd_gram,
                "prequant": _cmd_prequant,
                "transition": _cmd_transition,
                "connection": _cmd_connection,
                "transport": _cmd_transport,
                "wilson": _cmd_wilson,
                "section": _cmd_section,
            }[args.command]
            payload = handler(args, scenario)
            if payload.get("pass") is False:
                exit_code = EXIT_ACCURACY
        doc = make_document(args.command, scenario, payload)
        output_mode = args.output or scenario.output
        rendered = render_table(doc) if output_mode == "table" else _serialize(doc)
        return exit_code, rendered
    except (ValidationError, ParseError, ConfigurationError, InvalidArgument,
            ChartError, UnsupportedPolarization) as exc:
        return EXIT_INVALID, f"error: {exc}"
    except AccuracyFailure as exc:
        return EXIT_ACCURACY, f"accuracy failure: {exc}"
    except FiberquantError as exc:
        return EXIT_INVALID, f"error: {exc}"


def main(argv=None) -> int:
    code, output = run_command(sys.argv[1:] if argv is None else list(argv))
    print(output)
    return code


if __name__ == "__main__":
    sys.exit(main())
