"""Scenario ingestion: JSON schema, validation, model construction.

A scenario file declares the orbit, the gauge model, optional quadrature
sizes, named paths, and tolerance overrides:

    {
      "orbit": {"two_j": 2},
      "model": {"kind": "monopole", "strength": 1},
      "quadrature": {"n_t": 12, "n_phi": 17},
      "paths": {"lat60": {"kind": "latitude", "theta": 1.0471975511965976}},
      "tolerances": {"gauge_law": 1e-6},
      "output": "json"
    }

Validation happens before any computation; model construction enforces
the minimal-coupling precondition and the chart-data consistency check.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field

import numpy as np

from .errors import ParseError, ValidationError
from .fiberq import build_basis, default_rule
from .gauge import (
    GaugeModel,
    build_rep,
    constant_model,
    monopole_model,
    pure_gauge_model,
    trivial_model,
)
from .numerics import sphere_rule
from .orbit import OrbitGeometry, OrbitSpec
from .transport import (
    BasePath,
    latitude_path,
    meridian_path,
    momentum_circle_path,
    phase_circle_path,
    segment_path,
)

CONFIG_DIR_ENV = "FIBERQUANT_CONFIG_DIR"

_MODEL_KINDS = ("trivial", "constant", "monopole", "pure_gauge")
_PATH_KINDS = ("latitude", "meridian", "segment", "phase_circle", "momentum_circle")

DEFAULT_TOLERANCES = {
    "gram": 1e-10,
    "spectrum": 1e-8,
    "dirac": 1e-8,
    "hermiticity": 1e-9,
    "unitarity": 1e-9,
    "homomorphism": 1e-9,
    "polarization": 1e-8,
    "lift_orthogonality": 1e-8,
    "equivalence": 1e-8,
    "gauge_law": 1e-6,
    "holonomy": 1e-6,
    "transport_oracle": 1e-8,
    "chart_independence": 1e-6,
    "source_independence": 1e-6,
    "total_space": 1e-5,
    "section": 1e-12,
    "orbit_identity": 1e-10,
    "area": 1e-10,
}


@dataclass
class Scenario:
    two_j: int
    model_kind: str
    model_params: dict
    quadrature: dict
    path_specs: dict
    tolerances: dict
    output: str
    source_path: str = ""
    raw: dict = field(default_factory=dict)

    def spec(self) -> OrbitSpec:
        return OrbitSpec(self.two_j)

    def geometry(self) -> OrbitGeometry:
        return OrbitGeometry(self.spec())

    def rule(self):
        if self.quadrature:
            return sphere_rule(self.quadrature["n_t"], self.quadrature["n_phi"])
        return default_rule(self.spec())

    def build_model(self) -> GaugeModel:
        spec = self.spec()
        kind = self.model_kind
        if kind == "trivial":
            return trivial_model(spec)
        if kind == "constant":
            coeffs = self.model_params.get("coefficients")
            return constant_model(spec, coeffs)
        if kind == "monopole":
            return monopole_model(spec, self.model_params.get("strength", 1))
        if kind == "pure_gauge":
            return pure_gauge_model(spec, self.model_params.get("rates", (0.7, 1.1)))
        raise ValidationError(f"model.kind: unknown kind {kind!r}")

    def build_context(self) -> dict:
        """Everything the commands need, constructed once."""
        spec = self.spec()
        basis = build_basis(spec, self.rule())
        model = self.build_model()
        return {
            "spec": spec,
            "geom": self.geometry(),
            "basis": basis,
            "rule": self.rule(),
            "model": model,
            "rep": build_rep(spec, basis),
        }

    def path(self, name: str) -> BasePath:
        if name not in self.path_specs:
            raise ValidationError(f"paths.{name}: no such path in the scenario")
        return _build_path(self.path_specs[name], self.model_kind)

    def tolerance(self, name: str) -> float:
        return float(self.tolerances.get(name, DEFAULT_TOLERANCES.get(name, 1e-8)))

    def echo(self) -> dict:
        return {
            "orbit": {"two_j": self.two_j},
            "model": {"kind": self.model_kind, **self.model_params},
            "quadrature": self.quadrature or None,
            "paths": sorted(self.path_specs),
            "tolerances": {k: float(v) for k, v in sorted(self.tolerances.items())},
        }


def _default_paths(model_kind: str) -> dict:
    if model_kind == "monopole":
        return {
            "lat30": {"kind": "latitude", "theta": np.pi / 6.0},
            "lat60": {"kind": "latitude", "theta": np.pi / 3.0},
            "lat90": {"kind": "latitude", "theta": np.pi / 2.0},
            "lat120": {"kind": "latitude", "theta": 2.0 * np.pi / 3.0},
            "meridian": {"kind": "meridian"},
        }
    return {
        "unit_x": {"kind": "segment", "q_from": [0.0, 0.0], "q_to": [1.0, 0.0]},
        "unit_y": {"kind": "segment", "q_from": [0.0, 0.0], "q_to": [0.0, 1.0]},
        "phase_loop": {"kind": "phase_circle", "center_q": [0.0, 0.0], "radius": 0.5, "plane": 0},
    }


def _build_path(spec: dict, model_kind: str) -> BasePath:
    kind = spec["kind"]
    chart = spec.get("chart", "main")
    if kind == "latitude":
        return latitude_path(float(spec["theta"]), winds=int(spec.get("winds", 1)),
                             phi0=float(spec.get("phi0", 0.0)))
    if kind == "meridian":
        return meridian_path()
    if kind == "segment":
        return segment_path(spec["q_from"], spec["q_to"], spec.get("p_from"),
                            spec.get("p_to"), chart=chart)
    if kind == "phase_circle":
        return phase_circle_path(spec["center_q"], float(spec["radius"]),
                                 plane=int(spec.get("plane", 0)), chart=chart)
    if kind == "momentum_circle":
        return momentum_circle_path(spec["q_fixed"], spec["p_center"],
                                    float(spec["radius"]), chart=chart)
    raise ValidationError(f"paths: unknown path kind {kind!r}")


def _require(cond: bool, message: str) -> None:
    if not cond:
        raise ValidationError(message)


def validate_scenario_dict(data: dict, source: str = "<dict>") -> Scenario:
    _require(isinstance(data, dict), "scenario: top level must be an object")
    orbit = data.get("orbit")
    _require(isinstance(orbit, dict), "orbit: required object with field two_j")
    two_j = orbit.get("two_j")
    _require(isinstance(two_j, int) and not isinstance(two_j, bool),
             "orbit.two_j: required integer")
    _require(two_j >= 0, f"orbit.two_j: must be non-negative, got {two_j}")

    model = data.get("model")
    _require(isinstance(model, dict), "model: required object with field kind")
    kind = model.get("kind")
    _require(kind in _MODEL_KINDS, f"model.kind: must be one of {_MODEL_KINDS}, got {kind!r}")
    params = {k: v for k, v in model.items() if k != "kind"}
    if kind == "monopole":
        strength = params.get("strength", 1)
        _require(isinstance(strength, int) and not isinstance(strength, bool) and strength != 0,
                 f"model.strength: must be a nonzero integer, got {strength!r}")
    if kind == "constant" and "coefficients" in params:
        coeffs = params["coefficients"]
        ok = (isinstance(coeffs, list) and len(coeffs) == 2
              and all(isinstance(row, list) and len(row) == 3 for row in coeffs))
        _require(ok, "model.coefficients: must be a 2x3 array of reals")
    if kind == "pure_gauge" and "rates" in params:
        rates = params["rates"]
        _require(isinstance(rates, list) and len(rates) == 2,
                 "model.rates: must be a pair of reals")

    quadrature = data.get("quadrature", {})
    if quadrature:
        _require(isinstance(quadrature, dict), "quadrature: must be an object")
        for key in ("n_t", "n_phi"):
            val = quadrature.get(key)
            _require(isinstance(val, int) and val >= 1, f"quadrature.{key}: must be a positive integer")

    path_specs = dict(_default_paths(kind))
    user_paths = data.get("paths", {})
    _require(isinstance(user_paths, dict), "paths: must be an object")
    for name, pspec in user_paths.items():
        _require(isinstance(pspec, dict) and pspec.get("kind") in _PATH_KINDS,
                 f"paths.{name}.kind: must be one of {_PATH_KINDS}")
        if pspec["kind"] == "latitude":
            theta = pspec.get("theta")
            _require(isinstance(theta, (int, float)) and 0.0 < theta < np.pi,
                     f"paths.{name}.theta: must lie strictly between 0 and pi")
        path_specs[name] = pspec

    tolerances = data.get("tolerances", {})
    _require(isinstance(tolerances, dict), "tolerances: must be an object")
    for name, tol in tolerances.items():
        _require(isinstance(tol, (int, float)) and tol > 0,
                 f"tolerances.{name}: must be positive, got {tol!r}")

    output = data.get("output", "json")
    _require(output in ("json", "table"), f"output: must be 'json' or 'table', got {output!r}")

    return Scenario(
        two_j=two_j,
        model_kind=kind,
        model_params=params,
        quadrature=dict(quadrature),
        path_specs=path_specs,
        tolerances=dict(tolerances),
        output=output,
        source_path=source,
        raw=data,
    )


def resolve_config_path(path_arg: str) -> str:
    """Resolve a --config argument, falling back to the config directory."""
    if os.path.exists(path_arg):
        return path_arg
    cfg_dir = os.environ.get(CONFIG_DIR_ENV)
    if cfg_dir:
        candidate = os.path.join(cfg_dir, path_arg)
        if os.path.exists(candidate):
            return candidate
    raise ParseError(f"config file {path_arg!r} not found"
                     + (f" (also tried ${CONFIG_DIR_ENV})" if cfg_dir else ""))


def load_scenario(path: str) -> Scenario:
    """Parse and validate a scenario file; does not build the model yet."""
    resolved = resolve_config_path(path)
    try:
        with open(resolved, "r", encoding="utf-8") as fh:
            data = json.load(fh)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{resolved}: line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc
    except OSError as exc:
        raise ParseError(f"{resolved}: {exc}") from exc
    return validate_scenario_dict(data, source=resolved)


def default_scenario(two_j: int = 1, model_kind: str = "trivial", **params) -> Scenario:
    return validate_scenario_dict(
        {"orbit": {"two_j": two_j}, "model": {"kind": model_kind, **params}},
        source="<default>",
    )
