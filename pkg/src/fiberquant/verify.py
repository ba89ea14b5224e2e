"""Verification suites: proposition-level invariants as residual tables.

Each check returns a ``CheckResult``; a check passes when its value is
within tolerance (mode "max") or exceeds a required floor (mode "min",
used for separation witnesses such as non-commutativity).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import FiberquantError
from .fiberq import (
    build_basis,
    exact_monomial_norms_sq,
    polarization_residual,
    prequant_matrix,
    quantize_transition,
)
from .gauge import (
    BasePoint,
    BaseTangent,
    build_rep,
    connection_quadrature,
    connection_rep,
    constant_model,
    curvature,
    gauge_residual,
    lift_orthogonality_residual,
    monopole_model,
    pure_gauge_model,
    trivial_model,
    verify_gauge_data,
)
from .numerics import matrix_exp
from .orbit import (
    Chart,
    ChartPoint,
    OrbitGeometry,
    OrbitSpec,
    chart_transition,
    embed_point,
    hamiltonian_field,
    kahler_potential_at,
    moment_hamiltonian,
    poisson_bracket,
    squared_hamiltonian,
    symplectic_area,
    symplectic_form_at,
)
from .scenario import Scenario, default_scenario
from .transport import (
    covariant_residual_total_space,
    covariant_section_solve,
    latitude_path,
    momentum_circle_path,
    phase_circle_path,
    reverse_path,
    segment_path,
    transport,
    wilson_loop,
)

_SUITES = ("orbit", "fiber", "gauge", "transport", "all")


@dataclass(frozen=True)
class CheckResult:
    name: str
    value: float
    tolerance: float
    mode: str = "max"  # "max": value <= tolerance; "min": value >= tolerance

    @property
    def passed(self) -> bool:
        if self.mode == "min":
            return self.value >= self.tolerance
        return self.value <= self.tolerance


def _random_point(rng, scale: float = 1.2) -> ChartPoint:
    z = complex(rng.normal(scale=scale), rng.normal(scale=scale))
    return ChartPoint(Chart.NORTH, z)


def suite_orbit(scenario: Scenario) -> list[CheckResult]:
    rng = np.random.default_rng(101)
    checks = []

    worst_area = 0.0
    for two_j in (1, 2, 4):
        geom = OrbitGeometry(OrbitSpec(two_j))
        rule = default_scenario(two_j).rule()
        worst_area = max(worst_area, abs(symplectic_area(geom, rule) - 4.0 * np.pi * (two_j / 2.0)))
    checks.append(CheckResult("orbit.area_oracle", worst_area, scenario.tolerance("area")))

    spec = OrbitSpec(2)
    geom = OrbitGeometry(spec)
    worst = 0.0
    for _ in range(100):
        a = rng.standard_normal(3)
        w = moment_hamiltonian(spec, a)
        pt = _random_point(rng)
        xi = rng.standard_normal(2)
        field = hamiltonian_field(geom, w, pt)
        lhs = symplectic_form_at(geom, pt, field, xi)
        grad = w.chart_gradient(pt)
        worst = max(worst, abs(lhs + float(np.dot(grad, xi))))
    checks.append(CheckResult("orbit.hamiltonian_field_identity", worst, scenario.tolerance("orbit_identity")))

    worst = _lie_chain_residual(geom, rng, samples=25)
    checks.append(CheckResult("orbit.potential_lie_chain", worst, 1e-5))

    worst = 0.0
    for _ in range(50):
        a = rng.standard_normal(3)
        w = moment_hamiltonian(spec, a)
        pt = _random_point(rng)
        other = chart_transition(pt)
        worst = max(worst, abs(w.value(pt) - w.value(other)))
    checks.append(CheckResult("orbit.chart_covariance", worst, 1e-9))

    worst = 0.0
    for two_j in (1, 2, 3, 4):
        spec_j = OrbitSpec(two_j)
        geom_j = OrbitGeometry(spec_j)
        for _ in range(25):
            a = rng.standard_normal(3)
            b = rng.standard_normal(3)
            pt = _random_point(rng)
            bracket = poisson_bracket(geom_j, moment_hamiltonian(spec_j, a),
                                      moment_hamiltonian(spec_j, b), pt)
            expected = moment_hamiltonian(spec_j, np.cross(a, b)).value(pt)
            worst = max(worst, abs(bracket - expected))
    checks.append(CheckResult("orbit.poisson_sign_global", worst, 1e-9))

    worst = 0.0
    for _ in range(100):
        pt = _random_point(rng)
        worst = max(worst, abs(np.linalg.norm(embed_point(spec, pt)) - spec.j))
    checks.append(CheckResult("orbit.embed_radius", worst, 1e-12))

    worst = _curl_vs_form_residual(geom, rng, samples=100)
    checks.append(CheckResult("orbit.potential_curvature", worst, 1e-6))
    return checks


def _lie_chain_residual(geom: OrbitGeometry, rng, samples: int = 25, h: float = 1e-5) -> float:
    """The one-form identity behind the field definition, via stencils.

    Checks Omega(H_w, xi) = H_w<theta, xi> - xi<theta, H_w> - <theta,[H_w, xi]>
    for constant chart fields xi.
    """
    spec = geom.spec
    worst = 0.0
    for _ in range(samples):
        a = rng.standard_normal(3)
        w = moment_hamiltonian(spec, a)
        pt = _random_point(rng)
        xi = rng.standard_normal(2)

        def theta_pair(point: ChartPoint, vec) -> complex:
            return complex(np.dot(kahler_potential_at(geom, point), vec))

        def field_at(point: ChartPoint) -> np.ndarray:
            return hamiltonian_field(geom, w, point)

        hw = field_at(pt)

        def shift(point: ChartPoint, direction, step) -> ChartPoint:
            return ChartPoint(point.chart, point.z + step * (direction[0] + 1j * direction[1]))

        # <theta, H_w> is a function of the point through both factors.
        def theta_dot_field(point: ChartPoint) -> complex:
            return theta_pair(point, field_at(point))

        d_hw = (theta_pair(shift(pt, hw, h), xi) - theta_pair(shift(pt, hw, -h), xi)) / (2 * h)
        d_xi = (theta_dot_field(shift(pt, xi, h)) - theta_dot_field(shift(pt, xi, -h))) / (2 * h)
        # [H_w, xi] = -(D H_w) xi for constant xi, by stencil on the field.
        jac_xi = (field_at(shift(pt, xi, h)) - field_at(shift(pt, xi, -h))) / (2 * h)
        commutator = -jac_xi
        lhs = symplectic_form_at(geom, pt, hw, xi)
        rhs = d_hw - d_xi - theta_pair(pt, commutator)
        worst = max(worst, abs(lhs - rhs))
    return worst


def _curl_vs_form_residual(geom: OrbitGeometry, rng, samples: int = 100, h: float = 1e-5) -> float:
    worst = 0.0
    for _ in range(samples):
        pt = _random_point(rng)

        def comp(point: ChartPoint, k: int) -> complex:
            return complex(kahler_potential_at(geom, point)[k])

        z = pt.z
        d_x_theta_y = (comp(ChartPoint(pt.chart, z + h), 1) - comp(ChartPoint(pt.chart, z - h), 1)) / (2 * h)
        d_y_theta_x = (comp(ChartPoint(pt.chart, z + 1j * h), 0) - comp(ChartPoint(pt.chart, z - 1j * h), 0)) / (2 * h)
        curl = d_x_theta_y - d_y_theta_x
        expected = symplectic_form_at(geom, pt, (1.0, 0.0), (0.0, 1.0))
        worst = max(worst, abs(curl - expected))
    return worst


def suite_fiber(scenario: Scenario) -> list[CheckResult]:
    rng = np.random.default_rng(202)
    checks = []

    worst = 0.0
    for two_j in range(0, 11):
        spec = OrbitSpec(two_j)
        basis = build_basis(spec)
        exact = exact_monomial_norms_sq(spec)
        worst = max(worst, float(np.max(np.abs(basis.norms**2 - exact) / exact)))
    checks.append(CheckResult("fiber.gram_oracle", worst, scenario.tolerance("gram")))

    worst_h = 0.0
    worst_s = 0.0
    for two_j in (1, 2, 3, 4):
        spec = OrbitSpec(two_j)
        geom = OrbitGeometry(spec)
        basis = build_basis(spec)
        for _ in range(5):
            a = rng.standard_normal(3)
            a /= np.linalg.norm(a)
            op = prequant_matrix(geom, basis, moment_hamiltonian(spec, a))
            worst_h = max(worst_h, float(np.linalg.norm(op.matrix - op.matrix.conj().T, 2)))
            eig = np.sort(np.linalg.eigvalsh(op.matrix))
            expected = np.arange(-spec.j, spec.j + 1.0)
            worst_s = max(worst_s, float(np.max(np.abs(eig - expected))))
    checks.append(CheckResult("fiber.hermiticity", worst_h, scenario.tolerance("hermiticity")))
    checks.append(CheckResult("fiber.spectrum_no_half_form", worst_s, scenario.tolerance("spectrum")))

    worst = 0.0
    for two_j in (1, 2, 3, 4, 5):
        spec = OrbitSpec(two_j)
        geom = OrbitGeometry(spec)
        basis = build_basis(spec)
        ops = [prequant_matrix(geom, basis, moment_hamiltonian(spec, e)).matrix
               for e in np.eye(3)]
        for _ in range(20):
            a = rng.standard_normal(3)
            b = rng.standard_normal(3)
            oa = np.einsum("k,kij->ij", a, np.array(ops))
            ob = np.einsum("k,kij->ij", b, np.array(ops))
            oc = np.einsum("k,kij->ij", np.cross(a, b), np.array(ops))
            comm = oa @ ob - ob @ oa
            worst = max(worst, float(np.linalg.norm(comm - (-1j) * oc, 2)))
    checks.append(CheckResult("fiber.dirac_condition", worst, scenario.tolerance("dirac")))

    from .su2 import random_su2

    worst_hom = 0.0
    worst_uni = 0.0
    for two_j in (1, 2, 3):
        spec = OrbitSpec(two_j)
        basis = build_basis(spec)
        for _ in range(34):
            g1 = random_su2(rng)
            g2 = random_su2(rng)
            x1 = quantize_transition(spec, basis, g1).matrix
            x2 = quantize_transition(spec, basis, g2).matrix
            x12 = quantize_transition(spec, basis, g1 @ g2).matrix
            worst_hom = max(worst_hom, float(np.linalg.norm(x12 - x1 @ x2, 2)))
            worst_uni = max(worst_uni, float(np.linalg.norm(x1.conj().T @ x1 - np.eye(spec.dim), 2)))
    checks.append(CheckResult("fiber.transition_homomorphism", worst_hom, scenario.tolerance("homomorphism")))
    checks.append(CheckResult("fiber.transition_unitarity", worst_uni, scenario.tolerance("unitarity")))

    spec = OrbitSpec(2)
    geom = OrbitGeometry(spec)
    basis = build_basis(spec)
    moment_res = 0.0
    for a in np.eye(3):
        moment_res = max(moment_res, polarization_residual(geom, basis, moment_hamiltonian(spec, a)))
    checks.append(CheckResult("fiber.polarization_moment", moment_res, scenario.tolerance("polarization")))
    quad_res = polarization_residual(geom, basis, squared_hamiltonian(moment_hamiltonian(spec, [0, 0, 1])))
    ratio = quad_res / max(moment_res, 1e-300)
    checks.append(CheckResult("fiber.polarization_counterexample_ratio", ratio, 1e3, mode="min"))
    return checks


def _gauge_context(two_j: int):
    spec = OrbitSpec(two_j)
    geom = OrbitGeometry(spec)
    basis = build_basis(spec)
    rep = build_rep(spec, basis)
    return spec, geom, basis, rep


def suite_gauge(scenario: Scenario) -> list[CheckResult]:
    rng = np.random.default_rng(303)
    checks = []
    two_j = min(scenario.two_j, 4) or 2

    spec, geom, basis, rep = _gauge_context(two_j)
    checks.append(CheckResult("gauge.rep_commutators", rep.commutator_residual(), 1e-9))

    mono = monopole_model(spec, check=False)
    const = constant_model(spec, check=False)
    pure = pure_gauge_model(spec, check=False)

    checks.append(CheckResult(
        "gauge.data_consistency",
        max(verify_gauge_data(mono, np.random.default_rng(7)),
            verify_gauge_data(pure, np.random.default_rng(8))),
        1e-8,
    ))

    worst_eq = 0.0
    worst_ah = 0.0
    worst_lin = 0.0
    worst_pi = 0.0
    for model in (mono, const):
        for _ in range(20):
            b, v = _sample_state(model, rng)
            a_quad = connection_quadrature(model, geom, basis, b, v)
            a_rep = connection_rep(model, rep, b, v)
            worst_eq = max(worst_eq, float(np.linalg.norm(a_quad - a_rep, 2)))
            worst_ah = max(worst_ah, float(np.linalg.norm(a_quad + a_quad.conj().T, 2)))
            v2 = BaseTangent.of(rng.standard_normal(2), rng.standard_normal(2))
            c1, c2 = rng.standard_normal(2)
            combo = BaseTangent.of(c1 * v.dq + c2 * v2.dq, c1 * v.dp + c2 * v2.dp)
            lin = connection_rep(model, rep, b, combo) - c1 * a_rep - c2 * connection_rep(model, rep, b, v2)
            worst_lin = max(worst_lin, float(np.linalg.norm(lin, 2)))
            vert = BaseTangent.of(np.zeros(2), rng.standard_normal(2))
            shifted = BaseTangent.of(v.dq, v.dp + vert.dp)
            worst_pi = max(worst_pi, float(np.linalg.norm(
                connection_rep(model, rep, b, shifted) - a_rep, 2)))
    checks.append(CheckResult("gauge.connection_equivalence", worst_eq, scenario.tolerance("equivalence")))
    checks.append(CheckResult("gauge.anti_hermiticity", worst_ah, 1e-9))
    checks.append(CheckResult("gauge.linearity", worst_lin, 1e-9))
    checks.append(CheckResult("gauge.vertical_independence", worst_pi, 1e-15))

    worst = 0.0
    for _ in range(10):
        b, v = _sample_state(mono, rng, overlap=True)
        worst = max(worst, gauge_residual(mono, geom, basis, b, v))
    for _ in range(10):
        q = rng.uniform(-1, 1, size=2)
        b = BasePoint("flat", q, np.zeros(2))
        v = BaseTangent.of(rng.standard_normal(2))
        worst = max(worst, gauge_residual(pure, geom, basis, b, v))
    checks.append(CheckResult("gauge.transformation_law", worst, scenario.tolerance("gauge_law")))

    worst = 0.0
    for model in (mono, const):
        for _ in range(10):
            b, v = _sample_state(model, rng)
            f = _random_point(rng)
            xi = rng.standard_normal(2)
            worst = max(worst, lift_orthogonality_residual(model, geom, b, v, f, xi))
    checks.append(CheckResult("gauge.lift_orthogonality", worst, scenario.tolerance("lift_orthogonality")))

    b = BasePoint("gauged", np.array([0.3, -0.2]), np.zeros(2))
    flat_curv = float(np.linalg.norm(
        curvature(pure, rep, b, BaseTangent.of([1, 0]), BaseTangent.of([0, 1])), 2))
    checks.append(CheckResult("gauge.pure_gauge_flatness", flat_curv, 1e-6))

    b = BasePoint("main", np.zeros(2), np.zeros(2))
    noncomm = float(np.linalg.norm(
        curvature(const, rep, b, BaseTangent.of([1, 0]), BaseTangent.of([0, 1])), 2))
    checks.append(CheckResult("gauge.constant_model_curvature", noncomm, 0.1, mode="min"))
    return checks


def _sample_state(model, rng, overlap: bool = False):
    if model.kind == "monopole":
        lo, hi = (np.pi / 3, 2 * np.pi / 3) if overlap else (np.pi / 6, 2 * np.pi / 3)
        theta = rng.uniform(lo, hi)
        phi = rng.uniform(0, 2 * np.pi)
        r = np.tan(theta / 2.0)
        q = np.array([r * np.cos(phi), r * np.sin(phi)])
        chart = "north"
    else:
        q = rng.uniform(-1.0, 1.0, size=2)
        chart = next(iter(model.charts))
    b = BasePoint(chart, q, rng.standard_normal(2))
    v = BaseTangent.of(rng.standard_normal(2), rng.standard_normal(2))
    return b, v


def suite_transport(scenario: Scenario) -> list[CheckResult]:
    rng = np.random.default_rng(404)
    checks = []
    two_j = min(scenario.two_j, 2) or 2
    spec, geom, basis, rep = _gauge_context(two_j)

    triv = trivial_model(spec, check=False)
    const = constant_model(spec, check=False)
    mono = monopole_model(spec, check=False)

    seg = segment_path([0.0, 0.0], [1.0, 0.0])
    res = transport(triv, basis, seg, rep=rep, steps=200)
    idcheck = float(np.linalg.norm(res.unitary - np.eye(spec.dim), 2)) + abs(res.alpha_phase)
    checks.append(CheckResult("transport.trivial_identity", idcheck, 1e-12))

    res = transport(const, basis, seg, rep=rep, steps=2000)
    oracle = matrix_exp(rep.matrices[0])
    checks.append(CheckResult(
        "transport.constant_oracle",
        float(np.linalg.norm(res.unitary - oracle, 2)),
        scenario.tolerance("transport_oracle"),
    ))

    res_y = transport(const, basis, segment_path([0.0, 0.0], [0.0, 1.0]), rep=rep, steps=2000)
    diff = float(np.linalg.norm(res_y.unitary @ res.unitary - res.unitary @ res_y.unitary, 2))
    checks.append(CheckResult("transport.noncommutativity", diff, 0.1, mode="min"))

    loop = phase_circle_path([0.0, 0.0], 0.5)
    res = transport(triv, basis, loop, rep=rep, steps=2000)
    area_err = abs(res.alpha_phase - np.pi * 0.25)
    checks.append(CheckResult("transport.green_phase", area_err + float(
        np.linalg.norm(res.unitary - np.eye(spec.dim), 2)), 1e-8))

    fixed = momentum_circle_path([0.4, -0.1], [0.0, 0.0], 0.7)
    res = transport(const, basis, fixed, rep=rep, steps=500)
    checks.append(CheckResult("transport.vertical_loop", abs(res.alpha_phase) + float(
        np.linalg.norm(res.unitary - np.eye(spec.dim), 2)), 1e-10))

    lat = latitude_path(np.pi / 3.0)
    fwd = transport(mono, basis, lat, rep=rep, steps=2000)
    bwd = transport(mono, basis, reverse_path(lat), rep=rep, steps=2000)
    rev = float(np.linalg.norm(bwd.unitary - fwd.unitary.conj().T, 2))
    checks.append(CheckResult("transport.reversal", rev, 1e-8))
    checks.append(CheckResult("transport.unitarity", fwd.unitarity_deviation, 1e-8))

    from .constants import MONOPOLE_HOLONOMY_SIGN

    strength = 1
    omega = 2.0 * np.pi * (1.0 - np.cos(np.pi / 3.0))
    m_values = np.arange(spec.j, -spec.j - 1.0, -1.0)
    expected = np.exp(1j * MONOPOLE_HOLONOMY_SIGN * strength * m_values * omega)
    hol, _ = wilson_loop(mono, basis, lat, rep=rep, steps=4000)
    law = float(np.max(np.abs(np.diag(hol) - expected)))
    checks.append(CheckResult("transport.monopole_holonomy", law, scenario.tolerance("holonomy")))

    plain = transport(mono, basis, lat, rep=rep, steps=2000)
    switched = transport(mono, basis, lat, rep=rep, steps=2000,
                         forced_switches=[(0.25, "south"), (0.75, "north")])
    checks.append(CheckResult(
        "transport.chart_independence",
        float(np.linalg.norm(plain.unitary - switched.unitary, 2)),
        scenario.tolerance("chart_independence"),
    ))

    quad = transport(mono, basis, lat, source="quad", geom=geom, steps=300)
    repd = transport(mono, basis, lat, rep=rep, steps=300)
    checks.append(CheckResult(
        "transport.source_independence",
        float(np.linalg.norm(quad.unitary - repd.unitary, 2)),
        scenario.tolerance("source_independence"),
    ))

    section = covariant_section_solve(
        triv,
        lambda q: np.exp(1j * q[0]) * np.ones(spec.dim) / np.sqrt(spec.dim),
        np.linspace(-1, 1, 5)[:, None] * np.array([1.0, 0.0]),
        np.linspace(-1, 1, 4)[:, None] * np.array([0.0, 1.0]),
    )
    checks.append(CheckResult("transport.section_constancy", section.residual, scenario.tolerance("section")))

    stored = transport(mono, basis, lat, rep=rep, steps=4000, store=True)
    base_res = covariant_residual_total_space(mono, geom, basis, lat, stored)
    checks.append(CheckResult("transport.total_space_residual", base_res, scenario.tolerance("total_space")))
    corrupted = covariant_residual_total_space(
        mono, geom, basis, lat, stored,
        corruption=lambda t: np.exp(1j * 1e-2 * np.sin(2 * np.pi * t)))
    checks.append(CheckResult(
        "transport.corruption_sensitivity",
        corrupted / max(base_res, 1e-300),
        10.0,
        mode="min",
    ))
    return checks


def run_suite(name: str, scenario: Scenario) -> list[CheckResult]:
    if name not in _SUITES:
        raise FiberquantError(f"unknown suite {name!r}; choose from {_SUITES}")
    if name == "all":
        out = []
        for part in ("orbit", "fiber", "gauge", "transport"):
            out.extend(run_suite(part, scenario))
        return out
    return {
        "orbit": suite_orbit,
        "fiber": suite_fiber,
        "gauge": suite_gauge,
        "transport": suite_transport,
    }[name](scenario)
