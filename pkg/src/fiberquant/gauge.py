"""Bundle layer: base charts, gauge potentials, orbit functions, connections.

A ``GaugeModel`` packages the base manifold (plane or two-chart sphere as
configuration space, with the base phase space T*Q represented by (q, p)
pairs), a per-chart su(2) potential, and the chart transition functions.
The connection on the quantum bundle is assembled two independent ways:

* ``connection_quadrature`` builds i * <e_nu | O(w) e_mu> from the orbit
  function w by quadrature, and
* ``connection_rep`` contracts the potential with the numerically built
  Lie-algebra representation.

Their agreement is the package's central cross-check.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import constants
from .errors import AccuracyFailure, ChartError, ConfigurationError, InvalidArgument
from .fiberq import (
    FiberBasis,
    build_basis,
    polarization_residual,
    prequant_matrix,
    quantize_transition,
)
from .numerics import QuadratureRule
from .orbit import (
    Chart,
    ChartPoint,
    FiberHamiltonian,
    OrbitGeometry,
    OrbitSpec,
    hamiltonian_field,
    moment_hamiltonian,
    theta_dz,
)
from .su2 import TAU, su2_exp

# Chart validity for the sphere base: north keeps colatitude <= 3*pi/4,
# south keeps colatitude >= pi/4 (stereographic radius tan(theta/2)).
_SPHERE_CHART_RADIUS_SQ = float(np.tan(3.0 * np.pi / 8.0) ** 2)


@dataclass(frozen=True)
class BasePoint:
    chart: str
    q: np.ndarray
    p: np.ndarray


@dataclass(frozen=True)
class BaseTangent:
    dq: np.ndarray
    dp: np.ndarray

    @classmethod
    def of(cls, dq, dp=None) -> "BaseTangent":
        dq = np.asarray(dq, dtype=float)
        dp = np.zeros_like(dq) if dp is None else np.asarray(dp, dtype=float)
        return cls(dq=dq, dp=dp)


@dataclass(frozen=True)
class LieAlgebraRep:
    """Anti-Hermitian images of the su(2) generators on the quantum fiber."""

    spec: OrbitSpec
    matrices: np.ndarray  # shape (3, n, n)

    def commutator_residual(self) -> float:
        worst = 0.0
        for a, b, c in ((0, 1, 2), (1, 2, 0), (2, 0, 1)):
            comm = self.matrices[a] @ self.matrices[b] - self.matrices[b] @ self.matrices[a]
            worst = max(worst, float(np.linalg.norm(comm - self.matrices[c], 2)))
        return worst


@dataclass(frozen=True)
class ChartData:
    name: str
    potential: Callable[[np.ndarray], np.ndarray]  # (...,2) -> (...,2,2,2)
    valid: Callable[[np.ndarray], np.ndarray]
    boundary: Callable[[np.ndarray], float] | None = None


@dataclass(frozen=True)
class GaugeModel:
    spec: OrbitSpec
    kind: str
    charts: dict
    transitions: dict = field(default_factory=dict)
    convert_point: dict = field(default_factory=dict)
    push_tangent: dict = field(default_factory=dict)
    push_covector: dict = field(default_factory=dict)
    params: dict = field(default_factory=dict)
    momentum_potential: bool = False

    def chart_data(self, b: BasePoint) -> ChartData:
        if b.chart not in self.charts:
            raise ChartError(f"unknown chart {b.chart!r}")
        data = self.charts[b.chart]
        if not bool(data.valid(b.q)):
            raise ChartError(f"point {b.q} outside chart {b.chart!r}")
        return data

    def other_chart(self, name: str) -> str | None:
        for other in self.charts:
            if other != name and (name, other) in self.transitions:
                return other
        return None

    def to_chart(self, b: BasePoint, target: str) -> BasePoint:
        if target == b.chart:
            return b
        key = (b.chart, target)
        if key not in self.convert_point:
            raise ChartError(f"no conversion {b.chart!r} -> {target!r}")
        q2 = self.convert_point[key](b.q)
        p2 = self.push_covector[key](b.q, b.p)
        return BasePoint(chart=target, q=q2, p=p2)

    def push(self, b: BasePoint, v: BaseTangent, target: str) -> BaseTangent:
        if target == b.chart:
            return v
        key = (b.chart, target)
        dq2 = self.push_tangent[key](b.q, v.dq)
        dp2 = self.push_covector[key](b.q, v.dp)
        return BaseTangent(dq=dq2, dp=dp2)


def alpha_base_pair(b: BasePoint, v: BaseTangent) -> float:
    """Canonical one-form of the base, <p dq, v>; exact."""
    return float(np.dot(b.p, v.dq))


def potential_contraction(model: GaugeModel, b: BasePoint, v: BaseTangent) -> np.ndarray:
    """su(2) element <alpha_pot(q), Pi(v)> in the active chart."""
    data = model.chart_data(b)
    pot = data.potential(b.q)
    return np.einsum("k,kij->ij", v.dq, pot)


def su2_coefficients_batch(xi: np.ndarray) -> np.ndarray:
    """Generator coefficients of batched su(2) elements; shape (..., 3)."""
    return -2.0 * np.einsum("...ij,aji->...a", xi, TAU).real


# The fiber trivialization pairs the potential direction with the moment
# functions through a frozen orientation: generator coefficients
# (c1, c2, c3) map to the moment direction (c1, -c2, -c3).  This is the
# unique choice under which the quadrature connection coincides with the
# representation connection (asserted by the equivalence tests).
_MOMENT_TWIST = np.array([1.0, -1.0, -1.0])


def orbit_direction(model: GaugeModel, b: BasePoint, v: BaseTangent) -> np.ndarray:
    xi = potential_contraction(model, b, v)
    return su2_coefficients_batch(xi) * _MOMENT_TWIST


def orbit_function(model: GaugeModel, b: BasePoint, v: BaseTangent) -> FiberHamiltonian:
    """The fiber Hamiltonian induced by the potential at (b, v)."""
    return moment_hamiltonian(model.spec, orbit_direction(model, b, v))


def horizontal_lift(
    model: GaugeModel,
    geom: OrbitGeometry,
    b: BasePoint,
    v: BaseTangent,
    f: ChartPoint,
) -> tuple[BaseTangent, np.ndarray]:
    """Horizontal lift (v, -H_w) of a base tangent at fiber point f."""
    w = orbit_function(model, b, v)
    return v, -hamiltonian_field(geom, w, f)


def connection_quadrature(
    model: GaugeModel,
    geom: OrbitGeometry,
    basis: FiberBasis,
    b: BasePoint,
    v: BaseTangent,
    rule: QuadratureRule | None = None,
) -> np.ndarray:
    """Connection value i * <e_nu | O(w) e_mu> from the orbit function."""
    w = orbit_function(model, b, v)
    op = prequant_matrix(geom, basis, w, rule)
    a = 1j * op.matrix
    dev = np.linalg.norm(a + a.conj().T, 2)
    if dev > 1e-8:
        raise AccuracyFailure(f"connection value not anti-Hermitian ({dev:.2e})")
    return a


def build_rep(spec: OrbitSpec, basis: FiberBasis, h: float = constants.FD_STEP_REP) -> LieAlgebraRep:
    """rho(tau_a) as the one-parameter derivative of the quantized transitions."""
    mats = []
    for a in range(3):
        unit = np.zeros(3)
        unit[a] = 1.0
        plus = quantize_transition(spec, basis, su2_exp(h * unit)).matrix
        minus = quantize_transition(spec, basis, su2_exp(-h * unit)).matrix
        mats.append((plus - minus) / (2.0 * h))
    return LieAlgebraRep(spec=spec, matrices=np.array(mats))


def connection_rep(model: GaugeModel, rep: LieAlgebraRep, b: BasePoint, v: BaseTangent) -> np.ndarray:
    """Connection value by contracting the potential with the representation."""
    xi = potential_contraction(model, b, v)
    coeffs = su2_coefficients_batch(xi)
    return np.einsum("a,aij->ij", coeffs, rep.matrices)


def connection_rep_batch(model: GaugeModel, rep: LieAlgebraRep, chart: str, q: np.ndarray, dq: np.ndarray) -> np.ndarray:
    """Vectorized connection values along arrays of points/tangents."""
    pot = model.charts[chart].potential(q)
    xi = np.einsum("...k,...kij->...ij", dq, pot)
    coeffs = su2_coefficients_batch(xi)
    return np.einsum("...a,aij->...ij", coeffs, rep.matrices)


def gauge_residual(
    model: GaugeModel,
    geom: OrbitGeometry,
    basis: FiberBasis,
    b: BasePoint,
    v: BaseTangent,
    rule: QuadratureRule | None = None,
    h: float = constants.FD_STEP_GAUGE,
) -> float:
    """Defect of the gauge transformation law across the overlap at b.

    Compares A in the neighbour chart against
    X A X^{-1} + (dX along v) X^{-1} with X the quantized transition.
    """
    data = model.chart_data(b)
    target = model.other_chart(b.chart)
    if target is None:
        raise ChartError(f"chart {b.chart!r} has no registered overlap")
    if not bool(model.charts[target].valid(model.convert_point[(b.chart, target)](b.q))):
        raise ChartError(f"point {b.q} not in the {b.chart!r}/{target!r} overlap")

    a_here = connection_quadrature(model, geom, basis, b, v, rule)
    b_there = model.to_chart(b, target)
    v_there = model.push(b, v, target)
    a_there = connection_quadrature(model, geom, basis, b_there, v_there, rule)

    g_fn = model.transitions[(b.chart, target)]
    x_at = lambda q: quantize_transition(model.spec, basis, g_fn(q)).matrix
    x = x_at(b.q)
    x_inv = x.conj().T
    dx = (x_at(b.q + h * v.dq) - x_at(b.q - h * v.dq)) / (2.0 * h)
    law = x @ a_here @ x_inv + dx @ x_inv
    return float(np.linalg.norm(a_there - law, 2))


def curvature(
    model: GaugeModel,
    rep: LieAlgebraRep,
    b: BasePoint,
    v1: BaseTangent,
    v2: BaseTangent,
    h: float = 1.0e-5,
) -> np.ndarray:
    """Field strength on (v1, v2) by small-displacement stencils.

    Normalized to the small-loop law of the transport ordering: holonomy
    around the (v1, v2) square of side eps is I + eps^2 F + O(eps^3), so
    F = d1 A(v2) - d2 A(v1) + [A(v2), A(v1)].  Vanishes for pure-gauge
    potentials.
    """

    def a_at(q, v):
        return connection_rep(model, rep, BasePoint(b.chart, q, b.p), v)

    d1 = (a_at(b.q + h * v1.dq, v2) - a_at(b.q - h * v1.dq, v2)) / (2.0 * h)
    d2 = (a_at(b.q + h * v2.dq, v1) - a_at(b.q - h * v2.dq, v1)) / (2.0 * h)
    a1 = a_at(b.q, v1)
    a2 = a_at(b.q, v2)
    return d1 - d2 + a2 @ a1 - a1 @ a2


def alpha_total_components(
    model: GaugeModel,
    geom: OrbitGeometry,
    chart: str,
    q: np.ndarray,
    p: np.ndarray,
    z: complex,
) -> np.ndarray:
    """Chart components of the total-space potential at (q, p, z).

    Coordinates are (q1, q2, p1, p2, x, y); the returned covector pairs
    with real tangents in these coordinates.  Base components combine the
    canonical form with the orbit functions of the unit base directions;
    fiber components are the holomorphic-frame potential.
    """
    b = BasePoint(chart, np.asarray(q, dtype=float), np.asarray(p, dtype=float))
    pt = ChartPoint(Chart.NORTH, complex(z))
    out = np.zeros(6, dtype=complex)
    for k in range(2):
        unit = np.zeros(2)
        unit[k] = 1.0
        w_k = orbit_function(model, b, BaseTangent.of(unit))
        out[k] = b.p[k] + w_k.value(pt)
    coeff = theta_dz(geom, pt)
    out[4] = coeff
    out[5] = 1j * coeff
    return out


def lift_orthogonality_residual(
    model: GaugeModel,
    geom: OrbitGeometry,
    b: BasePoint,
    v: BaseTangent,
    f: ChartPoint,
    xi: np.ndarray,
    h: float = constants.FD_STEP_FORM,
) -> float:
    """|Omega_total(lift(v), vertical xi)| by a central-difference stencil.

    The two-form is evaluated on constant coordinate extensions, for which
    d alpha(V1, V2) = D_V1 <alpha, V2> - D_V2 <alpha, V1>.
    """
    _, fiber = horizontal_lift(model, geom, b, v, f)
    lift6 = np.concatenate([v.dq, v.dp, fiber])
    vert6 = np.concatenate([np.zeros(4), np.asarray(xi, dtype=float)])

    base = np.concatenate([b.q, b.p, [f.z.real, f.z.imag]])

    def pairing(coords: np.ndarray, vec: np.ndarray) -> complex:
        alpha = alpha_total_components(
            model, geom, b.chart, coords[0:2], coords[2:4], complex(coords[4], coords[5])
        )
        return complex(np.dot(alpha, vec))

    d1 = (pairing(base + h * lift6, vert6) - pairing(base - h * lift6, vert6)) / (2.0 * h)
    d2 = (pairing(base + h * vert6, lift6) - pairing(base - h * vert6, lift6)) / (2.0 * h)
    return abs(d1 - d2)


def assume_check(
    geom: OrbitGeometry,
    basis: FiberBasis,
    hamiltonians,
    tol: float = 1.0e-6,
) -> float:
    """Enforce the minimal-coupling hypothesis on sampled orbit functions.

    Raises ConfigurationError when any sampled fiber Hamiltonian fails to
    preserve the polarized subspace at the given tolerance.
    """
    worst = 0.0
    for w in hamiltonians:
        res = polarization_residual(geom, basis, w)
        worst = max(worst, res)
        if res > tol:
            raise ConfigurationError(
                f"orbit function {w.label or '<anonymous>'} breaks the polarization "
                f"(residual {res:.2e} > {tol:.1e})"
            )
    return worst


def verify_gauge_data(model: GaugeModel, rng: np.random.Generator, samples: int = 12,
                      h: float = constants.FD_STEP_GAUGE) -> float:
    """Consistency of the chart potentials with the registered transitions.

    Checks alpha_j = g alpha_i g^{-1} + (dg) g^{-1} on sampled overlap
    points; returns the worst absolute defect.
    """
    worst = 0.0
    for (i, j), g_fn in model.transitions.items():
        for _ in range(samples):
            q = _sample_overlap_point(model, i, j, rng)
            if q is None:
                continue
            dq = rng.standard_normal(2)
            b = BasePoint(i, q, np.zeros(2))
            v = BaseTangent.of(dq)
            xi_i = potential_contraction(model, b, v)
            b_j = model.to_chart(b, j)
            v_j = model.push(b, v, j)
            xi_j = potential_contraction(model, b_j, v_j)
            g = g_fn(q)
            dg = (g_fn(q + h * dq) - g_fn(q - h * dq)) / (2.0 * h)
            g_inv = g.conj().T
            law = g @ xi_i @ g_inv + dg @ g_inv
            worst = max(worst, float(np.linalg.norm(xi_j - law, 2)))
    return worst


def _sample_overlap_point(model: GaugeModel, i: str, j: str, rng: np.random.Generator):
    for _ in range(100):
        if model.kind == "monopole":
            theta = rng.uniform(np.pi / 3.0, 2.0 * np.pi / 3.0)
            phi = rng.uniform(0.0, 2.0 * np.pi)
            q = _stereo_north(theta, phi) if i == "north" else _stereo_south(theta, phi)
        else:
            q = rng.uniform(-1.0, 1.0, size=2)
        if bool(model.charts[i].valid(q)):
            q_j = model.convert_point.get((i, j), lambda x: x)(q)
            if bool(model.charts[j].valid(q_j)):
                return q
    return None


# ----------------------------------------------------------------------
# Built-in models
# ----------------------------------------------------------------------

def _always_valid(q: np.ndarray):
    return np.ones(np.shape(q)[:-1], dtype=bool) if np.ndim(q) > 1 else True


def _zero_potential(q: np.ndarray) -> np.ndarray:
    shape = np.shape(q)[:-1] + (2, 2, 2)
    return np.zeros(shape, dtype=complex)


def _model_checks(model: GaugeModel, geom: OrbitGeometry, basis: FiberBasis, seed: int = 11) -> None:
    rng = np.random.default_rng(seed)
    data_defect = verify_gauge_data(model, rng)
    if data_defect > 1e-8:
        raise ConfigurationError(f"chart potentials inconsistent with transitions ({data_defect:.2e})")
    hams = []
    for name in model.charts:
        for _ in range(3):
            q = _sample_overlap_point(model, name, name, rng)
            if q is None:
                q = np.zeros(2)
            b = BasePoint(name, q, np.zeros(2))
            v = BaseTangent.of(rng.standard_normal(2))
            hams.append(orbit_function(model, b, v))
    assume_check(geom, basis, hams)


def trivial_model(spec: OrbitSpec, check: bool = True) -> GaugeModel:
    """Zero potential over the plane, single global chart."""
    model = GaugeModel(
        spec=spec,
        kind="trivial",
        charts={"main": ChartData("main", _zero_potential, _always_valid)},
        params={},
    )
    if check:
        _model_checks(model, OrbitGeometry(spec), build_basis(spec))
    return model


def constant_model(spec: OrbitSpec, coefficients=None, check: bool = True) -> GaugeModel:
    """Constant (generally non-commuting) potential over the plane.

    ``coefficients[k, a]`` multiplies TAU[a] in the dq_k component;
    default is tau_1 dq_1 + tau_2 dq_2.
    """
    if coefficients is None:
        coefficients = np.array([[1.0, 0.0, 0.0], [0.0, 1.0, 0.0]])
    coefficients = np.asarray(coefficients, dtype=float)
    if coefficients.shape != (2, 3):
        raise InvalidArgument(f"coefficients must be shaped (2, 3), got {coefficients.shape}")
    const = np.einsum("ka,aij->kij", coefficients, TAU)

    def potential(q: np.ndarray) -> np.ndarray:
        shape = np.shape(q)[:-1]
        out = np.empty(shape + (2, 2, 2), dtype=complex)
        out[...] = const
        return out

    model = GaugeModel(
        spec=spec,
        kind="constant",
        charts={"main": ChartData("main", potential, _always_valid)},
        params={"coefficients": coefficients.tolist()},
    )
    if check:
        _model_checks(model, OrbitGeometry(spec), build_basis(spec))
    return model


def _stereo_north(theta: float, phi: float) -> np.ndarray:
    r = np.tan(theta / 2.0)
    return np.array([r * np.cos(phi), r * np.sin(phi)])


def _stereo_south(theta: float, phi: float) -> np.ndarray:
    r = 1.0 / np.tan(theta / 2.0)
    return np.array([r * np.cos(phi), -r * np.sin(phi)])


def _sphere_convert(q: np.ndarray) -> np.ndarray:
    zc = q[..., 0] + 1j * q[..., 1]
    wc = 1.0 / zc
    return np.stack([wc.real, wc.imag], axis=-1)


def _sphere_push_tangent(q: np.ndarray, dq: np.ndarray) -> np.ndarray:
    zc = q[..., 0] + 1j * q[..., 1]
    dz = dq[..., 0] + 1j * dq[..., 1]
    dw = -dz / zc**2
    return np.stack([dw.real, dw.imag], axis=-1)


def _sphere_push_covector(q: np.ndarray, p: np.ndarray) -> np.ndarray:
    """Covector components transform by the inverse-transpose Jacobian."""
    zc = q[..., 0] + 1j * q[..., 1]
    # Jacobian of w = 1/z as a real 2x2 block: dw = -dz/z^2 is the
    # conformal map with complex derivative m = -1/z^2, i.e.
    # J = [[Re m, -Im m], [Im m, Re m]]; covectors use J^{-T}.
    m = -1.0 / zc**2
    jac = np.array([[m.real, -m.imag], [m.imag, m.real]])
    return np.linalg.solve(jac.T, p)


def monopole_model(spec: OrbitSpec, strength: int = 1, check: bool = True) -> GaugeModel:
    """Embedded abelian monopole over the sphere, two stereographic charts.

    North potential is strength*(1-cos theta) tau_3 dphi, south potential
    strength*(-1-cos theta) tau_3 dphi; both take the same regular form in
    their own chart coordinate.  The overlap transition winds twice around
    the tau_3 one-parameter subgroup per unit strength, which is exactly
    the integrality condition for a single-valued SU(2) transition.
    """
    if int(strength) != strength or strength == 0:
        raise InvalidArgument(f"monopole strength must be a nonzero integer, got {strength}")
    strength = int(strength)

    def potential(q: np.ndarray) -> np.ndarray:
        u1, u2 = q[..., 0], q[..., 1]
        rho = 1.0 + u1**2 + u2**2
        coeff1 = strength * 2.0 * (-u2) / rho
        coeff2 = strength * 2.0 * u1 / rho
        shape = np.shape(u1)
        out = np.zeros(shape + (2, 2, 2), dtype=complex)
        out[..., 0, :, :] = np.multiply.outer(coeff1, TAU[2])
        out[..., 1, :, :] = np.multiply.outer(coeff2, TAU[2])
        return out

    def valid(q: np.ndarray):
        rsq = q[..., 0] ** 2 + q[..., 1] ** 2
        return rsq <= _SPHERE_CHART_RADIUS_SQ

    def boundary(q: np.ndarray) -> np.ndarray:
        q = np.asarray(q, dtype=float)
        return q[..., 0] ** 2 + q[..., 1] ** 2 - _SPHERE_CHART_RADIUS_SQ

    def transition(q: np.ndarray) -> np.ndarray:
        phi = np.arctan2(q[1], q[0])
        return su2_exp(np.array([0.0, 0.0, -2.0 * strength * phi]))

    charts = {
        "north": ChartData("north", potential, valid, boundary),
        "south": ChartData("south", potential, valid, boundary),
    }
    model = GaugeModel(
        spec=spec,
        kind="monopole",
        charts=charts,
        transitions={("north", "south"): transition, ("south", "north"): transition},
        convert_point={("north", "south"): _sphere_convert, ("south", "north"): _sphere_convert},
        push_tangent={("north", "south"): _sphere_push_tangent, ("south", "north"): _sphere_push_tangent},
        push_covector={("north", "south"): _sphere_push_covector, ("south", "north"): _sphere_push_covector},
        params={"strength": strength},
    )
    if check:
        _model_checks(model, OrbitGeometry(spec), build_basis(spec))
    return model


def pure_gauge_model(spec: OrbitSpec, rates=(0.7, 1.1), check: bool = True) -> GaugeModel:
    """Zero potential presented in two gauges over the plane.

    The "flat" chart carries the zero potential; the "gauged" chart
    carries (dg) g^{-1} for g(q) = exp(r1 q1 tau_1) exp(r2 q2 tau_2); the
    transition between them is g itself.  Flat curvature and the gauge
    law are exact properties of this model.
    """
    r1, r2 = float(rates[0]), float(rates[1])

    def gauge(q: np.ndarray) -> np.ndarray:
        return su2_exp(np.array([r1 * q[0], 0.0, 0.0])) @ su2_exp(np.array([0.0, r2 * q[1], 0.0]))

    def potential(q: np.ndarray) -> np.ndarray:
        q = np.asarray(q, dtype=float)
        if q.ndim == 1:
            a_half = su2_exp(np.array([r1 * q[0], 0.0, 0.0]))
            out = np.zeros((2, 2, 2), dtype=complex)
            out[0] = r1 * TAU[0]
            out[1] = r2 * (a_half @ TAU[1] @ a_half.conj().T)
            return out
        flat = q.reshape(-1, 2)
        out = np.zeros((flat.shape[0], 2, 2, 2), dtype=complex)
        for idx, qq in enumerate(flat):
            a_half = su2_exp(np.array([r1 * qq[0], 0.0, 0.0]))
            out[idx, 0] = r1 * TAU[0]
            out[idx, 1] = r2 * (a_half @ TAU[1] @ a_half.conj().T)
        return out.reshape(q.shape[:-1] + (2, 2, 2))

    identity = lambda q: np.asarray(q, dtype=float)
    ident_cov = lambda q, p: np.asarray(p, dtype=float)

    model = GaugeModel(
        spec=spec,
        kind="pure_gauge",
        charts={
            "flat": ChartData("flat", _zero_potential, _always_valid),
            "gauged": ChartData("gauged", potential, _always_valid),
        },
        transitions={
            ("flat", "gauged"): gauge,
            ("gauged", "flat"): lambda q: gauge(q).conj().T,
        },
        convert_point={("flat", "gauged"): identity, ("gauged", "flat"): identity},
        push_tangent={("flat", "gauged"): lambda q, dq: dq, ("gauged", "flat"): lambda q, dq: dq},
        push_covector={("flat", "gauged"): ident_cov, ("gauged", "flat"): ident_cov},
        params={"rates": [r1, r2]},
    )
    if check:
        _model_checks(model, OrbitGeometry(spec), build_basis(spec))
    return model
