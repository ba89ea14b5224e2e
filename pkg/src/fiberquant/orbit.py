"""Classical geometry of the fiber: the weight-j sphere in stereographic charts.

The fiber is the sphere of radius j realized with two charts (NORTH and
SOUTH, overlap map z -> 1/z).  The symplectic form, the chart-local
holomorphic-frame potential, Hamiltonian vector fields, the Poisson
bracket and the linear moment functions all live here.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import constants
from .errors import InvalidArgument, PoleNotInOverlap


class Chart(enum.Enum):
    NORTH = "north"
    SOUTH = "south"


# Per-chart signs of the embedding formula
#   embed = j * (2 sx x, 2 sy y, sz (1 - |z|^2)) / (1 + |z|^2).
_EMBED_SIGNS = {
    Chart.NORTH: (1.0, 1.0, 1.0),
    Chart.SOUTH: (1.0, -1.0, -1.0),
}


@dataclass(frozen=True)
class OrbitSpec:
    """Integral weight of the orbit; two_j is twice the spin."""

    two_j: int

    def __post_init__(self):
        if self.two_j < 0:
            raise InvalidArgument(f"two_j must be non-negative, got {self.two_j}")

    @property
    def j(self) -> float:
        return 0.5 * self.two_j

    @property
    def dim(self) -> int:
        """Dimension of the quantum fiber Hilbert space."""
        return self.two_j + 1


@dataclass(frozen=True)
class ChartPoint:
    chart: Chart
    z: complex


@dataclass(frozen=True)
class OrbitGeometry:
    """Orbit plus the frozen convention constants of the symplectic layer."""

    spec: OrbitSpec
    s_omega: int = constants.S_OMEGA
    kahler_scale: float = field(default=0.0)  # filled in __post_init__

    def __post_init__(self):
        object.__setattr__(self, "kahler_scale", float(self.spec.two_j))


@dataclass(frozen=True)
class FiberHamiltonian:
    """Real function on the fiber with a chart gradient (d/dx, d/dy)."""

    value: Callable[[ChartPoint], float]
    chart_gradient: Callable[[ChartPoint], np.ndarray]
    label: str = ""

    @classmethod
    def from_value(cls, value, h: float = constants.FD_STEP_GRADIENT, label: str = ""):
        """Wrap a plain value function, supplying a central-difference gradient."""

        def gradient(pt: ChartPoint) -> np.ndarray:
            z = pt.z
            gx = (value(ChartPoint(pt.chart, z + h)) - value(ChartPoint(pt.chart, z - h))) / (2 * h)
            gy = (value(ChartPoint(pt.chart, z + 1j * h)) - value(ChartPoint(pt.chart, z - 1j * h))) / (2 * h)
            return np.array([gx, gy])

        return cls(value=value, chart_gradient=gradient, label=label)


def embed_point(spec: OrbitSpec, pt: ChartPoint) -> np.ndarray:
    """Embed a chart point on the radius-j sphere in R^3."""
    sx, sy, sz = _EMBED_SIGNS[pt.chart]
    x, y = pt.z.real, pt.z.imag
    rho = 1.0 + x * x + y * y
    j = spec.j
    return np.array([2 * j * sx * x / rho, 2 * j * sy * y / rho, j * sz * (2.0 / rho - 1.0)])


def embed_gradient(spec: OrbitSpec, pt: ChartPoint) -> np.ndarray:
    """d(embed)/d(x, y): array of shape (2, 3)."""
    sx, sy, sz = _EMBED_SIGNS[pt.chart]
    x, y = pt.z.real, pt.z.imag
    rho = 1.0 + x * x + y * y
    j = spec.j
    dx = np.array(
        [
            2 * j * sx * (rho - 2 * x * x) / rho**2,
            -4 * j * sy * x * y / rho**2,
            -4 * j * sz * x / rho**2,
        ]
    )
    dy = np.array(
        [
            -4 * j * sx * x * y / rho**2,
            2 * j * sy * (rho - 2 * y * y) / rho**2,
            -4 * j * sz * y / rho**2,
        ]
    )
    return np.vstack([dx, dy])


def chart_transition(pt: ChartPoint) -> ChartPoint:
    """Switch chart via z -> 1/z; the embedded point is unchanged."""
    if pt.z == 0:
        raise PoleNotInOverlap("z = 0 is not in the chart overlap")
    other = Chart.SOUTH if pt.chart is Chart.NORTH else Chart.NORTH
    return ChartPoint(other, 1.0 / pt.z)


def omega_coefficient(geom: OrbitGeometry, pt: ChartPoint) -> float:
    """Coefficient c(z) with Omega = c(z) dx ^ dy in the active chart."""
    rho = 1.0 + abs(pt.z) ** 2
    return geom.s_omega * 4.0 * geom.spec.j / rho**2


def symplectic_form_at(geom: OrbitGeometry, pt: ChartPoint, u1, u2) -> float:
    """Omega evaluated on two chart tangents (real 2-vectors)."""
    u1 = np.asarray(u1, dtype=float)
    u2 = np.asarray(u2, dtype=float)
    return omega_coefficient(geom, pt) * (u1[0] * u2[1] - u1[1] * u2[0])


def symplectic_area(geom: OrbitGeometry, rule) -> float:
    """Total integral of Omega over the sphere via a (t, phi) rule.

    The chart area element dA = dt dphi / (1+t)^2 combines with the form
    coefficient to the constant integrand j.
    """
    t = rule.t
    rho = 2.0 / (1.0 + t)           # 1 + |z|^2 at the node
    integrand = geom.s_omega * 4.0 * geom.spec.j / rho**2 / (1.0 + t) ** 2
    return float(np.dot(rule.weights, integrand))


def kahler_potential_at(geom: OrbitGeometry, pt: ChartPoint) -> np.ndarray:
    """Holomorphic-frame potential as chart covector components (dx, dy).

    theta = -2ij conj(z) dz / (1 + |z|^2); its (0,1) part vanishes, so
    polarized sections are annihilated by plain d/d(conj z).
    """
    coeff = theta_dz(geom, pt)
    return np.array([coeff, 1j * coeff])


def theta_dz(geom: OrbitGeometry, pt: ChartPoint) -> complex:
    """dz-coefficient of the chart potential."""
    z = pt.z
    return -2.0j * geom.spec.j * np.conj(z) / (1.0 + abs(z) ** 2)


def hamiltonian_field(geom: OrbitGeometry, w: FiberHamiltonian, pt: ChartPoint) -> np.ndarray:
    """The chart tangent H_w defined through Omega(H_w, .) = -dw."""
    if geom.spec.two_j == 0:
        # point orbit: every function is constant, every field vanishes
        return np.zeros(2)
    gx, gy = w.chart_gradient(pt)
    c = omega_coefficient(geom, pt)
    return np.array([-gy / c, gx / c])


def hamiltonian_field_complex(geom: OrbitGeometry, w: FiberHamiltonian, pt: ChartPoint) -> complex:
    """dz-component of H_w (the full real field is h d/dz + conj)."""
    hx, hy = hamiltonian_field(geom, w, pt)
    return complex(hx + 1j * hy)


def moment_hamiltonian(spec: OrbitSpec, a) -> FiberHamiltonian:
    """Linear moment function H_a(f) = a . embed(f), with analytic gradient."""
    a = np.asarray(a, dtype=float)

    def value(pt: ChartPoint) -> float:
        return float(np.dot(a, embed_point(spec, pt)))

    def gradient(pt: ChartPoint) -> np.ndarray:
        return embed_gradient(spec, pt) @ a

    return FiberHamiltonian(value=value, chart_gradient=gradient, label=f"moment{tuple(a)}")


def squared_hamiltonian(w: FiberHamiltonian) -> FiberHamiltonian:
    """w^2 with chain-rule gradient; the standard polarization-breaking probe."""

    def value(pt: ChartPoint) -> float:
        return w.value(pt) ** 2

    def gradient(pt: ChartPoint) -> np.ndarray:
        return 2.0 * w.value(pt) * w.chart_gradient(pt)

    return FiberHamiltonian(value=value, chart_gradient=gradient, label=f"({w.label})^2")


def poisson_bracket(geom: OrbitGeometry, w1: FiberHamiltonian, w2: FiberHamiltonian, pt: ChartPoint) -> float:
    """{w1, w2} = Omega(H_w1, H_w2) under the frozen conventions."""
    h1 = hamiltonian_field(geom, w1, pt)
    h2 = hamiltonian_field(geom, w2, pt)
    return symplectic_form_at(geom, pt, h1, h2)
