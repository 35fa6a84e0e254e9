"""Space-time strip geometry, lateral meshes and boundary element spaces."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Callable, Generic, TypeVar

import numpy as np

from .piecewise import PiecewisePoly

__all__ = [
    "Side",
    "ProblemGeometry",
    "LateralMesh",
    "PiecewiseConstant",
    "PiecewiseLinear",
    "Pair",
    "time_slice_count",
    "uniform_mesh",
    "l2_norm_sigma",
]

F = TypeVar("F")


class Side(enum.Enum):
    ZERO = "0"
    ELL = "L"


def time_slice_count(L: float, T: float) -> int:
    """Smallest integer ``n`` with ``T <= n * L``.

    >>> time_slice_count(3.0, 6.0)
    2
    >>> time_slice_count(1.0, 5.5)
    6
    """
    if not (L > 0.0 and T > 0.0):
        raise ValueError(f"L and T must be positive, got L={L}, T={T}")
    n = max(1, math.ceil(T / L))
    # guard ceil against rounding in T / L
    while n > 1 and T <= (n - 1) * L:
        n -= 1
    while T > n * L:
        n += 1
    return n


@dataclass(frozen=True)
class ProblemGeometry:
    """Spatial interval ``(0, L)`` and time horizon ``T``."""

    L: float
    T: float

    def __post_init__(self):
        if not (self.L > 0.0 and self.T > 0.0):
            raise ValueError(f"L and T must be positive, got L={self.L}, T={self.T}")

    @property
    def n(self) -> int:
        """Number of time slices of length ``L`` needed to cover ``(0, T)``."""
        return time_slice_count(self.L, self.T)

    def slices(self) -> list[tuple[float, float]]:
        n = self.n
        return [((j - 1) * self.L, min(j * self.L, self.T)) for j in range(1, n + 1)]


def _freeze(a) -> np.ndarray:
    a = np.array(a, dtype=float)
    a.flags.writeable = False
    return a


@dataclass(frozen=True)
class LateralMesh:
    """Independent time meshes on the sides ``x = 0`` and ``x = L``."""

    geometry: ProblemGeometry
    nodes0: np.ndarray
    nodesL: np.ndarray

    def __post_init__(self):
        T = self.geometry.T
        for name in ("nodes0", "nodesL"):
            nodes = _freeze(getattr(self, name))
            if nodes.ndim != 1 or nodes.size < 2:
                raise ValueError(f"{name} needs at least one element")
            if nodes[0] != 0.0 or not math.isclose(nodes[-1], T, rel_tol=1e-14):
                raise ValueError(f"{name} must start at 0 and end at T={T}")
            if np.any(np.diff(nodes) <= 0.0):
                raise ValueError(f"{name} must be strictly increasing")
            object.__setattr__(self, name, nodes)

    def nodes(self, side: Side) -> np.ndarray:
        return self.nodes0 if side is Side.ZERO else self.nodesL

    @property
    def N0(self) -> int:
        return self.nodes0.size - 1

    @property
    def NL(self) -> int:
        return self.nodesL.size - 1

    @property
    def ndof(self) -> int:
        return self.N0 + self.NL

    @property
    def h(self) -> float:
        return float(max(np.diff(self.nodes0).max(), np.diff(self.nodesL).max()))

    def elements(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Global element table in dof order (side 0 first).

        Returns left ends, right ends and a boolean array that is ``True``
        for elements on the side ``x = L``.
        """
        a = np.concatenate([self.nodes0[:-1], self.nodesL[:-1]])
        b = np.concatenate([self.nodes0[1:], self.nodesL[1:]])
        on_ell = np.concatenate([np.zeros(self.N0, bool), np.ones(self.NL, bool)])
        return a, b, on_ell

    def refined(self) -> "LateralMesh":
        """Uniform bisection of every element on both sides."""

        def bisect(nodes):
            mids = 0.5 * (nodes[:-1] + nodes[1:])
            out = np.empty(2 * nodes.size - 1)
            out[0::2] = nodes
            out[1::2] = mids
            return out

        return LateralMesh(self.geometry, bisect(self.nodes0), bisect(self.nodesL))


def uniform_mesh(geometry: ProblemGeometry, N0: int, NL: int | None = None) -> LateralMesh:
    """Uniform meshes with ``N0`` and ``NL`` elements on the two sides."""
    NL = N0 if NL is None else NL
    if N0 < 1 or NL < 1:
        raise ValueError(f"element counts must be >= 1, got N0={N0}, NL={NL}")
    T = geometry.T
    nodes0 = T * np.arange(N0 + 1) / N0
    nodesL = T * np.arange(NL + 1) / NL
    nodes0[-1] = nodesL[-1] = T
    return LateralMesh(geometry, nodes0, nodesL)


class PiecewiseConstant(PiecewisePoly):
    """Element of the piecewise constant space on one side."""

    __slots__ = ("side",)

    def __init__(self, nodes, values, side: Side = Side.ZERO):
        values = np.asarray(values, dtype=float)
        if values.ndim != 1 or values.size != len(nodes) - 1:
            raise ValueError("one value per element is required")
        super().__init__(nodes, values[:, None])
        self.side = side

    @property
    def values(self) -> np.ndarray:
        return self.coeffs[:, 0]

    @classmethod
    def from_function(cls, nodes, f: Callable, side: Side = Side.ZERO) -> "PiecewiseConstant":
        """Element-midpoint sampling of ``f``."""
        nodes = np.asarray(nodes, dtype=float)
        return cls(nodes, f(0.5 * (nodes[:-1] + nodes[1:])), side)


class PiecewiseLinear(PiecewisePoly):
    """Continuous piecewise linear function given by nodal values."""

    __slots__ = ("side", "zero_at_start")

    def __init__(self, nodes, nodal_values, side: Side = Side.ZERO, zero_at_start: bool = True):
        nodes = np.asarray(nodes, dtype=float)
        v = np.asarray(nodal_values, dtype=float)
        if v.shape != nodes.shape:
            raise ValueError("one value per node is required")
        if zero_at_start and v[0] != 0.0:
            raise ValueError("zero_at_start requires the first nodal value to vanish")
        slopes = np.diff(v) / np.diff(nodes)
        super().__init__(nodes, np.column_stack([v[:-1], slopes]))
        self.side = side
        self.zero_at_start = zero_at_start

    @property
    def nodes(self) -> np.ndarray:
        return self.breaks

    @property
    def nodal_values(self) -> np.ndarray:
        return np.append(self.coeffs[:, 0], self.right_values()[-1])

    @classmethod
    def from_poly(cls, p: PiecewisePoly, side: Side = Side.ZERO, atol: float = 1e-12) -> "PiecewiseLinear":
        """Convert a continuous piecewise polynomial of degree <= 1."""
        if p.degree > 1 and np.max(np.abs(p.coeffs[:, 2:])) > 0.0:
            raise ValueError("polynomial degree exceeds 1")
        left = p.left_values()
        right = p.right_values()
        scale = max(1.0, float(np.max(np.abs(left))))
        if np.any(np.abs(left[1:] - right[:-1]) > atol * scale):
            raise ValueError("function is not continuous")
        v = np.append(left, right[-1])
        zero_start = abs(v[0]) <= atol * scale
        if zero_start:
            v[0] = 0.0
        return cls(p.breaks, v, side, zero_at_start=zero_start)


@dataclass(frozen=True)
class Pair(Generic[F]):
    """A function on the lateral boundary: components at x = 0 and x = L."""

    comp0: F
    compL: F

    def __iter__(self):
        yield self.comp0
        yield self.compL

    def map(self, fn: Callable[[F], object]) -> "Pair":
        return Pair(fn(self.comp0), fn(self.compL))

    def __getitem__(self, side: Side) -> F:
        return self.comp0 if side is Side.ZERO else self.compL


def l2_norm_sigma(v: Pair) -> float:
    """L2 norm on the lateral boundary (both sides)."""
    return math.sqrt(v.comp0.inner(v.comp0) + v.compL.inner(v.compL))


def density_from_vector(mesh: LateralMesh, x: np.ndarray) -> Pair:
    """Split a global coefficient vector (side 0 first) into a density pair."""
    x = np.asarray(x, dtype=float)
    if x.size != mesh.ndof:
        raise ValueError(f"expected {mesh.ndof} coefficients, got {x.size}")
    return Pair(
        PiecewiseConstant(mesh.nodes0, x[: mesh.N0], Side.ZERO),
        PiecewiseConstant(mesh.nodesL, x[mesh.N0 :], Side.ELL),
    )


__all__.append("density_from_vector")
