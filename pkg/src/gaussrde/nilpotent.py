"""Arithmetic in the step-2 nilpotent group over R^d.

A group element is a pair (a, b) of a d-vector and a d x d matrix, thought of
as a path increment together with its iterated integrals.  Elements coming
from actual paths satisfy the geometric constraint Sym(b) = a (x) a / 2; only
the antisymmetric part of b (the signed areas) carries information beyond a.

Orientation convention used throughout the package:

    b[i, j] = integral of (x^i - x^i_start) dx^j  over the increment,

so the group product accumulates the cross term ``left.a (x) right.a``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

GEOMETRIC_TOL = 1e-9


@dataclass(frozen=True)
class G2Element:
    """One step-2 group element: increment vector plus iterated-integral matrix.

    Treated as immutable; operations return new elements and never write to
    the stored arrays.
    """

    level1: np.ndarray
    level2: np.ndarray

    def __post_init__(self):
        a = np.asarray(self.level1, dtype=float)
        b = np.asarray(self.level2, dtype=float)
        if a.ndim != 1:
            raise ValueError(f"level1 must be a vector, got shape {a.shape}")
        if b.shape != (a.size, a.size):
            raise ValueError(
                f"level2 shape {b.shape} inconsistent with level1 of dimension {a.size}"
            )
        object.__setattr__(self, "level1", a)
        object.__setattr__(self, "level2", b)

    @property
    def dim(self) -> int:
        return self.level1.size


@dataclass(frozen=True)
class LogCoordinates:
    """Lie-algebra coordinates: the increment and the antisymmetric area matrix."""

    increment: np.ndarray
    area: np.ndarray


def g2_identity(dim: int) -> G2Element:
    return G2Element(np.zeros(dim), np.zeros((dim, dim)))


def _require_same_dim(g: G2Element, h: G2Element) -> None:
    if g.dim != h.dim:
        raise ValueError(f"dimension mismatch: {g.dim} vs {h.dim}")


def g2_product(g: G2Element, h: G2Element) -> G2Element:
    """Group product (truncated tensor multiplication).

    Concatenating the underlying increments gives level1 additivity and the
    Chen cross term on level 2.  The product of geometric elements is
    geometric.
    """
    _require_same_dim(g, h)
    level1 = g.level1 + h.level1
    level2 = g.level2 + h.level2 + np.outer(g.level1, h.level1)
    return G2Element(level1, level2)


def g2_inverse(g: G2Element) -> G2Element:
    """Group inverse: (-a, -b + a (x) a)."""
    a = g.level1
    return G2Element(-a, -g.level2 + np.outer(a, a))


def g2_increment(g_s: G2Element, g_t: G2Element) -> G2Element:
    """Relative increment g_s^{-1} * g_t between two absolute elements."""
    _require_same_dim(g_s, g_t)
    return g2_product(g2_inverse(g_s), g_t)


def geometricity_residual(g: G2Element) -> float:
    """Max absolute entry of Sym(level2) - level1 (x) level1 / 2.

    Zero (up to rounding) exactly for elements arising from paths.
    """
    a = g.level1
    sym = 0.5 * (g.level2 + g.level2.T)
    return float(np.max(np.abs(sym - 0.5 * np.outer(a, a)))) if a.size else 0.0


def log_map(g: G2Element, tol: float = GEOMETRIC_TOL) -> LogCoordinates:
    """Map a geometric element to (increment, signed-area) coordinates.

    The symmetric part of level2 is redundant for geometric elements; what
    remains is the antisymmetric area matrix b - a (x) a / 2.

    Raises ValueError if the geometric constraint is violated beyond `tol`,
    reporting the worst symmetric-part residual.
    """
    res = geometricity_residual(g)
    if res > tol:
        raise ValueError(
            f"element is not geometric: max symmetric-part residual {res:.3e} "
            f"exceeds tolerance {tol:.1e}"
        )
    a = g.level1
    area = g.level2 - 0.5 * np.outer(a, a)
    area = 0.5 * (area - area.T)  # kill roundoff in the symmetric direction
    return LogCoordinates(increment=a.copy(), area=area)


def homogeneous_norm(g: G2Element) -> float:
    """Dilation-homogeneous norm max(|a|_2, |area|_F^(1/2)).

    Under the dilation a -> lam*a, b -> lam^2*b the value scales exactly by
    lam.  This fixed representative of the (equivalence class of) homogeneous
    norms is used for every p-variation computation in the package.
    """
    a = g.level1
    area = g.level2 - 0.5 * np.outer(a, a)
    area = 0.5 * (area - area.T)
    return max(float(np.linalg.norm(a)), float(np.linalg.norm(area)) ** 0.5)
