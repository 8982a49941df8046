"""Scalar and matrix arithmetic for compact matrix Lie algebras over R, C and H.

Elements are skew-Hermitian square matrices stored with explicit scalar
components: every entry carries four reals (w, x, y, z), of which the real
field uses one and the complex field two.  Keeping quaternion entries native
makes the inner product Re tr(A * conj(B)^T) a literal componentwise dot
product and avoids complex-embedding bookkeeping.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np


class FieldTag(Enum):
    REAL = "real"
    COMPLEX = "complex"
    QUATERNION = "quaternion"


#: number of active scalar components per matrix entry
N_COMPONENTS = {FieldTag.REAL: 1, FieldTag.COMPLEX: 2, FieldTag.QUATERNION: 4}

_SKEW_TOL = 1e-9
_UNITARY_TOL = 1e-10
_CONJ_SIGNS = np.array([1.0, -1.0, -1.0, -1.0])


class DimensionMismatch(ValueError):
    """Operands live in different algebras (field or size disagree)."""


class InvalidElement(ValueError):
    """Matrix data violates a structural invariant (skew-Hermitian, unitary, ...)."""


def qmul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Product of quaternion-component matrices, shapes (..., n, m, 4) x (..., m, p, 4).

    Broadcasts over leading axes, so batched products are supported.
    """
    aw, ax, ay, az = a[..., 0], a[..., 1], a[..., 2], a[..., 3]
    bw, bx, by, bz = b[..., 0], b[..., 1], b[..., 2], b[..., 3]
    m = np.matmul
    return np.stack(
        [
            m(aw, bw) - m(ax, bx) - m(ay, by) - m(az, bz),
            m(aw, bx) + m(ax, bw) + m(ay, bz) - m(az, by),
            m(aw, by) - m(ax, bz) + m(ay, bw) + m(az, bx),
            m(aw, bz) + m(ax, by) - m(ay, bx) + m(az, bw),
        ],
        axis=-1,
    )


def conj_transpose(a: np.ndarray) -> np.ndarray:
    """Conjugate transpose of a quaternion-component matrix (..., n, m, 4)."""
    return np.swapaxes(a, -3, -2) * _CONJ_SIGNS


def comp_bracket(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Commutator a*b - b*a on raw component arrays (batched)."""
    return qmul(a, b) - qmul(b, a)


def comp_norm(a: np.ndarray) -> np.ndarray:
    """Frobenius norm sqrt(Re tr(A conj(A)^T)) of component arrays (batched)."""
    return np.sqrt(np.sum(a * a, axis=(-3, -2, -1)))


@dataclass(frozen=True)
class Quaternion:
    """A quaternion w + xi + yj + zk with real components."""

    w: float
    x: float
    y: float
    z: float

    def __add__(self, other: "Quaternion") -> "Quaternion":
        return Quaternion(self.w + other.w, self.x + other.x, self.y + other.y, self.z + other.z)

    def __sub__(self, other: "Quaternion") -> "Quaternion":
        return Quaternion(self.w - other.w, self.x - other.x, self.y - other.y, self.z - other.z)

    def __mul__(self, other: "Quaternion") -> "Quaternion":
        a, b = self, other
        return Quaternion(
            a.w * b.w - a.x * b.x - a.y * b.y - a.z * b.z,
            a.w * b.x + a.x * b.w + a.y * b.z - a.z * b.y,
            a.w * b.y - a.x * b.z + a.y * b.w + a.z * b.x,
            a.w * b.z + a.x * b.y - a.y * b.x + a.z * b.w,
        )

    def conjugate(self) -> "Quaternion":
        return Quaternion(self.w, -self.x, -self.y, -self.z)

    def __abs__(self) -> float:
        return math.sqrt(self.w**2 + self.x**2 + self.y**2 + self.z**2)

    def components(self) -> tuple[float, float, float, float]:
        return (self.w, self.x, self.y, self.z)


def _freeze(arr: np.ndarray) -> np.ndarray:
    out = np.ascontiguousarray(np.asarray(arr, dtype=np.float64))
    out.flags.writeable = False
    return out


def _check_components(field: FieldTag, comp: np.ndarray) -> None:
    nc = N_COMPONENTS[field]
    if nc < 4 and np.any(comp[..., nc:] != 0.0):
        raise InvalidElement(f"{field.value} matrix has nonzero components beyond index {nc - 1}")


@dataclass(frozen=True)
class AlgElement:
    """A skew-Hermitian n x n matrix over the given field: a tangent vector at e.

    comp has shape (n, n, 4) holding scalar components per entry.
    """

    field: FieldTag
    n: int
    comp: np.ndarray

    def __post_init__(self):
        comp = _freeze(self.comp)
        if comp.shape != (self.n, self.n, 4):
            raise InvalidElement(f"expected shape {(self.n, self.n, 4)}, got {comp.shape}")
        _check_components(self.field, comp)
        scale = max(1.0, float(np.abs(comp).max()))
        if np.abs(comp + conj_transpose(comp)).max() > _SKEW_TOL * scale:
            raise InvalidElement("matrix is not skew-Hermitian")
        object.__setattr__(self, "comp", comp)

    @property
    def flat(self) -> np.ndarray:
        """Row-major component vector; Euclidean dot of flats equals `inner`."""
        return self.comp.ravel()

    def norm(self) -> float:
        return float(np.linalg.norm(self.flat))

    def __add__(self, other: "AlgElement") -> "AlgElement":
        _require_same(self, other)
        return AlgElement(self.field, self.n, self.comp + other.comp)

    def __sub__(self, other: "AlgElement") -> "AlgElement":
        _require_same(self, other)
        return AlgElement(self.field, self.n, self.comp - other.comp)

    def __neg__(self) -> "AlgElement":
        return AlgElement(self.field, self.n, -self.comp)

    def __rmul__(self, c: float) -> "AlgElement":
        return AlgElement(self.field, self.n, float(c) * self.comp)


@dataclass(frozen=True)
class GroupElement:
    """A unitary n x n matrix over the given field (orthogonal / unitary / symplectic)."""

    field: FieldTag
    n: int
    comp: np.ndarray

    def __post_init__(self):
        comp = _freeze(self.comp)
        if comp.shape != (self.n, self.n, 4):
            raise InvalidElement(f"expected shape {(self.n, self.n, 4)}, got {comp.shape}")
        _check_components(self.field, comp)
        resid = qmul(comp, conj_transpose(comp)) - _identity_comp(self.n)
        if np.abs(resid).max() > _UNITARY_TOL:
            raise InvalidElement("matrix is not unitary to 1e-10")
        object.__setattr__(self, "comp", comp)

    def inverse(self) -> "GroupElement":
        return GroupElement(self.field, self.n, conj_transpose(self.comp))

    def __matmul__(self, other: "GroupElement") -> "GroupElement":
        _require_same(self, other)
        return GroupElement(self.field, self.n, qmul(self.comp, other.comp))


def _require_same(a, b) -> None:
    if a.field is not b.field or a.n != b.n:
        raise DimensionMismatch(
            f"mismatched operands: {a.field.value}({a.n}) vs {b.field.value}({b.n})"
        )


def _identity_comp(n: int) -> np.ndarray:
    comp = np.zeros((n, n, 4))
    comp[..., 0] = np.eye(n)
    return comp


def identity(field: FieldTag, n: int) -> GroupElement:
    return GroupElement(field, n, _identity_comp(n))


def zero(field: FieldTag, n: int) -> AlgElement:
    return AlgElement(field, n, np.zeros((n, n, 4)))


def from_flat(field: FieldTag, n: int, v: np.ndarray) -> AlgElement:
    return AlgElement(field, n, np.asarray(v, dtype=np.float64).reshape(n, n, 4))


def bracket(x: AlgElement, y: AlgElement) -> AlgElement:
    """Commutator [X, Y] = XY - YX."""
    _require_same(x, y)
    return AlgElement(x.field, x.n, comp_bracket(x.comp, y.comp))


def inner(x: AlgElement, y: AlgElement) -> float:
    """Bi-invariant inner product Re tr(X * conj(Y)^T)."""
    _require_same(x, y)
    return float(np.dot(x.flat, y.flat))


def group_exp(x: AlgElement, s: float = 1.0) -> GroupElement:
    """exp(s*X) by scaling-and-squaring with a truncated Taylor series.

    Terms are added until their norm falls below 1e-16, well past the 1e-12
    accuracy target for the matrix sizes used here.
    """
    m = float(s) * x.comp
    nrm = comp_norm(m)
    squarings = max(0, int(math.ceil(math.log2(nrm / 0.25))) if nrm > 0.25 else 0)
    m = m / (2.0**squarings)
    result = _identity_comp(x.n)
    term = _identity_comp(x.n)
    for j in range(1, 40):
        term = qmul(term, m) / j
        result = result + term
        if comp_norm(term) < 1e-16:
            break
    for _ in range(squarings):
        result = qmul(result, result)
    return GroupElement(x.field, x.n, result)


def adjoint(g: GroupElement, x: AlgElement) -> AlgElement:
    """Adjoint action Ad_g X = g X g^{-1} (inverse = conjugate transpose)."""
    if g.field is not x.field or g.n != x.n:
        raise DimensionMismatch(
            f"mismatched operands: {g.field.value}({g.n}) vs {x.field.value}({x.n})"
        )
    return AlgElement(x.field, x.n, qmul(qmul(g.comp, x.comp), conj_transpose(g.comp)))


def basis_element(field: FieldTag, n: int, i: int, j: int, c: int) -> AlgElement:
    """Standard skew-Hermitian generator: scalar unit c at entry (i, j).

    For i != j the entry (j, i) receives -conj(unit); for i == j the component
    must be imaginary (c >= 1).  Not normalized: off-diagonal generators have
    norm sqrt(2), diagonal ones norm 1.
    """
    if c >= N_COMPONENTS[field]:
        raise InvalidElement(f"component {c} not available over {field.value}")
    comp = np.zeros((n, n, 4))
    if i == j:
        if c == 0:
            raise InvalidElement("diagonal entries must be imaginary")
        comp[i, i, c] = 1.0
    else:
        comp[i, j, c] = 1.0
        comp[j, i, c] = -1.0 if c == 0 else 1.0
    return AlgElement(field, n, comp)


def full_basis(field: FieldTag, n: int) -> list[AlgElement]:
    """Basis of so(n), u(n) or sp(n) as skew-Hermitian matrices."""
    return block_basis(field, n, range(n))


def block_basis(field: FieldTag, n: int, indices) -> list[AlgElement]:
    """Basis of the subalgebra supported on the given row/column index set."""
    idx = list(indices)
    nc = N_COMPONENTS[field]
    out = []
    for a, i in enumerate(idx):
        for c in range(1, nc):
            out.append(basis_element(field, n, i, i, c))
        for j in idx[a + 1 :]:
            for c in range(nc):
                out.append(basis_element(field, n, i, j, c))
    return out


def random_skew(field: FieldTag, n: int, rng: np.random.Generator) -> AlgElement:
    """Random skew-Hermitian matrix with standard-normal components."""
    raw = rng.standard_normal((n, n, 4))
    raw[..., N_COMPONENTS[field] :] = 0.0
    return AlgElement(field, n, (raw - conj_transpose(raw)) / 2.0)
