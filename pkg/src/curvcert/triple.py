"""Chains k < h < g with orthogonal decompositions m = h - k and p = g - h.

A Triple stores orthonormal bases (under the bi-invariant inner product) for
the three nested algebras plus the derived complements, and provides the
one-parameter deformed metric, its Phi operator, symmetric-pair verification
and stabilizer computations.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from enum import Enum
from typing import Optional, Sequence

import numpy as np

from .algebra import (
    AlgElement,
    FieldTag,
    N_COMPONENTS,
    bracket,
    from_flat,
)

_ORTHO_TOL = 1e-10


class NotInSpan(ValueError):
    """Vector falls outside the subspace it was claimed to live in."""


class DegenerateSpectrum(RuntimeError):
    """Singular-value gap too small to decide a null-space dimension."""


class Part(Enum):
    K = "K"
    M = "M"
    P = "P"
    H = "H"


def _orthonormalize(mat: np.ndarray, drop_tol: float = 1e-10) -> np.ndarray:
    """Modified Gram-Schmidt with one re-orthogonalization pass.

    Rows spanning the same subspace come out orthonormal; near-dependent rows
    are dropped.
    """
    basis: list[np.ndarray] = []
    for v in mat:
        v = np.array(v, dtype=np.float64)
        scale = max(1.0, float(np.linalg.norm(v)))
        for _ in range(2):
            for b in basis:
                v = v - np.dot(v, b) * b
        nrm = float(np.linalg.norm(v))
        if nrm > drop_tol * scale:
            basis.append(v / nrm)
    if not basis:
        return np.zeros((0, mat.shape[1]))
    return np.array(basis)


@dataclass(frozen=True)
class Subspace:
    """An ordered orthonormal basis of a subspace of the flattened algebra."""

    field: FieldTag
    n: int
    mat: np.ndarray  # (dim, n*n*4), orthonormal rows

    def __post_init__(self):
        mat = np.ascontiguousarray(np.asarray(self.mat, dtype=np.float64))
        if mat.ndim != 2 or mat.shape[1] != self.n * self.n * 4:
            raise ValueError(f"basis matrix has wrong shape {mat.shape}")
        if mat.shape[0]:
            gram = mat @ mat.T
            if np.abs(gram - np.eye(mat.shape[0])).max() > _ORTHO_TOL:
                raise ValueError("basis is not orthonormal to 1e-10")
        mat.flags.writeable = False
        object.__setattr__(self, "mat", mat)

    @classmethod
    def from_spanning(cls, elems: Sequence[AlgElement]) -> "Subspace":
        if not elems:
            raise ValueError("cannot infer field/size from an empty spanning set")
        field, n = elems[0].field, elems[0].n
        mat = _orthonormalize(np.array([e.flat for e in elems]))
        return cls(field, n, mat)

    @property
    def dim(self) -> int:
        return self.mat.shape[0]

    def elements(self) -> list[AlgElement]:
        return [from_flat(self.field, self.n, row) for row in self.mat]

    def project_flat(self, v: np.ndarray) -> np.ndarray:
        if self.dim == 0:
            return np.zeros_like(v)
        return (v @ self.mat.T) @ self.mat

    def contains(self, x: AlgElement, tol: float = 1e-8) -> bool:
        v = x.flat
        return float(np.linalg.norm(v - self.project_flat(v))) <= tol * max(1.0, x.norm())


def _empty_subspace(field: FieldTag, n: int) -> Subspace:
    return Subspace(field, n, np.zeros((0, n * n * 4)))


def _complement(big: Subspace, small: Subspace) -> Subspace:
    """Orthonormal basis of big minus the span of small."""
    reduced = big.mat - (big.mat @ small.mat.T) @ small.mat if small.dim else big.mat
    return Subspace(big.field, big.n, _orthonormalize(reduced))


@dataclass(frozen=True)
class DeformParam:
    """Shrinking factor t in (0,1) for the h-directions of the metric."""

    t: float

    def __post_init__(self):
        if not 0.0 < self.t < 1.0:
            raise ValueError(f"t must lie in (0,1), got {self.t}")

    @property
    def lam(self) -> float:
        """Equivalent submersion scaling t/(1-t)."""
        return self.t / (1.0 - self.t)


@dataclass(frozen=True)
class Triple:
    field: FieldTag
    n: int
    g_basis: Subspace
    h_basis: Subspace
    k_basis: Subspace
    m_basis: Subspace
    p_basis: Subspace
    label: str = ""
    base_point: Optional[AlgElement] = None

    @property
    def dims(self) -> dict:
        return {
            "g": self.g_basis.dim,
            "h": self.h_basis.dim,
            "k": self.k_basis.dim,
            "m": self.m_basis.dim,
            "p": self.p_basis.dim,
        }

    def part(self, which: Part) -> Subspace:
        return {
            Part.K: self.k_basis,
            Part.M: self.m_basis,
            Part.P: self.p_basis,
            Part.H: self.h_basis,
        }[which]

    def gk_basis(self) -> Subspace:
        """Orthonormal basis of g minus k (= m + p)."""
        return Subspace(self.field, self.n, np.vstack([self.m_basis.mat, self.p_basis.mat]))


def make_triple(
    g_span: Sequence[AlgElement],
    h_span: Sequence[AlgElement],
    k_span: Sequence[AlgElement],
    label: str = "",
    base_point: Optional[AlgElement] = None,
) -> Triple:
    """Build a Triple from spanning sets, orthonormalizing and validating nesting."""
    g = Subspace.from_spanning(g_span)
    field, n = g.field, g.n
    h = Subspace.from_spanning(h_span) if h_span else _empty_subspace(field, n)
    k = Subspace.from_spanning(k_span) if k_span else _empty_subspace(field, n)
    for name, sub, sup in (("h", h, g), ("k", k, h)):
        for row in sub.mat:
            resid = float(np.linalg.norm(row - sup.project_flat(row)))
            if resid > _ORTHO_TOL:
                raise NotInSpan(f"{name}-basis vector leaves its ambient span (residual {resid:.2e})")
    m = _complement(h, k)
    p = _complement(g, h)
    if m.dim != h.dim - k.dim or p.dim != g.dim - h.dim:
        raise ValueError("derived complement dimensions are inconsistent")
    return Triple(field, n, g, h, k, m, p, label=label, base_point=base_point)


def project(triple: Triple, x: AlgElement, part: Part) -> AlgElement:
    """Orthogonal projection of x onto the named subspace; x must lie in span(g)."""
    v = x.flat
    resid = float(np.linalg.norm(v - triple.g_basis.project_flat(v)))
    if resid > 1e-8 * max(1.0, x.norm()):
        raise NotInSpan(f"element leaves span(g) with residual {resid:.2e}")
    return from_flat(triple.field, triple.n, triple.part(part).project_flat(v))


def phi(triple: Triple, x: AlgElement, d: DeformParam) -> AlgElement:
    """The self-adjoint operator t*X^h + X^p relating g0 to the deformed metric."""
    v = x.flat
    _check_in_g(triple, x)
    out = d.t * triple.h_basis.project_flat(v) + triple.p_basis.project_flat(v)
    return from_flat(triple.field, triple.n, out)


def phi_inv(triple: Triple, x: AlgElement, d: DeformParam) -> AlgElement:
    """Inverse of phi: scales the h-part by 1/t."""
    v = x.flat
    _check_in_g(triple, x)
    out = triple.h_basis.project_flat(v) / d.t + triple.p_basis.project_flat(v)
    return from_flat(triple.field, triple.n, out)


def deformed_inner(triple: Triple, x: AlgElement, y: AlgElement, d: DeformParam) -> float:
    """Deformed metric <X^p, Y^p> + t * <X^h, Y^h>."""
    _check_in_g(triple, x)
    _check_in_g(triple, y)
    xh = triple.h_basis.project_flat(x.flat)
    yh = triple.h_basis.project_flat(y.flat)
    xp = triple.p_basis.project_flat(x.flat)
    yp = triple.p_basis.project_flat(y.flat)
    return float(np.dot(xp, yp) + d.t * np.dot(xh, yh))


def _check_in_g(triple: Triple, x: AlgElement) -> None:
    v = x.flat
    resid = float(np.linalg.norm(v - triple.g_basis.project_flat(v)))
    if resid > 1e-8 * max(1.0, x.norm()):
        raise NotInSpan(f"element leaves span(g) with residual {resid:.2e}")


def is_symmetric_pair(triple: Triple, tol: float = 1e-10) -> bool:
    """Check [p,p] < h and [p,h] < p over all basis pairs."""
    p_elems = triple.p_basis.elements()
    h_elems = triple.h_basis.elements()
    for i, pi in enumerate(p_elems):
        for pj in p_elems[i + 1 :]:
            v = bracket(pi, pj).flat
            if np.linalg.norm(triple.p_basis.project_flat(v)) > tol:
                return False
        for hj in h_elems:
            v = bracket(pi, hj).flat
            if np.linalg.norm(triple.h_basis.project_flat(v)) > tol:
                return False
    return True


def stabilizer_subalgebra(
    h_basis: Subspace,
    a: AlgElement,
    null_tol: float = 1e-9,
    gap: float = 1e3,
) -> Subspace:
    """Orthonormal basis of {Y in span(h): [Y, A] = 0}.

    Computed as the null space of Y -> [Y, A] in the h-basis.  Singular values
    below null_tol count as zero; a spectral gap of at least `gap` between the
    smallest retained and largest discarded value is required, otherwise the
    kernel dimension is ambiguous and we refuse to guess.
    """
    if h_basis.dim == 0:
        return h_basis
    rows = np.array([bracket(e, a).flat for e in h_basis.elements()])
    u, s, _ = np.linalg.svd(rows, full_matrices=True)
    null_mask = s < null_tol
    rank = int(np.count_nonzero(~null_mask))
    if 0 < rank < len(s):
        smallest_kept = s[rank - 1]
        largest_dropped = s[rank]
        if largest_dropped > 0 and smallest_kept / max(largest_dropped, null_tol * 1e-6) < gap:
            raise DegenerateSpectrum(
                f"ambiguous kernel: singular values {smallest_kept:.3e} vs {largest_dropped:.3e}"
            )
    kernel_dim = h_basis.dim - rank
    if kernel_dim == 0:
        return _empty_subspace(h_basis.field, h_basis.n)
    coeffs = u[:, rank:].T  # rows: kernel coordinates in the h-basis
    return Subspace(h_basis.field, h_basis.n, _orthonormalize(coeffs @ h_basis.mat))


def randomly_rebased(triple: Triple, rng: np.random.Generator) -> Triple:
    """Copy of the triple with m and p bases replaced by random orthonormal mixes.

    Downstream verdicts must not depend on the choice of basis inside each
    subspace; this produces equivalent triples for that property.
    """

    def _rotate(sub: Subspace) -> Subspace:
        if sub.dim <= 1:
            return sub
        q, _ = np.linalg.qr(rng.standard_normal((sub.dim, sub.dim)))
        return Subspace(sub.field, sub.n, q @ sub.mat)

    return Triple(
        triple.field,
        triple.n,
        triple.g_basis,
        triple.h_basis,
        triple.k_basis,
        _rotate(triple.m_basis),
        _rotate(triple.p_basis),
        label=triple.label,
        base_point=triple.base_point,
    )


# --- JSON serialization -----------------------------------------------------
#
# Schema (curvcert-triple/1):
#   {"schema": "curvcert-triple/1", "field": "real|complex|quaternion",
#    "n": int, "label": str,
#    "bases": {"g": [matrix, ...], "h": [...], "k": [...]},
#    "base_point": matrix | null}
# where each matrix is a row-major flat list of n*n*c floats, c scalar
# components per entry (1, 2 or 4 by field).  Round trips are bit-faithful.

SCHEMA_TRIPLE = "curvcert-triple/1"


def matrix_to_components(x: AlgElement) -> list[float]:
    nc = N_COMPONENTS[x.field]
    return [float(v) for v in x.comp[:, :, :nc].ravel()]


def matrix_from_components(field: FieldTag, n: int, values: Sequence[float]) -> AlgElement:
    nc = N_COMPONENTS[field]
    arr = np.asarray(values, dtype=np.float64)
    if arr.size != n * n * nc:
        raise ValueError(f"expected {n * n * nc} scalars, got {arr.size}")
    comp = np.zeros((n, n, 4))
    comp[:, :, :nc] = arr.reshape(n, n, nc)
    return AlgElement(field, n, comp)


def triple_to_dict(triple: Triple) -> dict:
    def encode(sub: Subspace) -> list[list[float]]:
        return [matrix_to_components(e) for e in sub.elements()]

    return {
        "schema": SCHEMA_TRIPLE,
        "field": triple.field.value,
        "n": triple.n,
        "label": triple.label,
        "bases": {
            "g": encode(triple.g_basis),
            "h": encode(triple.h_basis),
            "k": encode(triple.k_basis),
        },
        "base_point": matrix_to_components(triple.base_point) if triple.base_point else None,
    }


def triple_from_dict(doc: dict) -> Triple:
    field = FieldTag(doc["field"])
    n = int(doc["n"])

    def decode(rows) -> Subspace:
        if not rows:
            return _empty_subspace(field, n)
        # stored bases are already orthonormal; build directly to stay bit-faithful
        return Subspace(field, n, np.array([matrix_from_components(field, n, r).flat for r in rows]))

    g = decode(doc["bases"]["g"])
    h = decode(doc["bases"]["h"])
    k = decode(doc["bases"]["k"])
    base = doc.get("base_point")
    base_point = matrix_from_components(field, n, base) if base else None
    return Triple(
        field,
        n,
        g,
        h,
        k,
        _complement(h, k),
        _complement(g, h),
        label=doc.get("label", ""),
        base_point=base_point,
    )


def save_triple(triple: Triple, path: str) -> None:
    with open(path, "w") as fh:
        json.dump(triple_to_dict(triple), fh, indent=2)
        fh.write("\n")


def load_triple(path: str) -> Triple:
    with open(path) as fh:
        return triple_from_dict(json.load(fh))
