"""Multiplicity-free fusion rings: labels, duals, fusion tensor and dimensions."""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from itertools import product
from typing import Iterable, Sequence

import numpy as np

from .errors import AxiomViolation, InconsistentDims, NonConvergence, StructuralError

__all__ = [
    "DEFAULT_TOL",
    "Label",
    "FusionRing",
    "AxiomCheck",
    "ValidationResult",
    "validate_ring",
    "quantum_dims",
    "fuse_count",
]

DEFAULT_TOL = 1e-9


@dataclass(frozen=True)
class Label:
    id: int
    name: str


class FusionRing:
    """Fusion ring with fusion coefficients in {0, 1}.

    ``N[a, b, c] = 1`` means ``c`` occurs in ``a ⊗ b``. Index 0 is the unit.
    The dual map is read off from ``N[a, b, 0]``. Instances are immutable;
    the quantum dimensions are computed on first access.
    """

    def __init__(self, names: Sequence[str], N, dual: Sequence[int] | None = None):
        N = np.array(N, dtype=np.int64)
        rank = len(names)
        if rank < 1:
            raise StructuralError("a fusion ring needs at least the unit label")
        if N.shape != (rank, rank, rank):
            raise StructuralError(f"fusion tensor has shape {N.shape}, expected {(rank,) * 3}")
        if len(set(names)) != rank:
            raise StructuralError("label names must be unique")
        if names[0] != "1":
            raise StructuralError(f"label 0 must be the unit '1', got {names[0]!r}")
        if np.any((N != 0) & (N != 1)):
            bad = tuple(int(i) for i in np.argwhere((N != 0) & (N != 1))[0])
            raise StructuralError(f"fusion multiplicity outside {{0,1}} at {bad}")
        N.setflags(write=False)
        self.N = N
        self.labels = tuple(Label(i, str(n)) for i, n in enumerate(names))
        if dual is None:
            dual = []
            for a in range(rank):
                hits = np.flatnonzero(N[a, :, 0])
                dual.append(int(hits[0]) if len(hits) == 1 else -1)
        elif len(dual) != rank:
            raise StructuralError("dual map length differs from rank")
        self.dual = tuple(int(x) for x in dual)

    @property
    def rank(self) -> int:
        return len(self.labels)

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(l.name for l in self.labels)

    def index(self, name_or_id) -> int:
        if isinstance(name_or_id, (int, np.integer)):
            if not 0 <= int(name_or_id) < self.rank:
                raise KeyError(name_or_id)
            return int(name_or_id)
        for label in self.labels:
            if label.name == name_or_id:
                return label.id
        raise KeyError(name_or_id)

    @classmethod
    def from_triples(cls, names: Sequence[str], triples: Iterable[tuple[int, int, int]], dual=None):
        rank = len(names)
        N = np.zeros((rank, rank, rank), dtype=np.int64)
        for a, b, c in triples:
            N[a, b, c] += 1
        return cls(names, N, dual)

    @cached_property
    def _outcomes(self) -> tuple[tuple[tuple[int, ...], ...], ...]:
        return tuple(tuple(tuple(int(c) for c in np.flatnonzero(row)) for row in plane) for plane in self.N)

    def fuse(self, a: int, b: int) -> tuple[int, ...]:
        return self._outcomes[a][b]

    def triples(self) -> list[tuple[int, int, int]]:
        return [tuple(int(i) for i in t) for t in np.argwhere(self.N)]

    @cached_property
    def _dims(self) -> tuple[np.ndarray, float, float]:
        return _perron_frobenius(self.N)

    @property
    def d(self) -> np.ndarray:
        return self._dims[0]

    @property
    def Dsq(self) -> float:
        return float(np.sum(self.d**2))

    @property
    def D(self) -> float:
        return float(np.sqrt(self.Dsq))

    @property
    def dim_residual(self) -> float:
        return self._dims[1]

    def is_pointed(self, tol: float = DEFAULT_TOL) -> bool:
        return abs(self.Dsq - self.rank) < tol * max(1.0, self.rank)

    def fusion_matrix(self, a: int) -> np.ndarray:
        """``(N_a)_{bc} = N[a, b, c]``."""
        return np.asarray(self.N[a], dtype=float)

    def __repr__(self) -> str:
        return f"FusionRing({list(self.names)})"


def _perron_frobenius(N: np.ndarray, rtol: float = 1e-12, max_iter: int = 100_000):
    """Common Perron-Frobenius eigenvector of all fusion matrices.

    Power iteration runs on the sum of all fusion matrices, which is entrywise
    positive for a fusion ring and hence primitive. Each ``d_a`` is then the
    eigenvalue of ``N_a`` on that positive vector, i.e. its spectral radius.
    """
    rank = N.shape[0]
    if rank == 1:
        return np.ones(1), 0.0, 1.0
    M = N.sum(axis=0).astype(float) + np.eye(rank)
    v = np.ones(rank) / np.sqrt(rank)
    lam = 0.0
    for _ in range(max_iter):
        w = M @ v
        new_lam = float(np.linalg.norm(w))
        w /= new_lam
        if np.linalg.norm(w - v) <= rtol and abs(new_lam - lam) <= rtol * new_lam:
            v = w
            break
        v, lam = w, new_lam
    else:
        raise NonConvergence("power iteration for quantum dimensions did not converge")
    if np.any(v <= 0):
        raise InconsistentDims(residual=float(-v.min()))
    d = v / v[0]
    # Rayleigh quotient on the positive eigenvector gives each spectral radius.
    d = np.array([float(d @ (N[a] @ d)) / float(d @ d) for a in range(rank)])
    lhs = np.outer(d, d)
    rhs = np.einsum("abc,c->ab", N, d)
    residual = float(np.max(np.abs(lhs - rhs)))
    return d, residual, lam


def quantum_dims(ring: FusionRing, tol: float = DEFAULT_TOL) -> tuple[np.ndarray, float]:
    """Quantum dimensions and total dimension ``Dsq = Σ d²``.

    Raises InconsistentDims when the bilinear dimension equations are not met.
    """
    d, residual, _ = ring._dims
    if residual > tol * max(1.0, float(np.max(d)) ** 2):
        rhs = np.einsum("abc,c->ab", ring.N, d)
        a, b = np.unravel_index(np.argmax(np.abs(np.outer(d, d) - rhs)), rhs.shape)
        raise InconsistentDims((int(a), int(b)), residual)
    return d.copy(), ring.Dsq


def fuse_count(ring: FusionRing, a: int, b: int) -> frozenset[int]:
    return frozenset(ring.fuse(a, b))


@dataclass
class AxiomCheck:
    name: str
    passed: bool
    residual: float = 0.0
    worst: tuple | None = None


@dataclass
class ValidationResult:
    checks: list[AxiomCheck] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(c.passed for c in self.checks)

    def failures(self) -> list[AxiomCheck]:
        return [c for c in self.checks if not c.passed]

    def raise_for_failure(self) -> None:
        for c in self.checks:
            if not c.passed:
                raise AxiomViolation(c.name, c.worst, c.residual)

    def __getitem__(self, name: str) -> AxiomCheck:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)


def validate_ring(ring: FusionRing, tol: float = DEFAULT_TOL) -> ValidationResult:
    """Check unit, duality and associativity exactly, dimensions within ``tol``."""
    N = ring.N
    rank = ring.rank
    out = ValidationResult()

    worst = None
    for a, b in product(range(rank), repeat=2):
        expect = int(a == b)
        if N[0, a, b] != expect or N[a, 0, b] != expect:
            worst = (0, a, b)
            break
    out.checks.append(AxiomCheck("fusion unit", worst is None, 0.0 if worst is None else 1.0, worst))

    worst = None
    for a in range(rank):
        da = ring.dual[a]
        ones = np.flatnonzero(N[a, :, 0])
        if da < 0 or len(ones) != 1 or ones[0] != da or ring.dual[da] != a:
            worst = (a,)
            break
    if worst is None and ring.dual[0] != 0:
        worst = (0,)
    out.checks.append(AxiomCheck("duality", worst is None, 0.0 if worst is None else 1.0, worst))

    left = np.einsum("abe,ecd->abcd", N, N)
    right = np.einsum("bcf,afd->abcd", N, N)
    diff = np.abs(left - right)
    worst = tuple(int(i) for i in np.unravel_index(np.argmax(diff), diff.shape)) if diff.max() else None
    out.checks.append(AxiomCheck("associativity", worst is None, float(diff.max()), worst))

    try:
        d, _, _ = ring._dims
        residual = ring.dim_residual
    except (NonConvergence, InconsistentDims):
        out.checks.append(AxiomCheck("dimensions", False, float("inf"), None))
        return out
    rhs = np.einsum("abc,c->ab", N, d)
    err = np.abs(np.outer(d, d) - rhs)
    idx = tuple(int(i) for i in np.unravel_index(np.argmax(err), err.shape))
    ok = residual <= tol * max(1.0, float(np.max(d)) ** 2)
    ok = ok and bool(np.all(d >= 1 - tol)) and abs(d[0] - 1) < tol
    if out["duality"].passed:
        ok = ok and all(abs(d[a] - d[ring.dual[a]]) < tol for a in range(rank))
    out.checks.append(AxiomCheck("dimensions", ok, residual, idx))
    return out
