"""F- and R-symbol storage and the braided/ribbon axiom checkers.

Conventions: ``F[(a, b, c, d, e, f)]`` is ``F^{abc}_d[e, f]`` with ``e ∈ a⊗b``
and ``f ∈ b⊗c``. ``R[(a, b, c)]`` is ``R^{ab}_c``.
"""
from __future__ import annotations

import weakref
from dataclasses import dataclass, field
from functools import cached_property
from itertools import product
from typing import Iterator, Mapping

import numpy as np

from .errors import AxiomViolation, MissingEntry, NonPhase, StructuralError
from .ring import DEFAULT_TOL, AxiomCheck, FusionRing, ValidationResult, validate_ring

__all__ = [
    "FKey",
    "RKey",
    "Residual",
    "CategoryData",
    "admissible_f_keys",
    "admissible_r_keys",
    "check_f_keys",
    "check_pentagon",
    "check_unit",
    "check_unitarity",
    "check_hexagon",
    "compute_twists",
    "check_ribbon",
    "frobenius_schur",
    "validate_category",
]

FKey = tuple[int, int, int, int, int, int]
RKey = tuple[int, int, int]


@dataclass
class Residual:
    """Worst absolute violation of one family of equations."""

    name: str
    value: float = 0.0
    where: tuple | None = None

    def update(self, value: float, where: tuple) -> None:
        if value > self.value:
            self.value = float(value)
            self.where = where

    def passed(self, tol: float) -> bool:
        return self.value < tol


def _cdiff(x: complex, y: complex) -> float:
    # complex comparisons use the larger of the real and imaginary deviations
    return max(abs(x.real - y.real), abs(x.imag - y.imag))


def admissible_f_keys(ring: FusionRing) -> Iterator[FKey]:
    N = ring.N
    r = range(ring.rank)
    for a, b, c in product(r, repeat=3):
        for e in ring.fuse(a, b):
            for d in ring.fuse(e, c):
                for f in ring.fuse(b, c):
                    if N[a, f, d]:
                        yield (a, b, c, d, e, f)


def admissible_r_keys(ring: FusionRing) -> Iterator[RKey]:
    for a, b, c in ring.triples():
        yield (a, b, c)


# Which entries enter which equation depends only on the fusion rules, so the
# index structures are built once per ring.
_PLANS: "weakref.WeakKeyDictionary[FusionRing, dict]" = weakref.WeakKeyDictionary()


def _key_index(ring: FusionRing) -> tuple[dict, dict]:
    cache = _PLANS.setdefault(ring, {})
    if "keys" not in cache:
        fkeys = {k: i for i, k in enumerate(admissible_f_keys(ring))}
        rkeys = {k: len(fkeys) + i for i, k in enumerate(admissible_r_keys(ring))}
        cache["keys"] = (fkeys, rkeys)
    return cache["keys"]


def check_f_keys(ring: FusionRing, F: Mapping[FKey, complex]) -> None:
    """Every admissible key present, no inadmissible key present."""
    keys, _ = _key_index(ring)
    missing = [k for k in keys if k not in F]
    if missing:
        raise MissingEntry("F", min(missing))
    extra = sorted(set(F) - keys.keys())
    if extra:
        raise StructuralError(f"F entry for inadmissible key {extra[0]}")


class CategoryData:
    """Fusion ring plus F-symbols and optional R-symbols.

    Twists and Frobenius-Schur indicators are derived on first access.
    ``factors`` records the two inputs when the data is a Deligne product.
    """

    def __init__(
        self,
        ring: FusionRing,
        F: Mapping[FKey, complex],
        R: Mapping[RKey, complex] | None = None,
        name: str = "",
        factors: tuple["CategoryData", "CategoryData"] | None = None,
    ):
        self.ring = ring
        self.F = {tuple(int(i) for i in k): complex(v) for k, v in F.items()}
        self.R = None if R is None else {tuple(int(i) for i in k): complex(v) for k, v in R.items()}
        self.name = name
        self.factors = factors
        # set by loaders that validate on ingest; a failed result blocks entropy work
        self.validation = None
        check_f_keys(ring, self.F)
        if self.R is not None:
            _, keys = _key_index(ring)
            missing = [k for k in keys if k not in self.R]
            if missing:
                raise MissingEntry("R", min(missing))
            extra = sorted(set(self.R) - keys.keys())
            if extra:
                raise StructuralError(f"R entry for inadmissible key {extra[0]}")

    @property
    def rank(self) -> int:
        return self.ring.rank

    @property
    def braided(self) -> bool:
        return self.R is not None

    def f(self, a, b, c, d, e, f) -> complex:
        return self.F.get((a, b, c, d, e, f), 0j)

    def r(self, a, b, c) -> complex:
        return self.R.get((a, b, c), 0j)

    def f_block(self, a: int, b: int, c: int, d: int) -> tuple[list[int], list[int], np.ndarray]:
        """The matrix ``F^{abc}_d`` with its row (e) and column (f) labels."""
        rows = [e for e in self.ring.fuse(a, b) if self.ring.N[e, c, d]]
        cols = [f for f in self.ring.fuse(b, c) if self.ring.N[a, f, d]]
        M = np.array([[self.F[(a, b, c, d, e, f)] for f in cols] for e in rows], dtype=complex)
        return rows, cols, M.reshape(len(rows), len(cols))

    @cached_property
    def theta(self) -> np.ndarray:
        return compute_twists(self)

    @cached_property
    def kappa(self) -> np.ndarray:
        return np.array([frobenius_schur(self, a) for a in range(self.rank)])

    def __repr__(self) -> str:
        return f"CategoryData({self.name or list(self.ring.names)!r})"


@dataclass(frozen=True)
class _Plan:
    """Index form of one family of equations ``Π lhs = Σ_terms Π rhs``.

    Indices point into the concatenated vector ``[F values, R values]`` in
    the canonical key order of a ring; ``owner`` maps each rhs term to its
    equation.
    """

    where: np.ndarray
    lhs: np.ndarray
    rhs: np.ndarray
    owner: np.ndarray

    def residual(self, name: str, values: np.ndarray) -> Residual:
        res = Residual(name)
        if not len(self.where):
            return res
        lhs = values[self.lhs].prod(axis=1)
        terms = values[self.rhs].prod(axis=1)
        n = len(self.where)
        rhs = np.bincount(self.owner, terms.real, n) + 1j * np.bincount(self.owner, terms.imag, n)
        err = np.abs(lhs - rhs)
        i = int(np.argmax(err))
        res.update(float(err[i]), tuple(int(v) for v in self.where[i]))
        return res


def _values(data: CategoryData, conjugate_r: bool = False) -> np.ndarray:
    fkeys, rkeys = _key_index(data.ring)
    vals = [data.F[k] for k in fkeys]
    if data.R is not None:
        vals += [data.R[k].conjugate() if conjugate_r else data.R[k] for k in rkeys]
    return np.array(vals, dtype=complex)


def _build_plan(where, lhs, rhs, owner) -> _Plan:
    return _Plan(
        np.array(where, dtype=np.int64).reshape(len(where), -1),
        np.array(lhs, dtype=np.int64).reshape(len(lhs), -1),
        np.array(rhs, dtype=np.int64).reshape(len(rhs), -1),
        np.array(owner, dtype=np.int64),
    )


def _pentagon_plan(ring: FusionRing) -> _Plan:
    cache = _PLANS.setdefault(ring, {})
    if "pentagon" in cache:
        return cache["pentagon"]
    F, _ = _key_index(ring)
    N, fuse = ring.N, ring.fuse
    where, lhs, rhs, owner = [], [], [], []
    for a, b, c, d in product(range(ring.rank), repeat=4):
        for f in fuse(a, b):
            for g in fuse(f, c):
                for e in fuse(g, d):
                    for x in fuse(c, d):
                        if not N[f, x, e]:
                            continue
                        for y in fuse(b, x):
                            if not N[a, y, e]:
                                continue
                            row = len(where)
                            where.append((a, b, c, d, e, f, g, x, y))
                            lhs.append((F[(f, c, d, e, g, x)], F[(a, b, x, e, f, y)]))
                            for z in fuse(b, c):
                                if N[a, z, g] and N[z, d, y]:
                                    rhs.append((F[(a, b, c, g, f, z)], F[(a, z, d, e, g, y)], F[(b, c, d, y, z, x)]))
                                    owner.append(row)
    cache["pentagon"] = plan = _build_plan(where, lhs, rhs, owner)
    return plan


def check_pentagon(data: CategoryData) -> Residual:
    """Multiplicity-free pentagon over all admissible index tuples."""
    return _pentagon_plan(data.ring).residual("pentagon", _values(data))


def check_unit(data: CategoryData) -> Residual:
    """Strict unit: F with a unit among a, b, c equals 1."""
    res = Residual("F unit")
    for k, v in data.F.items():
        if 0 in k[:3]:
            res.update(_cdiff(v, 1.0), k)
    return res


def _unitarity_plan(ring: FusionRing) -> dict:
    """F-blocks grouped by size: ``{k: (labels (n,4), value indices (n,k,k))}``; ragged blocks under -1."""
    cache = _PLANS.setdefault(ring, {})
    if "unitarity" in cache:
        return cache["unitarity"]
    F, _ = _key_index(ring)
    N, fuse = ring.N, ring.fuse
    groups: dict[int, tuple[list, list]] = {}
    for a, b, c, d in product(range(ring.rank), repeat=4):
        rows = [e for e in fuse(a, b) if N[e, c, d]]
        cols = [f for f in fuse(b, c) if N[a, f, d]]
        if not rows and not cols:
            continue
        k = len(rows) if len(rows) == len(cols) else -1
        where, idx = groups.setdefault(k, ([], []))
        where.append((a, b, c, d))
        if k > 0:
            idx.append([[F[(a, b, c, d, e, f)] for f in cols] for e in rows])
    plan = {k: (np.array(w, dtype=np.int64), np.array(i, dtype=np.int64)) for k, (w, i) in groups.items()}
    cache["unitarity"] = plan
    return plan


def check_unitarity(data: CategoryData) -> Residual:
    res = Residual("unitarity")
    plan = _unitarity_plan(data.ring)
    if -1 in plan:
        res.update(float("inf"), tuple(int(v) for v in plan[-1][0][0]))
        return res
    values = _values(data)
    for k, (where, idx) in plan.items():
        M = values[idx]
        err = np.abs(np.einsum("nji,njk->nik", M.conj(), M) - np.eye(k)).max(axis=(1, 2))
        i = int(np.argmax(err))
        res.update(float(err[i]), tuple(int(v) for v in where[i]))
    return res


def check_r_phases(data: CategoryData) -> Residual:
    res = Residual("R unitarity")
    for k, v in (data.R or {}).items():
        res.update(abs(abs(v) - 1.0), k)
    return res


def _hexagon_plan(ring: FusionRing) -> _Plan:
    cache = _PLANS.setdefault(ring, {})
    if "hexagon" in cache:
        return cache["hexagon"]
    F, R = _key_index(ring)
    N, fuse = ring.N, ring.fuse
    where, lhs, rhs, owner = [], [], [], []
    for a, b, c in product(range(ring.rank), repeat=3):
        for e in fuse(a, c):
            for d in fuse(e, b):
                for f in fuse(b, c):
                    if not N[a, f, d]:
                        continue
                    row = len(where)
                    where.append((a, b, c, d, e, f))
                    lhs.append((R[(a, c, e)], F[(a, c, b, d, e, f)], R[(b, c, f)]))
                    for g in fuse(a, b):
                        if N[g, c, d]:
                            rhs.append((F[(c, a, b, d, e, g)], R[(g, c, d)], F[(a, b, c, d, g, f)]))
                            owner.append(row)
    cache["hexagon"] = plan = _build_plan(where, lhs, rhs, owner)
    return plan


def check_hexagon(data: CategoryData) -> tuple[Residual, Residual]:
    """Both hexagons: once with R and once with its complex conjugate."""
    if data.R is None:
        raise StructuralError("hexagon check needs R-symbols")
    plan = _hexagon_plan(data.ring)
    return (
        plan.residual("hexagon", _values(data)),
        plan.residual("hexagon (inverse)", _values(data, conjugate_r=True)),
    )


def compute_twists(data: CategoryData, tol: float = DEFAULT_TOL) -> np.ndarray:
    """``θ_a = (1/d_a) Σ_c d_c R^{aa}_c``; raises NonPhase if not unimodular."""
    if data.R is None:
        raise StructuralError("twists need R-symbols")
    d = data.ring.d
    theta = np.zeros(data.rank, dtype=complex)
    for a in range(data.rank):
        t = sum(d[c] * data.R[(a, a, c)] for c in data.ring.fuse(a, a)) / d[a]
        if abs(abs(t) - 1) > tol:
            raise NonPhase(a, t)
        theta[a] = t
    return theta


def check_ribbon(data: CategoryData) -> Residual:
    theta = data.theta
    res = Residual("ribbon")
    for a, b, c in data.ring.triples():
        mono = data.R[(b, a, c)] * data.R[(a, b, c)]
        res.update(abs(mono - theta[c] / (theta[a] * theta[b])), (a, b, c))
    for a in range(data.rank):
        res.update(abs(theta[a] - theta[data.ring.dual[a]]), (a,))
    return res


def frobenius_schur(data: CategoryData, a: int) -> complex:
    """``κ_a = d_a F^{a ā a}_a[1, 1]``."""
    ab = data.ring.dual[a]
    return complex(data.ring.d[a] * data.F[(a, ab, a, a, 0, 0)])


@dataclass
class CategoryValidation(ValidationResult):
    residuals: dict[str, float] = field(default_factory=dict)


def validate_category(data: CategoryData, tol: float = DEFAULT_TOL) -> CategoryValidation:
    """Run the ring checks and every F/R axiom; collect per-axiom results."""
    out = CategoryValidation(checks=list(validate_ring(data.ring, tol).checks))
    if not out.ok:
        return out

    def add(res: Residual):
        out.checks.append(AxiomCheck(res.name, res.passed(tol), res.value, res.where))
        out.residuals[res.name] = res.value

    add(check_unit(data))
    add(check_unitarity(data))
    add(check_pentagon(data))
    if data.R is None:
        return out
    add(check_r_phases(data))
    for res in check_hexagon(data):
        add(res)
    try:
        data.theta
    except NonPhase as exc:
        out.checks.append(AxiomCheck("twist", False, exc.residual, exc.indices))
        return out
    add(check_ribbon(data))
    kappa = data.kappa
    worst = Residual("Frobenius-Schur")
    for a in range(data.rank):
        worst.update(abs(abs(kappa[a]) - 1), (a,))
        if data.ring.dual[a] == a:
            worst.update(abs(kappa[a].imag), (a,))
    add(worst)
    return out


def require_valid(data: CategoryData, tol: float = DEFAULT_TOL) -> CategoryValidation:
    result = validate_category(data, tol)
    for c in result.checks:
        if not c.passed:
            raise AxiomViolation(c.name, c.worst, c.residual)
    return result
