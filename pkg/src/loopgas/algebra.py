"""Frobenius algebra objects: validation, commutativity and pointed enumeration."""
from __future__ import annotations

import cmath
import enum
import math
from dataclasses import dataclass, field
from itertools import product
from typing import Mapping, Sequence

import numpy as np
from sympy import Matrix, ZZ
from sympy.matrices.normalforms import smith_normal_decomp

from .braided import CategoryData
from .errors import InvalidAlgebra, StructuralError, Unsupported
from .ring import DEFAULT_TOL, AxiomCheck, ValidationResult
from .smat import SMatrixSuite

__all__ = [
    "AlgebraObject",
    "MuegerRelation",
    "unit_algebra",
    "validate_algebra",
    "require_valid_algebra",
    "check_commutative",
    "mueger_relation",
    "fusion_group",
    "subgroups",
    "enumerate_algebras_pointed",
]


@dataclass
class AlgebraObject:
    """Multiplicity-free algebra ``A = ⊕_{a ∈ support} a`` with unit η = 1."""

    support: tuple[int, ...]
    m: dict[tuple[int, int, int], complex]
    dA: float
    flags: dict[str, bool] = field(default_factory=dict)
    name: str = ""

    @classmethod
    def build(cls, data: CategoryData, support: Sequence[int], m: Mapping, name: str = "") -> "AlgebraObject":
        support = tuple(sorted(set(int(a) for a in support)))
        if 0 not in support:
            raise StructuralError("algebra support must contain the unit")
        if any(not 0 <= a < data.rank for a in support):
            raise StructuralError("algebra support outside the label set")
        N = data.ring.N
        clean = {}
        for k, v in m.items():
            a, b, c = (int(i) for i in k)
            if a not in support or b not in support or c not in support:
                raise StructuralError(f"multiplication key {k} leaves the support")
            if not N[a, b, c]:
                raise StructuralError(f"multiplication key {k} is not an admissible fusion")
            clean[(a, b, c)] = complex(v)
        dA = float(sum(data.ring.d[a] for a in support))
        return cls(support, clean, dA, name=name)

    def mult(self, a: int, b: int, c: int) -> complex:
        return self.m.get((a, b, c), 0j)


def unit_algebra(data: CategoryData) -> AlgebraObject:
    return AlgebraObject.build(data, (0,), {(0, 0, 0): 1.0}, name="1")


def _triples(data: CategoryData, support):
    N = data.ring.N
    for a, b, c in product(support, repeat=3):
        if N[a, b, c]:
            yield a, b, c


def validate_algebra(data: CategoryData, alg: AlgebraObject, tol: float = DEFAULT_TOL) -> ValidationResult:
    """Associativity, unit, Frobenius pairing and strong separability residuals."""
    ring = data.ring
    N, d, dual = ring.N, ring.d, ring.dual
    A = alg.support
    m = alg.mult
    out = ValidationResult()

    worst, where = 0.0, None
    for a, b, c, dd in product(A, repeat=4):
        for y in A:
            if not (N[b, c, y] and N[a, y, dd]):
                continue
            lhs = m(a, y, dd) * m(b, c, y)
            rhs = 0j
            for x in A:
                if N[a, b, x] and N[x, c, dd]:
                    rhs += m(a, b, x) * m(x, c, dd) * data.F[(a, b, c, dd, x, y)]
            if abs(lhs - rhs) > worst:
                worst, where = abs(lhs - rhs), (a, b, c, dd, y)
    out.checks.append(AxiomCheck("associativity", worst < tol, worst, where))

    worst, where = 0.0, None
    for x in A:
        for k in ((0, x, x), (x, 0, x)):
            err = abs(m(*k) - 1)
            if err > worst:
                worst, where = err, k
    out.checks.append(AxiomCheck("unit", worst < tol, worst, where))

    # Comultiplication is the adjoint, μ^{ab}_c = conj(m_ab^c); the counit
    # pairing ε∘m must then be non-degenerate on every summand.
    worst, where = 0.0, None
    for a in A:
        if dual[a] not in A:
            worst, where = 1.0, (a,)
            break
        gap = max(0.0, 1.0 - abs(m(a, dual[a], 0)))
        if gap > worst:
            worst, where = gap, (a, dual[a], 0)
    out.checks.append(AxiomCheck("Frobenius pairing", worst < tol, worst, where))

    worst, where = 0.0, None
    for a in A:
        s = sum(abs(m(b, c, a)) ** 2 * math.sqrt(d[b] * d[c] / d[a]) for b, c in product(A, repeat=2) if N[b, c, a])
        if abs(s - alg.dA) > worst:
            worst, where = abs(s - alg.dA), (a,)
    out.checks.append(AxiomCheck("strong separability", worst < tol * max(1.0, alg.dA), worst, where))
    alg.flags["valid"] = out.ok
    return out


def require_valid_algebra(data: CategoryData, alg: AlgebraObject, tol: float = DEFAULT_TOL) -> ValidationResult:
    result = validate_algebra(data, alg, tol)
    for c in result.checks:
        if not c.passed:
            raise InvalidAlgebra(c.name, c.worst, c.residual)
    return result


def check_commutative(data: CategoryData, alg: AlgebraObject, tol: float = DEFAULT_TOL) -> tuple[bool, float]:
    """max |R^{ab}_c m_ba^c − m_ab^c| over the support."""
    if data.R is None:
        raise StructuralError("commutativity needs R-symbols")
    worst = 0.0
    for a, b, c in _triples(data, alg.support):
        worst = max(worst, abs(data.R[(a, b, c)] * alg.mult(b, a, c) - alg.mult(a, b, c)))
    ok = worst < tol
    alg.flags["commutative"] = ok
    return ok, worst


class MuegerRelation(str, enum.Enum):
    TRIVIAL = "TrivialIntersection"
    CONTAINED = "FullyContained"
    OTHER = "Other"


def mueger_relation(data: CategoryData, suite: SMatrixSuite, alg: AlgebraObject) -> MuegerRelation:
    meet = {a for a in alg.support if suite.mueger[a]}
    alg.flags["intersectsMuegerTrivially"] = meet == {0}
    alg.flags["containedInMueger"] = meet == set(alg.support)
    if meet == {0}:
        return MuegerRelation.TRIVIAL
    if meet == set(alg.support):
        return MuegerRelation.CONTAINED
    return MuegerRelation.OTHER


def fusion_group(data: CategoryData, tol: float = DEFAULT_TOL) -> np.ndarray:
    """Multiplication table of the fusion group of a pointed category."""
    ring = data.ring
    if not ring.is_pointed(tol):
        raise Unsupported("algebra enumeration is implemented for pointed categories only")
    table = np.zeros((ring.rank, ring.rank), dtype=np.int64)
    for a, b in product(range(ring.rank), repeat=2):
        (c,) = ring.fuse(a, b)
        table[a, b] = c
    return table


def subgroups(table: np.ndarray) -> list[tuple[int, ...]]:
    """All subgroups of a finite group given by its multiplication table."""
    n = table.shape[0]

    def close(gens):
        H = {0} | set(gens)
        frontier = list(H)
        while frontier:
            new = []
            for g in frontier:
                for h in list(H):
                    for k in (int(table[g, h]), int(table[h, g])):
                        if k not in H:
                            H.add(k)
                            new.append(k)
            frontier = new
        return frozenset(H)

    found = {close(())}
    frontier = list(found)
    while frontier:
        new = []
        for H in frontier:
            for g in range(n):
                if g not in H:
                    K = close(tuple(H) + (g,))
                    if K not in found:
                        found.add(K)
                        new.append(K)
        frontier = new
    return sorted((tuple(sorted(H)) for H in found), key=lambda h: (len(h), h))


def _turns(z: complex) -> float:
    return (cmath.phase(z) / (2 * math.pi)) % 1.0


def _solve_twisted_multiplications(data: CategoryData, H: Sequence[int], table, tol: float, order_cap: int):
    """Normalized 2-cochains m on H with δm = F restricted to H.

    Works additively: with ``m = exp(2πi μ)`` the associativity constraint is
    ``μ(a,bc) + μ(b,c) − μ(a,b) − μ(ab,c) ≡ w(a,b,c) (mod 1)``, an integer
    linear system over R/Z solved through its Smith normal form. Only the
    discrete solutions are enumerated; continuous directions are gauge.
    """
    nontriv = [h for h in H if h != 0]
    var = {(a, b): i for i, (a, b) in enumerate(product(nontriv, repeat=2))}
    if not var:
        return [{}]
    rows, rhs = [], []
    for a, b, c in product(nontriv, repeat=3):
        ab, bc = int(table[a, b]), int(table[b, c])
        row = [0] * len(var)
        for key, sign in (((a, bc), 1), ((b, c), 1), ((a, b), -1), ((ab, c), -1)):
            if key in var:
                row[var[key]] += sign
        w = _turns(data.F[(a, b, c, int(table[ab, c]), ab, bc)])
        rows.append(row)
        rhs.append(w)
    A = Matrix(rows)
    D, U, V = smith_normal_decomp(A, domain=ZZ)
    Uw = np.array(U.tolist(), dtype=float) @ np.array(rhs)
    diag = [int(D[i, i]) for i in range(min(D.shape))]
    rank = sum(1 for x in diag if x != 0)
    for i in range(rank, D.shape[0]):
        r = Uw[i] % 1.0
        if min(r, 1 - r) > tol:
            return []
    choices = [range(diag[i]) for i in range(rank)]
    total = 1
    for c in choices:
        total *= len(c)
    if total > order_cap:
        raise Unsupported(f"too many discrete solutions ({total}) on subgroup {tuple(H)}")
    Vf = np.array(V.tolist(), dtype=float)
    solutions = []
    for ks in product(*choices):
        nu = np.zeros(len(var))
        for i, k in enumerate(ks):
            nu[i] = (Uw[i] + k) / diag[i]
        mu = Vf @ nu
        solutions.append({key: cmath.exp(2j * math.pi * mu[i]) for key, i in var.items()})
    return solutions


def _isomorphic(m1, m2, H, tol) -> bool:
    # the ratio is a 2-cocycle; on an abelian group it is a coboundary iff symmetric
    for a, b in product(H, repeat=2):
        r_ab = m1[(a, b)] / m2[(a, b)]
        r_ba = m1[(b, a)] / m2[(b, a)]
        if abs(r_ab - r_ba) > tol:
            return False
    return True


def enumerate_algebras_pointed(data: CategoryData, tol: float = DEFAULT_TOL, order_cap: int = 4096) -> list[AlgebraObject]:
    """All twisted group algebras on subgroups of the fusion group, up to isomorphism."""
    table = fusion_group(data, tol)
    found: list[AlgebraObject] = []
    for H in subgroups(table):
        classes = []
        for sol in _solve_twisted_multiplications(data, H, table, tol, order_cap):
            full = {}
            for a, b in product(H, repeat=2):
                full[(a, b)] = 1 + 0j if 0 in (a, b) else sol[(a, b)]
            if any(_isomorphic(full, other, H, 1e-6) for other in classes):
                continue
            classes.append(full)
            m = {(a, b, int(table[a, b])): v for (a, b), v in full.items()}
            names = "⊕".join(data.ring.names[h] for h in H)
            tag = f"{names}#{len(classes) - 1}" if len(classes) > 1 else names
            alg = AlgebraObject.build(data, H, m, name=tag)
            if not validate_algebra(data, alg, max(tol, 1e-9)).ok:
                continue
            if data.R is not None:
                check_commutative(data, alg, max(tol, 1e-9))
            found.append(alg)
    return found
