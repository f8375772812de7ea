"""Topological entanglement entropy diagnostics for Levin-Wen and Walker-Wang loop gases.

All entropies are in nats.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import product

import numpy as np

from .algebra import (
    AlgebraObject,
    MuegerRelation,
    check_commutative,
    fusion_group,
    mueger_relation,
    require_valid_algebra,
    unit_algebra,
)
from .braided import CategoryData
from .errors import BadParameters, ExplosionGuard, NotCommutative, Unsupported
from .ring import DEFAULT_TOL
from .smat import Classification, GramSpectrum, SMatrixSuite, classify, gram_spectrum
from .trees import DEFAULT_BUDGET

__all__ = [
    "CONJECTURE_TOL",
    "GENERAL_FORM_UNKNOWN",
    "RegionSpec",
    "BoundaryResult",
    "RhoCheck",
    "EntropyReport",
    "entropy_constant",
    "region_entropy",
    "lw_gamma",
    "lw_Gamma",
    "ww_delta",
    "ww_delta_fastpath",
    "ww_boundary",
    "pointed_boundary_rho_check",
    "entropy_report",
]

CONJECTURE_TOL = 1e-8
GENERAL_FORM_UNKNOWN = "general form unknown"


@dataclass(frozen=True)
class RegionSpec:
    """``n`` crossing links, ``b0`` interface components, ``b1`` boundary intersection points."""

    n: int
    b0: int = 1
    b1: int = 0

    def __post_init__(self):
        for name in ("n", "b0", "b1"):
            value = getattr(self, name)
            if not isinstance(value, (int, np.integer)) or value < 0:
                raise BadParameters(f"{name} must be a nonnegative integer, got {value!r}")
        if self.n < 2 * self.b0:
            # the log-sum identity behind the closed form needs two crossings per component
            raise BadParameters(f"need at least two crossing links per interface component, got n={self.n}, b0={self.b0}")


def entropy_constant(data: CategoryData) -> float:
    """``S[C] = log D² − Σ_x d_x² log d_x / D²``."""
    d, Dsq = data.ring.d, data.ring.Dsq
    return math.log(Dsq) - float(np.sum(d**2 * np.log(d))) / Dsq


def region_entropy(data: CategoryData, region: RegionSpec, algebra: AlgebraObject | None = None) -> float:
    value = region.n * entropy_constant(data) - region.b0 * math.log(data.ring.Dsq)
    if algebra is not None:
        value += region.b1 / 2 * math.log(algebra.dA)
    return value


def lw_gamma(data: CategoryData) -> float:
    """Bulk 2D topological entropy, ``log D_Z(C)² = 2 log D²``."""
    return 2 * math.log(data.ring.Dsq)


def lw_Gamma(data: CategoryData, alg: AlgebraObject | None = None, tol: float = DEFAULT_TOL) -> float:
    """Boundary 2D topological entropy, ``log D²`` for every valid algebra."""
    if alg is not None:
        require_valid_algebra(data, alg, tol)
    return math.log(data.ring.Dsq)


def ww_delta(
    data: CategoryData, suite: SMatrixSuite, spectrum: GramSpectrum, tol: float = CONJECTURE_TOL
) -> tuple[float, bool]:
    """``δ = Σ_{c,λ} (λ/D²) log(λ/d_c)`` over nonzero Gram eigenvalues."""
    d, Dsq = data.ring.d, data.ring.Dsq
    delta = sum(lam / Dsq * math.log(lam / d[c]) for c, lam in spectrum.nonzero())
    return delta, abs(delta - math.log(suite.muegerDsq)) < tol


def ww_delta_fastpath(data: CategoryData, suite: SMatrixSuite, tol: float = DEFAULT_TOL) -> tuple[float, str]:
    """Closed-form δ for the cases with a proof; raises Unsupported otherwise."""
    log_m = math.log(suite.muegerDsq)
    if suite.classification is Classification.SYMMETRIC:
        return math.log(data.ring.Dsq), "symmetric"
    if suite.classification is Classification.MODULAR:
        return 0.0, "modular"
    if data.ring.is_pointed(tol):
        return log_m, "pointed"
    if suite.tyLike:
        return log_m, "ty-like"
    if data.factors is not None:
        kinds = {classify(f, tol).classification for f in data.factors}
        if kinds == {Classification.SYMMETRIC, Classification.MODULAR}:
            return log_m, "symmetric-x-modular"
    raise Unsupported("no closed-form case applies; use the spectral δ")


@dataclass
class BoundaryResult:
    algebra: str
    dA: float
    deltaBullet: float | None
    deltaCirc: float | None
    method: str

    @property
    def supported(self) -> bool:
        return self.deltaBullet is not None


def _checked_boundary_algebra(data, alg, tol):
    require_valid_algebra(data, alg, tol)
    ok, worst = check_commutative(data, alg, tol)
    if not ok:
        raise NotCommutative("commutativity", None, worst)


def ww_boundary(data: CategoryData, suite: SMatrixSuite, alg: AlgebraObject, tol: float = DEFAULT_TOL) -> BoundaryResult:
    """Point-like (Δ•) and loop-like (Δ∘) boundary entropies.

    Raises Unsupported for combinations without a known closed form.
    """
    _checked_boundary_algebra(data, alg, tol)
    log_D2 = math.log(data.ring.Dsq)
    log_dA = math.log(alg.dA)
    if alg.support == (0,):
        bullet, method = log_D2, "unit algebra"
    elif suite.classification is Classification.SYMMETRIC:
        bullet, method = log_D2 - log_dA, "symmetric"
    elif data.ring.is_pointed(tol):
        relation = mueger_relation(data, suite, alg)
        if relation is MuegerRelation.TRIVIAL:
            bullet, method = log_D2 - 2 * log_dA, "pointed, trivial Müger intersection"
        elif relation is MuegerRelation.CONTAINED:
            bullet, method = log_D2 - log_dA, "pointed, contained in Müger center"
        else:
            raise Unsupported(f"{GENERAL_FORM_UNKNOWN}: pointed algebra partially inside the Müger center")
    else:
        raise Unsupported(f"{GENERAL_FORM_UNKNOWN}: non-pointed, non-symmetric category with nontrivial algebra")
    return BoundaryResult(alg.name, alg.dA, bullet, bullet + 2 * log_dA - log_D2, method)


@dataclass
class RhoCheck:
    entropy: float
    closed_form: float
    k: int
    normalization: float

    @property
    def residual(self) -> float:
        return abs(self.entropy - self.closed_form)


def pointed_boundary_rho_check(
    data: CategoryData,
    suite: SMatrixSuite,
    alg: AlgebraObject,
    n: int,
    tol: float = DEFAULT_TOL,
    budget: int = DEFAULT_BUDGET,
) -> RhoCheck:
    """Entropy of the explicit pointed-case boundary density matrix vs its closed form.

    Blocks are indexed by leaf labels ``x⃗`` fusing to ``d ∈ A``; within a
    block the rows are ``a ∈ A`` and ``a`` couples to ``a h`` for ``h`` in the
    intersection of A with the Müger center.
    """
    if n < 1:
        raise BadParameters("n must be at least 1")
    _checked_boundary_algebra(data, alg, tol)
    table = fusion_group(data, tol)
    relation = mueger_relation(data, suite, alg)
    if relation is MuegerRelation.OTHER:
        raise Unsupported(f"{GENERAL_FORM_UNKNOWN}: pointed algebra partially inside the Müger center")
    k = 2 if relation is MuegerRelation.TRIVIAL else 1
    rank = data.rank
    if rank**n > budget:
        raise ExplosionGuard(f"{rank}^{n} leaf tuples exceed budget {budget}")
    A = list(alg.support)
    meet = [h for h in A if suite.mueger[h]]
    inv = {g: int(np.flatnonzero(table[g] == 0)[0]) for g in range(rank)}
    Dsq = data.ring.Dsq
    scale = alg.dA**2 * Dsq ** (n - 1)

    blocks = {}
    for dlab in A:
        pos = {a: i for i, a in enumerate(A)}
        M = np.zeros((len(A), len(A)), dtype=complex)
        dinv = inv[dlab]
        for a in A:
            for h in meet:
                ah = int(table[a, h])
                left = alg.mult(a, inv[int(table[a, dlab])], dinv)
                right = alg.mult(ah, inv[int(table[ah, dlab])], dinv)
                M[pos[a], pos[ah]] += left * np.conj(right) / scale
        blocks[dlab] = np.linalg.eigvalsh((M + M.conj().T) / 2)

    multiplicity = {dlab: 0 for dlab in A}
    for xs in product(range(rank), repeat=n):
        total = 0
        for x in xs:
            total = int(table[total, x])
        if total in multiplicity:
            multiplicity[total] += 1

    norm = sum(multiplicity[dl] * float(blocks[dl].sum()) for dl in A)
    H = 0.0
    for dl in A:
        lam = blocks[dl] / norm
        lam = lam[lam > 1e-15]
        H -= multiplicity[dl] * float(np.sum(lam * np.log(lam)))
    closed = n * entropy_constant(data) - math.log(Dsq) + k * math.log(alg.dA)
    return RhoCheck(H, closed, k, norm)


@dataclass
class EntropyReport:
    name: str
    SC: float
    gamma: float
    Gamma: float
    delta: float
    deltaConjecture: float
    conjectureOk: bool
    classification: str
    gram_method: str
    fastpath: tuple[float, str] | None = None
    boundary: list[BoundaryResult | dict] = field(default_factory=list)

    def as_dict(self) -> dict:
        out = {
            "schema": 1,
            "name": self.name,
            "classification": self.classification,
            "SC": self.SC,
            "gamma": self.gamma,
            "Gamma": self.Gamma,
            "delta": self.delta,
            "deltaConjecture": self.deltaConjecture,
            "conjectureOk": self.conjectureOk,
            "gramMethod": self.gram_method,
            "fastpath": None if self.fastpath is None else {"delta": self.fastpath[0], "case": self.fastpath[1]},
            "boundary": [],
        }
        for b in self.boundary:
            if isinstance(b, BoundaryResult):
                out["boundary"].append(
                    {"algebra": b.algebra, "dA": b.dA, "deltaBullet": b.deltaBullet, "deltaCirc": b.deltaCirc,
                     "status": "ok", "method": b.method}
                )
            else:
                out["boundary"].append(b)
        return out


def entropy_report(
    data: CategoryData, algebras: list[AlgebraObject] | None = None, tol: float = DEFAULT_TOL
) -> EntropyReport:
    """Assemble every diagnostic. Unsupported boundary cases are recorded, not raised."""
    if data.validation is not None:
        data.validation.raise_for_failure()
    suite = classify(data, tol)
    spectrum = gram_spectrum(data, suite, tol)
    delta, ok = ww_delta(data, suite, spectrum)
    try:
        fast = ww_delta_fastpath(data, suite, tol)
    except Unsupported:
        fast = None
    report = EntropyReport(
        name=data.name,
        SC=entropy_constant(data),
        gamma=lw_gamma(data),
        Gamma=lw_Gamma(data),
        delta=delta,
        deltaConjecture=math.log(suite.muegerDsq),
        conjectureOk=ok,
        classification=suite.classification.value,
        gram_method=spectrum.method,
        fastpath=fast,
    )
    for alg in algebras if algebras is not None else [unit_algebra(data)]:
        try:
            report.boundary.append(ww_boundary(data, suite, alg, tol))
        except Unsupported as exc:
            report.boundary.append(
                {"algebra": alg.name, "dA": alg.dA, "deltaBullet": None, "deltaCirc": None,
                 "status": GENERAL_FORM_UNKNOWN, "method": str(exc).removeprefix(f"{GENERAL_FORM_UNKNOWN}: ")}
            )
    return report
