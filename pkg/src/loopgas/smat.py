"""S-matrix, Müger center, classification and connected-S Gram spectra."""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from .braided import CategoryData
from .errors import EigenFailure, FastpathMismatch, MembershipDisagreement, StructuralError, Unsupported
from .network import PlanarNetwork, _Evaluator, eval_planar_network
from .ring import DEFAULT_TOL

__all__ = [
    "Classification",
    "SMatrixSuite",
    "GramBlock",
    "GramSpectrum",
    "s_matrix",
    "mueger_membership",
    "classify",
    "product_rule_residual",
    "sum_rule_residual",
    "connected_s_network",
    "gram_connected_s",
    "gram_spectrum",
    "pointed_gram_fastpath",
    "zero_cutoff",
]


class Classification(str, enum.Enum):
    SYMMETRIC = "Symmetric"
    MODULAR = "Modular"
    PROPERLY_PREMODULAR = "ProperlyPremodular"


@dataclass
class SMatrixSuite:
    S: np.ndarray
    mueger: np.ndarray
    classification: Classification
    muegerRank: int
    muegerDsq: float
    tyLike: bool

    @property
    def center(self) -> list[int]:
        return [int(a) for a in np.flatnonzero(self.mueger)]


def _require_braided(data: CategoryData) -> None:
    if data.R is None:
        raise StructuralError(f"{data.name or 'category'} has no R-symbols; S-matrix needs a braiding")


def s_matrix(data: CategoryData) -> np.ndarray:
    """``S[a,b] = (1/D) Σ_x N[a,b̄,x] θ_x/(θ_a θ_b̄) d_x``."""
    _require_braided(data)
    ring = data.ring
    theta, d, dual = data.theta, ring.d, ring.dual
    S = np.zeros((ring.rank, ring.rank), dtype=complex)
    for a in range(ring.rank):
        for b in range(ring.rank):
            bb = dual[b]
            S[a, b] = sum(theta[x] / (theta[a] * theta[bb]) * d[x] for x in ring.fuse(a, bb))
    return S / ring.D


def _transparent(data: CategoryData, a: int, tol: float) -> bool:
    """Double braiding of ``a`` with every object is trivial."""
    for b in range(data.rank):
        for c in data.ring.fuse(a, b):
            if abs(data.R[(b, a, c)] * data.R[(a, b, c)] - 1) > tol:
                return False
    return True


def mueger_membership(data: CategoryData, S: np.ndarray | None = None, tol: float = DEFAULT_TOL) -> np.ndarray:
    """Müger center by the sum rule, cross-checked against direct transparency."""
    _require_braided(data)
    if S is None:
        S = s_matrix(data)
    d, D = data.ring.d, data.ring.D
    sums = S @ d
    by_sum = np.abs(sums - d * D) < tol * D
    by_braid = np.array([_transparent(data, a, tol) for a in range(data.rank)])
    if not np.array_equal(by_sum, by_braid):
        bad = [int(a) for a in np.flatnonzero(by_sum != by_braid)]
        raise MembershipDisagreement(f"sum rule and monodromy disagree on labels {bad}")
    return by_braid


def classify(data: CategoryData, tol: float = DEFAULT_TOL) -> SMatrixSuite:
    S = s_matrix(data)
    mueger = mueger_membership(data, S, tol)
    d = data.ring.d
    rank = data.rank
    m_rank = int(mueger.sum())
    m_dsq = float(np.sum(d[mueger] ** 2))
    if m_rank == rank:
        kind = Classification.SYMMETRIC
    elif m_rank == 1:
        kind = Classification.MODULAR
    else:
        kind = Classification.PROPERLY_PREMODULAR
    ty = False
    if rank == m_rank + 1:
        (x,) = np.flatnonzero(~mueger)
        ty = bool(abs(d[x] - math.sqrt(m_dsq)) < tol)
    return SMatrixSuite(S, mueger, kind, m_rank, m_dsq, ty)


def product_rule_residual(data: CategoryData, S: np.ndarray) -> float:
    """max |(D/d_c) S_ac S_bc − Σ_x N_ab^x S_xc|."""
    d, D, N = data.ring.d, data.ring.D, data.ring.N
    lhs = (D / d)[None, None, :] * S[:, None, :] * S[None, :, :]
    rhs = np.einsum("abx,xc->abc", N, S)
    return float(np.abs(lhs - rhs).max())


def sum_rule_residual(data: CategoryData, S: np.ndarray, mueger: np.ndarray) -> float:
    """max |Σ_b d_b S_ab − [a central] d_a D|, relative to D."""
    d, D = data.ring.d, data.ring.D
    expect = np.where(mueger, d * D, 0.0)
    return float(np.abs(S @ d - expect).max() / D)


def connected_s_network(data: CategoryData, a: int, b: int, x: int, c: int) -> PlanarNetwork:
    """Tetrahedral network for one term of ``(S_c† S_c)[a, b]``.

    Vertices: 0 splits x into a ⊗ b̄, 1 fuses a ⊗ b̄ back to x, 2 fuses ā ⊗ a
    into c, 3 splits c into b̄ ⊗ b.
    """
    bb = data.ring.dual[b]
    edges = [
        (0, x, 1, 0),
        (1, a, 0, 2),
        (2, b, 3, 0),
        (3, a, 2, 1),
        (4, bb, 3, 1),
        (5, c, 2, 3),
    ]
    rotation = {
        0: ((2, 1), (1, 0), (0, 1)),
        1: ((0, 0), (3, 1), (4, 1)),
        2: ((5, 0), (3, 0), (1, 1)),
        3: ((2, 0), (4, 0), (5, 1)),
    }
    return PlanarNetwork(edges, rotation)


def _network_value(data: CategoryData, net: PlanarNetwork, tol: float) -> tuple[complex, bool]:
    """Evaluate; if F-moves were needed, demand agreement over every first edge."""
    ev = _Evaluator(data, len(net.edges) ** 2)
    value = ev.evaluate(net)
    if ev.f_moves == 0:
        return value, False
    for eid in sorted(net.edges):
        alt = eval_planar_network(data, net, first_edge=eid)
        if abs(alt - value) > tol * max(1.0, abs(value)):
            raise Unsupported(
                "connected S-matrix network depends on vertex rotation in this gauge "
                f"({value:.6g} vs {alt:.6g}); planar evaluation is not reliable here"
            )
    return value, True


def charge_index(data: CategoryData, c: int) -> list[int]:
    """Labels a with c ∈ a ⊗ ā."""
    N, dual = data.ring.N, data.ring.dual
    return [a for a in range(data.rank) if N[a, dual[a], c]]


@dataclass
class GramBlock:
    c: int
    index: list[int]
    G: np.ndarray
    eigenvalues: np.ndarray = field(default_factory=lambda: np.zeros(0))
    used_f_moves: bool = False

    @property
    def trace(self) -> float:
        return float(np.trace(self.G).real) if self.G.size else 0.0


@dataclass
class GramSpectrum:
    blocks: list[GramBlock]
    method: str = "planar"

    def __getitem__(self, c: int) -> GramBlock:
        return self.blocks[c]

    @property
    def total_trace(self) -> float:
        return sum(b.trace for b in self.blocks)

    def nonzero(self) -> list[tuple[int, float]]:
        """(c, λ) pairs with λ above the zero cutoff."""
        return [(b.c, float(lam)) for b in self.blocks for lam in b.eigenvalues if lam > 0]


def gram_connected_s(data: CategoryData, suite: SMatrixSuite, c: int, tol: float = DEFAULT_TOL) -> GramBlock:
    """``G_c[a,b] = sqrt(d_c/(d_a d_b)) Σ_{x central} sqrt(d_x) T(a,b,x,c)``."""
    ring = data.ring
    d, N, dual = ring.d, ring.N, ring.dual
    index = charge_index(data, c)
    G = np.zeros((len(index), len(index)), dtype=complex)
    used = False
    for i, a in enumerate(index):
        for j, b in enumerate(index):
            total = 0j
            for x in suite.center:
                if not N[a, dual[b], x]:
                    continue
                value, moved = _network_value(data, connected_s_network(data, a, b, x, c), tol)
                used |= moved
                total += math.sqrt(d[x]) * value
            G[i, j] = math.sqrt(d[c] / (d[a] * d[b])) * total
    return GramBlock(c, index, G, used_f_moves=used)


def zero_cutoff(Dsq: float) -> float:
    return 1e-10 * max(1.0, Dsq)


def _spectrum(block: GramBlock, Dsq: float, tol: float) -> GramBlock:
    G = block.G
    if G.size == 0:
        block.eigenvalues = np.zeros(0)
        return block
    herm = float(np.abs(G - G.conj().T).max())
    if herm > tol * max(1.0, Dsq):
        raise EigenFailure(f"G_{block.c} is not Hermitian (deviation {herm:.3e})")
    try:
        lam = np.linalg.eigvalsh((G + G.conj().T) / 2)
    except np.linalg.LinAlgError as exc:
        raise EigenFailure(str(exc)) from exc
    cut = zero_cutoff(Dsq)
    if lam.min() < -cut:
        raise EigenFailure(f"G_{block.c} has a negative eigenvalue {lam.min():.3e}")
    lam = np.where(lam < cut, 0.0, lam)
    block.eigenvalues = np.sort(lam)[::-1]
    return block


def gram_spectrum(data: CategoryData, suite: SMatrixSuite, tol: float = DEFAULT_TOL) -> GramSpectrum:
    """Spectra of every ``G_c``.

    For a Deligne product whose own network evaluation is gauge-dependent,
    the Gram matrices are assembled as Kronecker products of the factors'.
    """
    Dsq = data.ring.Dsq
    try:
        blocks = [gram_connected_s(data, suite, c, tol) for c in range(data.rank)]
        method = "planar+F" if any(b.used_f_moves for b in blocks) else "planar"
    except Unsupported:
        if data.factors is None:
            raise
        blocks = _product_blocks(data, tol)
        method = "product"
    return GramSpectrum([_spectrum(b, Dsq, tol) for b in blocks], method)


def _product_blocks(data: CategoryData, tol: float) -> list[GramBlock]:
    C1, C2 = data.factors
    g1 = gram_spectrum(C1, classify(C1, tol), tol)
    g2 = gram_spectrum(C2, classify(C2, tol), tol)
    n2 = C2.rank
    blocks = []
    for c in range(data.rank):
        b1, b2 = g1[c // n2], g2[c % n2]
        index = [i * n2 + j for i in b1.index for j in b2.index]
        if index != charge_index(data, c):
            raise StructuralError("product labels are not in factor order")
        blocks.append(GramBlock(c, index, np.kron(b1.G, b2.G)))
    return blocks


def pointed_gram_fastpath(
    data: CategoryData, suite: SMatrixSuite, tol: float = DEFAULT_TOL, generic: GramSpectrum | None = None
) -> GramSpectrum:
    """Closed form for pointed categories, checked against the generic path."""
    ring = data.ring
    if not ring.is_pointed(tol):
        raise Unsupported("pointed fast path needs a pointed category")
    d, N, dual = ring.d, ring.N, ring.dual
    center = suite.center
    blocks = []
    for c in range(ring.rank):
        index = charge_index(data, c)
        G = np.zeros((len(index), len(index)), dtype=complex)
        if c == 0:
            for i, a in enumerate(index):
                for j, b in enumerate(index):
                    G[i, j] = sum(N[a, dual[b], x] * d[x] for x in center)
        blocks.append(_spectrum(GramBlock(c, index, G), ring.Dsq, tol))
    fast = GramSpectrum(blocks, "pointed")
    if generic is None:
        generic = gram_spectrum(data, suite, tol)
    for fb, gb in zip(fast.blocks, generic.blocks):
        if fb.G.shape != gb.G.shape or (fb.G.size and np.abs(fb.G - gb.G).max() > tol * max(1.0, ring.Dsq)):
            raise FastpathMismatch(f"pointed closed form disagrees with network evaluation at c={fb.c}")
    return fast
