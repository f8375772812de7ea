"""Fusion-tree counting and brute-force entropy oracles.

A labeled tree fuses ``x_1, ..., x_n`` left to right through intermediate
labels ``y_2, ..., y_{n-1}`` to the outcome ``a``. Its probability in the
loop-gas ground state is ``Π d_{x_j} / (d_a D^{2(n-1)})``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import product
from typing import Iterator, Sequence

import numpy as np

from .errors import BadParameters, ExplosionGuard
from .ring import FusionRing

__all__ = [
    "DEFAULT_BUDGET",
    "LabeledTree",
    "tree_count",
    "iter_labeled_trees",
    "tree_count_table",
    "check_sum_identity",
    "check_sumlog_identity",
    "region_entropy_oracle",
    "closed_form_entropy",
]

DEFAULT_BUDGET = 10**7


@dataclass(frozen=True)
class LabeledTree:
    x: tuple[int, ...]
    y: tuple[int, ...]
    a: int
    probability: float


def tree_count(ring: FusionRing, xs: Sequence[int], a: int) -> int:
    """``N_a(x⃗)``, the number of fusion trees from ``xs`` to ``a``."""
    if not xs:
        raise BadParameters("need at least one leaf")
    v = np.zeros(ring.rank, dtype=np.int64)
    v[xs[0]] = 1
    for x in xs[1:]:
        v = v @ ring.N[:, x, :]
    return int(v[a])


def iter_labeled_trees(ring: FusionRing, n: int, a: int, budget: int = DEFAULT_BUDGET) -> Iterator[LabeledTree]:
    """Every labeled tree with ``n`` leaves and outcome ``a``, with its probability."""
    _guard(ring, n, budget)
    d, Dsq = ring.d, ring.Dsq
    norm = d[a] * Dsq ** (n - 1)

    def grow(xs, ys, current):
        k = len(xs)
        if k == n:
            if current == a:
                yield LabeledTree(tuple(xs), tuple(ys[1:-1]) if n > 1 else (), a, float(np.prod(d[list(xs)]) / norm))
            return
        for x in range(ring.rank):
            for y in ring.fuse(current, x):
                yield from grow(xs + [x], ys + [y], y)

    for x1 in range(ring.rank):
        yield from grow([x1], [x1], x1)


def _guard(ring: FusionRing, n: int, budget: int) -> None:
    if n < 1:
        raise BadParameters("n must be at least 1")
    if ring.rank**n * ring.rank > budget:
        raise ExplosionGuard(f"rank^n enumeration ({ring.rank}^{n}) exceeds budget {budget}")


def tree_count_table(ring: FusionRing, n: int, budget: int = DEFAULT_BUDGET) -> tuple[np.ndarray, np.ndarray]:
    """Counts ``N_a(x⃗)`` for every leaf tuple and the leaf weights ``Π d_x``.

    Returns arrays of shape ``(rank**n, rank)`` and ``(rank**n,)`` with leaf
    tuples in lexicographic order.
    """
    _guard(ring, n, budget)
    r = ring.rank
    counts = np.eye(r, dtype=np.int64)
    weights = ring.d.copy()
    for _ in range(n - 1):
        counts = np.einsum("py,yxa->pxa", counts, ring.N).reshape(-1, r)
        weights = np.multiply.outer(weights, ring.d).reshape(-1)
    return counts, weights


def check_sum_identity(ring: FusionRing, n: int, a: int, budget: int = DEFAULT_BUDGET) -> float:
    """|Σ_trees Π d − d_a D^{2(n-1)}|."""
    counts, weights = tree_count_table(ring, n, budget)
    total = float(counts[:, a] @ weights)
    return abs(total - ring.d[a] * ring.Dsq ** (n - 1))


def check_sumlog_identity(ring: FusionRing, n: int, a: int, budget: int = DEFAULT_BUDGET) -> float:
    """|Σ_trees (Π d / D^{2(n-1)}) log Π d − n d_a Σ_x d_x² log d_x / D²|."""
    if n < 2:
        raise BadParameters("the log identity needs n ≥ 2")
    counts, weights = tree_count_table(ring, n, budget)
    lhs = float(counts[:, a] @ (weights * np.log(weights))) / ring.Dsq ** (n - 1)
    d = ring.d
    rhs = n * d[a] * float(np.sum(d**2 * np.log(d))) / ring.Dsq
    return abs(lhs - rhs)


def _shannon(mult: np.ndarray, p: np.ndarray) -> tuple[float, float]:
    keep = (mult > 0) & (p > 0)
    m, q = mult[keep], p[keep]
    return float(-(m * q * np.log(q)).sum()), float((m * q).sum())


def region_entropy_oracle(
    ring: FusionRing,
    n: int,
    outcome: int | None = None,
    algebra: Sequence[int] | None = None,
    budget: int = DEFAULT_BUDGET,
    with_norm: bool = False,
):
    """Shannon entropy (nats) of the labeled-tree distribution.

    Give either a fixed ``outcome`` label or an ``algebra`` support; in the
    latter case outcomes range over the support and a tree has probability
    ``Π d_x / (D^{2(n-1)} d_A)``.
    """
    if (outcome is None) == (algebra is None):
        raise BadParameters("give exactly one of outcome or algebra")
    counts, weights = tree_count_table(ring, n, budget)
    scale = ring.Dsq ** (n - 1)
    if outcome is not None:
        p = weights / (ring.d[outcome] * scale)
        H, norm = _shannon(counts[:, outcome], p)
    else:
        support = sorted(set(algebra))
        dA = float(sum(ring.d[a] for a in support))
        p = weights / (scale * dA)
        H = norm = 0.0
        for a in support:
            h, z = _shannon(counts[:, a], p)
            H += h
            norm += z
    return (H, norm) if with_norm else H


def closed_form_entropy(ring: FusionRing, n: int, dim: float) -> float:
    """``n S[C] − log D² + log dim`` with ``dim = d_a`` or ``d_A``.

    Valid for ``n ≥ 2``; a single leaf carries no entropy.
    """
    if n < 2:
        raise BadParameters("the closed form needs n ≥ 2")
    d = ring.d
    SC = math.log(ring.Dsq) - float(np.sum(d**2 * np.log(d))) / ring.Dsq
    return n * SC - math.log(ring.Dsq) + math.log(dim)
