"""Generators for bundled categories: Z₂ family, cyclic pointed, Fibonacci, Ising, products."""
from __future__ import annotations

import cmath
import math
from fractions import Fraction
from itertools import product
from typing import Callable, Sequence

import numpy as np

from .braided import CategoryData, validate_category
from .errors import BadParameters, GeneratorInvalid
from .ring import FusionRing

__all__ = [
    "GENERATOR_TOL",
    "pointed_category",
    "gen_z2",
    "gen_pointed_cyclic",
    "gen_named",
    "gen_fibonacci",
    "gen_ising",
    "gen_tambara_yamagami",
    "gen_product",
    "relabel",
    "conjugate_braiding",
]

GENERATOR_TOL = 1e-12


def _checked(data: CategoryData) -> CategoryData:
    result = validate_category(data, GENERATOR_TOL)
    if not result.ok:
        bad = result.failures()[0]
        raise GeneratorInvalid(f"{data.name}: {bad.name} residual {bad.residual:.3e} at {bad.worst}")
    return data


def _phase(turns: Fraction | float) -> complex:
    """``exp(2πi·turns)`` with exact values at quarter turns."""
    t = turns % 1
    exact = {Fraction(0): 1 + 0j, Fraction(1, 4): 1j, Fraction(1, 2): -1 + 0j, Fraction(3, 4): -1j}
    if isinstance(t, Fraction) and t in exact:
        return exact[t]
    return cmath.exp(2j * math.pi * float(t))


def pointed_category(
    names: Sequence[str],
    mult: Callable[[int, int], int],
    omega: Callable[[int, int, int], complex],
    braid: Callable[[int, int], complex] | None,
    name: str = "",
) -> CategoryData:
    """Pointed category from a group law, 3-cocycle and (optional) braiding on elements 0..n-1."""
    n = len(names)
    ring = FusionRing.from_triples(names, [(a, b, mult(a, b)) for a, b in product(range(n), repeat=2)])
    F = {}
    for a, b, c in product(range(n), repeat=3):
        ab, bc = mult(a, b), mult(b, c)
        F[(a, b, c, mult(ab, c), ab, bc)] = omega(a, b, c)
    R = None
    if braid is not None:
        R = {(a, b, mult(a, b)): braid(a, b) for a, b in product(range(n), repeat=2)}
    return _checked(CategoryData(ring, F, R, name=name))


def gen_z2(omega: int, phi: complex, tol: float = 1e-12) -> CategoryData:
    """Rank-2 category on Z₂ with associator ω = ±1 and braiding φ, φ² = ω."""
    if omega not in (1, -1):
        raise BadParameters(f"omega must be ±1, got {omega}")
    phi = complex(phi)
    if abs(phi * phi - omega) > tol:
        raise BadParameters(f"phi^2 must equal omega (phi={phi}, omega={omega})")
    tag = {1: "1", -1: "-1", 1j: "i", -1j: "-i"}
    key = min(tag, key=lambda z: abs(z - phi))
    name = f"Z2({omega},{tag[key]})"
    return pointed_category(
        ["1", "x"],
        lambda a, b: (a + b) % 2,
        lambda a, b, c: complex(omega) if a == b == c == 1 else 1 + 0j,
        lambda a, b: phi if a == b == 1 else 1 + 0j,
        name=name,
    )


def gen_pointed_cyclic(N: int, p) -> CategoryData:
    """Braided pointed category on Z_N.

    ``R^{ab} = exp(2πi p a b / N)`` with ``2p`` an integer (``p`` itself an
    integer for odd N). For half-integer ``p`` the associator is
    ``exp(2πi p a (b + c − [b+c]_N) / N)``, which is ±1.
    """
    if N < 1:
        raise BadParameters("N must be positive")
    p = Fraction(p)
    if (2 * p).denominator != 1:
        raise BadParameters("2p must be an integer")
    if N % 2 == 1 and p.denominator != 1:
        raise BadParameters("p must be an integer for odd N")
    names = ["1"] + [f"g{k}" for k in range(1, N)]

    def omega(a, b, c):
        carry = b + c - (b + c) % N
        return _phase(p * a * carry / N)

    return pointed_category(
        names,
        lambda a, b: (a + b) % N,
        omega,
        lambda a, b: _phase(p * a * b / N),
        name=f"Z{N}(p={p})",
    )


def gen_fibonacci(conjugate: bool = False) -> CategoryData:
    phi = (1 + math.sqrt(5)) / 2
    ring = FusionRing.from_triples(["1", "τ"], [(0, 0, 0), (0, 1, 1), (1, 0, 1), (1, 1, 0), (1, 1, 1)])
    F = {k: 1 + 0j for k in _admissible(ring)}
    s = 1 / math.sqrt(phi)
    F[(1, 1, 1, 1, 0, 0)] = 1 / phi
    F[(1, 1, 1, 1, 0, 1)] = s
    F[(1, 1, 1, 1, 1, 0)] = s
    F[(1, 1, 1, 1, 1, 1)] = -1 / phi
    R = {(0, 0, 0): 1, (0, 1, 1): 1, (1, 0, 1): 1}
    R[(1, 1, 0)] = cmath.exp(-4j * math.pi / 5)
    R[(1, 1, 1)] = cmath.exp(3j * math.pi / 5)
    if conjugate:
        R = {k: complex(v).conjugate() for k, v in R.items()}
    return _checked(CategoryData(ring, F, R, name="Fibonacci" + ("*" if conjugate else "")))


def gen_ising(nu: int = 1) -> CategoryData:
    """Ising-type category for odd ``nu`` (eight inequivalent braidings, nu mod 16)."""
    if nu % 2 == 0:
        raise BadParameters("nu must be odd")
    nu %= 16
    kappa = (-1) ** ((nu * nu - 1) // 8)
    ring = FusionRing.from_triples(
        ["1", "σ", "ψ"],
        [(0, a, a) for a in range(3)] + [(a, 0, a) for a in (1, 2)]
        + [(1, 1, 0), (1, 1, 2), (1, 2, 1), (2, 1, 1), (2, 2, 0)],
    )
    F = {k: 1 + 0j for k in _admissible(ring)}
    h = kappa / math.sqrt(2)
    for e, f in product((0, 2), repeat=2):
        F[(1, 1, 1, 1, e, f)] = -h if e == f == 2 else h
    F[(2, 1, 2, 1, 1, 1)] = -1
    F[(1, 2, 1, 2, 1, 1)] = -1
    R = {k: 1 + 0j for k in ring.triples()}
    R[(1, 1, 0)] = kappa * cmath.exp(-1j * math.pi * nu / 8)
    R[(1, 1, 2)] = kappa * cmath.exp(3j * math.pi * nu / 8)
    R[(1, 2, 1)] = R[(2, 1, 1)] = (-1j) ** nu
    R[(2, 2, 0)] = -1
    return _checked(CategoryData(ring, F, R, name=f"Ising(nu={nu})"))


def gen_tambara_yamagami(B, q_basis, tau_sign: int = 1, gamma_sign: int = 1, name: str = "") -> CategoryData:
    """Braided Tambara-Yamagami category over the elementary abelian group Z₂^k.

    ``B`` is a nondegenerate symmetric k×k matrix over F₂ giving the
    bicharacter ``χ(a,b) = (-1)^{aᵀBb}``. ``q_basis`` fixes the quadratic
    refinement ``σ`` on basis vectors (``σ(e_i)² = χ(e_i,e_i)``), extended by
    ``σ(a+b) = σ(a)σ(b)χ(a,b)``. The associator scale is
    ``τ = tau_sign/√|A|`` and ``R^{mm}_a = γ σ(a)⁻¹`` with ``γ² = τ Σ_a σ(a)``;
    ``gamma_sign`` picks the square root.
    """
    B = np.asarray(B, dtype=np.int64) % 2
    k = B.shape[0]
    if B.shape != (k, k) or not np.array_equal(B, B.T):
        raise BadParameters("B must be a symmetric square matrix over F2")
    if round(abs(np.linalg.det(B))) % 2 != 1:
        raise BadParameters("B must be nondegenerate over F2")
    if tau_sign not in (1, -1) or gamma_sign not in (1, -1):
        raise BadParameters("tau_sign and gamma_sign must be ±1")
    n = 2**k
    bits = lambda a: np.array([(a >> i) & 1 for i in range(k)])  # noqa: E731
    chi = np.array([[(-1) ** int(bits(a) @ B @ bits(b)) for b in range(n)] for a in range(n)], dtype=complex)
    q_basis = [complex(v) for v in q_basis]
    if len(q_basis) != k:
        raise BadParameters("need one refinement value per basis vector")
    sigma = np.ones(n, dtype=complex)
    for a in range(1, n):
        low = a & -a
        i = low.bit_length() - 1
        if abs(q_basis[i] ** 2 - chi[low, low]) > 1e-12:
            raise BadParameters(f"sigma(e{i + 1})^2 must equal chi(e{i + 1}, e{i + 1})")
        rest = a ^ low
        sigma[a] = sigma[rest] * q_basis[i] * chi[rest, low]
    tau = tau_sign / math.sqrt(n)
    gamma = gamma_sign * cmath.sqrt(tau * sigma.sum())

    m = n
    names = ["1"] + [f"g{a}" for a in range(1, n)] + ["σ"]
    triples = [(a, b, a ^ b) for a in range(n) for b in range(n)]
    triples += [(a, m, m) for a in range(n)] + [(m, a, m) for a in range(n)] + [(m, m, a) for a in range(n)]
    ring = FusionRing.from_triples(names, triples)
    F = {key: 1 + 0j for key in _admissible(ring)}
    for a, b in product(range(n), repeat=2):
        F[(a, m, b, m, m, m)] = chi[a, b]
        F[(m, a, m, b, m, m)] = chi[a, b]
        F[(m, m, m, m, a, b)] = tau * chi[a, b].conjugate()
    R = {}
    for a, b in product(range(n), repeat=2):
        R[(a, b, a ^ b)] = chi[a, b]
    for a in range(n):
        R[(a, m, m)] = R[(m, a, m)] = sigma[a]
        R[(m, m, a)] = gamma / sigma[a]
    return _checked(CategoryData(ring, F, R, name=name or f"TY(Z2^{k})"))


def _admissible(ring):
    from .braided import admissible_f_keys

    return list(admissible_f_keys(ring))


def gen_named(name: str, **kwargs) -> CategoryData:
    makers = {"fibonacci": gen_fibonacci, "ising": gen_ising}
    if name not in makers:
        raise BadParameters(f"unknown named category {name!r}; known: {sorted(makers)}")
    return makers[name](**kwargs)


def gen_product(C1: CategoryData, C2: CategoryData, name: str | None = None) -> CategoryData:
    """Deligne product: labels are pairs, F and R multiply factorwise."""
    r1, r2 = C1.ring, C2.ring
    n2 = r2.rank
    used = set(r1.names)
    second = [s if s == "1" or s not in used else s + "'" for s in r2.names]
    names = []
    for i, j in product(range(r1.rank), range(n2)):
        if i == 0:
            names.append(second[j])
        elif j == 0:
            names.append(r1.names[i])
        else:
            names.append(f"{r1.names[i]}*{second[j]}")
    pair = lambda i, j: i * n2 + j  # noqa: E731
    N = np.einsum("ace,bdf->abcdef", r1.N, r2.N).reshape(r1.rank * n2, r1.rank * n2, r1.rank * n2)
    ring = FusionRing(names, N)
    F = {}
    for k1, v1 in C1.F.items():
        for k2, v2 in C2.F.items():
            F[tuple(pair(i, j) for i, j in zip(k1, k2))] = v1 * v2
    R = None
    if C1.R is not None and C2.R is not None:
        R = {}
        for k1, v1 in C1.R.items():
            for k2, v2 in C2.R.items():
                R[tuple(pair(i, j) for i, j in zip(k1, k2))] = v1 * v2
    data = CategoryData(ring, F, R, name=name or f"{C1.name}⊠{C2.name}", factors=(C1, C2))
    return _checked(data)


def relabel(data: CategoryData, perm: Sequence[int]) -> CategoryData:
    """Rename label ``i`` to position ``perm[i]``; the unit must stay at 0."""
    perm = list(perm)
    if sorted(perm) != list(range(data.rank)) or perm[0] != 0:
        raise BadParameters("perm must be a permutation fixing 0")
    inv = [0] * data.rank
    for i, p in enumerate(perm):
        inv[p] = i
    names = [data.ring.names[inv[p]] for p in range(data.rank)]
    N = data.ring.N[np.ix_(inv, inv, inv)]
    ring = FusionRing(names, N)
    F = {tuple(perm[i] for i in k): v for k, v in data.F.items()}
    R = None if data.R is None else {tuple(perm[i] for i in k): v for k, v in data.R.items()}
    return CategoryData(ring, F, R, name=data.name)


def conjugate_braiding(data: CategoryData) -> CategoryData:
    """Same fusion data with the reversed braiding ``R → R*``."""
    R = {k: v.conjugate() for k, v in data.R.items()}
    return CategoryData(data.ring, data.F, R, name=data.name + "*")
