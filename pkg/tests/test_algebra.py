import numpy as np
import pytest

from loopgas.algebra import (
    AlgebraObject,
    MuegerRelation,
    check_commutative,
    enumerate_algebras_pointed,
    fusion_group,
    mueger_relation,
    require_valid_algebra,
    subgroups,
    unit_algebra,
    validate_algebra,
)
from loopgas.catalog import bundled_algebras, catalog_names, load_bundled
from loopgas.errors import InvalidAlgebra, StructuralError, Unsupported
from loopgas.generators import gen_pointed_cyclic, gen_z2
from loopgas.smat import classify


def full_algebra(data, m=None):
    support = range(data.rank)
    m = m or {}
    return AlgebraObject.build(
        data, support, {(a, b, c): m.get((a, b, c), 1) for a in support for b in support for c in data.ring.fuse(a, b)}
    )


def test_z2_full_algebra_valid_only_for_trivial_omega():
    assert validate_algebra(gen_z2(1, 1), full_algebra(gen_z2(1, 1))).ok
    result = validate_algebra(gen_z2(-1, 1j), full_algebra(gen_z2(-1, 1j)))
    assert not result["associativity"].passed
    with pytest.raises(InvalidAlgebra) as err:
        require_valid_algebra(gen_z2(-1, 1j), full_algebra(gen_z2(-1, 1j)))
    assert err.value.axiom == "associativity"


def test_unit_algebra_always_valid(bundled):
    alg = unit_algebra(bundled)
    assert validate_algebra(bundled, alg).ok
    assert alg.dA == 1
    assert check_commutative(bundled, alg)[0]


def test_strong_separability_values(fib):
    toric = gen_z2(1, 1)
    alg = full_algebra(toric)
    assert alg.dA == 2
    assert validate_algebra(toric, alg)["strong separability"].residual == 0
    # halving the x·x → 1 component breaks the normalization
    bad = full_algebra(toric, {(1, 1, 0): 0.5})
    result = validate_algebra(toric, bad)
    assert not result["strong separability"].passed
    assert not result["Frobenius pairing"].passed


def test_commutativity_examples():
    assert check_commutative(gen_z2(1, 1), full_algebra(gen_z2(1, 1)))[0]
    ok, residual = check_commutative(gen_z2(1, -1), full_algebra(gen_z2(1, -1)))
    assert not ok and residual == pytest.approx(2)


def test_mueger_relation_examples(toric, fib):
    alg = full_algebra(toric)
    assert mueger_relation(toric, classify(toric), alg) is MuegerRelation.CONTAINED
    assert alg.flags["containedInMueger"] and not alg.flags["intersectsMuegerTrivially"]
    for name in ("semion", "fibonacci", "ising-nu1", "z3-p1", "z4-p1/2"):
        data = load_bundled(name)
        for alg in enumerate_algebras_pointed(data) if data.ring.is_pointed() else [unit_algebra(data)]:
            assert mueger_relation(data, classify(data), alg) is MuegerRelation.TRIVIAL


def test_mixed_support_gives_other():
    # Z4 with p=1: Müger center {1, g2}; the full group straddles it
    data = load_bundled("z4-p1")
    suite = classify(data)
    assert suite.mueger.tolist() == [True, False, True, False]
    alg = full_algebra(data)
    assert validate_algebra(data, alg).ok
    assert mueger_relation(data, suite, alg) is MuegerRelation.OTHER


def test_algebra_build_rejects_bad_input(toric):
    with pytest.raises(StructuralError):
        AlgebraObject.build(toric, [1], {(1, 1, 0): 1})
    with pytest.raises(StructuralError):
        AlgebraObject.build(toric, [0, 5], {})
    with pytest.raises(StructuralError):
        AlgebraObject.build(toric, [0, 1], {(1, 1, 1): 1})
    with pytest.raises(StructuralError):
        AlgebraObject.build(toric, [0], {(0, 1, 1): 1})


def test_fusion_group_and_subgroups():
    table = fusion_group(gen_pointed_cyclic(6, 1))
    assert table[2, 5] == 1
    assert subgroups(table) == [(0,), (0, 3), (0, 2, 4), (0, 1, 2, 3, 4, 5)]
    klein = subgroups(fusion_group(load_bundled("toric3d-x-toric3d")))
    assert len(klein) == 5


def test_enumeration_examples(toric):
    names = sorted(alg.support for alg in enumerate_algebras_pointed(toric))
    assert names == [(0,), (0, 1)]
    for phi in (1j, -1j):
        found = enumerate_algebras_pointed(gen_z2(-1, phi))
        assert [alg.support for alg in found] == [(0,)]
    z3 = enumerate_algebras_pointed(gen_pointed_cyclic(3, 1))
    assert [a.support for a in z3 if a.flags["commutative"]] == [(0,)]
    with pytest.raises(Unsupported):
        enumerate_algebras_pointed(load_bundled("fibonacci"))


def test_semion_full_algebra_is_not_commutative():
    # Z2(1,-1): the group algebra exists but m_xx = R^{xx} m_xx forces a sign clash
    found = enumerate_algebras_pointed(gen_z2(1, -1))
    full = [a for a in found if a.support == (0, 1)]
    assert full and not full[0].flags["commutative"]


@pytest.mark.parametrize("name", [n for n in catalog_names() if load_bundled(n).ring.is_pointed() and load_bundled(n).rank <= 6])
def test_enumerated_algebras_validate(name):
    data = load_bundled(name)
    found = enumerate_algebras_pointed(data)
    assert found and found[0].support == (0,)
    for alg in found:
        assert alg.m[(0, 0, 0)] == 1
        assert max(c.residual for c in validate_algebra(data, alg, 1e-9).checks) < 1e-9
        assert alg.dA == pytest.approx(len(alg.support))


@pytest.mark.parametrize("name", [n for n in catalog_names() if bundled_algebras(n)])
def test_bundled_algebras_are_commutative_frobenius(name):
    data = load_bundled(name)
    for _, alg in bundled_algebras(name):
        assert validate_algebra(data, alg).ok
        assert check_commutative(data, alg)[0]
        assert alg.dA == pytest.approx(float(np.sum(data.ring.d[list(alg.support)])))
