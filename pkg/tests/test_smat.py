import math

import numpy as np
import pytest

from loopgas.catalog import load_bundled
from loopgas.errors import FastpathMismatch, MembershipDisagreement, Unsupported
from loopgas.generators import gen_pointed_cyclic, gen_tambara_yamagami, gen_z2, relabel
from loopgas.smat import (
    Classification,
    GramBlock,
    GramSpectrum,
    classify,
    gram_connected_s,
    gram_spectrum,
    mueger_membership,
    pointed_gram_fastpath,
    product_rule_residual,
    s_matrix,
    sum_rule_residual,
    zero_cutoff,
)

from conftest import PHI


@pytest.mark.parametrize("omega,phi", [(1, 1), (1, -1), (-1, 1j), (-1, -1j)])
def test_z2_s_matrix(omega, phi):
    S = s_matrix(gen_z2(omega, phi))
    assert np.allclose(S, np.array([[1, 1], [1, omega]]) / math.sqrt(2), atol=1e-15)


def test_trivial_s_matrix():
    data = gen_pointed_cyclic(1, 0)
    assert s_matrix(data).tolist() == [[1]]


def test_fibonacci_s_matrix(fib):
    D = math.sqrt(fib.ring.Dsq)
    assert np.allclose(s_matrix(fib), np.array([[1, PHI], [PHI, -1]]) / D, atol=1e-12)


def test_mueger_examples(toric, semion, fib):
    assert mueger_membership(toric).tolist() == [True, True]
    assert mueger_membership(semion).tolist() == [True, False]
    assert mueger_membership(fib).tolist() == [True, False]


def test_membership_disagreement_detected(toric, semion):
    # a semion S-matrix paired with toric braiding: sum rule and monodromy disagree on x
    with pytest.raises(MembershipDisagreement):
        mueger_membership(toric, S=s_matrix(semion))


def test_classify_examples(toric, ising):
    for data in (toric, load_bundled("fermionic-toric3d")):
        suite = classify(data)
        assert suite.classification is Classification.SYMMETRIC
        assert suite.muegerDsq == pytest.approx(2)
    assert classify(ising).classification is Classification.MODULAR
    ty = classify(load_bundled("ty-klein"))
    assert (ty.muegerRank, ty.muegerDsq, ty.tyLike) == (4, pytest.approx(4), True)
    assert ty.classification is Classification.PROPERLY_PREMODULAR


def test_suite_invariants(bundled):
    suite = classify(bundled)
    d, D = bundled.ring.d, bundled.ring.D
    assert np.allclose(suite.S[:, 0], d / D, atol=1e-12) and np.allclose(suite.S[0, :], d / D, atol=1e-12)
    assert suite.mueger[0]
    assert suite.muegerRank == int(suite.mueger.sum())
    assert suite.muegerDsq == pytest.approx(float(np.sum(d[suite.mueger] ** 2)))
    if suite.muegerRank == bundled.rank:
        assert suite.classification is Classification.SYMMETRIC
    elif suite.muegerRank == 1:
        assert suite.classification is Classification.MODULAR
        assert np.allclose(suite.S @ suite.S.conj().T, np.eye(bundled.rank), atol=1e-8)
    else:
        assert suite.classification is Classification.PROPERLY_PREMODULAR


def test_product_and_sum_rules(bundled):
    suite = classify(bundled)
    assert product_rule_residual(bundled, suite.S) < 1e-8
    assert sum_rule_residual(bundled, suite.S, suite.mueger) < 1e-8


def test_gram_examples(toric, semion):
    G = gram_connected_s(toric, classify(toric), 0).G
    assert np.allclose(G, [[1, 1], [1, 1]], atol=1e-12)
    spec = gram_spectrum(toric, classify(toric))
    assert spec[0].eigenvalues.tolist() == pytest.approx([2, 0], abs=1e-12)
    G = gram_connected_s(semion, classify(semion), 0).G
    assert np.allclose(G, np.eye(2), atol=1e-12)


@pytest.mark.parametrize("name", ["toric3d", "semion", "z3-p1", "z4-p1", "z6-p1", "toric3d-x-semion"])
def test_pointed_nonunit_charges_vanish(name):
    data = load_bundled(name)
    suite = classify(data)
    for c in range(1, data.rank):
        assert np.allclose(gram_connected_s(data, suite, c).G, 0, atol=1e-12)


def test_spectrum_invariants(bundled):
    suite = classify(bundled)
    spec = gram_spectrum(bundled, suite)
    Dsq = bundled.ring.Dsq
    assert abs(spec.total_trace - Dsq) / Dsq < 1e-8
    for block in spec.blocks:
        if block.G.size:
            assert np.abs(block.G - block.G.conj().T).max() < 1e-9
            assert (block.eigenvalues >= 0).all()
            assert list(block.eigenvalues) == sorted(block.eigenvalues, reverse=True)
    # G_1 is the Gram matrix of S's rows restricted to the charge-1 index set
    idx = spec[0].index
    assert np.allclose(spec[0].G, (suite.S @ suite.S.conj().T)[np.ix_(idx, idx)], atol=1e-9)
    if suite.classification is Classification.SYMMETRIC:
        assert all(np.allclose(b.G, 0, atol=1e-9) for b in spec.blocks[1:])
        assert spec[0].eigenvalues[0] == pytest.approx(Dsq)
        assert np.count_nonzero(spec[0].eigenvalues) == 1
    if suite.tyLike and suite.classification is Classification.PROPERLY_PREMODULAR:
        nonzero = [lam for _, lam in spec.nonzero()]
        assert nonzero == pytest.approx([suite.muegerDsq] * 2)


def test_symmetric_z2_spectrum(toric):
    spec = gram_spectrum(toric, classify(toric))
    assert spec.nonzero() == [(0, pytest.approx(2))]
    assert spec.total_trace == pytest.approx(2)


def test_fibonacci_trace(fib):
    assert gram_spectrum(fib, classify(fib)).total_trace == pytest.approx(fib.ring.Dsq, rel=1e-12)


def test_zero_cutoff_scales_with_dsq():
    assert zero_cutoff(0.5) == 1e-10 and zero_cutoff(8) == pytest.approx(8e-10)


@pytest.mark.parametrize(
    "name,eigen",
    [("toric3d", [2, 0]), ("semion", [1, 1]), ("antisemion", [1, 1]), ("z4-p1/2", [1, 1, 1, 1]),
     ("z4-p1", [2, 2, 0, 0]), ("z6-p1", [2, 2, 2, 0, 0, 0])],
)
def test_pointed_fastpath(name, eigen):
    data = load_bundled(name)
    suite = classify(data)
    fast = pointed_gram_fastpath(data, suite)
    assert fast[0].eigenvalues.tolist() == pytest.approx(eigen, abs=1e-12)
    assert fast.method == "pointed"
    rank_m = suite.muegerRank
    assert sorted(fast[0].eigenvalues)[-data.rank // rank_m:] == pytest.approx([suite.muegerDsq] * (data.rank // rank_m))


def test_pointed_fastpath_mismatch(toric):
    suite = classify(toric)
    generic = gram_spectrum(toric, suite)
    bad = GramSpectrum([GramBlock(b.c, b.index, b.G * 1.01) for b in generic.blocks])
    with pytest.raises(FastpathMismatch):
        pointed_gram_fastpath(toric, suite, generic=bad)
    with pytest.raises(Unsupported):
        pointed_gram_fastpath(load_bundled("fibonacci"), classify(load_bundled("fibonacci")))


def test_product_fallback_for_gauge_dependent_factor():
    data = load_bundled("ising-nu3-x-toric3d")
    spec = gram_spectrum(data, classify(data))
    assert spec.method == "product"
    assert spec.total_trace == pytest.approx(8)


def test_gauge_dependent_network_is_reported_not_guessed():
    # κ_σ = -1 with no product structure to fall back on
    data = gen_tambara_yamagami([[0, 1], [1, 0]], [1, 1], tau_sign=-1)
    with pytest.raises(Unsupported):
        gram_spectrum(data, classify(data))


def test_classification_invariant_under_relabel():
    data = load_bundled("fibonacci-x-toric3d")
    before = classify(data)
    after = classify(relabel(data, [0, 2, 3, 1]))
    assert after.classification is before.classification
    assert after.muegerDsq == pytest.approx(before.muegerDsq)
    spec_a = sorted(lam for _, lam in gram_spectrum(data, before).nonzero())
    spec_b = sorted(lam for _, lam in gram_spectrum(relabel(data, [0, 2, 3, 1]), after).nonzero())
    assert spec_a == pytest.approx(spec_b)
