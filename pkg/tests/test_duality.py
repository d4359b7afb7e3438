import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import W, words
from sclcert import circle, duality, hnn
from sclcert.certificates import Soundness
from sclcert.chains import Chain
from sclcert.duality import (
    Cocycle,
    Quasimorphism,
    check_cocycle,
    coboundary,
    counting_homogeneous,
    counting_raw,
    gromnorm_lower,
    homogenize_estimate,
    pair,
    scl_gromnorm_bridge,
    scl_lower_bavard,
)
from sclcert.errors import GuardError
from sclcert.hopf import CommExpr, boundary_multiple, evaluate, scl_upper
from sclcert.words import Word, cyclic_reduce, primitive_root, random_word

SIGMAS = ["a", "b", "ab", "aB", "abA", "aab", "abb", "aBa"]


def qm(sigma, defect=Fraction(0), grade=Soundness.EXACT):
    return Quasimorphism(counting_homogeneous(W(sigma)), defect, grade, name=f"count[{sigma}]")


def a_exponent(w: Word) -> int:
    return sum(1 if x == 1 else -1 if x == -1 else 0 for x in w.letters)


def _cyclic_count_oracle(g: Word, s: Word) -> int:
    # walk a long stretch of the periodic word and count windows that start
    # in the middle period
    core = cyclic_reduce(g)[0].letters
    n, k = len(core), len(s)
    if not n:
        return 0
    reps = k // n + 3
    long = core * reps
    return sum(1 for p in range(n, 2 * n) if long[p : p + k] == s.letters)


def test_counting_examples():
    phi = counting_homogeneous(W("ab"))
    assert phi(W("abab")) == 2
    assert homogenize_estimate(counting_raw(W("ab")), W("abab"), 64) == pytest.approx(2, abs=2 / 64)
    assert phi(W("abAB")) == 1
    assert phi(W("BA")) == -phi(W("ab")) == -1
    assert homogenize_estimate(counting_raw(W("ab")), W(""), 5) == 0
    assert homogenize_estimate(phi, W("abaB"), 7) == phi(W("abaB"))
    est = homogenize_estimate(counting_raw(W("ab")), W("abab"), 32)
    assert abs(est - 2) <= Fraction(2, 32)


@given(words(2, 8), st.sampled_from(SIGMAS))
def test_counting_matches_oracles(g, sigma):
    phi = counting_homogeneous(W(sigma))
    s = W(sigma)
    assert phi(g) == _cyclic_count_oracle(g, s) - _cyclic_count_oracle(g, s.inverse())
    if g:
        # the raw count along g^m grows like m phi(g), with bounded error
        assert abs(homogenize_estimate(counting_raw(s), g, 16) - phi(g)) <= Fraction(2 * len(s), 16)


@given(words(2, 6), st.integers(1, 8), st.sampled_from(SIGMAS))
def test_counting_homogeneity(g, m, sigma):
    phi = counting_homogeneous(W(sigma))
    assert phi(g ** m) == m * phi(g)
    assert phi(g.inverse()) == -phi(g)


def test_coboundary_examples():
    hom = coboundary(Quasimorphism(a_exponent, Fraction(0), Soundness.EXACT))
    rng = random.Random(5)
    for _ in range(200):
        assert hom(random_word(rng, 2, 6), random_word(rng, 2, 6)) == 0
    dphi = coboundary(qm("ab"))
    assert dphi(W("a"), W("b")) == -1
    assert dphi(W(""), W("abab")) == 0


def test_check_cocycle_examples():
    assert check_cocycle(coboundary(qm("ab", 10)), 3).ok
    eu = circle.euler_cocycle(circle.punctured_torus_rep())
    assert check_cocycle(eu, 2).max_identity_defect == 0
    base = coboundary(qm("ab", 10))
    bad = Cocycle(lambda g, h: base(g, h) + (1 if (g, h) == (W("a"), W("b")) else 0), 10, Soundness.EXACT)
    assert check_cocycle(bad, 1).max_identity_defect > 0


def test_pair_examples():
    e = CommExpr.parse("[a,b]")
    assert pair(coboundary(qm("ab")), e) == -1
    assert pair(duality.zero_cocycle(), e) == 0


@settings(max_examples=60)
@given(st.lists(st.tuples(words(2, 4), words(2, 4)), min_size=1, max_size=3), st.sampled_from(SIGMAS))
def test_telescoping(pairs, sigma):
    e = CommExpr(tuple(pairs))
    g = evaluate(e)
    if e.k == 0 or not g:
        return
    w = primitive_root(g)[0].word
    n = boundary_multiple(e, w)
    phi = qm(sigma)
    # direct sum over the pair sequence versus the closed form
    assert pair(coboundary(phi), e) == -n * phi(w)


def test_gromnorm_lower_values():
    e, w = CommExpr.parse("[a,b]"), W("abAB")
    assert gromnorm_lower(duality.zero_cocycle(), e, w).value == 0
    rep = circle.punctured_torus_rep()
    eu = gromnorm_lower(circle.euler_cocycle(rep), e, w)
    assert eu.value == 2 and eu.soundness == Soundness.EXACT
    assert duality.pair(circle.euler_cocycle(rep), e) == Fraction(1, 2)
    rot = circle.rotation_quasimorphism(rep, 4000)
    c = gromnorm_lower(coboundary(rot), e, w, check_radius=None)
    assert abs(c.value - 1) <= 1e-3


def test_bavard_lower_bounds():
    rep = circle.punctured_torus_rep()
    rot = circle.rotation_quasimorphism(rep, 4000)
    c = scl_lower_bavard(rot, W("abAB"))
    assert abs(c.value - Fraction(1, 2)) <= 1e-3
    assert c.value <= scl_upper(CommExpr.parse("[a,b]"), W("abAB")).value + c.tol
    phi = duality.brooks_counting(W("ab"), 2, 4)
    c = scl_lower_bavard(phi, W("abAB"))
    assert c.soundness == Soundness.EMPIRICAL
    assert c.value == Fraction(1, 2 * phi.defect_bound)
    with pytest.raises(GuardError):
        scl_lower_bavard(Quasimorphism(a_exponent, 0, Soundness.EXACT), W("abAB"))


def test_bridge():
    up = scl_upper(CommExpr.parse("[a,b]"), W("abAB"))
    g = scl_gromnorm_bridge(up)
    assert g.value == 2 and g.quantity == "gromnorm(abAB)"
    assert scl_gromnorm_bridge(g).value == Fraction(1, 2)
    with pytest.raises(GuardError):
        scl_gromnorm_bridge(up, hnn.HNNOracle(hnn.dyck_presentation()))


def test_brooks_rejects_trivial():
    with pytest.raises(ValueError):
        duality.brooks_counting(W(""))
