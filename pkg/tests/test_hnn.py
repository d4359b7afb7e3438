import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sclcert import constants, hnn
from sclcert.certificates import Certificate, Soundness
from sclcert.errors import GuardError
from sclcert.hnn import (
    HNNPresentation,
    britton_reduce,
    classify,
    dyck_presentation,
    dyck_report,
    h1_kernel,
    hnn_equal,
    induced_h1_rank,
    transfer_certificate,
)
from sclcert.words import Word, are_conjugate, conjugate, random_word

DYCK = dyck_presentation()
AL = DYCK.alphabet
T = HNNPresentation.parse("abt", "t", "ab", "aab", label="bs")


def D(text):
    return AL.parse(text)


def _rank(rows):
    # independent oracle: fraction-exact Gaussian elimination
    m = [[Fraction(x) for x in r] for r in rows]
    rank, col = 0, 0
    ncols = len(m[0]) if m else 0
    while rank < len(m) and col < ncols:
        piv = next((i for i in range(rank, len(m)) if m[i][col]), None)
        if piv is None:
            col += 1
            continue
        m[rank], m[piv] = m[piv], m[rank]
        for i in range(len(m)):
            if i != rank and m[i][col]:
                f = m[i][col] / m[rank][col]
                m[i] = [x - f * y for x, y in zip(m[i], m[rank])]
        rank += 1
        col += 1
    return rank


def _kernel_dim_oracle(h):
    # H1(HNN) = Z^(r+1) / <rel>; kernel of base -> it is spanned by rel if rel lies in the base
    rel = list(h.relation_vector())
    return 1 if any(rel) else 0


def test_britton_examples():
    t = Word((DYCK.stable,))
    assert britton_reduce(t.inverse() * DYCK.u * t, DYCK).to_word(DYCK) == DYCK.v
    assert britton_reduce(t * DYCK.v ** 2 * t.inverse(), DYCK).to_word(DYCK) == DYCK.u ** 2
    # [a, b] c^-2 collapses with the chosen wiring
    assert britton_reduce(D("abABCC"), DYCK).is_identity()


def test_hnn_equal_examples():
    t = Word((DYCK.stable,))
    assert hnn_equal(t.inverse() * DYCK.u * t, DYCK.v, DYCK)
    assert not hnn_equal(t, t.inverse(), DYCK)
    assert hnn_equal(D("cc"), D("abAB"), DYCK)
    assert not hnn_equal(D("c"), D("abAB"), DYCK)


def test_classify_examples():
    assert str(classify(D("c"), DYCK)) == "elliptic(c)"
    assert classify(D("b"), DYCK).kind == "hyperbolic"
    assert str(classify(D("abAB"), DYCK)) == "elliptic(cc)"
    assert classify(D("aBAb"), DYCK).kind == "elliptic"


def test_h1_kernel_examples():
    assert h1_kernel(DYCK) == [(Fraction(0), Fraction(1))]
    twist = HNNPresentation.parse("abt", "t", "aab", "aab")
    assert h1_kernel(twist) == [] == [None] * _kernel_dim_oracle(twist)
    assert h1_kernel(HNNPresentation.parse("at", "t", "a", "a")) == []
    assert len(h1_kernel(T)) == _kernel_dim_oracle(T) == 1


@pytest.mark.parametrize("u,v", [("a", "a"), ("ab", "aab"), ("aB", "Ab"), ("abAB", "a"), ("aaa", "bb"), ("c", "ab")])
def test_rank_nullity(u, v):
    h = HNNPresentation.parse("abct", "t", u, v)
    r = h.base_rank
    assert len(h1_kernel(h)) + induced_h1_rank(h) == r
    rel = list(h.relation_vector())
    # image rank = rank of the base basis modulo the relation
    ident = [[Fraction(int(i == j)) for j in range(r)] for i in range(r)]
    assert induced_h1_rank(h) == _rank(ident + [rel]) - _rank([rel])


def _hnn_words(h, n, seed):
    rng = random.Random(seed)
    return [random_word(rng, len(h.names), 7) for _ in range(n)]


@pytest.mark.parametrize("h", [DYCK, T])
def test_britton_idempotent_and_sound(h):
    for w in _hnn_words(h, 300, 7):
        r = britton_reduce(w, h)
        assert britton_reduce(r, h) == r
        assert hnn_equal(r.to_word(h), w, h)


@pytest.mark.parametrize("h", [DYCK, T])
def test_equality_is_a_congruence(h):
    ws = _hnn_words(h, 60, 8)
    rel = Word((-h.stable,)) * h.u * Word((h.stable,)) * h.v.inverse()
    for x, z in zip(ws, ws[1:]):
        # y is x with a relator inserted, so x = y in the group
        y = x * conjugate(rel, z)
        assert hnn_equal(x, y, h) and hnn_equal(y, x, h)
        assert hnn_equal(x * z, y * z, h)
        assert hnn_equal(x, x, h)
        assert hnn_equal(x, z, h) == hnn_equal(y, z, h)


@pytest.mark.parametrize("h", [DYCK, T])
def test_classify_conjugacy_invariant(h):
    ws = _hnn_words(h, 150, 9)
    for w, s in zip(ws, ws[1:]):
        a, b = classify(w, h), classify(conjugate(w, s), h)
        assert a.kind == b.kind
        if a.kind == "hyperbolic":
            assert a.reduced.stable_length == b.reduced.stable_length


def test_transfer_rules():
    up = Certificate("scl(c)", "base", "upper", Fraction(1, 2), Soundness.EXACT, "w", "surface-witness")
    moved = transfer_certificate(up, DYCK)
    assert moved.group == "dyck" and moved.citation == "monotonicity" and moved.value == up.value
    low = Certificate("scl(cc)", "base", "lower", Fraction(1, 2), Soundness.LITERATURE, "w", "x")
    with pytest.raises(GuardError):
        transfer_certificate(low, DYCK, D("cc"))
    with pytest.raises(GuardError):
        transfer_certificate(low, DYCK)
    ok = transfer_certificate(low, DYCK, D("acAC"))
    assert ok.citation == "vertex-embedding" and any("H2" in a for a in ok.assumptions)
    # u and v agree in H1 here, so H2 is nonzero and must be asserted
    twist = HNNPresentation.parse("abt", "t", "aab", "aab")
    with pytest.raises(GuardError):
        transfer_certificate(low, twist, Word.parse("abAB"))
    assert transfer_certificate(low, twist, Word.parse("abAB"), (hnn.H2_SURJECTIVE,)).value == low.value


def test_dyck_report_cases():
    r = dyck_report(D("c"))
    ups = [c for c in r.certificates if c.direction == "upper"]
    assert [c.value for c in ups] == [Fraction(1, 4)] and ups[0].soundness == Soundness.EXACT
    lows = [c for c in r.certificates if c.direction == "lower"]
    assert all(c.soundness == Soundness.LITERATURE for c in lows)
    r = dyck_report(D("b"))
    assert r.classification == "hyperbolic"
    assert [(c.value, c.soundness) for c in r.certificates] == [(Fraction(1, 2), Soundness.LITERATURE)]
    r = dyck_report(D("a"))
    assert r.base_h1 == (1, 0) and not r.certificates
    assert any("infinite" in n for n in r.notes)
    r = dyck_report(D("Ccc"))
    assert [c.value for c in r.certificates if c.direction == "upper"] == [Fraction(1, 4)]
    r = dyck_report(D("abAB"))
    assert [c.value for c in r.certificates if c.direction == "upper"] == [Fraction(1, 2)]
    r = dyck_report(D("acAC"))
    assert r.certificates[0].citation == "vertex-embedding"
    assert dyck_report(D("")).certificates[0].value == 0


def test_constants_table():
    assert constants.verify_constants() == []
    bad = dict(constants.CONSTANTS)
    name = next(iter(bad))
    bad[name] = bad[name].__class__(**{**bad[name].__dict__, "value": bad[name].value + 1})
    assert constants.verify_constants(bad)
