"""Invariant suites behind ``sclcert selftest``."""

from __future__ import annotations

import random
import time
from dataclasses import dataclass
from fractions import Fraction

from . import circle, constants, duality, hnn, hopf
from .chains import Chain, k_generator, standardize
from .words import CyclicWord, Word, are_conjugate, conjugate, cyclic_reduce, primitive_root, random_word


@dataclass
class Result:
    name: str
    ok: bool
    seconds: float
    detail: str = ""


def _random_expr(rng, rank, k_max, letter_max) -> hopf.CommExpr:
    k = rng.randint(1, k_max)
    pairs = [(random_word(rng, rank, letter_max), random_word(rng, rank, letter_max)) for _ in range(k)]
    return hopf.CommExpr(tuple(pairs))


def check_words(n: int, seed: int = 1) -> str:
    rng = random.Random(seed)
    for _ in range(n):
        raw = [rng.choice([1, -1, 2, -2, 3, -3]) for _ in range(rng.randint(0, 12))]
        w, u, v = Word(raw), random_word(rng, 3, 6), random_word(rng, 3, 6)
        if Word(w.letters) != w or (w * u) * v != w * (u * v) or w.inverse().inverse() != w:
            return f"group axioms fail at {w}, {u}, {v}"
        if w * w.inverse():
            return f"w w^-1 is not trivial for {w}"
        if not are_conjugate(conjugate(w, u), w):
            return f"conjugate of {w} by {u} not detected"
        if w:
            root, e = primitive_root(w)
            if CyclicWord(root.letters * e) != cyclic_reduce(w)[0]:
                return f"primitive root of {w} does not reconstruct"
    return ""


def check_chains(n: int, seed: int = 2) -> str:
    rng = random.Random(seed)
    for _ in range(n):
        c = Chain([(Fraction(rng.randint(-5, 5), rng.randint(1, 4)), random_word(rng, 3, 6)) for _ in range(rng.randint(0, 5))])
        s = standardize(c)
        if standardize(s.to_chain()) != s:
            return f"standardize not idempotent on {c}"
        w, t = random_word(rng, 3, 5), random_word(rng, 3, 5)
        if standardize(c + k_generator(w, t, Fraction(rng.randint(-3, 3), rng.randint(1, 3)))) != s:
            return f"standard form of {c} moved under a conjugation generator"
    return ""


def check_telescoping(n: int, seed: int = 3) -> str:
    rng = random.Random(seed)
    sigmas = [Word.parse(s) for s in ("a", "ab", "aB", "abA", "aab", "abb")]
    for _ in range(n):
        e = _random_expr(rng, 2, 3, 4)
        g = hopf.evaluate(e)
        if not g:
            continue
        root, _ = primitive_root(g)
        w = root.word
        nmul = hopf.boundary_multiple(e, w)
        phi = duality.Quasimorphism(duality.counting_homogeneous(rng.choice(sigmas)), Fraction(0),
                                    duality.Soundness.EXACT)
        if duality.pair(duality.coboundary(phi), e) != -nmul * phi(w):
            return f"telescoping fails for {e}"
    return ""


def check_cocycles(radius: int) -> str:
    phi = duality.Quasimorphism(duality.counting_homogeneous(Word.parse("ab")), Fraction(10 ** 6),
                                duality.Soundness.EXACT, name="count[ab]")
    rep = duality.check_cocycle(duality.coboundary(phi), radius, 2)
    if not rep.ok:
        return f"coboundary fails the cocycle identity at radius {radius}"
    eu = circle.euler_cocycle(circle.punctured_torus_rep())
    rep = duality.check_cocycle(eu, min(radius, 3), 2)
    if not rep.ok:
        return "Euler cocycle fails the cocycle identity"
    return ""


def check_orientation(n: int, seed: int = 4) -> str:
    rng = random.Random(seed)
    pts = lambda: circle.BoundaryPoint.from_angle(rng.uniform(0, circle.TWO_PI))  # noqa: E731
    Or = circle.orientation
    for _ in range(n):
        x, y, z, w = pts(), pts(), pts(), pts()
        if Or(y, z, w) - Or(x, z, w) + Or(x, y, w) - Or(x, y, z) != 0:
            return "orientation cocycle identity fails"
    return ""


def check_constants() -> str:
    problems = constants.verify_constants()
    return "; ".join(problems)


def check_dyck() -> str:
    h = hnn.dyck_presentation()
    if hnn.h1_kernel(h) != [(Fraction(0), Fraction(1))]:
        return "h1 kernel of the Dyck splitting is not span{c}"
    rep = hnn.dyck_report(h.alphabet.parse("c"), h)
    ups = [c.value for c in rep.certificates if c.direction == "upper"]
    if ups != [Fraction(1, 4)]:
        return f"Dyck upper bound for c is {ups}"
    return ""


def check_extremal() -> str:
    v = circle.theorem_e_eval(circle.ImmersionWitness(-3, 1))
    if (v.gromnorm, v.scl) != (6, Fraction(3, 2)):
        return "extremal values for chi=-3 are wrong"
    return ""


def check_ceiling() -> str:
    e = hopf.CommExpr.parse("[a,b]")
    w = Word.parse("abAB")
    rep = circle.punctured_torus_rep()
    cocycles = [circle.euler_cocycle(rep), duality.zero_cocycle()]
    for s in ("ab", "a", "aab"):
        cocycles.append(duality.coboundary(duality.brooks_counting(Word.parse(s), 2, 3)))
    for psi in cocycles:
        c = duality.gromnorm_lower(psi, e, w, check_radius=None)
        if c.value > 2:
            return f"{psi.name} certifies gromnorm {c.value} > 2"
    return ""


def run(level: str = "quick") -> list[Result]:
    full = level == "full"
    suites = [
        ("constants", check_constants),
        ("words", lambda: check_words(2000 if full else 300)),
        ("chains", lambda: check_chains(1000 if full else 200)),
        ("telescoping", lambda: check_telescoping(500 if full else 100)),
        ("cocycles", lambda: check_cocycles(4 if full else 2)),
        ("orientation", lambda: check_orientation(100000 if full else 5000)),
        ("dyck", check_dyck),
        ("extremal", check_extremal),
        ("soundness-ceiling", check_ceiling),
    ]
    out = []
    for name, fn in suites:
        t0 = time.perf_counter()
        try:
            detail = fn()
        except Exception as exc:  # a crash is a failure, not an abort
            detail = f"{type(exc).__name__}: {exc}"
        out.append(Result(name, not detail, time.perf_counter() - t0, detail))
    return out
