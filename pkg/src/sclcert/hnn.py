"""HNN extensions of free groups along cyclic subgroups.

The group is ``<base, t | t^-1 u t = v>`` with ``u`` and ``v`` nontrivial
words in the free base.  All generators, the stable letter included, share
one alphabet; the stable letter is just one of its indices.  Britton's lemma
gives normal forms, the word problem and the elliptic/hyperbolic dichotomy.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from fractions import Fraction

import sympy

from . import constants
from .certificates import Certificate, Soundness
from .chains import Chain, h1_image
from .errors import GuardError, InvariantBreach
from .hopf import CommExpr, scl_upper
from .words import Alphabet, CyclicWord, Word, cyclic_log, cyclic_reduce


@dataclass(frozen=True)
class HNNPresentation:
    names: str
    stable: int
    u: Word
    v: Word
    label: str = "hnn"

    def __post_init__(self):
        if not self.u or not self.v:
            raise ValueError("associated subgroups must be nontrivial")
        if not 1 <= self.stable <= len(self.names):
            raise ValueError("stable letter index out of range")
        for w in (self.u, self.v):
            if any(abs(x) == self.stable or abs(x) > len(self.names) for x in w.letters):
                raise ValueError("u and v must be words in the base generators")

    @classmethod
    def parse(cls, names: str, stable: str, u: str, v: str, label: str = "hnn") -> HNNPresentation:
        alphabet = Alphabet(names)
        return cls(names, alphabet.letter(stable), alphabet.parse(u), alphabet.parse(v), label)

    @property
    def alphabet(self) -> Alphabet:
        return Alphabet(self.names)

    @property
    def base_indices(self) -> list[int]:
        return [i for i in range(1, len(self.names) + 1) if i != self.stable]

    @property
    def base_rank(self) -> int:
        return len(self.names) - 1

    def is_base_word(self, w: Word) -> bool:
        return all(abs(x) != self.stable for x in w.letters)

    def base_vector(self, c: Chain | Word) -> tuple[Fraction, ...]:
        """Abelianization of a base chain in the base generators' coordinates."""
        chain = c if isinstance(c, Chain) else Chain.of(c)
        full = h1_image(chain, len(self.names))
        return tuple(full[i - 1] for i in self.base_indices)

    def relation_vector(self) -> tuple[Fraction, ...]:
        return tuple(a - b for a, b in zip(self.base_vector(self.u), self.base_vector(self.v)))


@dataclass(frozen=True)
class HNNWord:
    """``g_0 t^e_1 g_1 ... t^e_m g_m`` with base words ``g_i``."""

    bases: tuple[Word, ...]
    exps: tuple[int, ...]

    def __post_init__(self):
        if len(self.bases) != len(self.exps) + 1:
            raise ValueError("need one more base syllable than stable letters")

    @classmethod
    def from_word(cls, w: Word, h: HNNPresentation) -> HNNWord:
        bases = [[]]
        exps = []
        for x in w.letters:
            if abs(x) == h.stable:
                exps.append(1 if x > 0 else -1)
                bases.append([])
            else:
                bases[-1].append(x)
        return cls(tuple(Word(b) for b in bases), tuple(exps))

    def to_word(self, h: HNNPresentation) -> Word:
        out = self.bases[0]
        for e, g in zip(self.exps, self.bases[1:]):
            out = out * Word((h.stable * e,)) * g
        return out

    @property
    def stable_length(self) -> int:
        return len(self.exps)

    def is_identity(self) -> bool:
        return not self.exps and not self.bases[0]


def _pinch(middle: Word, first: int, second: int, h: HNNPresentation) -> Word | None:
    """Replacement for ``t^first middle t^second`` when it collapses, else ``None``."""
    if first == -1 and second == 1:
        k = cyclic_log(middle, h.u)
        return None if k is None else h.v ** k
    if first == 1 and second == -1:
        k = cyclic_log(middle, h.v)
        return None if k is None else h.u ** k
    return None


def britton_reduce(w: HNNWord | Word, h: HNNPresentation) -> HNNWord:
    """Remove every pinch ``t^-1 u^k t`` and ``t v^k t^-1``."""
    word = w.to_word(h) if isinstance(w, HNNWord) else w
    bases: list[Word] = [Word.identity()]
    exps: list[int] = []
    for x in word.letters:
        if abs(x) != h.stable:
            bases[-1] = bases[-1] * Word._trusted((x,))
            continue
        e = 1 if x > 0 else -1
        if exps:
            rep = _pinch(bases[-1], exps[-1], e, h)
            if rep is not None:
                bases.pop()
                exps.pop()
                bases[-1] = bases[-1] * rep
                continue
        exps.append(e)
        bases.append(Word.identity())
    return HNNWord(tuple(bases), tuple(exps))


def hnn_equal(w1: Word, w2: Word, h: HNNPresentation) -> bool:
    return britton_reduce(w1 * w2.inverse(), h).is_identity()


@dataclass(frozen=True)
class Classification:
    kind: str
    representative: CyclicWord | None
    reduced: HNNWord

    def __str__(self) -> str:
        if self.kind == "elliptic":
            return f"elliptic({self.representative})"
        return self.kind


def cyclic_britton(w: Word, h: HNNPresentation) -> HNNWord:
    """Britton-reduce ``w`` up to conjugacy, including pinches across the wrap."""
    form = britton_reduce(w, h)
    while form.stable_length:
        m = form.stable_length
        # conjugate by the last syllable t^e_m g_m so the wrap pair becomes interior
        tail = Word((h.stable * form.exps[-1],)) * form.bases[-1]
        rotated = britton_reduce(tail * form.to_word(h) * tail.inverse(), h)
        if rotated.stable_length >= m:
            break
        form = rotated
    return form


def classify(w: Word, h: HNNPresentation) -> Classification:
    form = cyclic_britton(w, h)
    if form.stable_length:
        return Classification("hyperbolic", None, form)
    return Classification("elliptic", cyclic_reduce(form.bases[0])[0], form)


# homology ---------------------------------------------------------------------


def h1_kernel(h: HNNPresentation) -> list[tuple[Fraction, ...]]:
    """Basis of the kernel of ``H_1(base; Q) -> H_1(HNN; Q)``.

    The target is ``Q^(r+1)`` modulo the relation ``u_ab - v_ab`` (the stable
    coordinate of the relation is zero), so ``x`` is in the kernel exactly
    when ``x = lambda (u_ab - v_ab)``.  Solved as a rational null space.
    """
    r = h.base_rank
    rel = sympy.Matrix([sympy.Rational(q.numerator, q.denominator) for q in h.relation_vector()])
    system = sympy.eye(r).row_join(-rel)
    vecs = []
    for ns in system.nullspace():
        x = ns[:r, 0]
        if any(x):
            vecs.append(x)
    if not vecs:
        return []
    basis = sympy.Matrix.hstack(*vecs).columnspace()
    out = []
    for col in basis:
        vec = [Fraction(int(sympy.fraction(c)[0]), int(sympy.fraction(c)[1])) for c in col]
        lead = next(q for q in vec if q)
        out.append(tuple(q / lead for q in vec))
    return out


def induced_h1_rank(h: HNNPresentation) -> int:
    """Rank of ``H_1(base; Q) -> H_1(HNN; Q)``, computed directly."""
    rel = sympy.Matrix([sympy.Rational(q.numerator, q.denominator) for q in h.relation_vector()])
    both = sympy.eye(h.base_rank).row_join(rel)
    return both.rank() - rel.rank()


def h2_vanishes(h: HNNPresentation) -> bool:
    """``H_2(HNN; Q) = 0`` iff ``u`` and ``v`` differ in ``H_1(base)``."""
    return any(h.relation_vector())


def ambient_h1_vanishes(c: Chain | Word, h: HNNPresentation) -> bool:
    """Whether the image of a base chain in ``H_1(HNN; Q)`` is zero."""
    x = h.base_vector(c)
    if not any(x):
        return True
    basis = h1_kernel(h)
    if not basis:
        return False
    m = sympy.Matrix([[sympy.Rational(q.numerator, q.denominator) for q in b] for b in basis]).T
    aug = m.row_join(sympy.Matrix([sympy.Rational(q.numerator, q.denominator) for q in x]))
    return aug.rank() == m.rank()


# oracle and certificates ---------------------------------------------------------


@dataclass(frozen=True)
class HNNOracle:
    presentation: HNNPresentation
    kind: str = "hnn"

    @property
    def name(self) -> str:
        return self.presentation.label

    @property
    def alphabet(self) -> Alphabet:
        return self.presentation.alphabet

    def equal(self, u: Word, v: Word) -> bool:
        return hnn_equal(u, v, self.presentation)

    def is_identity(self, w: Word) -> bool:
        return britton_reduce(w, self.presentation).is_identity()


H2_SURJECTIVE = "H2-surjective"


def transfer_certificate(cert: Certificate, h: HNNPresentation, chain: Chain | Word | None = None,
                         assumptions: tuple[str, ...] = ()) -> Certificate:
    """Re-scope a base-group certificate to the HNN extension.

    Upper bounds transfer unconditionally because homomorphisms do not
    increase scl or gromnorm.  Lower (and exact) scl bounds need the chain to
    be a boundary in the base and the base to hit all of ``H_2(HNN; Q)``;
    the latter is automatic when that group vanishes and must otherwise be
    asserted with ``H2-surjective``.
    """
    notes = ["edge groups cyclic, hence amenable"]
    if cert.direction != "upper":
        if chain is None:
            raise GuardError("a lower bound transfer needs the underlying base chain")
        c = chain if isinstance(chain, Chain) else Chain.of(chain)
        if not all(h.is_base_word(w) for w, _ in c):
            raise GuardError("the chain must live in the base group")
        if cert.quantity.startswith("scl("):
            if any(h.base_vector(c)):
                raise GuardError("the chain is not a boundary in the base group; the transfer does not apply")
            if h2_vanishes(h):
                notes.append("H2 of the extension vanishes, so the base surjects onto it")
            elif H2_SURJECTIVE in assumptions:
                notes.append("H2 surjectivity asserted by the user")
            else:
                raise GuardError("H2 surjectivity is neither automatic nor asserted")
    else:
        notes.append("homomorphisms do not increase scl or gromnorm")
    return replace(
        cert,
        group=h.label,
        citation="vertex-embedding" if cert.direction != "upper" else "monotonicity",
        assumptions=cert.assumptions + tuple(notes) + tuple(a for a in assumptions if a not in notes),
    )


# Dyck's surface ----------------------------------------------------------------


def dyck_presentation() -> HNNPresentation:
    """``<a, b, c | [a, b] = c^2>`` as an HNN extension with stable letter ``b``.

    The base is free on ``a`` and ``c`` and the relation is ``b^-1 (a^-1 c^2) b = a^-1``.
    The constructor checks that ``[a, b] c^-2`` is trivial under this wiring.
    """
    h = HNNPresentation.parse("abc", "b", "Acc", "A", label="dyck")
    al = h.alphabet
    if not hnn_equal(al.parse("abAB"), al.parse("cc"), h):
        raise InvariantBreach("Dyck presentation wiring does not give [a,b] = c^2")
    return h


@dataclass
class DyckReport:
    word: str
    classification: str
    certificates: list[Certificate] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)
    base_h1: tuple = ()
    ambient_h1_zero: bool | None = None


def _c_power(rep: CyclicWord) -> int | None:
    return cyclic_log(rep.word, Word((3,)))


def dyck_report(g: Word, h: HNNPresentation | None = None, scan: int = 16) -> DyckReport:
    h = h or dyck_presentation()
    al = h.alphabet
    oracle = HNNOracle(h)
    name = al.format(g)
    cls = classify(g, h)
    rep = DyckReport(name, str(cls) if cls.kind != "elliptic" else f"elliptic({al.format(cls.representative.word)})")
    gap = constants.get("dyck_gap")
    if cls.kind == "elliptic" and not cls.representative:
        rep.notes.append("the element is trivial; scl is 0")
        rep.certificates.append(Certificate(f"scl({name})", h.label, "exact", Fraction(0), Soundness.EXACT,
                                            "trivial element", "definition"))
        return rep
    rep.notes.append(f"every nontrivial element has scl >= {gap.value} [literature: {gap.citation}]")
    if cls.kind == "hyperbolic":
        c = constants.get("hnn_hyperbolic_gap")
        rep.certificates.append(Certificate(
            f"scl({name})", h.label, "lower", c.value, Soundness.LITERATURE,
            "hyperbolic for the HNN splitting; associated subgroups are left relatively convex",
            "hnn-hyperbolic-gap", assumptions=(c.citation,)))
        return rep
    r = cls.representative
    rep.base_h1 = h.base_vector(r.word)
    rep.ambient_h1_zero = ambient_h1_vanishes(r.word, h)
    k = _c_power(r)
    if k is not None and k != 0:
        # [a, b] = c^2 bounds a genus one surface wrapping twice around c
        e = CommExpr.parse("[a,b]", al)
        up = scl_upper(e, Word((3,)), oracle, scan)
        up = replace(up, quantity=f"scl({name})", value=up.value * abs(k),
                     witness=up.witness + (f"; scaled by homogeneity |{k}|" if abs(k) != 1 else ""))
        rep.certificates.append(up)
        sharp = constants.get("dyck_c_sharp")
        rep.certificates.append(Certificate(
            f"scl({name})", h.label, "lower", sharp.value * abs(k), Soundness.LITERATURE,
            "sharp value cited, not recomputed", "dyck-gap", assumptions=(sharp.citation,)))
        if abs(k) == 2:
            rep.notes.append("this element equals [a,b]; Britton reduction classifies it as elliptic "
                             "(conjugate into the base), so the hyperbolic gap does not apply to it directly")
        return rep
    if any(rep.base_h1):
        rep.notes.append("nonzero image in H1 of the base: scl is infinite in the base group")
        if rep.ambient_h1_zero:
            rep.notes.append("the image in H1 of the extension vanishes, so scl is finite there")
        else:
            rep.notes.append("the image in H1 of the extension is nonzero: scl is infinite there too")
        return rep
    dh = constants.get("free_product_gap")
    lower = Certificate(f"scl({al.format(r.word)})", "base", "lower", dh.value, Soundness.LITERATURE,
                        "nontrivial boundary in a free group", "free-group-gap", assumptions=(dh.citation,))
    moved = transfer_certificate(lower, h, r.word)
    rep.certificates.append(replace(moved, quantity=f"scl({name})"))
    rep.notes.append("boundary in the base: the base bound transfers to the extension")
    return rep
