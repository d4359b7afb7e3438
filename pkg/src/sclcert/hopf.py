"""Commutator-expression witnesses and the upper bounds they certify.

A product of ``k`` commutators equal to ``w^n`` bounds a genus ``k``
surface with one boundary component wrapping ``n`` times around ``w``,
which gives ``gromnorm <= (4k - 2)/|n|`` for the normalized class and
``scl(w) <= (2k - 1)/(2|n|)``.

Commutators are ``[a, b] = a b a^-1 b^-1`` throughout.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Protocol

from .certificates import Certificate, Soundness
from .errors import GuardError, Inconclusive, NotAPower, ParseError
from .words import Alphabet, CyclicWord, Word, commutator, cyclic_reduce, primitive_root


@dataclass(frozen=True)
class CommExpr:
    """Formal product ``[a_1, b_1] ... [a_k, b_k]``.  Pairs ``(1, 1)`` are dropped."""

    pairs: tuple[tuple[Word, Word], ...] = ()

    def __post_init__(self):
        kept = tuple((a, b) for a, b in self.pairs if a or b)
        object.__setattr__(self, "pairs", kept)

    @property
    def k(self) -> int:
        return len(self.pairs)

    @classmethod
    def parse(cls, text: str, alphabet: Alphabet | None = None) -> CommExpr:
        alphabet = alphabet or Alphabet.standard(26)
        pairs = []
        pos = 0
        pat = re.compile(r"\s*\[([^\[\],]*),([^\[\],]*)\]")
        while True:
            while pos < len(text) and text[pos].isspace():
                pos += 1
            if pos >= len(text):
                break
            m = pat.match(text, pos)
            if not m:
                raise ParseError("expected a commutator '[u,v]'", text, pos)
            a = alphabet.parse(m.group(1), offset=m.start(1))
            b = alphabet.parse(m.group(2), offset=m.start(2))
            pairs.append((a, b))
            pos = m.end()
        return cls(tuple(pairs))

    def render(self, alphabet: Alphabet | None = None) -> str:
        if alphabet is None:
            rank = max([1] + [max(a.max_index, b.max_index) for a, b in self.pairs])
            alphabet = Alphabet.standard(rank)
        return "".join(f"[{alphabet.format(a)},{alphabet.format(b)}]" for a, b in self.pairs)

    def __str__(self) -> str:
        return self.render()


def evaluate(e: CommExpr) -> Word:
    g = Word.identity()
    for a, b in e.pairs:
        g = g * commutator(a, b)
    return g


def letters(e: CommExpr) -> list[Word]:
    out = []
    for a, b in e.pairs:
        out += [a, b, a.inverse(), b.inverse()]
    return out


@dataclass(frozen=True)
class PairSequence:
    """The ``4k - 1`` pairs ``(l_1 ... l_j, l_{j+1})`` of a commutator product."""

    pairs: tuple[tuple[Word, Word], ...]

    def __len__(self) -> int:
        return len(self.pairs)

    def __iter__(self):
        return iter(self.pairs)

    def __getitem__(self, i):
        return self.pairs[i]

    def product(self) -> Word:
        if not self.pairs:
            return Word.identity()
        p, x = self.pairs[-1]
        return p * x


def pair_sequence(e: CommExpr) -> PairSequence:
    if e.k == 0:
        raise ValueError("the pair sequence needs at least one commutator")
    ls = letters(e)
    out = []
    prefix = ls[0]
    for x in ls[1:]:
        out.append((prefix, x))
        prefix = prefix * x
    return PairSequence(tuple(out))


class GroupOracle(Protocol):
    kind: str
    name: str
    alphabet: Alphabet

    def equal(self, u: Word, v: Word) -> bool: ...

    def is_identity(self, w: Word) -> bool: ...


@dataclass(frozen=True)
class FreeGroupOracle:
    rank: int
    kind: str = "free"

    @property
    def name(self) -> str:
        return f"F{self.rank}"

    @property
    def alphabet(self) -> Alphabet:
        return Alphabet.standard(self.rank)

    def equal(self, u: Word, v: Word) -> bool:
        return u == v

    def is_identity(self, w: Word) -> bool:
        return not w


@dataclass(frozen=True)
class RelClass:
    """Relative class of a surface bounding ``target`` with multiplicity ``n``."""

    group: object
    target: CyclicWord
    n: int


def _as_cyclic(w) -> CyclicWord:
    return w if isinstance(w, CyclicWord) else cyclic_reduce(w)[0]


def _free_multiple(g: Word, w: CyclicWord) -> int:
    if not g:
        return 0
    groot, ge = primitive_root(g)
    wroot, we = primitive_root(w)
    if groot == wroot:
        sign = 1
    elif groot == wroot.inverse():
        sign = -1
    else:
        raise NotAPower("the expression is not conjugate to a power of the target")
    if ge % we:
        raise NotAPower(f"the expression is a power of the root of the target but not of the target itself")
    return sign * (ge // we)


def torsion_guard(w: Word, oracle, scan: int) -> None:
    p = Word.identity()
    for m in range(1, scan + 1):
        p = p * w
        if oracle.is_identity(p):
            raise GuardError(f"the target has finite order {m}; relative classes need infinite order")


def boundary_multiple(e: CommExpr, w, oracle=None, scan: int = 32) -> int:
    """Integer ``n`` with ``evaluate(e) = w^n`` in the oracle group.

    In a free group this is decided exactly up to conjugacy.  For other
    oracles the range ``0 < |n| <= scan`` is searched with the oracle's
    equality test; ``Inconclusive`` means nothing was found there.
    """
    target = w.word if isinstance(w, CyclicWord) else w
    if not target:
        raise GuardError("the target element must be nontrivial")
    g = evaluate(e)
    if oracle is None or oracle.kind == "free":
        return _free_multiple(g, _as_cyclic(target))
    if oracle.is_identity(target):
        raise GuardError("the target element is trivial in the group")
    torsion_guard(target, oracle, scan)
    if oracle.is_identity(g):
        return 0
    pos = neg = Word.identity()
    inv = target.inverse()
    for n in range(1, scan + 1):
        pos, neg = pos * target, neg * inv
        if oracle.equal(g, pos):
            return n
        if oracle.equal(g, neg):
            return -n
    raise Inconclusive(f"no n with 0 < |n| <= {scan} found for the expression")


def rel_class(e: CommExpr, w, oracle=None, scan: int = 32) -> RelClass:
    n = boundary_multiple(e, w, oracle, scan)
    if n == 0:
        raise GuardError("absolute class, gromnorm bound 4k-2 applies to the zero class")
    return RelClass(oracle, _as_cyclic(w), n)


def witness_gromnorm_bound(k: int, n: int) -> Fraction:
    if k < 1:
        raise ValueError("need at least one commutator")
    if n == 0:
        raise ValueError("n must be nonzero")
    return Fraction(4 * k - 2, abs(n))


def witness_scl_bound(k: int, n: int) -> Fraction:
    return witness_gromnorm_bound(k, n) / 4


def _names(e: CommExpr, w, oracle):
    alphabet = oracle.alphabet if oracle is not None else None
    word = w.word if isinstance(w, CyclicWord) else w
    if alphabet is None:
        rank = max(word.max_index, *(max(a.max_index, b.max_index) for a, b in e.pairs), 1)
        alphabet = Alphabet.standard(rank)
    group = oracle.name if oracle is not None else f"F{alphabet.rank}"
    return alphabet, alphabet.format(word), group


def _checked(e: CommExpr, w, oracle, scan):
    if e.k == 0:
        raise GuardError("an empty commutator product certifies nothing")
    return boundary_multiple(e, w, oracle, scan)


def gromnorm_upper(e: CommExpr, w, oracle=None, scan: int = 32) -> Certificate:
    n = _checked(e, w, oracle, scan)
    if n == 0:
        raise GuardError("absolute class, gromnorm bound 4k-2 applies to the zero class")
    alphabet, wname, group = _names(e, w, oracle)
    raw = 4 * e.k - 2
    return Certificate(
        quantity=f"gromnorm({wname})",
        group=group,
        direction="upper",
        value=witness_gromnorm_bound(e.k, n),
        soundness=Soundness.EXACT,
        witness=f"{e.render(alphabet)} = {wname}^{n}; genus {e.k}; class bound {raw} at n={n}",
        citation="surface-witness",
    )


def scl_upper(e: CommExpr, w, oracle=None, scan: int = 32) -> Certificate:
    n = _checked(e, w, oracle, scan)
    if n == 0:
        raise GuardError("absolute class, gromnorm bound 4k-2 applies to the zero class")
    alphabet, wname, group = _names(e, w, oracle)
    return Certificate(
        quantity=f"scl({wname})",
        group=group,
        direction="upper",
        value=witness_scl_bound(e.k, n),
        soundness=Soundness.EXACT,
        witness=f"{e.render(alphabet)} = {wname}^{n}; genus {e.k}",
        citation="surface-witness",
    )
