"""Rational 1-chains on a free group and their conjugacy-class normal form.

A ``Chain`` is a finitely supported formal combination of words with
rational coefficients.  Two chains are equivalent modulo the span of
``w - t^-1 w t`` exactly when their standard forms agree; ``StdChain`` is
that standard form, with one canonical cyclic word per conjugacy class.
"""

from __future__ import annotations

import re
from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Mapping

from .errors import ParseError
from .words import Alphabet, CyclicWord, Word, conjugate, cyclic_reduce

Rational = Fraction


def _frac(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


class Chain:
    """Formal rational combination of words.  Zero coefficients are never stored."""

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[Word, object] | Iterable[tuple[object, Word]] = ()):
        acc: dict[Word, Fraction] = defaultdict(Fraction)
        items = terms.items() if isinstance(terms, Mapping) else ((w, c) for c, w in terms)
        for w, c in items:
            acc[w] += _frac(c)
        object.__setattr__(self, "terms", {w: c for w, c in acc.items() if c})

    def __setattr__(self, name, value):
        raise AttributeError("Chain is immutable")

    @classmethod
    def of(cls, w: Word, coeff=1) -> Chain:
        return cls({w: coeff})

    @classmethod
    def parse(cls, text: str, alphabet: Alphabet | None = None) -> Chain:
        return Chain([(c, w) for c, w in parse_terms(text, alphabet)])

    def __add__(self, other: Chain) -> Chain:
        t = dict(self.terms)
        for w, c in other.terms.items():
            t[w] = t.get(w, Fraction(0)) + c
        return Chain(t)

    def __neg__(self) -> Chain:
        return Chain({w: -c for w, c in self.terms.items()})

    def __sub__(self, other: Chain) -> Chain:
        return self + (-other)

    def __rmul__(self, scalar) -> Chain:
        s = _frac(scalar)
        return Chain({w: s * c for w, c in self.terms.items()})

    def __eq__(self, other) -> bool:
        return isinstance(other, Chain) and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __iter__(self):
        return iter(self.terms.items())

    def words(self) -> list[Word]:
        return sorted(self.terms)

    def render(self, alphabet: Alphabet | None = None) -> str:
        items = [(c, w) for w, c in sorted(self.terms.items(), key=lambda kv: kv[0].sort_key())]
        return _render(items, alphabet)

    def __str__(self) -> str:
        return self.render()

    def __repr__(self) -> str:
        return f"Chain({self.render()!r})"


@dataclass(frozen=True)
class StdChain:
    """Standard form: ``(coefficient, CyclicWord)`` terms, pairwise non-conjugate, sorted."""

    terms: tuple[tuple[Fraction, CyclicWord], ...] = ()

    def __post_init__(self):
        seen = set()
        for c, w in self.terms:
            if not c or not w or w in seen:
                raise ValueError("not a standard chain")
            seen.add(w)

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __len__(self) -> int:
        return len(self.terms)

    def to_chain(self) -> Chain:
        return Chain([(c, w.word) for c, w in self.terms])

    def render(self, alphabet: Alphabet | None = None) -> str:
        return _render([(c, w.word) for c, w in self.terms], alphabet)

    @classmethod
    def parse(cls, text: str, alphabet: Alphabet | None = None) -> StdChain:
        return standardize(Chain.parse(text, alphabet))

    def __str__(self) -> str:
        return self.render()


class TwoChain:
    """Formal rational combination of ordered pairs of words."""

    __slots__ = ("terms",)

    def __init__(self, terms: Iterable[tuple[object, Word, Word]] = ()):
        acc: dict[tuple[Word, Word], Fraction] = defaultdict(Fraction)
        for c, g, h in terms:
            acc[(g, h)] += _frac(c)
        object.__setattr__(self, "terms", {k: v for k, v in acc.items() if v})

    def __setattr__(self, name, value):
        raise AttributeError("TwoChain is immutable")

    def __len__(self) -> int:
        return len(self.terms)

    def __iter__(self):
        return ((c, g, h) for (g, h), c in self.terms.items())

    def __add__(self, other: TwoChain) -> TwoChain:
        return TwoChain(list(self) + list(other))

    def __eq__(self, other) -> bool:
        return isinstance(other, TwoChain) and self.terms == other.terms


def standardize(c: Chain) -> StdChain:
    """Merge conjugate terms, drop zero coefficients and the identity class."""
    acc: dict[CyclicWord, Fraction] = defaultdict(Fraction)
    for w, coeff in c.terms.items():
        core = cyclic_reduce(w)[0]
        if core:
            acc[core] += coeff
    terms = sorted(((q, w) for w, q in acc.items() if q), key=lambda t: (t[1].sort_key(), t[0]))
    return StdChain(tuple(terms))


def identity_weight(c: Chain) -> Fraction:
    """Total coefficient on words conjugate to the identity (dropped by ``standardize``)."""
    return sum((q for w, q in c.terms.items() if not w), Fraction(0))


def k_equivalent(c1: Chain, c2: Chain) -> bool:
    return standardize(c1) == standardize(c2)


def k_generator(w: Word, t: Word, coeff=1) -> Chain:
    """``coeff * (w - w^t)``.  Zero when ``w`` and ``w^t`` coincide."""
    return Chain([(coeff, w), (-_frac(coeff), conjugate(w, t))])


def d2(x: TwoChain) -> Chain:
    """Boundary ``d(g, h) = h - gh + g`` extended linearly."""
    out: list[tuple[Fraction, Word]] = []
    for c, g, h in x:
        out += [(c, h), (-c, g * h), (c, g)]
    return Chain(out)


def k_to_boundary_witness(w: Word, t: Word) -> TwoChain:
    """A 2-chain whose boundary is exactly ``w - t^-1 w t``."""
    ti = t.inverse()
    one = Word.identity()
    return TwoChain([(1, ti, w * t), (1, w, t), (-1, ti, t), (-1, one, one)])


def h1_image(c: Chain, rank: int | None = None) -> tuple[Fraction, ...]:
    """Abelianization of ``c``: signed generator counts weighted by coefficients."""
    if rank is None:
        rank = max((w.max_index for w in c.terms), default=0)
    v = [Fraction(0)] * rank
    for w, q in c.terms.items():
        for x in w.letters:
            i = abs(x) - 1
            if i >= rank:
                raise ValueError(f"generator {abs(x)} exceeds rank {rank}")
            v[i] += q if x > 0 else -q
    return tuple(v)


def is_boundary_class(c: Chain, rank: int | None = None) -> bool:
    return not any(h1_image(c, rank))


def qm_on_chain(phi: Callable[[Word], object], c: Chain):
    """Linear extension ``sum coeff * phi(word)`` of a homogeneous quasimorphism."""
    total = Fraction(0)
    for w, q in c.terms.items():
        total += q * phi(w)
    return total


# text grammar -------------------------------------------------------------

_NUM = re.compile(r"\s*(\d*\.\d+|\d+(?:/\d+)?)")
_WORD = re.compile(r"\s*([A-Za-z]*)")


def _render(items: list[tuple[Fraction, Word]], alphabet: Alphabet | None) -> str:
    if not items:
        return "0"
    if alphabet is None:
        rank = max((w.max_index for _, w in items), default=1)
        alphabet = Alphabet.standard(max(rank, 1))
    parts = []
    for i, (c, w) in enumerate(items):
        sign = "-" if c < 0 else "+"
        mag = abs(c)
        body = f"[{alphabet.format(w)}]"
        if mag != 1:
            body = f"{mag}*{body}"
        if i == 0:
            parts.append(("-" if sign == "-" else "") + body)
        else:
            parts.append(f" {sign} {body}")
    return "".join(parts)


def parse_terms(text: str, alphabet: Alphabet | None = None) -> list[tuple[Fraction, Word]]:
    """Parse ``coeff*[word] +- coeff*[word] ...``; bare words are allowed too.

    ``0`` (or an empty string) is the zero chain.
    """
    alphabet = alphabet or Alphabet.standard(26)
    if text.strip() in ("", "0"):
        return []
    pos = 0
    n = len(text)
    out: list[tuple[Fraction, Word]] = []

    def skip_ws(p: int) -> int:
        while p < n and text[p].isspace():
            p += 1
        return p

    first = True
    while True:
        pos = skip_ws(pos)
        if pos >= n:
            if first:
                raise ParseError("empty chain", text, pos)
            raise ParseError("expected a term after the sign", text, pos)
        sign = 1
        if text[pos] in "+-":
            sign = -1 if text[pos] == "-" else 1
            pos = skip_ws(pos + 1)
        elif not first:
            raise ParseError("expected '+' or '-'", text, pos)
        coeff = Fraction(1)
        m = _NUM.match(text, pos)
        had_num = bool(m)
        if m:
            try:
                coeff = Fraction(m.group(1))
            except ZeroDivisionError:
                raise ParseError("zero denominator", text, m.start(1)) from None
            pos = skip_ws(m.end())
            if pos < n and text[pos] == "*":
                pos = skip_ws(pos + 1)
                if pos >= n or not (text[pos] == "[" or text[pos].isalpha()):
                    raise ParseError("expected a word after '*'", text, pos)
            elif pos < n and text[pos] not in "[+-":
                raise ParseError("expected '*' after the coefficient", text, pos)
        if pos < n and text[pos] == "[":
            close = text.find("]", pos)
            if close < 0:
                raise ParseError("unclosed '['", text, pos)
            inner = text[pos + 1 : close]
            word = alphabet.parse(inner, offset=pos + 1) if inner.strip() not in ("", "1") else Word.identity()
            pos = close + 1
        else:
            m = _WORD.match(text, pos)
            if not m.group(1):
                if not had_num:
                    raise ParseError("expected a word", text, pos)
                # a bare number is a multiple of the identity word
                word = Word.identity()
            else:
                word = alphabet.parse(m.group(1), offset=m.start(1))
                pos = m.end()
        out.append((sign * coeff, word))
        first = False
        pos = skip_ws(pos)
        if pos >= n:
            return out
