"""Words in free groups of finite rank.

A letter is a nonzero integer: ``i`` is the ``i``-th free generator and
``-i`` its inverse.  In text, lowercase letters are generators and uppercase
letters their inverses (``"abAB"`` is ``[1, 2, -1, -2]``).

All objects here are immutable and every operation is pure.
"""

from __future__ import annotations

import itertools
import string
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

from .errors import ParseError

__all__ = [
    "Alphabet",
    "Word",
    "CyclicWord",
    "reduce",
    "multiply",
    "invert",
    "conjugate",
    "cyclic_reduce",
    "are_conjugate",
    "primitive_root",
    "commutator",
    "cyclic_log",
    "ball",
    "letter_key",
]


def letter_key(letter: int) -> int:
    """Total order a < A < b < B < ... on signed letters."""
    return 2 * abs(letter) - (letter > 0)


def reduce(raw: Iterable[int], rank: int | None = None) -> tuple[int, ...]:
    """Freely reduce a letter sequence.

    Raises ``ValueError`` on a zero letter or a generator index beyond
    ``rank`` (when given).
    """
    out: list[int] = []
    for x in raw:
        if x == 0 or (rank is not None and abs(x) > rank):
            raise ValueError(f"unknown generator {x!r} for rank {rank}")
        if out and out[-1] == -x:
            out.pop()
        else:
            out.append(x)
    return tuple(out)


def _concat(u: tuple[int, ...], v: tuple[int, ...]) -> tuple[int, ...]:
    # both inputs reduced: cancellation only happens at the seam
    k = 0
    n = min(len(u), len(v))
    while k < n and u[-1 - k] == -v[k]:
        k += 1
    if k == 0:
        return u + v
    return u[: len(u) - k] + v[k:]


class Word:
    """A freely reduced word.  The empty word is the identity."""

    __slots__ = ("letters", "_hash")

    def __init__(self, letters: Iterable[int] = (), rank: int | None = None):
        object.__setattr__(self, "letters", reduce(letters, rank))
        object.__setattr__(self, "_hash", hash(self.letters))

    @classmethod
    def _trusted(cls, letters: tuple[int, ...]) -> Word:
        w = object.__new__(cls)
        object.__setattr__(w, "letters", letters)
        object.__setattr__(w, "_hash", hash(letters))
        return w

    @classmethod
    def parse(cls, text: str, rank: int | None = None) -> Word:
        return Alphabet.standard(rank if rank is not None else 26).parse(text)

    @classmethod
    def identity(cls) -> Word:
        return _IDENTITY

    def __setattr__(self, name, value):
        raise AttributeError("Word is immutable")

    def __len__(self) -> int:
        return len(self.letters)

    def __iter__(self) -> Iterator[int]:
        return iter(self.letters)

    def __getitem__(self, i):
        return self.letters[i]

    def __bool__(self) -> bool:
        return bool(self.letters)

    def __eq__(self, other) -> bool:
        return isinstance(other, Word) and self.letters == other.letters

    def __hash__(self) -> int:
        return self._hash

    def sort_key(self) -> tuple:
        return (len(self.letters), tuple(letter_key(x) for x in self.letters))

    def __lt__(self, other: Word) -> bool:
        return self.sort_key() < other.sort_key()

    def __mul__(self, other: Word) -> Word:
        return Word._trusted(_concat(self.letters, other.letters))

    def __invert__(self) -> Word:
        return self.inverse()

    def inverse(self) -> Word:
        return Word._trusted(tuple(-x for x in reversed(self.letters)))

    def __pow__(self, n: int) -> Word:
        if n < 0:
            return self.inverse() ** (-n)
        core, conj = cyclic_reduce(self)
        # w = conj^-1 core conj, so w^n = conj^-1 core^n conj with core^n reduced
        body = Word._trusted(core.letters * n)
        return conj.inverse() * body * conj

    def is_identity(self) -> bool:
        return not self.letters

    @property
    def max_index(self) -> int:
        return max((abs(x) for x in self.letters), default=0)

    def __str__(self) -> str:
        return Alphabet.standard(max(self.max_index, 1)).format(self)

    def __repr__(self) -> str:
        return f"Word({str(self)!r})"


_IDENTITY = Word._trusted(())


@dataclass(frozen=True)
class Alphabet:
    """Letter names for generators ``1..rank`` (``names[i-1]`` is generator ``i``).

    Names are single lowercase letters; the uppercase letter is the inverse.
    """

    names: str

    def __post_init__(self):
        if len(set(self.names)) != len(self.names) or not all(
            c in string.ascii_lowercase for c in self.names
        ):
            raise ValueError(f"alphabet names must be distinct lowercase letters: {self.names!r}")

    @classmethod
    def standard(cls, rank: int) -> Alphabet:
        if not 0 <= rank <= 26:
            raise ValueError("the text grammar supports rank at most 26")
        return cls(string.ascii_lowercase[:rank])

    @property
    def rank(self) -> int:
        return len(self.names)

    def letter(self, ch: str) -> int:
        i = self.names.find(ch.lower())
        if i < 0 or not ch.isalpha():
            raise KeyError(ch)
        return i + 1 if ch.islower() else -(i + 1)

    def name(self, letter: int) -> str:
        i = abs(letter)
        if i > len(self.names):
            return f"x{i}" if letter > 0 else f"X{i}"
        ch = self.names[i - 1]
        return ch if letter > 0 else ch.upper()

    def parse(self, text: str, offset: int = 0) -> Word:
        letters = []
        for pos, ch in enumerate(text):
            if ch.isspace():
                continue
            if ch in ("1", "e") and len(text.strip()) == 1 and "e" not in self.names:
                return Word.identity()
            try:
                letters.append(self.letter(ch))
            except KeyError:
                raise ParseError(
                    f"letter {ch!r} is not in the alphabet {self.names!r}",
                    text,
                    offset + pos,
                ) from None
        return Word(letters)

    def format(self, w: Word | CyclicWord | Sequence[int]) -> str:
        letters = w.letters if isinstance(w, (Word, CyclicWord)) else w
        return "".join(self.name(x) for x in letters)


def _is_cyclically_reduced(letters: Sequence[int]) -> bool:
    return len(letters) < 2 or letters[0] != -letters[-1]


def _least_rotation_index(letters: tuple[int, ...]) -> int:
    keys = [letter_key(x) for x in letters]
    n = len(keys)
    return min(range(n), key=lambda i: keys[i:] + keys[:i]) if n else 0


class CyclicWord:
    """A cyclically reduced word stored in its least rotation.

    Two cyclic words are equal iff they represent conjugate elements.
    """

    __slots__ = ("letters", "_hash")

    def __init__(self, letters: Iterable[int] = ()):
        letters = tuple(letters)
        w = Word(letters)
        if w.letters != letters or not _is_cyclically_reduced(letters):
            letters = cyclic_reduce(w)[0].letters
        i = _least_rotation_index(letters)
        object.__setattr__(self, "letters", letters[i:] + letters[:i])
        object.__setattr__(self, "_hash", hash(("cyc", self.letters)))

    def __setattr__(self, name, value):
        raise AttributeError("CyclicWord is immutable")

    @property
    def word(self) -> Word:
        return Word._trusted(self.letters)

    def inverse(self) -> CyclicWord:
        return CyclicWord(tuple(-x for x in reversed(self.letters)))

    def __len__(self) -> int:
        return len(self.letters)

    def __bool__(self) -> bool:
        return bool(self.letters)

    def __eq__(self, other) -> bool:
        return isinstance(other, CyclicWord) and self.letters == other.letters

    def __hash__(self) -> int:
        return self._hash

    def sort_key(self) -> tuple:
        return (len(self.letters), tuple(letter_key(x) for x in self.letters))

    def __lt__(self, other: CyclicWord) -> bool:
        return self.sort_key() < other.sort_key()

    def __str__(self) -> str:
        return str(self.word)

    def __repr__(self) -> str:
        return f"CyclicWord({str(self)!r})"


def multiply(u: Word, v: Word) -> Word:
    return u * v


def invert(w: Word) -> Word:
    return w.inverse()


def conjugate(w: Word, t: Word) -> Word:
    """``w^t = t^-1 w t``."""
    return t.inverse() * w * t


def commutator(a: Word, b: Word) -> Word:
    """``[a, b] = a b a^-1 b^-1``."""
    return a * b * a.inverse() * b.inverse()


def cyclic_reduce(w: Word) -> tuple[CyclicWord, Word]:
    """Return ``(core, t)`` with ``conjugate(core.word, t) == w``."""
    letters = w.letters
    i, j = 0, len(letters) - 1
    while i < j and letters[i] == -letters[j]:
        i += 1
        j -= 1
    middle = letters[i : j + 1]
    prefix = letters[:i]
    r = _least_rotation_index(middle)
    core = CyclicWord.__new__(CyclicWord)
    object.__setattr__(core, "letters", middle[r:] + middle[:r])
    object.__setattr__(core, "_hash", hash(("cyc", core.letters)))
    # w = p m p^-1 and m = x c x^-1 with x = middle[:r]
    px = Word._trusted(prefix) * Word._trusted(middle[:r])
    return core, px.inverse()


def are_conjugate(u: Word, v: Word) -> bool:
    return cyclic_reduce(u)[0] == cyclic_reduce(v)[0]


def _period(letters: tuple[int, ...]) -> int:
    n = len(letters)
    for d in range(1, n + 1):
        if n % d == 0 and letters[:d] * (n // d) == letters:
            return d
    return n


def primitive_root(w: Word | CyclicWord) -> tuple[CyclicWord, int]:
    """Return ``(root, e)`` with the cyclic core of ``w`` equal to ``root^e``, ``e`` maximal."""
    core = w if isinstance(w, CyclicWord) else cyclic_reduce(w)[0]
    if not core:
        raise ValueError("the identity has no primitive root")
    d = _period(core.letters)
    return CyclicWord(core.letters[:d]), len(core) // d


def cyclic_log(g: Word, w: Word) -> int | None:
    """Return ``k`` with ``g == w**k``, or ``None`` if ``g`` is not in ``<w>``."""
    if not g:
        return 0
    if not w:
        return None
    core, t = cyclic_reduce(w)
    # g in <w>  iff  t g t^-1 in <core>, and powers of core are plain repetitions
    h = (t * g * t.inverse()).letters
    d = _period(core.letters)
    root = core.letters[:d]
    e = len(core) // d
    if len(h) % d:
        return None
    j = len(h) // d
    if h == root * j:
        sign = 1
    elif h == tuple(-x for x in reversed(root)) * j:
        sign = -1
    else:
        return None
    if j % e:
        return None
    return sign * (j // e)


def ball(rank: int, radius: int) -> list[Word]:
    """All reduced words of length at most ``radius``, shortest first."""
    letters = [x for i in range(1, rank + 1) for x in (i, -i)]
    layer: list[tuple[int, ...]] = [()]
    out = [Word.identity()]
    for _ in range(radius):
        nxt = []
        for w in layer:
            for x in letters:
                if not w or w[-1] != -x:
                    nxt.append(w + (x,))
        out.extend(Word._trusted(w) for w in nxt)
        layer = nxt
    return out


def random_word(rng, rank: int, max_len: int, min_len: int = 0) -> Word:
    """A uniformly-lengthed random reduced word (for tests and self-checks)."""
    n = rng.randint(min_len, max_len)
    letters: list[int] = []
    while len(letters) < n:
        x = rng.choice([i * s for i in range(1, rank + 1) for s in (1, -1)])
        if letters and letters[-1] == -x:
            continue
        letters.append(x)
    return Word._trusted(tuple(letters))


def pairs(words: Sequence[Word]) -> Iterator[tuple[Word, Word]]:
    return itertools.product(words, repeat=2)
