"""Fuchsian groups acting on the circle at infinity.

Boundary points carry a disk-model angle in ``[0, 2pi)``.  A real point
``x`` of the upper half-plane boundary sits at angle ``pi + 2 atan(x)`` and
``infinity`` at angle ``0``, so the counterclockwise order is the order of
the real line starting just after infinity.  Points that come from exact
rational data keep that data, and orientation tests on them are exact.
"""

from __future__ import annotations

import cmath
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .certificates import Certificate, Soundness
from .duality import Cocycle, Quasimorphism
from .errors import GuardError, ParseError
from .words import Alphabet, Word

TWO_PI = 2 * math.pi


class _Infinity:
    __slots__ = ()

    def __repr__(self):
        return "INF"

    def __reduce__(self):
        return (_inf, ())


def _inf():
    return INF


INF = _Infinity()


def _norm_angle(t: float) -> float:
    t = math.fmod(t, TWO_PI)
    if t < 0:
        t += TWO_PI
    if t >= TWO_PI:
        t -= TWO_PI
    return t


def real_to_angle(x) -> float:
    if x is INF:
        return 0.0
    return _norm_angle(math.pi + 2 * math.atan(float(x)))


@dataclass(frozen=True)
class BoundaryPoint:
    """A point of the circle.  ``exact`` is a ``Fraction``, ``INF`` or ``None``."""

    angle: float
    exact: object = None
    label: str = field(default="", compare=False)

    @classmethod
    def from_angle(cls, theta: float) -> BoundaryPoint:
        return cls(_norm_angle(float(theta)))

    @classmethod
    def from_real(cls, x) -> BoundaryPoint:
        """Upper half-plane boundary point; ``INF`` or ``None`` for infinity."""
        if x is None or x is INF:
            return cls(0.0, INF)
        if isinstance(x, (int, Fraction)):
            x = Fraction(x)
            return cls(real_to_angle(x), x)
        return cls(real_to_angle(x))

    @property
    def is_exact(self) -> bool:
        return self.exact is not None

    def real(self):
        """Half-plane coordinate (``INF`` for infinity)."""
        if self.exact is not None:
            return self.exact
        if self.angle == 0.0:
            return INF
        return math.tan((self.angle - math.pi) / 2)

    def __str__(self) -> str:
        if self.exact is INF:
            return "inf"
        if self.exact is not None:
            return str(self.exact)
        return f"angle {self.angle:.12g}"


def _key(x):
    return (0, 0) if x is INF else (1, x)


def _orientation_exact(x, y, z) -> int:
    if x == y or y == z or x == z:
        return 0
    kx, ky, kz = _key(x), _key(y), _key(z)
    return 1 if (kx < ky < kz or ky < kz < kx or kz < kx < ky) else -1


def orientation(x: BoundaryPoint, y: BoundaryPoint, z: BoundaryPoint) -> int:
    """+1 for counterclockwise, -1 for clockwise, 0 when two points coincide."""
    if x.exact is not None and y.exact is not None and z.exact is not None:
        return _orientation_exact(x.exact, y.exact, z.exact)
    a, b, c = x.angle, y.angle, z.angle
    if a == b or b == c or a == c:
        return 0
    # cyclic order of the normalized angles; no subtraction, so no rounding
    return 1 if (a < b < c or b < c < a or c < a < b) else -1


def _is_exact_number(v) -> bool:
    return isinstance(v, (int, Fraction)) and not isinstance(v, bool)


@dataclass(frozen=True)
class Mobius:
    """An element of PSL(2, R) acting on the upper half-plane."""

    a: object
    b: object
    c: object
    d: object

    def __post_init__(self):
        entries = (self.a, self.b, self.c, self.d)
        if all(_is_exact_number(v) for v in entries):
            vals = [Fraction(v) for v in entries]
            det = vals[0] * vals[3] - vals[1] * vals[2]
            if det <= 0:
                raise ValueError("determinant must be positive")
            if det != 1:
                root = _rational_sqrt(det)
                if root is None:
                    raise ValueError("exact entries need a rational square root of the determinant")
                vals = [v / root for v in vals]
        else:
            vals = [float(v) for v in entries]
            det = vals[0] * vals[3] - vals[1] * vals[2]
            if det <= 0:
                raise ValueError("determinant must be positive")
            s = math.sqrt(det)
            vals = [v / s for v in vals]
        for name, v in zip("abcd", vals):
            object.__setattr__(self, name, v)

    @property
    def exact(self) -> bool:
        return isinstance(self.a, Fraction)

    @classmethod
    def identity(cls) -> Mobius:
        return cls(1, 0, 0, 1)

    @classmethod
    def rotation(cls, tau: float) -> Mobius:
        """Elliptic element turning the disk about its center by ``tau``."""
        h = tau / 2
        return cls(math.cos(h), math.sin(h), -math.sin(h), math.cos(h))

    @classmethod
    def _trusted(cls, a, b, c, d) -> Mobius:
        m = object.__new__(cls)
        for name, v in zip("abcd", (a, b, c, d)):
            object.__setattr__(m, name, v)
        return m

    def __matmul__(self, other: Mobius) -> Mobius:
        entries = (
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )
        if self.exact and other.exact:
            # determinant one is preserved exactly
            return Mobius._trusted(*entries)
        return Mobius(*entries)

    def inverse(self) -> Mobius:
        return Mobius._trusted(self.d, -self.b, -self.c, self.a)

    def __pow__(self, n: int) -> Mobius:
        base = self if n >= 0 else self.inverse()
        out = Mobius.identity()
        for _ in range(abs(n)):
            out = out @ base
        return out

    @property
    def trace(self):
        return self.a + self.d

    def kind(self) -> str:
        t = abs(self.trace)
        if self.exact:
            return "elliptic" if t < 2 else ("parabolic" if t == 2 else "hyperbolic")
        if abs(t - 2) <= 1e-12:
            return "parabolic"
        return "elliptic" if t < 2 else "hyperbolic"

    def is_identity(self, tol: float = 1e-12) -> bool:
        if self.exact:
            return self.b == 0 and self.c == 0 and self.a == self.d
        return abs(self.b) <= tol and abs(self.c) <= tol and abs(self.a - self.d) <= tol

    def disk(self) -> tuple[complex, complex]:
        """``(alpha, beta)`` with ``z -> (alpha z + beta)/(conj(beta) z + conj(alpha))``."""
        a, b, c, d = (float(v) for v in (self.a, self.b, self.c, self.d))
        alpha = ((a + d) + 1j * (b - c)) / 2
        beta = ((a - d) - 1j * (b + c)) / 2
        return alpha, beta

    def act_real(self, x):
        if x is INF:
            return INF if self.c == 0 else self.a / self.c
        den = self.c * x + self.d
        if den == 0:
            return INF
        return (self.a * x + self.b) / den

    def act_angle(self, theta: float) -> float:
        alpha, beta = self.disk()
        z = cmath.exp(1j * theta)
        w = (alpha * z + beta) / (beta.conjugate() * z + alpha.conjugate())
        return _norm_angle(cmath.phase(w))

    def lift(self):
        """The continuous lift ``F`` of the circle map with ``F(0)`` in ``[0, 2pi)``."""
        alpha, beta = self.disk()
        p = -beta / alpha
        pc = p.conjugate()
        two_arg = 2 * cmath.phase(alpha)

        def raw(t: float) -> float:
            return t + two_arg - 2 * cmath.phase(1 - pc * cmath.exp(1j * t))

        shift = TWO_PI * math.floor(raw(0.0) / TWO_PI)
        return lambda t: raw(t) - shift, raw, shift

    def __str__(self) -> str:
        return f"[{self.a} {self.b}; {self.c} {self.d}]"


def _rational_sqrt(q: Fraction) -> Fraction | None:
    n, d = q.numerator, q.denominator
    rn, rd = math.isqrt(n), math.isqrt(d)
    if rn * rn == n and rd * rd == d:
        return Fraction(rn, rd)
    return None


def act(m: Mobius, x: BoundaryPoint) -> BoundaryPoint:
    if m.exact and x.exact is not None:
        y = m.act_real(x.exact)
        return BoundaryPoint.from_real(y)
    return BoundaryPoint.from_angle(m.act_angle(x.angle))


def fixed_points(m: Mobius) -> list[BoundaryPoint]:
    """Boundary fixed points; for hyperbolic elements the attracting one comes first."""
    if m.is_identity():
        raise ValueError("every point is fixed by the identity")
    a, b, c, d = m.a, m.b, m.c, m.d
    kind = m.kind()
    if kind == "elliptic":
        return []
    pts = []
    if c == 0:
        pts.append(INF)
        if a != d:
            pts.append(b / (d - a))
    elif kind == "parabolic":
        pts.append((a - d) / (2 * c))
    else:
        disc = (d - a) ** 2 + 4 * b * c
        root = _rational_sqrt(disc) if m.exact else None
        if root is None:
            a, c, d = float(a), float(c), float(d)
            root = math.sqrt(float(disc))
        pts += [(a - d + root) / (2 * c), (a - d - root) / (2 * c)]
    out = []
    for x in pts:
        p = BoundaryPoint.from_real(x)
        out.append(p)
    if kind == "parabolic":
        return [BoundaryPoint(out[0].angle, out[0].exact, "parabolic")]
    att = []
    for p in out:
        x = p.real()
        if x is INF:
            deriv = float(m.d) ** 2 / float(m.a) ** 2 if m.a else math.inf
        else:
            den = float(m.c) * float(x) + float(m.d)
            deriv = 1 / den**2 if den else math.inf
        att.append((deriv, p))
    att.sort(key=lambda t: t[0])
    return [
        BoundaryPoint(att[0][1].angle, att[0][1].exact, "attracting"),
        BoundaryPoint(att[1][1].angle, att[1][1].exact, "repelling"),
    ]


# arcs and ping-pong ----------------------------------------------------------


def _in_closed_arc(start, end, y) -> bool:
    """``y`` on the closed counterclockwise arc from ``start`` to ``end`` (exact data)."""
    return y == start or y == end or _orientation_exact(start, y, end) == 1


def _ccw_le(base, y1, y2) -> bool:
    """``y1`` comes no later than ``y2`` when walking counterclockwise from ``base``."""
    if y1 == y2 or y1 == base:
        return True
    if y2 == base:
        return False
    return _orientation_exact(base, y1, y2) == 1


def _arc_inside(inner: tuple, outer: tuple) -> bool:
    s, e = inner
    os_, oe = outer
    return (
        _in_closed_arc(os_, oe, s)
        and _in_closed_arc(os_, oe, e)
        and _ccw_le(os_, s, e)
    )


@dataclass(frozen=True)
class FuchsianRep:
    """Generator images, optionally with ping-pong arcs for a discreteness check.

    ``pingpong`` maps a signed letter ``s`` to the open counterclockwise arc
    ``(start, end)`` (exact half-plane coordinates) that ``s`` is meant to
    map the complement of the arc of ``s^-1`` into.
    """

    gens: tuple[Mobius, ...]
    pingpong: dict | None = field(default=None, compare=False)
    names: str = ""

    def __post_init__(self):
        if not self.names:
            object.__setattr__(self, "names", Alphabet.standard(len(self.gens)).names)
        if self.pingpong is not None:
            bad = self.pingpong_failures()
            if bad:
                raise GuardError("ping-pong check failed: " + "; ".join(bad))

    @property
    def rank(self) -> int:
        return len(self.gens)

    @property
    def alphabet(self) -> Alphabet:
        return Alphabet(self.names)

    @property
    def exact(self) -> bool:
        return all(g.exact for g in self.gens)

    def image(self, letter: int) -> Mobius:
        g = self.gens[abs(letter) - 1]
        return g if letter > 0 else g.inverse()

    def __call__(self, w: Word) -> Mobius:
        m = Mobius.identity()
        for x in w.letters:
            m = m @ self.image(x)
        return m

    def pingpong_failures(self) -> list[str]:
        arcs = self.pingpong or {}
        need = {s for i in range(1, self.rank + 1) for s in (i, -i)}
        fails = []
        if set(arcs) != need:
            return ["an arc is needed for every generator and inverse"]
        keys = sorted(arcs)
        for i, s in enumerate(keys):
            for t in keys[i + 1 :]:
                if not _arc_inside(arcs[t], (arcs[s][1], arcs[s][0])):
                    fails.append(f"arcs of {s} and {t} overlap")
        for s in keys:
            m = self.image(s)
            start, end = arcs[-s]
            # the closed complement runs counterclockwise from end to start
            img = (m.act_real(end), m.act_real(start))
            if not _arc_inside(img, arcs[s]):
                fails.append(f"letter {s} does not map the complement of its inverse's arc into its arc")
        return fails

    def render(self) -> str:
        lines = []
        for ch, g in zip(self.names, self.gens):
            lines.append(f"{ch} = {g.a} {g.b} {g.c} {g.d}")
        for s, (p, q) in sorted((self.pingpong or {}).items()):
            name = self.alphabet.name(s)
            lines.append(f"pingpong {name} = {_fmt_pt(p)} {_fmt_pt(q)}")
        return "\n".join(lines) + "\n"


def _fmt_pt(x) -> str:
    return "inf" if x is INF else str(x)


def _parse_num(tok: str, line: str):
    tok = tok.strip()
    if tok.lower() in ("inf", "oo", "infinity"):
        return INF
    try:
        if any(ch in tok for ch in ".eE") and "/" not in tok:
            return float(tok)
        return Fraction(tok)
    except (ValueError, ZeroDivisionError):
        raise ParseError(f"bad number {tok!r}", line, line.find(tok)) from None


def parse_rep(text: str) -> FuchsianRep:
    """Read a representation from text.

    One generator per line as ``name = a b c d`` (rationals like ``-1/2`` or
    decimals), then optional ``pingpong X = start end`` lines using ``inf``
    for infinity.  ``#`` starts a comment.
    """
    gens: list[tuple[str, Mobius]] = []
    raw_arcs: list[tuple[str, object, object, str]] = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        head, sep, rest = line.partition("=")
        if not sep:
            raise ParseError("expected 'name = ...'", raw, 0)
        head = head.strip()
        toks = rest.split()
        if head.startswith("pingpong"):
            name = head[len("pingpong"):].strip()
            if len(name) != 1 or len(toks) != 2:
                raise ParseError("expected 'pingpong X = start end'", raw, 0)
            raw_arcs.append((name, _parse_num(toks[0], raw), _parse_num(toks[1], raw), raw))
            continue
        if len(head) != 1 or not head.islower() or len(toks) != 4:
            raise ParseError("expected 'x = a b c d' with a lowercase generator name", raw, 0)
        vals = [_parse_num(t, raw) for t in toks]
        if any(v is INF for v in vals):
            raise ParseError("matrix entries must be finite", raw, 0)
        try:
            gens.append((head, Mobius(*vals)))
        except ValueError as exc:
            raise ParseError(str(exc), raw, 0) from None
    if not gens:
        raise ParseError("no generators given")
    names = "".join(n for n, _ in gens)
    try:
        alphabet = Alphabet(names)
    except ValueError as exc:
        raise ParseError(str(exc)) from None
    arcs = None
    if raw_arcs:
        arcs = {}
        for name, p, q, raw in raw_arcs:
            try:
                s = alphabet.letter(name)
            except KeyError:
                raise ParseError(f"unknown generator {name!r}", raw, 0) from None
            if not all(v is INF or isinstance(v, Fraction) for v in (p, q)):
                raise ParseError("ping-pong endpoints must be exact", raw, 0)
            arcs[s] = (p, q)
    return FuchsianRep(tuple(m for _, m in gens), arcs, names)


def punctured_torus_rep() -> FuchsianRep:
    """A discrete free group of rank 2 uniformizing a once-punctured torus.

    The commutator of the generators is parabolic (trace -2).
    """
    a = Mobius(1, 1, 1, 2)
    b = Mobius(1, -1, -1, 2)
    arcs = {
        -1: (INF, Fraction(-1)),
        2: (Fraction(-1), Fraction(0)),
        1: (Fraction(0), Fraction(1)),
        -2: (Fraction(1), INF),
    }
    return FuchsianRep((a, b), arcs, "ab")


# cocycles --------------------------------------------------------------------


def default_base_point(rep: FuchsianRep, seed: int = 2024) -> BoundaryPoint:
    """A pseudo-random base point, rational when the representation is exact."""
    rng = random.Random(seed)
    if rep.exact:
        return BoundaryPoint.from_real(Fraction(rng.randint(-997, 997), rng.randint(1, 997)))
    return BoundaryPoint.from_angle(rng.uniform(0, TWO_PI))


def euler_cocycle(rep: FuchsianRep, x: BoundaryPoint | None = None) -> Cocycle:
    """``(g, h) -> -1/2 Or(x, g x, gh x)`` for the boundary action of ``rep``."""
    if x is None:
        x = default_base_point(rep)
    exact = rep.exact and x.is_exact
    half = Fraction(-1, 2)

    cache: dict = {}

    def point(w: Word) -> BoundaryPoint:
        p = cache.get(w)
        if p is None:
            p = cache[w] = act(rep(w), x)
        return p

    def ev(g: Word, h: Word):
        return half * orientation(x, point(g), point(g * h))

    def primitive(w: Word, n: int):
        if n < 0:
            w, n = w.inverse(), -n
        if n == 0:
            return Fraction(0), Fraction(0), Soundness.EXACT
        m = rep(w)
        if m.kind() != "elliptic":
            # the orbit of x runs monotonically towards a fixed point, so every
            # triple (x, w^i x, w^(i+1) x) has the same orientation
            eps = orientation(x, point(w), point(w * w))
            grade = Soundness.EXACT if exact else Soundness.NUMERICAL
            return half * eps, Fraction(0), grade
        from .duality import cyclic_primitive_estimate

        val, tol = cyclic_primitive_estimate(Cocycle(ev, Fraction(1, 2), Soundness.EXACT), w, n)
        return val, tol, Soundness.NUMERICAL

    grade = Soundness.EXACT if exact else Soundness.NUMERICAL
    return Cocycle(ev, Fraction(1, 2), grade, f"euler@{x}", cyclic_primitive=primitive)


# rotation numbers ------------------------------------------------------------


@dataclass(frozen=True)
class Estimate:
    value: Fraction | float
    tol: Fraction | float
    exact: bool = False
    lift_dependent: bool = False


class _Lifts:
    def __init__(self, rep: FuchsianRep):
        self.maps = {}
        for i, g in enumerate(rep.gens, start=1):
            f, _, _ = g.lift()
            _, graw, _ = g.inverse().lift()
            # pick the inverse lift so that it undoes f exactly
            target = graw(f(0.0))
            j = round(target / TWO_PI)
            self.maps[i] = f
            self.maps[-i] = (lambda G, s: (lambda t: G(t) - s))(graw, TWO_PI * j)

    def word_map(self, w: Word):
        fs = [self.maps[x] for x in reversed(w.letters)]

        def F(t: float) -> float:
            for f in fs:
                t = f(t)
            return t

        return F


def rotation_number(rep: FuchsianRep, w: Word, iters: int = 4000, theta0: float = 0.0) -> Estimate:
    """Translation number of the canonical lift of ``rep(w)``, in full turns."""
    if iters < 1:
        raise ValueError("iters must be positive")
    lift_dep = any(sum((1 if x > 0 else -1) for x in w.letters if abs(x) == i) for i in range(1, rep.rank + 1))
    if not w:
        return Estimate(Fraction(0), Fraction(0), True, False)
    F = _Lifts(rep).word_map(w)
    m = rep(w)
    kind = m.kind()
    if kind == "elliptic":
        q = _elliptic_order(m)
        if q is not None:
            t = theta0
            for _ in range(q):
                t = F(t)
            p = round((t - theta0) / TWO_PI)
            return Estimate(Fraction(p, q), Fraction(0), True, lift_dep)
    t = theta0
    for _ in range(iters):
        t = F(t)
    est = (t - theta0) / (TWO_PI * iters)
    slop = 1e-12 * max(1.0, abs(est)) * len(w)
    tol = 1.0 / iters + slop
    if kind != "elliptic":
        # a map with a fixed point has an integer translation number
        k = round(est)
        if abs(est - k) < tol:
            return Estimate(Fraction(k), tol, False, lift_dep)
    return Estimate(est, tol, False, lift_dep)


def _elliptic_order(m: Mobius, limit: int = 64) -> int | None:
    p = Mobius.identity()
    for q in range(1, limit + 1):
        p = p @ m
        if p.is_identity(1e-9):
            return q
    return None


def rotation_quasimorphism(rep: FuchsianRep, iters: int = 4000) -> Quasimorphism:
    """Rotation number of the canonical lift.  Homogeneous, defect at most 1."""
    cache: dict = {}

    def ev(w: Word):
        r = cache.get(w)
        if r is None:
            r = cache[w] = rotation_number(rep, w, iters).value
        return r

    return Quasimorphism(ev, Fraction(1), Soundness.NUMERICAL, True, "rot", Fraction(1, iters))


# areas and extremal surfaces ---------------------------------------------------


def ideal_area(triangles: Iterable[Sequence[BoundaryPoint]]) -> tuple[float, Fraction]:
    """Signed area ``pi * sum Or`` and the implied Euler pairing ``-1/2 sum Or``."""
    total = sum(orientation(*t) for t in triangles)
    return math.pi * total, Fraction(-total, 2)


@dataclass(frozen=True)
class ImmersionWitness:
    """A positively immersed admissible surface, as asserted by the user."""

    chi_minus: int
    n: int
    description: str = ""

    def __post_init__(self):
        if self.n == 0:
            raise ValueError("the boundary degree n must be nonzero")
        if self.chi_minus > 0 or self.n < 0:
            raise ValueError("need chi_minus <= 0 and n >= 1")


@dataclass(frozen=True)
class ExtremalValues:
    gromnorm: Fraction
    scl: Fraction | None
    euler_pairing: Fraction
    scl_flag: str = ""


def theorem_e_eval(wit: ImmersionWitness, free_bridge: bool = True) -> ExtremalValues:
    """Exact values forced by a positive immersion: ``-2 chi^- / n`` and friends."""
    g = Fraction(-2 * wit.chi_minus, wit.n)
    pairing = Fraction(wit.chi_minus, wit.n)
    if free_bridge:
        return ExtremalValues(g, g / 4, pairing)
    return ExtremalValues(g, None, pairing, "scl needs the free-group correspondence; not asserted")


def extremal_certificates(wit: ImmersionWitness, target: str, group: str) -> list[Certificate]:
    vals = theorem_e_eval(wit)
    note = f"positive immersion asserted: chi-={wit.chi_minus}, n={wit.n}"
    if wit.description:
        note += f" ({wit.description})"
    out = [
        Certificate(f"gromnorm({target})", group, "exact", vals.gromnorm, Soundness.LITERATURE,
                    note, "euler-extremality", assumptions=("positive immersion",)),
    ]
    if vals.scl is not None:
        out.append(Certificate(f"scl({target})", group, "exact", vals.scl, Soundness.LITERATURE,
                               note, "euler-extremality", assumptions=("positive immersion", "free group")))
    return out
