"""Quasimorphisms, bounded 2-cocycles and the lower bounds they certify."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

from .certificates import Certificate, Soundness, weakest
from .chains import Chain, qm_on_chain
from .errors import GuardError, InvariantBreach
from .hopf import CommExpr, _names, boundary_multiple, evaluate, letters, pair_sequence
from .words import Word, ball, cyclic_reduce


@dataclass(frozen=True)
class Quasimorphism:
    evaluator: Callable[[Word], object]
    defect_bound: Fraction | float
    soundness: Soundness
    homogeneous: bool = True
    name: str = "phi"
    tol: Fraction | float = Fraction(0)

    def __call__(self, w: Word):
        return self.evaluator(w)


# A cyclic primitive hook returns (beta(w^n), tol, grade) for the unique
# bounded function beta on <w> with d(beta) equal to the cocycle there.
CyclicPrimitive = Callable[[Word, int], tuple]


@dataclass(frozen=True)
class Cocycle:
    evaluator: Callable[[Word, Word], object]
    norm_bound: Fraction | float
    soundness: Soundness
    name: str = "psi"
    cyclic_primitive: CyclicPrimitive | None = field(default=None, compare=False)

    def __call__(self, g: Word, h: Word):
        return self.evaluator(g, h)


def zero_cocycle() -> Cocycle:
    return Cocycle(lambda g, h: Fraction(0), Fraction(0), Soundness.EXACT, "zero",
                   cyclic_primitive=lambda w, n: (Fraction(0), Fraction(0), Soundness.EXACT))


def coboundary(phi: Quasimorphism) -> Cocycle:
    """``(g, h) -> phi(g) - phi(gh) + phi(h)``."""
    cache: dict = {}

    def value(w: Word):
        v = cache.get(w)
        if v is None:
            v = phi(w)
            if len(w) <= 8:
                cache[w] = v
        return v

    def ev(g: Word, h: Word):
        return value(g) - value(g * h) + value(h)

    prim = None
    if phi.homogeneous:
        # phi is additive on every cyclic subgroup, so the primitive there is zero
        prim = lambda w, n: (Fraction(0), Fraction(0), Soundness.EXACT)  # noqa: E731
    return Cocycle(ev, phi.defect_bound, phi.soundness, f"d{phi.name}", cyclic_primitive=prim)


@dataclass
class CocycleReport:
    radius: int
    triples: int
    max_identity_defect: object
    max_abs_value: object

    @property
    def ok(self) -> bool:
        return self.max_identity_defect == 0


def check_cocycle(psi: Cocycle, radius: int, rank: int = 2, words: Sequence[Word] | None = None) -> CocycleReport:
    """Largest cocycle-identity defect over all triples from the ball of ``radius``.

    Also records the largest ``|psi|`` seen on pairs of ball words, which must
    not exceed ``psi.norm_bound``.
    """
    ws = list(words) if words is not None else ball(rank, radius)
    n = len(ws)
    # psi and products on pairs of ball words are reused n times each
    prod = [[g * h for h in ws] for g in ws]
    table = [[psi(g, h) for h in ws] for g in ws]
    worst = 0
    top = max(abs(v) for row in table for v in row)
    for i, g1 in enumerate(ws):
        row_i = table[i]
        prod_i = prod[i]
        for j in range(n):
            a = row_i[j]
            g12 = prod_i[j]
            row_j = table[j]
            prod_j = prod[j]
            for k, g3 in enumerate(ws):
                d = row_j[k] - psi(g12, g3) + psi(g1, prod_j[k]) - a
                if d and abs(d) > worst:
                    worst = abs(d)
    if top > psi.norm_bound:
        raise InvariantBreach(f"{psi.name} takes value {top} above its norm bound {psi.norm_bound}")
    return CocycleReport(radius, n ** 3, worst, top)


def pair(psi: Cocycle, e: CommExpr):
    """Sum of ``psi`` over the pair sequence of ``e``."""
    total = Fraction(0)
    for p, x in pair_sequence(e):
        total = total + psi(p, x)
    return total


def cyclic_primitive_estimate(psi: Cocycle, w: Word, n: int, m: int = 4096):
    """Approximate the bounded primitive on ``<w>`` at ``w^n`` by averaging.

    Returns ``(value, tol)``; the averaged value of the primitive at ``w``
    is within ``norm_bound/m`` of the truth, and the error at ``w^n`` is
    ``|n|`` times that.
    """
    if n < 0:
        w, n = w.inverse(), -n
    if n == 0:
        return psi(Word.identity(), Word.identity()), Fraction(0)
    total = Fraction(0)
    p = w
    for _ in range(1, m):
        total = total + psi(p, w)
        p = p * w
    base = total / m
    corr = Fraction(0)
    p = w
    for _ in range(1, n):
        corr = corr + psi(p, w)
        p = p * w
    return n * base - corr, Fraction(n) * Fraction(psi.norm_bound) / m


def relative_pairing(psi: Cocycle, e: CommExpr, w: Word, n: int):
    """Pairing of ``psi`` with the relative class of ``e`` bounding ``w^n``.

    The raw pair-sequence sum is corrected in two ways so that it is a
    genuine pairing: the letters are cancelled in inverse pairs, and ``psi``
    is made to vanish on ``<w>`` by subtracting the coboundary of its bounded
    primitive there.  Returns ``(value, tol, grade)``.
    """
    one = Word.identity()
    value = pair(psi, e)
    for a, b in e.pairs:
        value = value - psi(a, a.inverse()) - psi(b, b.inverse()) - 2 * psi(one, one)
    if psi.cyclic_primitive is not None:
        beta, tol, grade = psi.cyclic_primitive(w, n)
    else:
        beta, tol = cyclic_primitive_estimate(psi, w, n)
        grade = Soundness.NUMERICAL
    return value + beta, tol, grade


def gromnorm_lower(psi: Cocycle, e: CommExpr, w, oracle=None, scan: int = 32,
                   check_radius: int | None = 2, rank: int | None = None) -> Certificate:
    """Lower bound ``|<psi, alpha>| / (|n| norm(psi))`` for the normalized class of ``w``."""
    word = w.word if hasattr(w, "word") else w
    n = boundary_multiple(e, word, oracle, scan)
    if n == 0:
        raise GuardError("absolute class, gromnorm bound 4k-2 applies to the zero class")
    if check_radius is not None:
        r = rank or (oracle.alphabet.rank if oracle is not None else max(word.max_index, 2))
        rep = check_cocycle(psi, check_radius, r)
        if not rep.ok:
            raise GuardError(f"{psi.name} fails the cocycle identity (defect {rep.max_identity_defect})")
    alphabet, wname, group = _names(e, word, oracle)
    # in a free group e evaluates to a conjugate w0^n of w^n; pair against w0
    w0 = word
    if oracle is None or oracle.kind == "free":
        w0 = _root_for(evaluate(e), n)
        if w0 is None:
            raise InvariantBreach("boundary multiple disagrees with the evaluated expression")
    val, tol, grade = relative_pairing(psi, e, w0, n)
    norm = psi.norm_bound
    if norm == 0:
        bound, btol = Fraction(0), Fraction(0)
    else:
        bound = abs(val) / (abs(n) * norm)
        btol = Fraction(tol) / (abs(n) * Fraction(norm)) if tol else Fraction(0)
    grade = weakest(psi.soundness, grade)
    return Certificate(
        quantity=f"gromnorm({wname})",
        group=group,
        direction="lower",
        value=bound,
        soundness=grade,
        witness=f"cocycle {psi.name} on {e.render(alphabet)}, pairing {val}, n={n}",
        citation="relative-bavard-duality",
        tol=btol,
    )


def _root_for(g: Word, n: int) -> Word | None:
    """An element ``w0`` with ``w0^n == g`` exactly (``None`` if there is none)."""
    core, t = cyclic_reduce(g)
    if len(core) % abs(n):
        return None
    d = len(core) // abs(n)
    piece = core.letters[:d]
    if piece * abs(n) != core.letters:
        return None
    w0 = t.inverse() * Word._trusted(piece) * t
    return w0 if n > 0 else w0.inverse()


def scl_lower_bavard(phi: Quasimorphism, c: Chain | Word, group: str = "", label: str | None = None) -> Certificate:
    """``scl(c) >= |phi(c)| / (2 D(phi))``."""
    if not phi.homogeneous:
        raise GuardError("Bavard duality needs a homogeneous quasimorphism")
    chain = c if isinstance(c, Chain) else Chain.of(c)
    val = qm_on_chain(phi, chain)
    if not phi.defect_bound:
        raise GuardError(f"{phi.name} has zero defect (a homomorphism): no lower bound follows")
    bound = abs(val) / (2 * phi.defect_bound)
    tol = Fraction(0)
    if phi.tol:
        tol = Fraction(phi.tol) * sum(abs(q) for _, q in chain) / (2 * Fraction(phi.defect_bound))
    if isinstance(bound, float):
        bound = Fraction(bound).limit_denominator(10**12)
    name = label or chain.render()
    return Certificate(
        quantity=f"scl({name})",
        group=group or f"F{max(2, max((w.max_index for w, _ in chain), default=2))}",
        direction="lower",
        value=bound,
        soundness=phi.soundness,
        witness=f"quasimorphism {phi.name} = {val}, defect {phi.defect_bound}",
        citation="bavard-duality",
        tol=tol,
    )


def scl_gromnorm_bridge(cert: Certificate, oracle=None) -> Certificate:
    """Convert between scl and gromnorm of the unique normalized class (free groups only)."""
    if oracle is not None and getattr(oracle, "kind", "free") != "free":
        raise GuardError("scl and gromnorm only correspond one-to-one in free groups")
    q = cert.quantity
    if q.startswith("scl(") and q.endswith(")"):
        new_q, factor = "gromnorm(" + q[4:], 4
    elif q.startswith("gromnorm(") and q.endswith(")"):
        new_q, factor = "scl(" + q[9:], Fraction(1, 4)
    else:
        raise ValueError(f"cannot bridge quantity {q!r}")
    return Certificate(
        quantity=new_q,
        group=cert.group,
        direction=cert.direction,
        value=cert.value * factor,
        soundness=cert.soundness,
        witness=f"from {q}: {cert.witness}",
        citation="scl-gromnorm-bridge",
        tol=cert.tol * factor,
        assumptions=cert.assumptions,
    )


# counting quasimorphisms ----------------------------------------------------


def _cyclic_core(letters: tuple[int, ...]) -> tuple[int, ...]:
    i, j = 0, len(letters) - 1
    while i < j and letters[i] == -letters[j]:
        i += 1
        j -= 1
    return letters[i : j + 1]


def _cyclic_count(core: tuple[int, ...], s: tuple[int, ...]) -> int:
    """Occurrences of ``s`` starting in one period of the periodic word ``core^oo``."""
    n = len(core)
    if n == 0:
        return 0
    k = len(s)
    ext = core * (k // n + 2) if k > 1 else core
    first = s[0]
    return sum(1 for p in range(n) if core[p] == first and ext[p : p + k] == s)


def _linear_count(w: tuple[int, ...], s: tuple[int, ...]) -> int:
    k = len(s)
    return sum(1 for p in range(len(w) - k + 1) if w[p : p + k] == s)


def counting_raw(sigma: Word) -> Callable[[Word], int]:
    """Non-homogeneous counting function: occurrences of ``sigma`` minus those of its inverse."""
    s, si = sigma.letters, sigma.inverse().letters

    def h(g: Word) -> int:
        return _linear_count(g.letters, s) - _linear_count(g.letters, si)

    return h


def counting_homogeneous(sigma: Word) -> Callable[[Word], int]:
    """Cyclic occurrences of ``sigma`` minus those of ``sigma^-1`` in the cyclic core."""
    s, si = sigma.letters, sigma.inverse().letters

    def phi(g: Word) -> int:
        core = _cyclic_core(g.letters)
        return _cyclic_count(core, s) - _cyclic_count(core, si)

    return phi


def empirical_defect(f: Callable[[Word], object], rank: int, radius: int) -> Fraction:
    """``max |f(g) + f(h) - f(gh)|`` over all pairs from the ball, exactly."""
    ws = ball(rank, radius)
    vals = {w: f(w) for w in ws}
    worst = 0
    for g in ws:
        fg = vals[g]
        for h in ws:
            gh = g * h
            v = vals.get(gh)
            if v is None:
                v = f(gh)
            d = abs(fg + vals[h] - v)
            if d > worst:
                worst = d
    return Fraction(worst)


def brooks_counting(sigma: Word, rank: int = 2, ball_radius: int = 6, defect=None) -> Quasimorphism:
    """Homogenized counting quasimorphism of ``sigma``.

    Without a supplied ``defect`` the bound is the exact supremum over the
    ball of ``ball_radius``, graded empirical.
    """
    if not sigma:
        raise ValueError("counting quasimorphisms need a nontrivial word")
    phi = counting_homogeneous(sigma)
    name = f"count[{sigma}]"
    if defect is None:
        return Quasimorphism(phi, empirical_defect(phi, rank, ball_radius), Soundness.EMPIRICAL, True, name)
    return Quasimorphism(phi, Fraction(defect), Soundness.LITERATURE, True, name)


def homogenize_estimate(f: Callable[[Word], object], g: Word, m: int):
    if m < 1:
        raise ValueError("m must be positive")
    return Fraction(f(g ** m)) / m


def letter_sum(phi: Callable[[Word], object], e: CommExpr):
    """``sum phi(l)`` over the letters of ``e`` (zero when ``phi`` is odd)."""
    return sum((phi(x) for x in letters(e)), Fraction(0))
