"""Auditable bound records and their text/JSON forms."""

from __future__ import annotations

import enum
import json
import shlex
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import InvariantBreach, ParseError


class Soundness(enum.IntEnum):
    """How far a number can be trusted.  Derived results take the minimum grade."""

    EMPIRICAL = 0
    NUMERICAL = 1
    LITERATURE = 2
    EXACT = 3

    def __str__(self) -> str:
        return self.name.lower()

    @classmethod
    def parse(cls, text: str) -> Soundness:
        try:
            return cls[text.strip().upper()]
        except KeyError:
            raise ParseError(f"unknown soundness grade {text!r}") from None


def weakest(*grades: Soundness) -> Soundness:
    return min(grades)


DIRECTIONS = ("lower", "upper", "exact")


def fmt_value(v) -> str:
    if isinstance(v, Fraction):
        return str(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"
    if isinstance(v, int):
        return str(v)
    return repr(float(v))


def parse_value(text: str):
    try:
        if any(ch in text for ch in ".eE") and "/" not in text:
            return float(text)
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise ParseError(f"bad numeric value {text!r}") from None


def fmt_decimal(v) -> str:
    return f"{float(v):.12g}"


@dataclass(frozen=True)
class Certificate:
    quantity: str
    group: str
    direction: str
    value: Fraction | float
    soundness: Soundness
    witness: str = ""
    citation: str = ""
    tol: Fraction | float = Fraction(0)
    assumptions: tuple[str, ...] = ()

    def __post_init__(self):
        if self.direction not in DIRECTIONS:
            raise ValueError(f"direction must be one of {DIRECTIONS}")

    @property
    def key(self) -> tuple:
        return (self.quantity, DIRECTIONS.index(self.direction), -int(self.soundness), self.witness)

    def with_assumptions(self, *extra: str) -> Certificate:
        return replace(self, assumptions=self.assumptions + tuple(extra))

    def to_dict(self) -> dict:
        return {
            "quantity": self.quantity,
            "group": self.group,
            "direction": self.direction,
            "value": fmt_value(self.value),
            "decimal": fmt_decimal(self.value),
            "tol": fmt_value(self.tol),
            "soundness": str(self.soundness),
            "witness": self.witness,
            "citation": self.citation,
            "assumptions": list(self.assumptions),
        }

    def render(self) -> str:
        """One ``key=value`` line with a fixed field order."""
        d = self.to_dict()
        d["assumptions"] = ";".join(self.assumptions)
        return " ".join(f"{k}={shlex.quote(str(v))}" for k, v in d.items())

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=False)

    @classmethod
    def from_dict(cls, d: dict) -> Certificate:
        assumptions = d.get("assumptions", ())
        if isinstance(assumptions, str):
            assumptions = tuple(a for a in assumptions.split(";") if a)
        return cls(
            quantity=d["quantity"],
            group=d["group"],
            direction=d["direction"],
            value=parse_value(d["value"]),
            soundness=Soundness.parse(d["soundness"]),
            witness=d.get("witness", ""),
            citation=d.get("citation", ""),
            tol=parse_value(d.get("tol", "0")),
            assumptions=tuple(assumptions),
        )

    @classmethod
    def parse(cls, line: str) -> Certificate:
        fields = {}
        try:
            tokens = shlex.split(line)
        except ValueError as exc:
            raise ParseError(f"bad certificate line: {exc}") from None
        for tok in tokens:
            k, sep, v = tok.partition("=")
            if not sep:
                raise ParseError(f"certificate field without '=': {tok!r}")
            fields[k] = v
        missing = {"quantity", "group", "direction", "value", "soundness"} - fields.keys()
        if missing:
            raise ParseError(f"certificate line missing fields {sorted(missing)}")
        return cls.from_dict(fields)

    def __str__(self) -> str:
        return self.render()


@dataclass
class Sandwich:
    quantity: str
    lower: Certificate | None = None
    upper: Certificate | None = None
    notes: list[str] = field(default_factory=list)

    @property
    def verdict(self) -> str:
        lo, up = self.lower, self.upper
        if lo is None or up is None:
            return "one-sided"
        if lo.value != up.value:
            return "interval"
        grade = weakest(lo.soundness, up.soundness)
        if grade == Soundness.EXACT:
            return "exact"
        weak = lo if lo.soundness <= up.soundness else up
        return f"exact-with-{weak.soundness}-{weak.direction}"

    def width(self):
        if self.lower is None or self.upper is None:
            return None
        return self.upper.value - self.lower.value

    def render(self) -> str:
        lo = fmt_value(self.lower.value) if self.lower else "-inf"
        up = fmt_value(self.upper.value) if self.upper else "inf"
        return f"sandwich {self.quantity} in [{lo}, {up}] verdict={self.verdict}"


def _lower_key(c: Certificate):
    return (c.value, c.soundness)


def best_sandwich(certs: Iterable[Certificate], quantity: str) -> Sandwich:
    """Best lower and upper bound for ``quantity``; checks they are consistent.

    An exact-grade pair must satisfy ``lower <= upper`` exactly; otherwise the
    attached tolerances (plus 1e-9) are allowed.
    """
    mine = [c for c in certs if c.quantity == quantity]
    lowers = [c for c in mine if c.direction in ("lower", "exact")]
    uppers = [c for c in mine if c.direction in ("upper", "exact")]
    s = Sandwich(quantity)
    if lowers:
        s.lower = max(lowers, key=_lower_key)
    if uppers:
        s.upper = min(uppers, key=lambda c: (c.value, -int(c.soundness)))
    check_order(lowers, uppers)
    return s


def check_order(lowers: Sequence[Certificate], uppers: Sequence[Certificate]) -> None:
    for lo in lowers:
        for up in uppers:
            if weakest(lo.soundness, up.soundness) >= Soundness.LITERATURE:
                ok = Fraction(lo.value) <= Fraction(up.value)
            else:
                slack = float(lo.tol) + float(up.tol) + 1e-9
                ok = float(lo.value) <= float(up.value) + slack
            if not ok:
                raise InvariantBreach(
                    f"lower bound {fmt_value(lo.value)} ({lo.witness}) exceeds "
                    f"upper bound {fmt_value(up.value)} ({up.witness}) for {lo.quantity}"
                )


def sort_certificates(certs: Iterable[Certificate]) -> list[Certificate]:
    return sorted(certs, key=lambda c: c.key)
