"""Values taken from the literature.  They are cited, never recomputed."""

from __future__ import annotations

import hashlib
from dataclasses import dataclass
from fractions import Fraction


@dataclass(frozen=True)
class Constant:
    value: Fraction
    citation: str
    statement: str


CONSTANTS: dict[str, Constant] = {
    "hnn_hyperbolic_gap": Constant(
        Fraction(1, 2),
        "Chen-Heuer, spectral gap of scl in graphs of groups, Theorem 5.19",
        "scl >= 1/2 for hyperbolic elements of the HNN extension",
    ),
    "free_product_gap": Constant(
        Fraction(1, 2),
        "Duncan-Howie, the genus problem for one-relator products of locally indicable groups",
        "scl >= 1/2 for every nontrivial element of finite scl in a free group",
    ),
    "dyck_gap": Constant(
        Fraction(1, 4),
        "Chen-Heuer and Duncan-Howie gaps combined through the HNN splitting of the Dyck surface group",
        "scl >= 1/4 for every nontrivial element of the Dyck surface group",
    ),
    "dyck_c_sharp": Constant(
        Fraction(1, 4),
        "sharpness of the Dyck gap, attained by the generator c",
        "scl(c) = 1/4 in the Dyck surface group",
    ),
    "rotation_defect": Constant(
        Fraction(1),
        "rotation number on the universal central extension of Homeo+(S^1)",
        "the rotation quasimorphism has defect at most 1",
    ),
}

# digest of the table as shipped; a mismatch means someone edited the values
_DIGEST = "f0777ac43c067b3b5e9e228dac4f7cd4038f3ad7cf3d95fec6fd5edbc955041f"


def digest(table: dict[str, Constant]) -> str:
    h = hashlib.sha256()
    for name in sorted(table):
        c = table[name]
        h.update(f"{name}={c.value.numerator}/{c.value.denominator}\n".encode())
    return h.hexdigest()


def verify_constants(table: dict[str, Constant] | None = None) -> list[str]:
    """Return a list of problems (empty when the table is intact)."""
    table = CONSTANTS if table is None else table
    problems = []
    if set(table) != set(CONSTANTS_NAMES):
        problems.append("constant names changed")
    if digest(table) != _DIGEST:
        problems.append("constant values do not match the shipped digest")
    for name, c in table.items():
        if not isinstance(c.value, Fraction) or c.value <= 0:
            problems.append(f"{name} must be a positive exact rational")
    return problems


CONSTANTS_NAMES = tuple(sorted(CONSTANTS))


def get(name: str) -> Constant:
    return CONSTANTS[name]
