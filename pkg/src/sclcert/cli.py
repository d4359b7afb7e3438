"""Command line front end.

Exit codes: 0 success, 2 parse error, 3 guard or hypothesis failure,
4 inconclusive scan, 5 internal invariant breach.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from . import circle, duality, hnn, hopf
from .certificates import Certificate, Sandwich, best_sandwich, fmt_decimal, fmt_value, sort_certificates
from .chains import Chain, identity_weight, standardize
from .errors import GuardError, ParseError, SclCertError
from .words import Alphabet, Word


@dataclass(frozen=True)
class Session:
    rank: int
    group: str
    tol: float
    ball: int
    scan: int
    json: bool
    rep_path: str | None = None

    @property
    def iters(self) -> int:
        return max(1, math.ceil(1 / self.tol))

    def alphabet(self) -> Alphabet:
        if self.group == "dyck":
            return hnn.dyck_presentation().alphabet
        return Alphabet.standard(self.rank)

    def oracle(self):
        if self.group == "dyck":
            return hnn.HNNOracle(hnn.dyck_presentation())
        return hopf.FreeGroupOracle(self.rank)

    def rep(self) -> circle.FuchsianRep | None:
        if self.rep_path:
            try:
                text = Path(self.rep_path).read_text()
            except OSError as exc:
                raise ParseError(f"cannot read {self.rep_path}: {exc}") from None
            r = circle.parse_rep(text)
            if r.rank != self.rank:
                raise GuardError(f"the representation has rank {r.rank}, the session has rank {self.rank}")
            return r
        if self.group == "free" and self.rank == 2:
            return circle.punctured_torus_rep()
        return None


def _session(args) -> Session:
    return Session(
        rank=args.rank,
        group=args.group,
        tol=args.tol,
        ball=args.ball,
        scan=args.scan,
        json=args.json,
        rep_path=args.rep,
    )


def _emit(s: Session, payload: dict, lines: list[str]) -> None:
    if s.json:
        print(json.dumps(payload, indent=2))
    else:
        for line in lines:
            print(line)


def _sandwich_dict(sw: Sandwich) -> dict:
    return {
        "quantity": sw.quantity,
        "lower": sw.lower.to_dict() if sw.lower else None,
        "upper": sw.upper.to_dict() if sw.upper else None,
        "verdict": sw.verdict,
    }


def _sandwich_line(sw: Sandwich) -> str:
    line = sw.render()
    for cert in (sw.lower, sw.upper):
        if cert is not None and cert.tol:
            line += f" ({cert.direction} tol {fmt_decimal(cert.tol)})"
    return line


# subcommands -----------------------------------------------------------------


def cmd_normalize(s: Session, text: str) -> int:
    al = s.alphabet()
    chain = Chain.parse(text, al)
    std = standardize(chain)
    dropped = identity_weight(chain)
    if dropped or any(not w for w, _ in chain):
        print("warning: dropped terms on the identity class", file=sys.stderr)
    out = std.render(al)
    _emit(s, {"chain": out}, [out])
    return 0


def _free_lower_certs(s: Session, e: hopf.CommExpr, target: Word, wname: str, rep, qms: list[str]):
    certs = []
    if rep is not None:
        est = circle.rotation_number(rep, target, s.iters)
        rot = circle.rotation_quasimorphism(rep, s.iters)
        c = duality.scl_lower_bavard(rot, target, group=f"F{s.rank}", label=wname)
        c = Certificate(c.quantity, c.group, c.direction, c.value, c.soundness,
                        f"rot({wname}) = {fmt_value(est.value)} +- {fmt_decimal(est.tol)}, defect 1 [literature]",
                        "bavard-duality", tol=est.tol / 2)
        certs.append(c)
        eu = circle.euler_cocycle(rep)
        certs.append(duality.gromnorm_lower(eu, e, target, s.oracle(), s.scan, check_radius=2, rank=s.rank))
    for sigma in qms:
        w = s.alphabet().parse(sigma)
        phi = duality.brooks_counting(w, s.rank, s.ball)
        try:
            certs.append(duality.scl_lower_bavard(phi, target, group=f"F{s.rank}", label=wname))
        except GuardError:
            pass
        certs.append(duality.gromnorm_lower(duality.coboundary(phi), e, target, s.oracle(), s.scan,
                                            check_radius=None))
    return certs


def cmd_bounds(s: Session, expr: str, target_text: str, qms: list[str]) -> int:
    al = s.alphabet()
    e = hopf.CommExpr.parse(expr, al)
    target = al.parse(target_text)
    oracle = s.oracle()
    n = hopf.boundary_multiple(e, target, oracle, s.scan)
    if n == 0:
        raise GuardError("absolute class, gromnorm bound 4k-2 applies to the zero class")
    wname = al.format(target)
    certs = [hopf.scl_upper(e, target, oracle, s.scan), hopf.gromnorm_upper(e, target, oracle, s.scan)]
    notes = [f"boundary multiple n = {n}, genus k = {e.k}"]
    if s.group == "free":
        certs += _free_lower_certs(s, e, target, wname, s.rep(), qms)
        bridged = [duality.scl_gromnorm_bridge(c, oracle) for c in certs]
        certs += bridged
    else:
        report = hnn.dyck_report(target)
        certs += [c for c in report.certificates if c.quantity == f"scl({wname})" and c.direction != "upper"]
        notes.append(f"classification: {report.classification}")
        notes += report.notes
    certs = sort_certificates(certs)
    sandwiches = [best_sandwich(certs, q) for q in (f"scl({wname})", f"gromnorm({wname})")]
    lines = [c.render() for c in certs] + [_sandwich_line(sw) for sw in sandwiches] + [f"note: {x}" for x in notes]
    payload = {
        "certificates": [c.to_dict() for c in certs],
        "sandwiches": [_sandwich_dict(sw) for sw in sandwiches],
        "notes": notes,
    }
    _emit(s, payload, lines)
    return 0


def _cocycle(s: Session, text: str):
    if text == "euler":
        rep = s.rep()
        if rep is None:
            raise GuardError("the Euler cocycle needs a representation (--rep)")
        return circle.euler_cocycle(rep)
    if text.startswith("count:"):
        w = s.alphabet().parse(text[len("count:"):])
        return duality.coboundary(duality.brooks_counting(w, s.rank, s.ball))
    raise ParseError(f"unknown cocycle {text!r} (use 'euler' or 'count:WORD')")


def cmd_pair(s: Session, expr: str, target_text: str | None, text: str) -> int:
    al = s.alphabet()
    e = hopf.CommExpr.parse(expr, al)
    psi = _cocycle(s, text)
    raw = duality.pair(psi, e)
    payload = {"cocycle": psi.name, "raw_sum": fmt_value(raw)}
    lines = [f"cocycle {psi.name}", f"pair-sequence sum = {fmt_value(raw)} ({fmt_decimal(raw)})"]
    if target_text:
        target = al.parse(target_text)
        cert = duality.gromnorm_lower(psi, e, target, s.oracle(), s.scan, check_radius=2, rank=s.rank)
        payload["certificate"] = cert.to_dict()
        lines.append(cert.render())
    _emit(s, payload, lines)
    return 0


def _hnn_presentation(s: Session, text: str | None) -> hnn.HNNPresentation:
    if text:
        parts = [p.strip() for p in text.split(";")]
        if len(parts) != 4:
            raise ParseError("--hnn expects 'names;stable;u;v'", text, 0)
        try:
            return hnn.HNNPresentation.parse(*parts)
        except (ValueError, KeyError) as exc:
            raise ParseError(f"bad presentation: {exc}") from None
    return hnn.dyck_presentation()


def cmd_hnn_classify(s: Session, word: str, text: str | None) -> int:
    h = _hnn_presentation(s, text)
    w = h.alphabet.parse(word)
    cls = hnn.classify(w, h)
    rep = h.alphabet.format(cls.representative.word) if cls.representative is not None else None
    text = f"elliptic({rep})" if cls.kind == "elliptic" else "hyperbolic"
    _emit(s, {"word": word, "kind": cls.kind, "representative": rep}, [text])
    return 0


def cmd_dyck(s: Session, word: str) -> int:
    h = hnn.dyck_presentation()
    al = h.alphabet
    report = hnn.dyck_report(al.parse(word), h, s.scan)
    kernel = hnn.h1_kernel(h)
    base = [al.name(i) for i in h.base_indices]
    ktext = ["+".join(f"{fmt_value(q)}*{g}" if q != 1 else g for q, g in zip(v, base) if q) for v in kernel]
    lines = [
        "relation [a,b] = c^2 verified by Britton reduction",
        f"h1 kernel: span{{{', '.join(ktext)}}}",
        f"classification: {report.classification}",
    ]
    certs = sort_certificates(report.certificates)
    lines += [c.render() for c in certs]
    if certs:
        lines.append(_sandwich_line(best_sandwich(certs, f"scl({report.word})")))
    lines += [f"note: {x}" for x in report.notes]
    payload = {
        "word": report.word,
        "classification": report.classification,
        "h1_kernel": [[fmt_value(q) for q in v] for v in kernel],
        "certificates": [c.to_dict() for c in certs],
        "notes": report.notes,
    }
    _emit(s, payload, lines)
    return 0


def cmd_rot(s: Session, word: str) -> int:
    rep = s.rep()
    if rep is None:
        raise GuardError("rotation numbers need a representation (--rep)")
    w = rep.alphabet.parse(word)
    est = circle.rotation_number(rep, w, s.iters)
    lines = [f"rot({word}) = {fmt_value(est.value)} ({fmt_decimal(est.value)}) +- {fmt_decimal(est.tol)}"]
    if est.lift_dependent:
        lines.append("warning: lift-dependent (the word is not a product of commutators)")
    payload = {"word": word, "value": fmt_value(est.value), "decimal": fmt_decimal(est.value),
               "tol": fmt_decimal(est.tol), "lift_dependent": est.lift_dependent}
    _emit(s, payload, lines)
    return 0


def cmd_selftest(s: Session, level: str) -> int:
    from .selftest import run

    results = run(level)
    failed = [r for r in results if not r.ok]
    lines = [f"{'PASS' if r.ok else 'FAIL'} {r.name} ({r.seconds:.2f}s){': ' + r.detail if r.detail else ''}"
             for r in results]
    _emit(s, {"results": [r.__dict__ for r in results]}, lines)
    return 5 if failed else 0


# parser ------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--rank", type=int, default=2, help="rank of the free group (default 2)")
    common.add_argument("--group", choices=("free", "dyck"), default="free")
    common.add_argument("--rep", help="Fuchsian representation file")
    common.add_argument("--ball", type=int, default=6, help="radius for empirical defects (default 6)")
    common.add_argument("--scan", type=int, default=32, help="range for boundary-multiple scans")
    common.add_argument("--tol", type=float, default=2.5e-4, help="rotation number tolerance")
    common.add_argument("--json", action="store_true", help="JSON output")

    p = argparse.ArgumentParser(prog="sclcert", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="cmd", required=True)
    x = sub.add_parser("normalize", parents=[common], help="standard form of a chain")
    x.add_argument("chain")
    x = sub.add_parser("bounds", parents=[common], help="certified scl and gromnorm bounds")
    x.add_argument("expr", help="commutator product such as '[a,b][c,d]'")
    x.add_argument("target", help="target word")
    x.add_argument("--qm", action="append", default=[], metavar="WORD",
                   help="add a counting quasimorphism (repeatable)")
    x = sub.add_parser("pair", parents=[common], help="pair a cocycle with a commutator product")
    x.add_argument("expr")
    x.add_argument("target", nargs="?")
    x.add_argument("--cocycle", default="euler", help="'euler' or 'count:WORD'")
    x = sub.add_parser("hnn-classify", parents=[common], help="elliptic or hyperbolic")
    x.add_argument("word")
    x.add_argument("--hnn", help="presentation 'names;stable;u;v' (default: Dyck)")
    x = sub.add_parser("dyck", parents=[common], help="report for an element of the Dyck surface group")
    x.add_argument("word")
    x = sub.add_parser("rot", parents=[common], help="rotation number of a word")
    x.add_argument("word")
    x = sub.add_parser("selftest", parents=[common], help="run the invariant suites")
    x.add_argument("--level", choices=("quick", "full"), default="quick")
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        s = _session(args)
        if args.tol <= 0:
            raise ParseError("--tol must be positive")
        if args.cmd == "normalize":
            return cmd_normalize(s, args.chain)
        if args.cmd == "bounds":
            return cmd_bounds(s, args.expr, args.target, args.qm)
        if args.cmd == "pair":
            return cmd_pair(s, args.expr, args.target, args.cocycle)
        if args.cmd == "hnn-classify":
            return cmd_hnn_classify(s, args.word, args.hnn)
        if args.cmd == "dyck":
            return cmd_dyck(s, args.word)
        if args.cmd == "rot":
            return cmd_rot(s, args.word)
        if args.cmd == "selftest":
            return cmd_selftest(s, args.level)
    except SclCertError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code
    return 1


if __name__ == "__main__":
    sys.exit(main())
