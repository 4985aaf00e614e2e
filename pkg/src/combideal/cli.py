"""Command-line interface: ``combideal <command> [options]``.

Exit codes: 0 success, 2 parse error, 3 engine inapplicable (including a
degree above the truncation bound), 4 enumeration cap exceeded.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from pathlib import Path

from .affine_modp import ModPSystem, convert_truncated_gb, decide_modp, parse_system, rref_mod_p
from .csp import DEFAULT_CAP, CspInstance, parse_instance
from .dual_disc import dual_disc_groebner
from .encode import instance_ideal
from .engines import ENGINES, EngineConfig, decide, decider, oracle_member, oracle_witness, select_engine
from .errors import CapExceeded, DegreeBoundError, EngineInapplicable, ParseError
from .groebner import buchberger, check_buchberger_criterion
from .polyring import GRLEX, LEX, Polynomial, parse_polynomial
from .random_instances import instance_for_engine, random_f0
from .spectra import verify_basis

EXIT_PARSE = 2
EXIT_INAPPLICABLE = 3
EXIT_CAP = 4


class _Report:
    """Ordered key/value output, printed as lines or as one JSON object."""

    def __init__(self, as_json: bool):
        self.as_json = as_json
        self.items: list[tuple[str, object]] = []

    def add(self, key: str, value):
        self.items.append((key, value))

    def emit(self, out=None):
        out = out or sys.stdout
        if self.as_json:
            print(json.dumps(dict(self.items)), file=out)
            return
        for key, value in self.items:
            if key == "result":
                print(value, file=out)
            elif isinstance(value, list):
                print(f"{key}:", file=out)
                for v in value:
                    print(f"  {v}", file=out)
            else:
                print(f"{key}: {value}", file=out)


def _read(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc.strerror}") from exc


def _load_instance(args) -> CspInstance:
    if not args.instance:
        raise ParseError("--instance is required")
    return parse_instance(_read(args.instance))


def _load_system(args) -> ModPSystem:
    return parse_system(_read(args.system))


def _poly(text: str | None, variables) -> Polynomial:
    if text is None:
        raise ParseError("--poly is required")
    return parse_polynomial(text, variables)


def _assignment(variables, w) -> str:
    return " ".join(f"{v}={a}" for v, a in zip(variables, w))


def _system_witness(f0: Polynomial, s: ModPSystem):
    for sol in s.solutions():
        if f0.evaluate(sol) != 0:
            return sol
    return None


def cmd_decide(args) -> int:
    rep = _Report(args.json)
    if args.system:
        s = _load_system(args)
        f0 = _poly(args.poly, s.variables)
        if args.engine == "oracle":
            member = _system_witness(f0, s) is None
        elif args.engine in ("auto", "modp"):
            member = decide_modp(f0, s, args.degree_bound)
        else:
            raise EngineInapplicable(f"engine {args.engine} needs a CSP instance")
        rep.add("result", "MEMBER" if member else "NOT_MEMBER")
        rep.add("engine", "oracle" if args.engine == "oracle" else "modp")
        if not member:
            rep.add("witness", _assignment(s.variables, _system_witness(f0, s)))
        rep.emit()
        return 0
    p = _load_instance(args)
    f0 = _poly(args.poly, p.variables)
    config = EngineConfig(args.engine, args.degree_bound, args.cap)
    d = decide(f0, p, config)
    rep.add("result", "MEMBER" if d.member else "NOT_MEMBER")
    rep.add("engine", d.engine)
    if not d.member:
        rep.add("witness", _assignment(p.variables, d.witness))
    rep.emit()
    return 0


def cmd_gb(args) -> int:
    p = _load_instance(args)
    order = LEX if args.order == "lex" else GRLEX
    if args.engine == "dualdisc":
        gb = dual_disc_groebner(p, order)
    elif args.engine in ("auto", "buchberger"):
        gb = buchberger(instance_ideal(p, reduced=True), order, args.degree_bound)
    else:
        raise EngineInapplicable(f"gb supports engines buchberger and dualdisc, not {args.engine}")
    rep = _Report(args.json)
    rep.add("generators_count", len(gb))
    rep.add("order", order.kind)
    if gb.degree_bound is not None:
        rep.add("degree_bound", gb.degree_bound)
    rep.add("buchberger_criterion", "PASS" if check_buchberger_criterion(gb) else "FAIL")
    rep.add("generators", [g.to_str(p.variables, order) for g in gb])
    rep.emit()
    return 0


def cmd_convert(args) -> int:
    if not args.system:
        raise ParseError("--system is required")
    s = _load_system(args)
    d = 2 if args.degree_bound is None else args.degree_bound
    rep = _Report(args.json)
    g1 = rref_mod_p(s)
    if g1 is None:
        rep.add("result", "INCONSISTENT")
        rep.add("generators", ["1"])
        rep.emit()
        return 0
    conv = convert_truncated_gb(g1, d)
    names = s.variables
    rep.add("result", "CONVERTED")
    rep.add("degree_bound", d)
    rep.add("pivots", len(g1.pivots))
    rep.add("buchberger_criterion", "PASS" if check_buchberger_criterion(conv.basis) else "FAIL")
    rep.add("generators", [g.to_str(names) for g in conv.basis])
    rep.add("standard_monomials", [Polynomial.monomial(m).to_str(names) for m in conv.standard])
    rep.emit()
    return 0


def cmd_verify_basis(args) -> int:
    checks = verify_basis(args.p, args.k)
    rep = _Report(args.json)
    head = checks[0]
    rep.add("result", "PASS" if head.ok else "FAIL")
    rep.add("basis_rank", head.computed)
    rep.add(
        "checks",
        [f"{'PASS' if c.ok else 'FAIL'}  {c.name}: rank {c.computed}, expected {c.expected}" for c in checks],
    )
    rep.emit()
    return 0 if head.ok else 1


def cmd_witness(args) -> int:
    p = _load_instance(args)
    f0 = _poly(args.poly, p.variables)
    config = EngineConfig(args.engine, args.degree_bound, args.cap)
    if args.engine == "oracle":
        w = oracle_witness(f0, p, args.cap)
    else:
        d = decide(f0, p, config)
        w = d.witness
    rep = _Report(args.json)
    rep.add("result", "MEMBER" if w is None else "NOT_MEMBER")
    if w is not None:
        rep.add("witness", _assignment(p.variables, w))
    rep.emit()
    return 0


def cmd_oracle_diff(args) -> int:
    """Random instances through an engine and the oracle; stops at the first disagreement."""
    engine = args.engine if args.engine != "auto" else None
    families = [engine] if engine and engine != "oracle" else ["dualdisc", "modp", "semilattice", "buchberger"]
    rep = _Report(args.json)
    count = 0
    for k in range(args.count):
        fam = families[k % len(families)]
        rng = random.Random(f"{args.seed}:{fam}:{k}")
        p = instance_for_engine(rng, fam)
        f0 = random_f0(rng, p, cap=args.cap)
        name = select_engine(p) if args.engine == "auto" else args.engine
        got = decider(name, EngineConfig(cap=args.cap))(f0, p)
        want = oracle_member(f0, p, args.cap)
        count += 1
        if got != want:
            rep.add("result", "FAIL")
            rep.add("index", k)
            rep.add("engine", name)
            rep.add("engine_says", "MEMBER" if got else "NOT_MEMBER")
            rep.add("oracle_says", "MEMBER" if want else "NOT_MEMBER")
            rep.add("poly", f0.to_str(p.variables))
            rep.emit()
            return 1
    rep.add("result", "PASS")
    rep.add("instances", count)
    rep.add("seed", args.seed)
    rep.emit()
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="combideal", description="Ideal membership for CSP instances.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--instance", help="CSP instance file")
        sp.add_argument("--system", help="linear system file (mod p)")
        sp.add_argument("--poly", help="polynomial f0 over the instance variables")
        sp.add_argument("--engine", choices=ENGINES, default="auto")
        sp.add_argument("--degree-bound", type=int, default=None)
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--cap", type=int, default=DEFAULT_CAP)
        sp.add_argument("--json", action="store_true")

    sp = sub.add_parser("decide", help="decide f0 in I(P)")
    common(sp)
    sp.set_defaults(func=cmd_decide)
    sp = sub.add_parser("gb", help="Groebner basis of I(P)")
    common(sp)
    sp.add_argument("--order", choices=("grlex", "lex"), default="grlex")
    sp.set_defaults(func=cmd_gb)
    sp = sub.add_parser("convert", help="truncated grlex basis of a linear system mod p")
    common(sp)
    sp.set_defaults(func=cmd_convert)
    sp = sub.add_parser("verify-basis", help="rank checks for the p-expression basis")
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--k", type=int, required=True)
    sp.add_argument("--json", action="store_true")
    sp.set_defaults(func=cmd_verify_basis)
    sp = sub.add_parser("witness", help="solution on which f0 does not vanish")
    common(sp)
    sp.set_defaults(func=cmd_witness)
    sp = sub.add_parser("oracle-diff", help="compare an engine with the oracle on random instances")
    common(sp)
    sp.add_argument("--count", type=int, default=100)
    sp.set_defaults(func=cmd_oracle_diff)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (EngineInapplicable, DegreeBoundError) as exc:
        print(f"engine inapplicable: {exc}", file=sys.stderr)
        return EXIT_INAPPLICABLE
    except CapExceeded as exc:
        print(f"cap exceeded: {exc}", file=sys.stderr)
        return EXIT_CAP


if __name__ == "__main__":
    sys.exit(main())
