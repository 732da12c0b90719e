"""Command line front end.

Exit codes: 0 success, 1 a verification failed, 2 bad input, 3 the step
budget ran out (see ``HEISCAT_STEP_BUDGET``).
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence

from heiscat.core import Scalar
from heiscat.cyclotomic import CyclotomicParams, cyclotomic_algebra, default_params
from heiscat.diagrams import Morphism, normalize
from heiscat.frobenius import BUILTINS, load
from heiscat.straighten import BudgetExceeded
from heiscat.symfun import DEFAULT_TRUNCATION
from heiscat.wreath import WreathAlgebra
from heiscat import verify as V

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_BUDGET = 0, 1, 2, 3
SUITES = ("relations", "grassmannian", "cyclotomic", "oracle", "banana", "symmetry", "independence")
GRID_ALGEBRAS = ("trivial", "C2", "dual")
GRID_K = (-2, -1, 0, 1, 2)


class InputError(ValueError):
    pass


@dataclass
class RunConfig:
    algebra: Optional[str]
    k: Optional[int]
    cyclotomic: Optional[str]
    truncate: int
    seed: int
    specialize: Optional[tuple]
    format: str

    def algebras(self, default: Sequence[str]):
        names = [self.algebra] if self.algebra else list(default)
        return [load(n) for n in names]

    def charges(self):
        return [self.k] if self.k is not None else list(GRID_K)

    def params(self, A, l: int) -> CyclotomicParams:
        if self.cyclotomic is None:
            return default_params(A, l)
        with open(self.cyclotomic) as fh:
            return CyclotomicParams.from_json(A, json.load(fh))


def _specialization(text: Optional[str]):
    if text is None:
        return None
    try:
        z0, t0 = (Fraction(p.strip()) for p in text.split(","))
    except ValueError:
        raise InputError(f"--specialize expects 'z0,t0', got {text!r}") from None
    if z0 == 0 or t0 == 0:
        raise InputError("--specialize needs nonzero z0 and t0")
    return z0, t0


def _parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("-A", "--algebra", help="built-in algebra name or JSON file")
    common.add_argument("-k", "--charge", type=int, dest="k", help="central charge")
    common.add_argument("--cyclotomic", metavar="JSON", help="cyclotomic parameters file")
    common.add_argument("--truncate", type=int, default=DEFAULT_TRUNCATION, metavar="N", help="symmetric function degree cap")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--specialize", metavar="z0,t0", help="evaluate coefficients at a rational point")
    common.add_argument("--format", choices=("text", "json", "tikz"), default="text")

    p = argparse.ArgumentParser(prog="heiscat", description="Exact computations in the quantum Frobenius Heisenberg category.")
    sub = p.add_subparsers(dest="command", required=True)

    n = sub.add_parser("normalize", parents=[common], help="expand a diagram over the canonical basis")
    n.add_argument("expr", help="diagram in the slice language")

    v = sub.add_parser("verify", parents=[common], help="run a verification suite")
    v.add_argument("suite", choices=SUITES)
    v.add_argument("-l", "--level", type=int, help="cyclotomic level")
    v.add_argument("-n", type=int, default=2, help="number of strands (cyclotomic suite)")
    v.add_argument("--samples", type=int, help="random samples")
    v.add_argument("--relation", action="append", help="restrict the relation suite to these names")
    v.add_argument("-v", "--verbose", action="store_true", help="list passing checks too")

    a = sub.add_parser("algebra", parents=[common], help="show an algebra or multiply elements")
    a.add_argument("elements", nargs="*", help="elements to multiply, e.g. 'E12' 'E21'")

    w = sub.add_parser("wreath", parents=[common], help="normal form in the affine wreath algebra")
    w.add_argument("-n", type=int, default=2, help="number of strands")
    w.add_argument("-l", "--level", type=int, help="reduce in the cyclotomic quotient of this level")
    w.add_argument("expr", help="e.g. 's1 * x1 * s1'")
    return p


def _config(args) -> RunConfig:
    if args.truncate < 1:
        raise InputError("--truncate must be positive")
    return RunConfig(
        algebra=args.algebra,
        k=args.k,
        cyclotomic=args.cyclotomic,
        truncate=args.truncate,
        seed=args.seed,
        specialize=_specialization(args.specialize),
        format=args.format,
    )


def _specialize_nf(nf, point):
    z0, t0 = point
    terms = {key: c.map_scalars(lambda s: Scalar.const(s.specialize(z0, t0))) for key, c in nf.terms.items()}
    return type(nf)(nf.A, nf.source, nf.target, terms, nf.k)


def cmd_normalize(args, cfg: RunConfig, out) -> int:
    A = cfg.algebras(["trivial"])[0]
    k = cfg.k if cfg.k is not None else 0
    f = Morphism.parse(A, args.expr)
    nf = normalize(f, k, truncation=cfg.truncate)
    if cfg.specialize:
        nf = _specialize_nf(nf, cfg.specialize)
    if cfg.format == "json":
        print(json.dumps(nf.to_json(), indent=2, sort_keys=True), file=out)
    elif cfg.format == "tikz":
        print(nf.to_morphism().tikz(), file=out)
    else:
        print(nf.text(), file=out)
    return EXIT_OK


def run_suite(args, cfg: RunConfig) -> V.Report:
    suite = args.suite
    if suite == "relations":
        rep = V.Report("relations")
        for A in cfg.algebras(GRID_ALGEBRAS):
            rep.extend(V.verify_relations(A, cfg.charges(), args.relation))
        return rep
    if suite == "grassmannian":
        rep = V.Report("grassmannian")
        for A in cfg.algebras(GRID_ALGEBRAS):
            rep.extend(V.verify_grassmannian(A, cfg.charges()))
        return rep
    if suite == "cyclotomic":
        rep = V.Report("cyclotomic")
        for A in cfg.algebras(["trivial"]):
            params = cfg.params(A, args.level if args.level is not None else 2)
            rep.extend(V.verify_cyclotomic(A, params.l, args.n, args.samples or 100, cfg.seed, params))
        return rep
    if suite == "oracle":
        ls = (args.level,) if args.level is not None else (1, 2)
        return V.verify_oracle(
            cfg.algebras(GRID_ALGEBRAS), args.samples or 200, cfg.seed, ls, specialize=cfg.specialize
        )
    if suite == "banana":
        rep = V.Report("banana")
        for A in cfg.algebras(list(BUILTINS)):
            rep.extend(V.verify_banana(A, min(cfg.truncate, 6)))
        return rep
    if suite == "symmetry":
        rep = V.Report("symmetry")
        for A in cfg.algebras(GRID_ALGEBRAS):
            for k in cfg.charges():
                rep.extend(V.verify_symmetry(A, k, args.samples or 50, cfg.seed))
        return rep
    rep = V.Report("independence")
    for A in cfg.algebras(["trivial"]):
        rep.extend(V.verify_independence(A, args.level if args.level is not None else 2))
    return rep


def cmd_verify(args, cfg: RunConfig, out) -> int:
    rep = run_suite(args, cfg)
    if cfg.format == "json":
        print(json.dumps(rep.to_json(), indent=2), file=out)
    else:
        print(rep.text(args.verbose), file=out)
    return EXIT_OK if rep.ok else EXIT_FAIL


def cmd_algebra(args, cfg: RunConfig, out) -> int:
    A = cfg.algebras(["trivial"])[0]
    if not args.elements:
        if cfg.format == "json":
            print(json.dumps(A.to_json(), indent=2), file=out)
            return EXIT_OK
        print(f"{A.name}: dimension {A.dim}, {'even' if A.is_even else 'super'}", file=out)
        for i, b in enumerate(A.basis):
            print(f"  {b}  parity {A.parity[i]}  trace {A.tr(A.basis_element(i))}  dual {A.dual(i)}", file=out)
        return EXIT_OK
    prod = A.parse_element(args.elements[0])
    for e in args.elements[1:]:
        prod = A.mul(prod, A.parse_element(e))
    if cfg.format == "json":
        print(json.dumps({"product": str(prod), "trace": str(A.tr(prod))}), file=out)
    else:
        print(f"{prod}\ntrace {A.tr(prod)}", file=out)
    return EXIT_OK


def cmd_wreath(args, cfg: RunConfig, out) -> int:
    A = cfg.algebras(["trivial"])[0]
    W = WreathAlgebra(A, args.n)
    u = W.parse(args.expr)
    if args.level is not None or cfg.cyclotomic is not None:
        params = cfg.params(A, args.level if args.level is not None else 2)
        u = cyclotomic_algebra(params, args.n).reduce(u)
    print(str(u), file=out)
    return EXIT_OK


COMMANDS = {"normalize": cmd_normalize, "verify": cmd_verify, "algebra": cmd_algebra, "wreath": cmd_wreath}


def main(argv: Optional[List[str]] = None, out=None) -> int:
    out = sys.stdout if out is None else out
    try:
        args = _parser().parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code == 0 else EXIT_INPUT
    try:
        cfg = _config(args)
        return COMMANDS[args.command](args, cfg, out)
    except BudgetExceeded as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_BUDGET
    except (InputError, ValueError, KeyError, OSError, json.JSONDecodeError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
