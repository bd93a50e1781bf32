"""Command-line entry point: ``siegel-hecke <command> ...``.

Commands: ``verify``, ``hecke``, ``cusps`` and ``eigenvalue``.  Output is JSON
(schema ``siegel-hecke/1``) unless a flat table is requested as CSV or the
cusp incidence graph as DOT.  Exit codes: 0 pass, 1 failed check, 2 usage
error, 3 budget exceeded.

A JSON config file (``--config``) may set any of ``budget``, ``primes``,
``rank``, ``count``, ``max_entry``, ``seed`` and ``format``; command-line flags
win over the file.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from dataclasses import dataclass, field
from fractions import Fraction

from . import __version__
from .cusps import (
    CuspTuple,
    check_squarefree,
    enumerate_cusps,
    incidence,
    incidence_dot,
    rank_profile,
    similitude,
    standard_rep,
    verify_multiplicity,
    verify_no_self_intersection,
    verify_reps,
)
from .eisenstein import (
    BadPrimeError,
    CharacterProduct,
    DirichletPrimeCharacter,
    MissingBaseEigenvalue,
    base_degree1_lambdas,
    base_degree1_lambdas_algebra,
    character_step,
    evaluate_eigenvalue,
    lift_eigenvalue_Tj,
    lift_eigenvalue_Tp,
)
from .fpspaces import BudgetExceeded, set_default_budget
from .hecke import CoeffTable, apply_Tj, apply_Tp, apply_Ttilde_j, bind_weight
from .lattices import GramLattice
from .scalars import LaurentScalar, RootOfUnity, const
from .verify import (
    Report,
    derive_theorem1_from_proposition,
    sample_grams,
    verify_counts,
    verify_intertwine_Tp,
    verify_intertwine_Ttilde,
    verify_projection_classes,
    verify_remark_identity,
)

SCHEMA = "siegel-hecke/1"
EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_BUDGET = 0, 1, 2, 3

SUITES = (
    "intertwine-tp",
    "intertwine-tj",
    "projection-classes",
    "counts",
    "remark-identity",
    "coeff-derivation",
    "multiplicity",
    "no-self-intersection",
    "reps",
)


class UsageError(ValueError):
    pass


@dataclass
class RunConfig:
    budget: int | None = None
    primes: list = field(default_factory=lambda: [2])
    rank: int = 1
    count: int = 5
    max_entry: int = 8
    seed: int = 0
    format: str = "json"

    @classmethod
    def load(cls, path: str | None) -> "RunConfig":
        cfg = cls()
        if not path:
            return cfg
        try:
            with open(path) as fh:
                data = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise UsageError(f"cannot read config {path}: {exc}") from exc
        if not isinstance(data, dict):
            raise UsageError("config must be a JSON object")
        for key, val in data.items():
            if not hasattr(cfg, key):
                raise UsageError(f"unknown config key {key!r}")
            setattr(cfg, key, val)
        if cfg.budget is not None and int(cfg.budget) <= 0:
            raise UsageError("budget must be positive")
        return cfg


# ---------------------------------------------------------------------------
# helpers


def int_list(text: str) -> list:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def number(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"expected a rational number, got {text!r}")


def jsonable(v):
    if isinstance(v, LaurentScalar):
        return {"expr": str(v), "terms": v.to_json()["terms"]}
    if isinstance(v, Fraction):
        return str(v) if v.denominator != 1 else v.numerator
    if isinstance(v, complex):
        return {"re": v.real, "im": v.imag}
    if isinstance(v, RootOfUnity):
        return {"root_of_unity": [v.numerator, v.order]}
    return v


def emit(payload: dict, out) -> None:
    payload = {"schema": SCHEMA, **payload}
    out.write(json.dumps(payload, indent=2, sort_keys=True, default=jsonable) + "\n")


def emit_csv(rows: list, header: list, out) -> None:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    out.write(buf.getvalue())


# ---------------------------------------------------------------------------
# verify


def _grams(args, cfg):
    rank = args.rank if args.rank is not None else cfg.rank
    if rank not in (1, 2):
        raise UsageError("--rank must be 1 or 2")
    count = args.count if args.count is not None else cfg.count
    max_entry = args.max_entry if args.max_entry is not None else cfg.max_entry
    return [GramLattice(g) for g in sample_grams(rank, max_entry, count, cfg.seed)]


def run_suite(args, cfg) -> list:
    primes = args.p or cfg.primes
    suite = args.suite
    reports = []
    if suite in ("intertwine-tp", "intertwine-tj", "projection-classes"):
        for p in primes:
            for lat in _grams(args, cfg):
                if suite == "intertwine-tp":
                    reports.append(verify_intertwine_Tp(lat, p))
                elif suite == "projection-classes":
                    reports.append(verify_projection_classes(lat, p, seed=cfg.seed))
                else:
                    n = lat.n + 1
                    js = [args.j] if args.j is not None else range(n + 1)
                    for j in js:
                        if not 0 <= j <= n:
                            raise UsageError(f"--j must lie in 0..{n}")
                        reports.append(verify_intertwine_Ttilde(lat, p, j))
    elif suite == "counts":
        ns = [args.n] if args.n is not None else [1, 2]
        for p in primes:
            for n in ns:
                reports.append(verify_counts(n, p))
    elif suite == "remark-identity":
        reports.append(verify_remark_identity(args.n if args.n is not None else 6))
    elif suite == "coeff-derivation":
        top = args.n if args.n is not None else 4
        for n in range(1, top + 1):
            reports.append(derive_theorem1_from_proposition(n)[1])
    elif suite in ("multiplicity", "no-self-intersection", "reps"):
        N = args.N if args.N is not None else 6
        n = args.n if args.n is not None else 2
        rep = Report(suite, {"N": N, "n": n})
        if suite == "multiplicity":
            for s in range(n):
                res = verify_multiplicity(N, n, s)
                rep.check(res["passed"], res)
        elif suite == "no-self-intersection":
            res = verify_no_self_intersection(N, n)
            rep.check(res["passed"], res)
        else:
            res = verify_reps(N, n)
            rep.check(res["passed"], res)
        reports.append(rep)
    return reports


def cmd_verify(args, cfg, out) -> int:
    reports = run_suite(args, cfg)
    passed = all(r.passed for r in reports)
    body = {
        "command": "verify",
        "suite": args.suite,
        "passed": passed,
        "checks": sum(r.checks for r in reports),
        "nonvacuous": sum(r.nonvacuous for r in reports),
        "reports": [r.to_json(with_records=args.records) for r in reports],
    }
    if not passed:
        body["first_failure"] = next(r.failures[0] for r in reports if r.failures)
    emit(body, out)
    return EXIT_OK if passed else EXIT_FAIL


# ---------------------------------------------------------------------------
# hecke


def _padded(gram, n):
    r = len(gram)
    return [[gram[i][j] if i < r and j < r else 0 for j in range(n)] for i in range(n)]


def cmd_hecke(args, cfg, out) -> int:
    try:
        with open(args.table) as fh:
            text = fh.read()
        table = CoeffTable.from_json(json.loads(text))
    except json.JSONDecodeError as exc:
        raise UsageError(f"{args.table}: invalid JSON at line {exc.lineno} column {exc.colno}: {exc.msg}")
    except OSError as exc:
        raise UsageError(f"cannot read table: {exc}")
    except ValueError as exc:
        raise UsageError(f"{args.table}: {exc}")
    n = table.degree
    if args.gram:
        try:
            targets = [_padded(g, n) for g in json.loads(args.gram)]
        except (json.JSONDecodeError, TypeError) as exc:
            raise UsageError(f"--gram must be a JSON list of matrices: {exc}")
    else:
        targets = [_padded([list(r) for r in key], n) for key, _ in table.entries]
    if args.op != "tp" and args.j is None:
        raise UsageError("--j is required for ttilde and tj")
    result = CoeffTable(n)
    for g in targets:
        lat = GramLattice(g)
        if args.op == "tp":
            v = apply_Tp(table, lat, args.p)
        elif args.op == "ttilde":
            v = apply_Ttilde_j(table, lat, args.p, args.j)
        else:
            v = apply_Tj(table, lat, args.p, args.j)
        v = bind_weight(v, args.p, args.k, args.chi)
        result.add(g, v)
    emit({"command": "hecke", "op": args.op, "p": args.p, "j": args.j, "k": args.k,
          "table": result.to_json()}, out)
    return EXIT_OK


# ---------------------------------------------------------------------------
# cusps


def cmd_cusps(args, cfg, out) -> int:
    fmt = args.format or cfg.format
    if args.action != "rep" and (args.N is None or args.n is None):
        raise UsageError(f"cusps {args.action} needs --N and --n")
    if args.action == "list":
        if args.r is None:
            raise UsageError("cusps list needs --r")
        cs = enumerate_cusps(args.N, args.n, args.r)
        if fmt == "csv":
            width = args.n - args.r
            emit_csv([[c.label(), *c.parts, c.l0] for c in cs],
                     ["label", *[f"l{width - i}" for i in range(width)], "l0"], out)
        elif fmt == "json":
            emit({"command": "cusps list", "N": args.N, "n": args.n, "r": args.r,
                  "count": len(cs), "cusps": [c.to_json() for c in cs]}, out)
        else:
            raise UsageError("cusps list supports json or csv")
    elif args.action == "incidence":
        if fmt == "dot":
            out.write(incidence_dot(args.N, args.n))
        elif fmt == "json":
            emit({"command": "cusps incidence", **incidence(args.N, args.n)}, out)
        else:
            raise UsageError("cusps incidence supports json or dot")
    else:
        if not args.tuple:
            raise UsageError("cusps rep needs --tuple")
        parts = tuple(args.tuple)
        N = args.N if args.N is not None else _lcm_all(parts)
        n = args.n if args.n is not None else len(parts)
        c = CuspTuple(N, n, n - len(parts), parts)
        g = standard_rep(c)
        emit({"command": "cusps rep", "cusp": c.to_json(), "matrix": g,
              "similitude": similitude(g), "rank_profile": {str(q): v for q, v in rank_profile(g, c.r, N).items()}},
             out)
    return EXIT_OK


def _lcm_all(xs) -> int:
    from math import lcm
    return lcm(*xs) if xs else 1


# ---------------------------------------------------------------------------
# eigenvalue


def parse_chi(spec: str | None, N: int) -> dict:
    """"3:1,5:2" -> {3: chi mod 3 with index 1, 5: ...}; unlisted primes are trivial."""
    primes = check_squarefree(N)
    chars = {q: DirichletPrimeCharacter(q, 0) for q in primes}
    if spec:
        for item in spec.split(","):
            try:
                q, a = (int(x) for x in item.split(":"))
            except ValueError:
                raise UsageError(f"bad --chi item {item!r}; expected q:a")
            if q not in chars:
                raise UsageError(f"--chi prime {q} does not divide N = {N}")
            chars[q] = DirichletPrimeCharacter(q, a)
    return chars


def parse_lambdas(text: str | None) -> dict:
    if not text:
        return {}
    out = {}
    for item in text.split(","):
        try:
            i, v = item.split("=")
            out[int(i)] = Fraction(v)
        except ValueError:
            raise UsageError(f"bad --lambdas item {item!r}; expected i=value")
    return out


def cmd_eigenvalue(args, cfg, out) -> int:
    n, r, N = args.n, args.r, args.N
    parts = tuple(args.cusp) if args.cusp else (1,) * (n - r)
    cusp = CuspTuple(N, n, r, parts)
    chi = CharacterProduct.full(N)
    base_values: dict = {}
    if args.kind == "tp":
        expr = lift_eigenvalue_Tp(n, r, cusp, chi)
        if r > 0 and args.lam is not None:
            base_values["L"] = args.lam
    else:
        if args.j is None:
            raise UsageError("eigenvalue tj needs --j")
        explicit = parse_lambdas(args.lambdas)
        base = None
        if explicit:
            base = {i: const(v) for i, v in explicit.items()}
        elif r == 1:
            psi = chi
            for t in range(n, r, -1):
                psi = character_step(psi, cusp.l(t - r))
            make = base_degree1_lambdas_algebra if args.base_variant == "algebra" else base_degree1_lambdas
            lam0, lam1 = make(psi)
            base = {0: lam0, 1: lam1}
            if args.lam is not None:
                base_values["L"] = args.lam
        try:
            expr = lift_eigenvalue_Tj(n, r, args.j, cusp, chi, base)
        except MissingBaseEigenvalue as exc:
            raise UsageError(str(exc.args[0]))
    body = {"command": f"eigenvalue {args.kind}", "n": n, "r": r, "N": N, "cusp": cusp.to_json(),
            "j": args.j, "expression": expr}
    chars = parse_chi(args.chi, N)
    if args.k is not None:
        body["parity_ok"] = _parity(chars) == (-1) ** args.k
    if args.k is not None and args.p is not None:
        chi_values = {q: c.value(args.p) for q, c in chars.items()}
        if N % args.p == 0:
            raise BadPrimeError("bad prime for eigenvalue evaluation")
        bound = expr.substitute({"P": const(args.p), "K": const(Fraction(args.p) ** args.k)})
        body["expression_at_p"] = bound
        if bound.symbols() <= {f"X{q}" for q in chars} | set(base_values):
            body["value"] = evaluate_eigenvalue(expr, args.k, args.p, chi_values, N, base_values)
    emit(body, out)
    return EXIT_OK


def _parity(chars) -> int:
    s = 1
    for c in chars.values():
        s *= c.parity()
    return s


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON config file")
    common.add_argument("--budget", type=int, help="enumeration budget (overrides $SIEGEL_HECKE_BUDGET)")
    common.add_argument("--seed", type=int, help="seed for randomized suites")

    ap = argparse.ArgumentParser(prog="siegel-hecke", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", parents=[common], help="run a verification suite")
    v.add_argument("suite", choices=SUITES)
    v.add_argument("--p", type=int_list, help="prime(s), comma separated")
    v.add_argument("--n", type=int)
    v.add_argument("--rank", type=int)
    v.add_argument("--j", type=int)
    v.add_argument("--N", type=int)
    v.add_argument("--count", type=int, help="number of sampled Gram matrices per prime")
    v.add_argument("--max-entry", type=int, dest="max_entry")
    v.add_argument("--records", action="store_true", help="include every check in the report")
    v.set_defaults(func=cmd_verify)

    h = sub.add_parser("hecke", parents=[common], help="apply a Hecke operator to a coefficient table")
    h.add_argument("--table", required=True)
    h.add_argument("--op", choices=("tp", "ttilde", "tj"), required=True)
    h.add_argument("--p", type=int, required=True)
    h.add_argument("--k", type=int, help="bind K = p^k")
    h.add_argument("--chi", type=number, help="bind X = chi(p) (rational)")
    h.add_argument("--j", type=int)
    h.add_argument("--gram", help="JSON list of Gram matrices to evaluate at (default: table keys)")
    h.set_defaults(func=cmd_hecke)

    c = sub.add_parser("cusps", parents=[common], help="cusp atlas")
    c.add_argument("action", choices=("list", "incidence", "rep"))
    c.add_argument("--N", type=int)
    c.add_argument("--n", type=int)
    c.add_argument("--r", type=int)
    c.add_argument("--tuple", type=int_list)
    c.add_argument("--format", choices=("json", "csv", "dot"))
    c.set_defaults(func=cmd_cusps)

    e = sub.add_parser("eigenvalue", parents=[common], help="eigenvalues of Klingen-Eisenstein lifts")
    e.add_argument("kind", choices=("tp", "tj"))
    e.add_argument("--n", type=int, required=True)
    e.add_argument("--r", type=int, required=True)
    e.add_argument("--N", type=int, default=1)
    e.add_argument("--cusp", type=int_list, help="l_{n-r},...,l_1 (default all 1)")
    e.add_argument("--k", type=int)
    e.add_argument("--p", type=int)
    e.add_argument("--j", type=int)
    e.add_argument("--chi", help="prime characters q:a, chi_q(g) = exp(2 pi i a/(q-1)) at the least primitive root g")
    e.add_argument("--lambda", type=number, dest="lam", help="T(p)-eigenvalue of the base form")
    e.add_argument("--lambdas", help="explicit base T_i(p^2)-eigenvalues, e.g. 0=512,1=-1048512")
    e.add_argument("--base-variant", choices=("printed", "algebra"), default="printed",
                   help="degree-1 T_i(p^2) eigenvalues derived from --lambda")
    e.set_defaults(func=cmd_eigenvalue)
    return ap


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0) and EXIT_USAGE
    try:
        cfg = RunConfig.load(args.config)
        if args.seed is not None:
            cfg.seed = args.seed
        budget = args.budget or (int(os.environ["SIEGEL_HECKE_BUDGET"]) if os.environ.get("SIEGEL_HECKE_BUDGET")
                                 else cfg.budget)
        if budget is not None and budget <= 0:
            raise UsageError("budget must be positive")
        set_default_budget(budget)
        if getattr(args, "N", None) is not None and args.N < 1:
            raise UsageError("--N must be positive")
        return args.func(args, cfg, out)
    except BudgetExceeded as exc:
        sys.stderr.write(f"siegel-hecke: {exc}\n")
        return EXIT_BUDGET
    except (UsageError, BadPrimeError, ValueError) as exc:
        sys.stderr.write(f"siegel-hecke: {exc}\n")
        return EXIT_USAGE
    finally:
        set_default_budget(None)


if __name__ == "__main__":
    sys.exit(main())
