"""Command-line front end.

Exit codes: 0 when every check passes, 1 when a mathematical check fails,
2 for usage, input and cap errors.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from fractions import Fraction

import numpy as np

from . import bose_mesner, qcount, set_engine, spread, vector_engine, weights
from .errors import CapExceeded, PreconditionError
from .ledger import Check, json_number
from .subspace import coordinate_subspace, geometry

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(message)


# -- report output -------------------------------------------------------------


def _jsonable(obj):
    if isinstance(obj, Check):
        return obj.to_json()
    if isinstance(obj, Fraction):
        return json_number(obj)
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    if isinstance(obj, tuple):
        return [_jsonable(v) for v in obj]
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def _cell(value) -> str:
    return value if isinstance(value, str) else json.dumps(value, default=_jsonable)


def render(report: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(report, default=_jsonable, sort_keys=True, indent=2) + "\n"
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    table = report.get("checks") or report.get("rows")
    if table:
        rows = [_jsonable(r) if isinstance(r, Check) else r for r in table]
        cols = sorted({c for r in rows for c in r})
        writer.writerow(cols)
        for r in rows:
            writer.writerow([_cell(r.get(c, "")) for c in cols])
    else:
        writer.writerow(["key", "value"])
        for key in sorted(report):
            value = report[key]
            if not isinstance(value, (list, dict)):
                writer.writerow([key, _cell(value)])
    return buf.getvalue()


def _summary(name: str, checks: list[Check], **extra) -> dict:
    return {"command": name, "passed": all(c.passed for c in checks), "checks": checks, **extra}


# -- identities ----------------------------------------------------------------


def cmd_identities(args) -> dict:
    checks = []
    qs = range(2, args.q_max + 1)
    sym = [(a, k, q) for q in qs for a in range(args.a_max + 1) for k in range(a + 1)]
    bad = sum(qcount.gaussian(a, k, q) != qcount.gaussian(a, a - k, q) for a, k, q in sym)
    checks.append(Check("symmetry_failures", "Gaussiandef", bad, 0, "=="))
    dom = sum(qcount.gaussian(a, k, q) < qcount.binomial(a, k) for a, k, q in sym)
    checks.append(Check("dominance_failures", "Gaussiandef", dom, 0, "=="))
    pascal = [(a, k, q) for q in qs for a in range(1, args.a_max + 1) for k in range(1, a + 1)]
    bad = sum(not qcount.check_q_pascal(a, k, q) for a, k, q in pascal)
    checks.append(Check("qpascal_failures", "qpascal", bad, 0, "=="))
    ineq = [(a, b, q) for q in qs for b in range(1, args.b_max + 1) for a in range(1, b + 1)]
    bad = sum(not qcount.check_simple_inequalities(a, b, q) for a, b, q in ineq)
    checks.append(Check("simple_inequality_failures", "simple2", bad, 0, "=="))
    cases = {"symmetry": len(sym), "qpascal": len(pascal), "inequalities": len(ineq)}
    return _summary("identities", checks, cases=cases)


# -- eigencheck ----------------------------------------------------------------


def cmd_eigencheck(args) -> dict:
    rng = np.random.default_rng(args.seed)
    q = None if args.mode == "set" else args.q
    if args.k < 0 or args.k > args.n:
        raise PreconditionError("need 0 <= k <= n")
    js = [args.j] if args.j is not None else list(range(1, args.k + 1))
    # fail on size before drawing any weighting
    for j in js:
        bose_mesner._check(args.n, j, args.k, q, bose_mesner.MATRIX_CAP)
    if q is None:
        ws = [weights.random_set_weighting(args.n, rng) for _ in range(args.trials)]
        anchor = "lem:eigenvecset"
    else:
        ws = [weights.random_weighting(args.n, q, rng) for _ in range(args.trials)]
        anchor = "lem:eigenvec"
    checks, per_j = [], []
    for j in js:
        reports = bose_mesner.verify_eigenvector_batch(ws, args.k, j)
        exact = sum(r.passed for r in reports)
        checks.append(Check(f"eigen_j{j}", anchor, exact, len(ws), "=="))
        lam = bose_mesner.eigenvalue(args.n, args.k, j, q)
        per_j.append({"j": j, "eigenvalue": lam, "exact": exact, "method": reports[0].method if reports else None})
    return _summary(
        "eigencheck", checks, mode=args.mode, q=q, n=args.n, k=args.k, trials=args.trials, seed=args.seed, per_j=per_j
    )


# -- spread ------------------------------------------------------------------


def cmd_spread(args) -> dict:
    if args.k < 1:
        raise PreconditionError("k must be positive")
    r = args.n % args.k
    U = coordinate_subspace(args.n, args.q, args.k + r)
    ps = spread.build_partial_spread(args.n, args.k, U, args.q)
    rep = spread.verify_partial_spread(ps)
    if args.emit:
        with open(args.emit, "w") as fh:
            json.dump(spread.spread_to_json(ps), fh, sort_keys=True, indent=2)
            fh.write("\n")
    checks = [
        Check("size", "sizeS", rep.size, rep.expected_size, "=="),
        Check("violations", "lem:mrBtotherescue", len(rep.violations), 0, "=="),
    ]
    return _summary(
        "spread",
        checks,
        q=args.q,
        n=args.n,
        k=args.k,
        r=r,
        blocks=rep.size,
        expected_blocks=rep.expected_size,
        violations=rep.violations,
    )


# -- verify --------------------------------------------------------------------


def _load_document(path: str) -> dict:
    try:
        return weights.load_json(path)
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path} is not valid JSON: {exc}") from exc


def cmd_verify(args) -> dict:
    doc = _load_document(args.input)
    if args.mode == "vector":
        f = weights.weighting_from_json(doc)
        rep = vector_engine.theorem_check_vec(f, args.k, ledger=args.ledger)
        lemmas = vector_engine.lemma_checks(f, args.k) if args.ledger else []
        star = list(rep.star.basis[0]) if rep.star is not None else None
        extra = {"q": f.q, "n": f.n, "star_point": star}
        star_ok = rep.star is not None
    else:
        x = weights.set_weighting_from_json(doc)
        rep = set_engine.theorem_check_set(x, args.k, ledger=args.ledger)
        lemmas = set_engine.lemma_checks_set(x, args.k) if args.ledger else []
        extra = {"n": x.n, "star_on_x1": rep.star_on_x1}
        star_ok = rep.star_on_x1
    checks = rep.ledger + lemmas
    return _summary(
        "verify",
        checks,
        mode=args.mode,
        k=args.k,
        count=rep.count,
        bound=rep.bound,
        equality=rep.equality,
        theorem_holds=rep.count >= rep.bound and (star_ok or not rep.equality),
        **extra,
    )


# -- search ------------------------------------------------------------------


def cmd_search(args) -> dict:
    if args.mode == "vector":
        if not args.two_value:
            raise UsageError("--grid is set-mode only; use --two-value with --mode vector")
        scan = vector_engine.search_vec(args.n, args.q, args.k, trials=args.trials, seed=args.seed)
        return {"command": "search", "kind": "two-value", "mode": "vector", "passed": True, **scan}
    if args.two_value:
        scan = set_engine.two_value_scan(args.n, args.k)
        # exploratory: nothing is asserted, so the command always passes
        return {"command": "search", "kind": "two-value", "mode": "set", "passed": True, **scan}
    res = set_engine.grid_min_oracle(args.n, args.k, args.grid, jobs=args.jobs)
    bound = qcount.binomial(args.n - 1, args.k - 1)
    checks = [Check("oracle_min", "thm:quadratic", res.min_count, bound, ">=")]
    return _summary(
        "search",
        checks,
        kind="grid",
        n=res.n,
        k=res.k,
        B=res.B,
        min_count=res.min_count,
        target=bound,
        witness=weights.set_weighting_to_json(weights.SetWeighting.from_values(res.witness)),
        witness_is_star=res.witness_is_star,
        minimizers=res.minimizers,
        grid_size=res.grid_size,
    )


# -- weighting ---------------------------------------------------------------


def cmd_weighting(args) -> dict:
    rng = np.random.default_rng(args.seed)
    if args.mode == "set":
        makers = {
            "star": lambda: weights.star_weighting_set(args.n),
            "random": lambda: weights.random_set_weighting(args.n, rng),
            "perturbed": lambda: weights.perturbed_star_set(args.n, rng),
        }
        return weights.set_weighting_to_json(makers[args.kind]())
    vhat = geometry(args.n, args.q).points[0]
    makers = {
        "star": lambda: weights.star_weighting_vec(args.n, args.q, vhat),
        "random": lambda: weights.random_weighting(args.n, args.q, rng),
        "perturbed": lambda: weights.perturbed_star_vec(args.n, args.q, vhat, rng),
    }
    return weights.weighting_to_json(makers[args.kind]())


# -- parser ------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0, help="seed for all randomness (default 0)")
    common.add_argument("--jobs", type=int, default=1, help="worker processes for sharded searches")
    common.add_argument("--out", help="write the report here instead of stdout")
    common.add_argument("--format", choices=("json", "csv"), default="json")

    p = _Parser(prog="nonnegcount", description="Exact checks of nonnegative-sum counting bounds.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("identities", parents=[common], help="Gaussian binomial identity sweeps")
    s.add_argument("--q-max", type=int, default=5)
    s.add_argument("--a-max", type=int, default=30)
    s.add_argument("--b-max", type=int, default=40, help="range of the two simple inequalities")
    s.set_defaults(run=cmd_identities)

    s = sub.add_parser("eigencheck", parents=[common], help="B_j b = lambda b on random weightings")
    s.add_argument("--mode", choices=("vector", "set"), default="vector")
    s.add_argument("--q", type=int, default=2)
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--k", type=int, required=True)
    s.add_argument("--j", type=int, help="single j (default: every 1 <= j <= k)")
    s.add_argument("--trials", type=int, default=100)
    s.set_defaults(run=cmd_eigencheck)

    s = sub.add_parser("spread", parents=[common], help="build and verify a partial spread")
    s.add_argument("--q", type=int, required=True)
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--k", type=int, required=True)
    s.add_argument("--emit", help="write the spread as JSON to this file")
    s.set_defaults(run=cmd_spread)

    s = sub.add_parser("verify", parents=[common], help="check the counting theorem on a weighting file")
    s.add_argument("--mode", choices=("vector", "set"), required=True)
    s.add_argument("--input", required=True)
    s.add_argument("--k", type=int, required=True)
    s.add_argument("--ledger", action="store_true", help="also run the lemma and proof ledger")
    s.set_defaults(run=cmd_verify)

    s = sub.add_parser("search", parents=[common], help="grid oracle or two-value scan")
    s.add_argument("--mode", choices=("set", "vector"), default="set")
    s.add_argument("--q", type=int, default=2, help="field order (vector mode)")
    s.add_argument("--trials", type=int, default=100, help="random weightings (vector mode)")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--k", type=int, required=True)
    how = s.add_mutually_exclusive_group(required=True)
    how.add_argument("--grid", type=int, metavar="B", help="exhaustive grid with entries in [-B, B]")
    how.add_argument("--two-value", action="store_true")
    s.set_defaults(run=cmd_search)

    s = sub.add_parser("weighting", parents=[common], help="write a star, random or perturbed weighting file")
    s.add_argument("--mode", choices=("vector", "set"), required=True)
    s.add_argument("--kind", choices=("star", "random", "perturbed"), default="star")
    s.add_argument("--q", type=int, default=2)
    s.add_argument("--n", type=int, required=True)
    s.set_defaults(run=cmd_weighting)
    return p


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        if args.jobs < 1:
            raise UsageError("--jobs must be at least 1")
        report = args.run(args)
        text = render(report, args.format)
    except UsageError as exc:
        print(f"nonnegcount: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (CapExceeded, PreconditionError, ValueError, TypeError, KeyError) as exc:
        print(f"nonnegcount: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    passed = report.get("passed", True)
    if not passed and args.command == "verify" and not report.get("theorem_holds", True):
        print("nonnegcount: COUNT BOUND VIOLATED on this input", file=sys.stderr)
    return EXIT_OK if passed else EXIT_FAIL


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
