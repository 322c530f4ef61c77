"""Command-line front end.

Exit codes: 0 every check passed, 1 a mathematical check failed, 2 a resource
guard tripped, 3 usage error.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
import time
from pathlib import Path

from . import __version__
from .cache import chain_from_dict, chain_to_dict, load_chain, save_chain
from .forge import (
    DEFAULT_MAX_K,
    ChainResult,
    ReductionUnavailable,
    ResourceLimitError,
    build_chain,
    evaluate_power_expression,
    reduce_power,
    verify_chain,
)
from .hankel import HankelSpec, hankel_identity, verify_hankel, verify_hankel_batch
from .integrality import demonstrate_obstruction, find_zero_subset, leading_coefficient_factors_check
from .multilinear import multilinearize, trace_count_report, verify_multilinear
from .poly import MultiPoly, factor_content
from .search import Kind, profile_report, minimal_degree
from .symfun import (
    ArityMismatch,
    MixedIdentity,
    PureIdentity,
    WeightVector,
    eval_pure,
    identity_from_dict,
    is_mixed_identity,
    is_pure_identity,
    matrix_eval,
    power_sum,
)

EXIT_OK, EXIT_FAIL, EXIT_RESOURCE, EXIT_USAGE = 0, 1, 2, 3

log = logging.getLogger("diagtrace")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


class Output:
    """Collects human lines or one structured record per command."""

    def __init__(self, fmt: str):
        self.fmt = fmt
        self.record: dict = {}

    def line(self, text: str = ""):
        if self.fmt == "human":
            print(text)

    def set(self, **fields):
        self.record.update(fields)

    def flush(self):
        if self.fmt == "json":
            print(json.dumps(self.record, indent=1, sort_keys=True, default=str))


def _pass(ok: bool) -> str:
    return "PASS" if ok else "FAIL"


def _ints(text: str) -> tuple:
    try:
        return tuple(int(v) for v in text.split(",") if v.strip())
    except ValueError as exc:
        raise UsageError(f"expected comma-separated integers, got {text!r}") from exc


def _weights(text: str, arity: int | None = None) -> WeightVector:
    try:
        return WeightVector.parse(text, arity)
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"bad weight vector {text!r}: {exc}") from exc


def _get_chain(args, k: int, out: Output) -> ChainResult:
    chain = None
    if args.cache_dir:
        chain = load_chain(args.cache_dir, k)
        if chain is not None:
            out.line(f"loaded chain k={k} from cache")
    if chain is None:
        chain = build_chain(k, max_k=args.max_k, term_budget=args.term_budget)
        if args.cache_dir:
            save_chain(chain, args.cache_dir)
    return chain


# ---------------------------------------------------------------------------
# subcommands


def cmd_chain(args, out: Output) -> int:
    k = args.k
    if k > args.max_k:
        out.line(f"k={k} exceeds --max-k {args.max_k}")
        out.set(command="chain", k=k, status="RESOURCE", reason="max-k")
        return EXIT_RESOURCE
    start = time.perf_counter()
    chain = _get_chain(args, k, out)
    built = time.perf_counter() - start
    if args.trust_cache and args.cache_dir:
        ver = None
    else:
        ver = verify_chain(chain, symbolic=not args.sampled, samples=args.samples)
    lead = chain.mixed.leading_coefficient
    out.line(f"chain k={k}: mixed weight {chain.mixed.weight}, pure weight {chain.pure.weight}")
    out.line(f"alpha_empty = {factor_content(lead)}")
    out.line(f"p{chain.pure.weight} coefficient = {factor_content(chain.pure.leading_coefficient)}")
    if args.show:
        out.line(f"mixed: {chain.mixed}")
        out.line(f"pure:  {chain.pure}")
    if ver is None:
        out.line("verification skipped (--trust-cache)")
    else:
        out.line(f"verification mode: {ver.mode}")
        for c in ver.checks:
            out.line(f"  {_pass(c.passed)}  {c.name}" + (f"  [{c.detail}]" if c.detail else ""))
    out.set(
        command="chain",
        k=k,
        mixed_weight=chain.mixed.weight,
        pure_weight=chain.pure.weight,
        alpha_empty=lead.to_text(),
        build_seconds=round(built, 3),
        verification_mode=ver.mode if ver else "skipped",
        checks=[{"name": c.name, "passed": c.passed, "detail": c.detail} for c in ver.checks] if ver else [],
        chain=chain_to_dict(chain) if args.show else None,
        status=_pass(ver.passed) if ver else "SKIPPED",
    )
    if args.output:
        Path(args.output).write_text(json.dumps(chain_to_dict(chain), indent=1) + "\n")
    return EXIT_OK if ver is None or ver.passed else EXIT_FAIL


def cmd_verify(args, out: Output) -> int:
    try:
        data = json.loads(Path(args.file).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read {args.file}: {exc}") from exc
    if "mixed" in data and "pure" in data:
        chain = chain_from_dict(data)
        items = [chain.mixed, chain.pure]
    else:
        try:
            items = [identity_from_dict(data)]
        except (KeyError, ValueError) as exc:
            raise UsageError(f"{args.file} is not an identity file: {exc}") from exc
    ok_all = True
    results = []
    for f in items:
        wv = _weights(args.d, f.arity)
        if isinstance(f, MixedIdentity):
            ok = is_mixed_identity(f, wv)
            witness = None if ok else matrix_eval(f, wv).first_nonzero()
            first = f"slot {witness[0]}: {witness[1]}" if witness else None
        else:
            ok = is_pure_identity(f, wv)
            first = None
            if not ok:
                ev = eval_pure(f, wv)
                exps, coeff = ev.terms()[0]
                first = str(MultiPoly.monomial(exps, coeff))
        ok_all &= ok
        out.line(f"{_pass(ok)}  {f.kind} identity, arity {f.arity}, weight {f.weight}, d={wv}")
        if first:
            out.line(f"  first non-zero term: {first}")
        results.append({"kind": f.kind, "arity": f.arity, "weight": f.weight, "passed": ok, "first_nonzero": first})
    out.set(command="verify", file=str(args.file), results=results, status=_pass(ok_all))
    return EXIT_OK if ok_all else EXIT_FAIL


def cmd_hankel(args, out: Output) -> int:
    if args.a or args.b:
        if not (args.a and args.b):
            raise UsageError("--a and --b go together")
        try:
            spec = HankelSpec(args.k, _ints(args.a), _ints(args.b))
        except ValueError as exc:
            raise UsageError(str(exc)) from exc
        res = verify_hankel(spec)
        f = hankel_identity(spec)
        out.line(json.dumps(f.to_dict()))
        out.line(f"{_pass(res.passed)}  det(p_(a_i+b_j)) a={spec.a} b={spec.b} at arity {spec.arity}")
        out.set(command="hankel", identity=f.to_dict(), status=_pass(res.passed))
        return EXIT_OK if res.passed else EXIT_FAIL
    if args.k > args.max_k:
        out.line(f"k={args.k} exceeds --max-k {args.max_k}")
        out.set(command="hankel", status="RESOURCE")
        return EXIT_RESOURCE
    results = verify_hankel_batch(args.k, args.bound, None if args.exhaustive else args.trials, seed=args.seed)
    for r in results:
        out.line(f"{_pass(r.passed)}  a={r.spec.a} b={r.spec.b}")
    ok = all(r.passed for r in results)
    out.line(f"{sum(r.passed for r in results)}/{len(results)} passed")
    out.set(
        command="hankel",
        k=args.k,
        specs=[{"a": list(r.spec.a), "b": list(r.spec.b), "passed": r.passed} for r in results],
        status=_pass(ok),
    )
    return EXIT_OK if ok else EXIT_FAIL


def cmd_obstruction(args, out: Output) -> int:
    wv = _weights(args.d)
    if wv.symbolic:
        raise UsageError("obstruction needs numeric weights")
    w = find_zero_subset(wv)
    out.line(f"d={wv}: zero subset " + (str(set(w.subset)) if w else "none"))
    out.set(command="obstruction", d=str(wv), subset=list(w.subset) if w else None)
    if not args.chain:
        out.set(status="PASS")
        return EXIT_OK
    if w is None:
        out.line("no witness, demonstration not applicable")
        out.set(status="NOT_APPLICABLE")
        return EXIT_OK
    chain = _get_chain(args, wv.arity, out)
    rep = demonstrate_obstruction(chain, w, wv)
    out.line(f"  every p_n (n <= {rep.checked_up_to}) vanishes under the specialization: {rep.power_sums_vanish}")
    out.line(f"  alpha_empty(d) = {rep.leading_value}")
    out.line(f"  specialized slot: {rep.specialized_slot}")
    out.line(f"{_pass(rep.passed)}  obstruction forces alpha_empty(d) = 0")
    out.set(
        power_sums_vanish=rep.power_sums_vanish,
        alpha_empty=str(rep.leading_value),
        hyperplanes=[{"subset": list(h.subset), "vanishes": h.vanishes} for h in leading_coefficient_factors_check(chain)]
        if wv.arity <= 3
        else None,
        status=_pass(rep.passed),
    )
    return EXIT_OK if rep.passed else EXIT_FAIL


def cmd_search(args, out: Output) -> int:
    wv = _weights(args.d)
    if wv.symbolic:
        raise UsageError("search needs numeric weights")
    res = minimal_degree(wv, Kind(args.kind), args.max_degree)
    if res is None:
        out.line(f"no {args.kind} identity up to weight {args.max_degree} at d={wv}")
        out.set(command="search", d=str(wv), kind=args.kind, n_min=None, identities=[])
    else:
        out.line(f"N_min={res.problem.weight} ({args.kind}, d={wv}, nullspace dimension {res.dimension})")
        for f in res.identities:
            out.line(f"  {f}")
        out.set(
            command="search",
            d=str(wv),
            kind=args.kind,
            n_min=res.problem.weight,
            identities=[f.to_dict() for f in res.identities],
        )
    if args.report:
        rep = profile_report(wv, args.max_degree)
        out.line(f"profile: values {[str(v) for v in rep.profile.values]}, multiplicities {list(rep.profile.multiplicities)}, m={rep.profile.m}")
        out.line(f"  reading: {rep.reading}")
        for pr in rep.predictions:
            out.line(f"  {pr.status:<12} {pr.label}: predicted {pr.predicted}, observed {pr.observed}")
        out.set(
            profile={"values": [str(v) for v in rep.profile.values], "multiplicities": list(rep.profile.multiplicities), "m": rep.profile.m},
            predictions=[{"label": p.label, "predicted": p.predicted, "observed": p.observed, "status": p.status} for p in rep.predictions],
        )
    out.set(status="PASS")
    return EXIT_OK


def cmd_multilinear(args, out: Output) -> int:
    if args.file:
        f = identity_from_dict(json.loads(Path(args.file).read_text()))
        if not isinstance(f, PureIdentity):
            raise UsageError("multilinearization needs a pure identity")
    else:
        f = _get_chain(args, args.k, out).pure
    if f.weight > args.limit:
        out.line(f"weight {f.weight} exceeds --limit {args.limit}")
        out.set(command="multilinear", status="RESOURCE")
        return EXIT_RESOURCE
    wv = _weights(args.d, f.arity)
    m = multilinearize(f, limit=args.limit)
    ok = verify_multilinear(m, wv)
    rep = trace_count_report(m)
    out.line(m.table_text())
    out.line(f"all-singleton coefficient: {rep.singleton_coefficient}" + ("" if rep.reducing else "  (not trace-product-reducing)"))
    out.line(f"{_pass(ok)}  multilinear identity in {m.n} variables at d={wv}")
    out.set(command="multilinear", identity=m.to_dict(), singleton=rep.singleton_coefficient.to_text(),
            reducing=rep.reducing, status=_pass(ok))
    return EXIT_OK if ok else EXIT_FAIL


def cmd_reduce(args, out: Output) -> int:
    wv = _weights(args.d)
    if wv.symbolic:
        raise UsageError("reduce needs numeric weights")
    chain = _get_chain(args, wv.arity, out)
    try:
        expr = reduce_power(args.n, wv, chain)
    except ReductionUnavailable as exc:
        out.line(f"FAIL  {exc}")
        out.set(command="reduce", status="UNAVAILABLE", reason=str(exc))
        return EXIT_FAIL
    ok = evaluate_power_expression(expr, wv) == power_sum(wv, args.n)
    out.line(f"p{args.n} = {expr}")
    out.line(f"{_pass(ok)}  expression evaluates to the weighted power sum")
    out.set(command="reduce", n=args.n, d=str(wv), expression=expr.to_text(), status=_pass(ok))
    return EXIT_OK if ok else EXIT_FAIL


BENCH_SUITES = ("chain-k1", "chain-k2", "chain-k3", "chain-k4", "verify-k3", "hankel", "search", "multilinear")


def cmd_bench(args, out: Output) -> int:
    suite = args.suite
    rows = []
    status = EXIT_OK
    start = time.perf_counter()
    try:
        if suite.startswith("chain-k"):
            k = int(suite[len("chain-k"):])
            chain = build_chain(k, max_k=max(args.max_k, k), term_budget=args.term_budget)
            for lvl in chain.levels:
                rows.append({"level": lvl.arity, "mixed_weight": lvl.mixed_weight, "pure_weight": lvl.pure_weight,
                             "mixed_terms": lvl.mixed_terms, "pure_terms": lvl.pure_terms, "seconds": round(lvl.seconds, 4)})
        elif suite == "verify-k3":
            chain = build_chain(3)
            t0 = time.perf_counter()
            ok = verify_chain(chain).passed
            rows.append({"what": "symbolic verification k=3", "passed": ok, "seconds": round(time.perf_counter() - t0, 3)})
            status = EXIT_OK if ok else EXIT_FAIL
        elif suite == "hankel":
            for k, bound, trials in ((1, 4, None), (2, 5, 20), (3, 5, 20)):
                t0 = time.perf_counter()
                res = verify_hankel_batch(k, bound, trials)
                rows.append({"k": k, "specs": len(res), "passed": all(r.passed for r in res),
                             "seconds": round(time.perf_counter() - t0, 3)})
        elif suite == "search":
            for dv in ("1,1", "2,3", "1,1,1", "2,5,11"):
                t0 = time.perf_counter()
                res = minimal_degree(WeightVector.parse(dv), Kind.MONIC_MIXED, 8)
                rows.append({"d": dv, "n_min": res.problem.weight if res else None, "seconds": round(time.perf_counter() - t0, 3)})
        elif suite == "multilinear":
            for k in (1, 2):
                t0 = time.perf_counter()
                m = multilinearize(build_chain(k).pure)
                ok = verify_multilinear(m, WeightVector.symbolic_of(k))
                rows.append({"k": k, "n": m.n, "passed": ok, "seconds": round(time.perf_counter() - t0, 3)})
        else:
            raise UsageError(f"unknown suite {suite!r}; choose from {', '.join(BENCH_SUITES)}")
    except ResourceLimitError as exc:
        out.line(f"resource guard: {exc}")
        for lvl in exc.levels:
            rows.append({"level": lvl.arity, "mixed_weight": lvl.mixed_weight, "pure_weight": lvl.pure_weight,
                         "mixed_terms": lvl.mixed_terms, "pure_terms": lvl.pure_terms, "seconds": round(lvl.seconds, 4)})
        rows.append({"aborted": str(exc)})
        status = EXIT_RESOURCE
    total = time.perf_counter() - start
    for r in rows:
        out.line("  " + "  ".join(f"{k}={v}" for k, v in r.items()))
    out.line(f"suite {suite}: {total:.3f}s")
    out.set(command="bench", suite=suite, rows=rows, seconds=round(total, 3))
    return status


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--format", choices=("human", "json"), default="human", help="output format")
    common.add_argument("--cache-dir", default=None, help="directory for cached chain identities")
    common.add_argument("--trust-cache", action="store_true", help="skip re-verification of cached chains")
    common.add_argument("--max-k", type=int, default=DEFAULT_MAX_K, help="largest chain level allowed")
    common.add_argument("--term-budget", type=int, default=5_000_000, help="abort products larger than this many terms")
    common.add_argument("-v", "--verbose", action="store_true")

    parser = _Parser(prog="diagtrace", description="Trace identities of weighted diagonal matrix algebras.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("chain", parents=[common], help="build and verify the level-k chain identities")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--sampled", action="store_true", help="verify at random rational weights instead of symbolically")
    p.add_argument("--samples", type=int, default=5)
    p.add_argument("--show", action="store_true", help="print the identities")
    p.add_argument("--output", help="write the chain in the cache schema to this file")
    p.set_defaults(func=cmd_chain)

    p = sub.add_parser("verify", parents=[common], help="verify an identity or chain file")
    p.add_argument("file")
    p.add_argument("--d", default="symbolic", help='weights, e.g. "2,3", or "symbolic"')
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("hankel", parents=[common], help="determinantal identities")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--a", help="row offsets, e.g. 1,2")
    p.add_argument("--b", help="column offsets")
    p.add_argument("--bound", type=int, default=4)
    p.add_argument("--trials", type=int, default=20)
    p.add_argument("--exhaustive", action="store_true")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_hankel)

    p = sub.add_parser("obstruction", parents=[common], help="zero subset sums of the weights")
    p.add_argument("--d", required=True)
    p.add_argument("--chain", action="store_true", help="demonstrate on the chain identity of matching arity")
    p.set_defaults(func=cmd_obstruction)

    p = sub.add_parser("search", parents=[common], help="minimal-degree identities at numeric weights")
    p.add_argument("--d", required=True)
    p.add_argument("--kind", choices=[k.value for k in Kind], default=Kind.MONIC_MIXED.value)
    p.add_argument("--max-degree", type=int, default=8)
    p.add_argument("--report", action="store_true", help="compare with the multiplicity-profile predictions")
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("multilinear", parents=[common], help="multilinearize a pure identity")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--k", type=int, help="use the pure chain identity of level k")
    src.add_argument("--file", help="pure identity file")
    p.add_argument("--d", default="symbolic")
    p.add_argument("--limit", type=int, default=5)
    p.set_defaults(func=cmd_multilinear)

    p = sub.add_parser("reduce", parents=[common], help="express p_n through lower power sums")
    p.add_argument("--d", required=True)
    p.add_argument("--n", type=int, required=True)
    p.set_defaults(func=cmd_reduce)

    p = sub.add_parser("bench", parents=[common], help="timing suites")
    p.add_argument("suite", choices=BENCH_SUITES)
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(name)s: %(message)s")
    out = Output(args.format)
    try:
        code = args.func(args, out)
    except UsageError as exc:
        print(f"diagtrace: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ArityMismatch as exc:
        print(f"diagtrace: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ResourceLimitError as exc:
        out.line(f"resource guard: {exc}")
        out.set(status="RESOURCE", reason=str(exc))
        out.flush()
        return EXIT_RESOURCE
    out.flush()
    return code


if __name__ == "__main__":
    sys.exit(main())
