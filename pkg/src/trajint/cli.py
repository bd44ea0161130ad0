"""Command-line front end.

Exit status: 0 on success, 1 when a verification fails, 2 on bad input.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Dict, List, Optional, Sequence

import numpy as np

from . import construct, io, measure, oracle
from .classify import scan_tree
from .elementary import Constraint, ElementaryFunction
from .extreal import format_ext, to_jsonable
from .martingale import NotIntegrableError, classify_process, price_process, verify_tower
from .payoff import as_values, positive_part, scale
from .superhedge import CertificateError, conditional_norm, hedge_certificate, lower_integral, upper_integral
from .tree import EXACT, FLOAT, InvalidPathError, NumericMode, TrajectoryTree, format_path, parse_path

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


class UsageError(Exception):
    pass


def _threads(args) -> int:
    if getattr(args, "threads", None):
        return max(1, args.threads)
    env = os.environ.get("TRAJINT_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            raise UsageError(f"TRAJINT_THREADS must be an integer, got {env!r}") from None
    return 1


def _pmap(args, fn: Callable, items: Sequence) -> List:
    """Map preserving order; threads only change scheduling, not results."""
    n = _threads(args)
    if n == 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=n) as pool:
        return list(pool.map(fn, items))


def _mode(args) -> NumericMode:
    return EXACT if args.exact else FLOAT


def _model(args) -> TrajectoryTree:
    return io.load_model(args.model, _mode(args))


def _emit(args, payload: dict, text: str) -> None:
    if args.format == "json":
        print(json.dumps(payload, indent=1))
    else:
        print(text)


# gen


def cmd_gen(args) -> int:
    mode = _mode(args)
    if args.kind == "example1":
        tree = construct.gen_example1(args.horizon, mode)
    elif args.kind == "example2":
        tree = construct.gen_example2(args.horizon, mode)
    elif args.kind in ("binomial", "trinomial"):
        tree = construct.gen_lattice(args.kind, args.horizon, args.s0, args.u, args.d, args.m, mode)
    else:
        tree = construct.random_tree(args.seed, args.horizon, args.branching, mode)
    text = io.dump_model(tree)
    if args.output:
        io.write_json(io.model_to_dict(tree), args.output)
        print(f"wrote {args.kind} model with {len(tree.all_leaves)} leaves to {args.output}")
    else:
        print(text)
    return EXIT_OK


# classify


def cmd_classify(args) -> int:
    tree = _model(args)
    scan = scan_tree(tree)
    rows = [
        {
            "node": format_path(p),
            "class": c.kind.value,
            "zero_neutral": c.zero_neutral,
            "sup_inc": to_jsonable(c.sup_inc),
            "inf_inc": to_jsonable(c.inf_inc),
        }
        for p, c in sorted(scan.classes.items())
    ]
    summary = scan.summary()
    if args.format == "json":
        print(json.dumps({"nodes": rows, "summary": summary}, indent=1))
    else:
        print("node\tclass\tzero_neutral\tsup_inc\tinf_inc")
        for r in rows:
            print(f"{r['node']}\t{r['class']}\t{r['zero_neutral']}\t{r['sup_inc']}\t{r['inf_inc']}")
        for k in ("locally_0_neutral", "locally_arbitrage_free", "has_type_II"):
            print(f"# {k}={summary[k]}")
    return EXIT_OK


# price


def cmd_price(args) -> int:
    tree = _model(args)
    mode = _mode(args)
    f = io.parse_payoff(args.payoff, mode)
    node = parse_path(args.node)
    tree.node(node)
    cons = Constraint.parse(args.constraint, mode)
    fn = {"upper": upper_integral, "lower": lower_integral, "norm": conditional_norm}[args.mode]
    value = fn(tree, f, node, cons)
    payload = {"node": format_path(node), "mode": args.mode, "payoff": args.payoff,
               "value": to_jsonable(value)}
    if args.certificate:
        vals = as_values(tree, f)
        if args.mode == "norm":
            vals = {k: abs(v) for k, v in vals.items()}
        elif args.mode == "lower":
            raise UsageError("certificates are available for upper and norm modes")
        try:
            cert = hedge_certificate(tree, vals, node, cons, mode.coerce(args.slack))
        except CertificateError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_FAIL
        io.write_json(io.certificate_to_dict(cert), args.certificate)
        payload["certificate"] = args.certificate
        payload["certificate_verified"] = cert.verify(tree, vals)
    _emit(args, payload, format_ext(value))
    return EXIT_OK


# verify


def _random_elementary(tree: TrajectoryTree, rng: np.random.Generator) -> ElementaryFunction:
    nodes = [p for p in tree.nodes() if len(p) < tree.horizon] or [()]
    node = nodes[int(rng.integers(0, len(nodes)))]
    c = tree.mode.coerce
    hold = {p: c(int(rng.integers(-20, 21)) / 4) for p in tree.interior(node)}
    return ElementaryFunction(node, c(int(rng.integers(-20, 21)) / 4), hold, tree.horizon)


def cmd_verify(args) -> int:
    tree = _model(args)
    mode = _mode(args)
    props = [p.strip().lower() for p in args.properties.split(",") if p.strip()]
    known = {"l", "k", "integrable", "convergence"}
    unknown = set(props) - known
    if unknown:
        raise UsageError(f"unknown properties: {', '.join(sorted(unknown))}")
    needs_payoff = {"integrable", "convergence"} & set(props)
    if needs_payoff and not args.payoff:
        raise UsageError("--payoff is required for integrable/convergence checks")
    f = io.parse_payoff(args.payoff, mode) if args.payoff else None
    report: Dict[str, dict] = {}
    lines: List[str] = []
    ok_all = True

    if "l" in props:
        res = measure.check_L_property(tree)
        ok = all(res.values())
        bad = [format_path(p) for p, v in sorted(res.items()) if not v]
        report["L"] = {"ok": ok, "nodes": len(res), "failing": bad}
        lines.append(f"L: {'all true' if ok else 'false at ' + ', '.join(bad)} ({len(res)} nodes)")
        ok_all &= ok

    if "k" in props:
        rng = np.random.default_rng(args.seed)
        elems = [_random_elementary(tree, rng) for _ in range(args.trials)]
        checks = _pmap(args, lambda e: measure.check_K_property(tree, e), elems)
        fails = [format_path(c.node) for c in checks if not c.holds]
        ok = not fails
        report["K"] = {"ok": ok, "trials": len(checks), "failing_nodes": fails}
        lines.append(f"K: {len(checks) - len(fails)}/{len(checks)} trials hold")
        ok_all &= ok

    if "integrable" in props:
        per = {}
        ok = True
        for j in range(tree.horizon + 1):
            rep = measure.check_integrable(tree, f, j)
            per[j] = {"integrable": rep.integrable,
                      "exceptional": [format_path(p) for p in rep.exceptional]}
            ok &= rep.integrable
        report["integrable"] = {"ok": ok, "depths": per}
        lines.append(f"integrable: {ok}")
        ok_all &= ok

    if "convergence" in props:
        base = positive_part(as_values(tree, f))
        n = max(1, args.trials)
        fam = [scale(mode.coerce(k) / n, base) for k in range(1, n + 1)]
        try:
            rep = measure.verify_convergence_theorems(tree, fam, args.depth, "mct")
            ok = rep.ok
            detail = {format_path(p): [to_jsonable(x) for x in r] for p, r in rep.residuals.items()}
        except ValueError as exc:
            ok, detail = False, str(exc)
        report["convergence"] = {"ok": ok, "residuals": detail}
        lines.append(f"convergence: {ok}")
        ok_all &= ok

    _emit(args, {"ok": ok_all, "properties": report}, "\n".join(lines))
    return EXIT_OK if ok_all else EXIT_FAIL


# martingale


def cmd_martingale(args) -> int:
    tree = _model(args)
    mode = _mode(args)
    f = io.parse_payoff(args.payoff, mode)
    try:
        proc = price_process(tree, f, args.mode)
    except NotIntegrableError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL
    payload = io.process_to_dict(proc.values, proc.mode, args.payoff)
    status = EXIT_OK
    lines = [f"{format_path(p)}\t{format_ext(v)}" for p, v in sorted(proc.values.items())]
    if args.out:
        io.write_json(payload, args.out)
    if args.classify:
        cls = classify_process(tree, proc)
        payload["classification"] = cls.kind.value
        lines.append(f"# classification={cls.kind.value}")
    if args.check_tower:
        try:
            j, k = (int(x) for x in args.check_tower.split(","))
        except ValueError:
            raise UsageError("--check-tower expects 'j,k'") from None
        rep = verify_tower(tree, f, j, k)
        payload["tower"] = {"ordered": rep.ordered, "integrable": rep.integrable,
                            "equality": rep.equality}
        lines.append(f"# tower j={j} k={k}: ordered={rep.ordered} equality={rep.equality}")
        if not rep.ordered or rep.equality is False:
            status = EXIT_FAIL
    _emit(args, payload, "\n".join(lines))
    return status


# nullcheck


def _parse_leaves(text: str, mode: NumericMode) -> List[tuple]:
    if text.startswith("@"):
        return io.parse_leaf_list(io._load_ref(text, mode), text)
    return [parse_path(x) for x in text.split(";") if x.strip()]


def cmd_nullcheck(args) -> int:
    tree = _model(args)
    mode = _mode(args)
    leaves = _parse_leaves(args.leaves, mode)
    for leaf in leaves:
        if len(leaf) != tree.horizon or not tree.has(leaf):
            raise UsageError(f"{format_path(leaf)} is not a leaf of the model")
    node = parse_path(args.node)
    tree.node(node)
    rep = measure.is_conditionally_null(tree, leaves, node, mode.coerce(args.slack))
    payload = {"node": format_path(node), "leaves": len(leaves),
               "norm": to_jsonable(rep.norm_value), "is_null": rep.is_null}
    if rep.certificate is not None:
        payload["certificate_premium"] = to_jsonable(rep.certificate.total_premium)
    _emit(args, payload, f"norm={format_ext(rep.norm_value)} null={rep.is_null}")
    return EXIT_OK


# oracle


def cmd_oracle(args) -> int:
    mode = _mode(args)
    tree = _model(args)
    f = io.parse_payoff(args.payoff, mode)
    node = parse_path(args.node)
    tree.node(node)
    if args.method == "grid":
        lo, hi = (float(x) for x in args.range.split(","))
        value = oracle.grid_superhedge(tree.with_mode(FLOAT), f, node, (lo, hi), args.step)
    elif args.method == "dual":
        value = oracle.dual_upper_integral(tree, f, node)
    elif args.method == "enum":
        lo, hi, n = args.grid.split(",")
        grid = np.linspace(float(lo), float(hi), int(n))
        value = oracle.enumerate_superpositions(tree.with_mode(FLOAT), f, node, args.M, grid)
    else:
        value = oracle.lp_superhedge(tree.with_mode(FLOAT), f, node).value
    dp = upper_integral(tree, f, node)
    payload = {"method": args.method, "node": format_path(node), "value": to_jsonable(value),
               "dp_value": to_jsonable(dp)}
    _emit(args, payload, f"{args.method}={format_ext(value)} dp={format_ext(dp)}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--exact", action="store_true", help="exact rational arithmetic")
    common.add_argument("--format", choices=("text", "json", "tsv"), default="text")
    common.add_argument("--threads", type=int, default=None,
                        help="worker threads (default: TRAJINT_THREADS or 1)")

    p = argparse.ArgumentParser(prog="trajint", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", parents=[common], help="generate a model file")
    g.add_argument("kind", choices=("example1", "example2", "binomial", "trinomial", "random"))
    g.add_argument("--horizon", type=int, required=True)
    g.add_argument("--s0", default="1")
    g.add_argument("--u", default="2")
    g.add_argument("--d", default="1/2")
    g.add_argument("--m", default="1")
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--branching", type=int, default=3)
    g.add_argument("-o", "--output")
    g.set_defaults(func=cmd_gen)

    c = sub.add_parser("classify", parents=[common], help="classify interior nodes")
    c.add_argument("model")
    c.set_defaults(func=cmd_classify)

    pr = sub.add_parser("price", parents=[common], help="conditional upper/lower integral or norm")
    pr.add_argument("model")
    pr.add_argument("--payoff", required=True)
    pr.add_argument("--node", default="root")
    pr.add_argument("--mode", choices=("upper", "lower", "norm"), default="upper")
    pr.add_argument("--constraint")
    pr.add_argument("--certificate")
    pr.add_argument("--slack", default="0")
    pr.set_defaults(func=cmd_price)

    v = sub.add_parser("verify", parents=[common], help="check L, K, integrability, convergence")
    v.add_argument("model")
    v.add_argument("--properties", default="L")
    v.add_argument("--payoff")
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--trials", type=int, default=10)
    v.add_argument("--depth", type=int, default=0)
    v.set_defaults(func=cmd_verify)

    m = sub.add_parser("martingale", parents=[common], help="price process and classification")
    m.add_argument("model")
    m.add_argument("--payoff", required=True)
    m.add_argument("--mode", choices=("upper", "lower", "integral"), default="upper")
    m.add_argument("--classify", action="store_true")
    m.add_argument("--check-tower")
    m.add_argument("--out")
    m.set_defaults(func=cmd_martingale)

    n = sub.add_parser("nullcheck", parents=[common], help="conditional norm of a leaf set")
    n.add_argument("model")
    n.add_argument("--leaves", required=True, help="@file or 'i.j;k.l' list of leaf paths")
    n.add_argument("--node", default="root")
    n.add_argument("--slack", default="0")
    n.set_defaults(func=cmd_nullcheck)

    o = sub.add_parser("oracle", parents=[common], help="brute-force cross-checks")
    o.add_argument("model")
    o.add_argument("--payoff", required=True)
    o.add_argument("--method", choices=("grid", "dual", "enum", "lp"), default="grid")
    o.add_argument("--node", default="root")
    o.add_argument("--step", type=float, default=1e-4)
    o.add_argument("--range", default="-100,100")
    o.add_argument("--M", type=int, default=1)
    o.add_argument("--grid", default="-2,2,41")
    o.set_defaults(func=cmd_oracle)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (io.InputError, InvalidPathError, UsageError, oracle.OracleError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
