"""Command-line front end: ``analyze``, ``simulate`` and ``fuzz``.

Exit codes: 0 when every cross-check passes, 1 on usage or input errors,
2 when a mathematical cross-check fails.
"""

from __future__ import annotations

import argparse
import json
import sys
from collections import Counter
from pathlib import Path

import numpy as np

from digraph_consensus.checks import Analysis, analyze_graph
from digraph_consensus.digraph import Digraph, EdgeListError, laplacian, parse_edge_list
from digraph_consensus.dynamics import perron, simulate_continuous, simulate_discrete
from digraph_consensus.forests import EnumerationLimitError, enumerate_maximal_in_forests, forest_matrix
from digraph_consensus.generate import (
    all_digraphs,
    converging_tree,
    random_digraph,
    strongly_connected_digraph,
)
from digraph_consensus.spectral import eigenprojector_resolvent

EXIT_OK, EXIT_INPUT, EXIT_CHECK = 0, 1, 2
EXHAUSTIVE_MAX_N = 4


class InputError(Exception):
    pass


def _num(x: float) -> str:
    # shortest repr round-trips exactly through float()
    return repr(float(x))


def _matrix(a: np.ndarray | None) -> list[list[str]] | None:
    if a is None:
        return None
    return [[_num(v) for v in row] for row in a]


def report_dict(a: Analysis, tau: float) -> dict:
    g, dec, rep, pm = a.graph, a.components, a.report, a.perron
    n, d = g.n, a.d
    discrepancy = a.max_route_discrepancy()
    return {
        "graph": {"n": n, "m": g.m},
        "components": {
            "scc_count": dec.scc_count,
            "wcc_count": dec.wcc_count,
            "sink_count": dec.sink_count,
        },
        "forest_dimension": {
            "structural": d,
            "enumerative": a.family.d if a.family is not None else None,
        },
        "rank": {
            "numerical": rep.numerical_rank,
            "n_minus_d": n - d,
            "n_minus_c": n - dec.scc_count,
            "n_minus_c_correct": rep.numerical_rank == n - dec.scc_count,
            "zero_multiplicity": rep.zero_multiplicity,
            "tol": _num(rep.tol),
        },
        "eigenvalues": [[_num(z.real), _num(z.imag)] for z in rep.eigenvalues],
        "min_positive_real_part": (
            None if rep.min_positive_real_part is None else _num(rep.min_positive_real_part)
        ),
        "localization": all(c.passed for c in a.checks if c.name == "spectrum_localized"),
        "projector": {
            "forest": _matrix(a.forest_projector),
            "resolvent": _matrix(a.resolvent_projector),
            "long_run": _matrix(a.long_run_projector),
            "long_run_mode": a.long_run_mode,
            "tau": _num(tau),
            "max_discrepancy": None if discrepancy is None else _num(discrepancy),
        },
        "perron": {
            "epsilon": _num(pm.epsilon),
            "stochastic": pm.stochastic,
            "positive_diagonal": pm.positive_diagonal,
            "primitive": pm.primitive,
        },
        "checks": [
            {
                "name": c.name,
                "passed": c.passed,
                "discrepancy": None if c.discrepancy is None else _num(c.discrepancy),
                "detail": c.detail,
            }
            for c in a.checks
        ],
        "passed": a.passed,
    }


def _fmt_matrix(a: np.ndarray, indent: str = "    ") -> str:
    return "\n".join(indent + "  ".join(f"{v: .10f}" for v in row) for row in a)


def report_text(a: Analysis) -> str:
    g, dec, rep, pm = a.graph, a.components, a.report, a.perron
    n, d = g.n, a.d
    c = dec.scc_count
    lines = [
        f"graph: n={n} m={g.m}",
        f"components: strong c={c}, weak={dec.wcc_count}, sink={dec.sink_count}",
        f"in-forest dimension d: structural={d}"
        + (f", enumerated={a.family.d}" if a.family is not None else ", enumerated=skipped"),
        f"rank(L): numerical={rep.numerical_rank}, n-d prediction={n - d}",
    ]
    if rep.numerical_rank == n - c:
        lines.append(f"n-c prediction: {n - c} (agrees)")
    else:
        lines.append(f"n-c prediction: {n - c} (INCORRECT: strong components overcount; rank is n-d)")
    lines.append(f"zero eigenvalue multiplicity: {rep.zero_multiplicity}")
    eig = ", ".join(f"{z.real:.6g}{z.imag:+.6g}j" for z in rep.eigenvalues)
    lines.append(f"eigenvalues: {eig}")
    lines.append(
        "localization (zero or positive real part): "
        + ("pass" if any(ch.passed for ch in a.checks if ch.name == "spectrum_localized") else "FAIL")
    )
    for name, mat in a.projectors().items():
        label = name if name != "long_run" else f"long_run ({a.long_run_mode})"
        lines.append(f"Jbar via {label}:")
        lines.append(_fmt_matrix(mat))
    disc = a.max_route_discrepancy()
    if disc is not None:
        lines.append(f"max pairwise route discrepancy: {disc:.3g}")
    lines.append(
        f"Perron matrix: epsilon={pm.epsilon:.6g} stochastic={pm.stochastic} "
        f"positive_diagonal={pm.positive_diagonal} primitive={pm.primitive}"
    )
    lines.append("checks:")
    for ch in a.checks:
        disc = "" if ch.discrepancy is None else f"  discrepancy={ch.discrepancy:.3g}"
        detail = f"  ({ch.detail})" if ch.detail else ""
        lines.append(f"  [{'pass' if ch.passed else 'FAIL'}] {ch.name}{disc}{detail}")
    lines.append("result: " + ("all checks pass" if a.passed else "CROSS-CHECK FAILURE"))
    return "\n".join(lines)


def load_graph(path: str) -> Digraph:
    try:
        data = sys.stdin.buffer.read() if path == "-" else Path(path).read_bytes()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror or exc}") from exc
    try:
        return parse_edge_list(data)
    except (EdgeListError, UnicodeDecodeError) as exc:
        raise InputError(f"{path}: {exc}") from exc


def cmd_analyze(args: argparse.Namespace) -> int:
    g = load_graph(args.path)
    a = analyze_graph(g, tau=args.tau, epsilon=args.epsilon, tol=args.tol)
    if args.json:
        print(json.dumps(report_dict(a, args.tau), indent=2))
    else:
        print(report_text(a))
    return EXIT_OK if a.passed else EXIT_CHECK


def _parse_x0(text: str, n: int) -> np.ndarray:
    try:
        x0 = np.array([float(t) for t in text.split(",") if t.strip()])
    except ValueError:
        raise InputError(f"--x0 must be a comma-separated list of numbers, got {text!r}") from None
    if x0.shape != (n,):
        raise InputError(f"--x0 has {x0.size} entries but the graph has {n} vertices")
    return x0


def limit_projector(g: Digraph) -> np.ndarray:
    """Forest oracle when enumeration is feasible, resolvent otherwise."""
    try:
        return forest_matrix(enumerate_maximal_in_forests(g))
    except EnumerationLimitError:
        return eigenprojector_resolvent(laplacian(g))


def cmd_simulate(args: argparse.Namespace) -> int:
    g = load_graph(args.path)
    if args.x0 is not None:
        x0 = _parse_x0(args.x0, g.n)
    else:
        x0 = np.random.default_rng(args.seed).uniform(-1.0, 1.0, g.n)
    lap = laplacian(g)
    jbar = limit_projector(g)
    try:
        if args.mode == "discrete":
            if args.steps < 0:
                raise InputError("--steps must be non-negative")
            tr = simulate_discrete(perron(lap, args.epsilon), x0, args.steps, jbar=jbar)
        else:
            tr = simulate_continuous(lap, x0, args.t_end, args.dt, jbar=jbar)
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    csv_text = tr.to_csv()
    if args.out:
        try:
            Path(args.out).write_text(csv_text)
        except OSError as exc:
            raise InputError(f"cannot write {args.out}: {exc.strerror or exc}") from exc
    else:
        sys.stdout.write(csv_text)
    print(f"final deviation |x_final - Jbar x0|_inf = {tr.final_deviation():.6g}", file=sys.stderr)
    return EXIT_OK


def fuzz_instances(count: int, n_max: int, seed: int, weighted: bool, exhaustive: bool):
    """Exhaustive sweep (if asked) followed by ``count`` random instances."""
    if exhaustive:
        for n in range(1, n_max + 1):
            yield from all_digraphs(n)
    rng = np.random.default_rng(seed)
    for _ in range(count):
        n = int(rng.integers(1, n_max + 1))
        kind = rng.random()
        if kind < 0.6:
            yield random_digraph(rng, n, weighted=weighted)
        elif kind < 0.8:
            yield strongly_connected_digraph(rng, n, weighted=weighted)
        else:
            yield converging_tree(rng, n, weighted=weighted)


def cmd_fuzz(args: argparse.Namespace) -> int:
    if args.count < 1:
        raise InputError("--count must be at least 1")
    if args.n_max < 1:
        raise InputError("--n-max must be at least 1")
    if args.exhaustive and args.n_max > EXHAUSTIVE_MAX_N:
        raise InputError(f"--exhaustive supports --n-max up to {EXHAUSTIVE_MAX_N}")
    passes: Counter[str] = Counter()
    totals: Counter[str] = Counter()
    failures: list[tuple[Digraph, list[str]]] = []
    instances = 0
    for g in fuzz_instances(args.count, args.n_max, args.seed, args.weighted, args.exhaustive):
        instances += 1
        a = analyze_graph(g, tau=args.tau, enumerate_forests=g.n <= 12)
        for c in a.checks:
            totals[c.name] += 1
            passes[c.name] += c.passed
        if not a.passed:
            failures.append((g, [f"{c.name} ({c.discrepancy})" for c in a.failures()]))
    print(f"instances: {instances}")
    for name in sorted(totals):
        print(f"  {name}: {passes[name]}/{totals[name]}")
    if failures:
        print(f"FAILED instances: {len(failures)}")
        for g, names in failures[: args.show]:
            print("# failed: " + ", ".join(names))
            print(g.to_edge_list(), end="")
        return EXIT_CHECK
    print("all checks pass")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="digraph-consensus",
        description="Digraph Laplacian, in-forest and consensus cross-checks.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="analyze one edge-list file")
    p.add_argument("path", help="edge-list file, or - for stdin")
    p.add_argument("--tau", type=float, default=1e8, help="resolvent parameter (default 1e8)")
    p.add_argument("--epsilon", type=float, default=None, help="Perron step size")
    p.add_argument("--tol", type=float, default=None, help="zero tolerance for rank and spectrum")
    p.add_argument("--json", action="store_true", help="emit a JSON report")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("simulate", help="simulate consensus dynamics, write CSV")
    p.add_argument("path")
    p.add_argument("--mode", choices=("continuous", "discrete"), default="discrete")
    p.add_argument("--x0", default=None, help="comma-separated initial state")
    p.add_argument("--seed", type=int, default=0, help="seed for a random x0 in [-1, 1]")
    p.add_argument("--steps", type=int, default=1000)
    p.add_argument("--epsilon", type=float, default=None)
    p.add_argument("--t-end", type=float, default=20.0)
    p.add_argument("--dt", type=float, default=None)
    p.add_argument("--out", default=None, help="CSV path (default stdout)")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("fuzz", help="random cross-check battery")
    p.add_argument("--count", type=int, default=1000)
    p.add_argument("--n-max", type=int, default=8)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--tau", type=float, default=1e8)
    p.add_argument("--weighted", action=argparse.BooleanOptionalAction, default=True)
    p.add_argument("--exhaustive", action="store_true", help="also sweep every digraph with n <= n-max")
    p.add_argument("--show", type=int, default=5, help="failing graphs to print")
    p.set_defaults(func=cmd_fuzz)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    try:
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
