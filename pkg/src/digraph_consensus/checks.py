"""The cross-check battery run by ``analyze`` and ``fuzz``.

Each check compares two independently computed quantities and records the
measured discrepancy next to the verdict.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from digraph_consensus.components import (
    ComponentDecomposition,
    decompose,
    forest_dimension_structural,
    has_spanning_converging_tree,
)
from digraph_consensus.digraph import Digraph, laplacian
from digraph_consensus.dynamics import (
    ConvergenceError,
    PerronMatrix,
    long_run_matrix,
    perron,
    primitive_limit,
)
from digraph_consensus.forests import (
    EnumerationLimitError,
    ForestFamily,
    enumerate_maximal_in_forests,
    forest_matrix,
)
from digraph_consensus.spectral import (
    SpectralError,
    SpectralReport,
    check_rank_law,
    check_spectrum_localization,
    eigenprojector_resolvent,
    matrix_rank,
    spectrum,
)

ROW_SUM_TOL = 1e-12
PROJECTOR_ALGEBRA_TOL = 1e-10
RESOLVENT_TOL = 1e-6
POWER_TOL = 1e-8
PRIMITIVE_LIMIT_TOL = 1e-8
CESARO_TOL = 1e-4


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    discrepancy: float | None = None
    detail: str = ""


@dataclass
class Analysis:
    """Everything computed for one graph, plus the check outcomes."""

    graph: Digraph
    laplacian: np.ndarray
    components: ComponentDecomposition
    report: SpectralReport
    perron: PerronMatrix
    family: ForestFamily | None = None
    forest_projector: np.ndarray | None = None
    resolvent_projector: np.ndarray | None = None
    long_run_projector: np.ndarray | None = None
    long_run_mode: str | None = None
    checks: list[CheckResult] = field(default_factory=list)

    @property
    def d(self) -> int:
        return forest_dimension_structural(self.components)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def failures(self) -> list[CheckResult]:
        return [c for c in self.checks if not c.passed]

    def projectors(self) -> dict[str, np.ndarray]:
        routes = {
            "forest": self.forest_projector,
            "resolvent": self.resolvent_projector,
            "long_run": self.long_run_projector,
        }
        return {k: v for k, v in routes.items() if v is not None}

    def max_route_discrepancy(self) -> float | None:
        mats = list(self.projectors().values())
        if len(mats) < 2 or self.graph.n == 0:
            return None
        return max(
            float(np.abs(a - b).max()) for i, a in enumerate(mats) for b in mats[i + 1 :]
        )


def _maxabs(a: np.ndarray) -> float:
    return float(np.abs(a).max()) if a.size else 0.0


def reachability_closure(g: Digraph) -> np.ndarray:
    """Reflexive-transitive closure by repeated boolean squaring."""
    reach = np.eye(g.n, dtype=bool)
    for i, j, _ in g.arcs:
        reach[i, j] = True
    while True:
        nxt = reach | ((reach.astype(np.int64) @ reach.astype(np.int64)) > 0)
        if np.array_equal(nxt, reach):
            return reach
        reach = nxt


def scc_matches_closure(g: Digraph, dec: ComponentDecomposition) -> bool:
    reach = reachability_closure(g)
    mutual = reach & reach.T
    same = np.equal.outer(np.array(dec.scc_id), np.array(dec.scc_id))
    if g.n and not np.array_equal(mutual, same):
        return False
    # a component is a sink iff nothing outside it is reachable
    for k, comp in enumerate(dec.sccs):
        escapes = bool(reach[list(comp)].sum() > len(comp) * len(comp))
        if dec.sink_flags[k] == escapes:
            return False
    return True


def projector_checks(lap: np.ndarray, jbar: np.ndarray, d: int, tol: float) -> list[CheckResult]:
    n = lap.shape[0]
    rows = _maxabs(jbar.sum(axis=1) - 1.0) if n else 0.0
    idem = _maxabs(jbar @ jbar - jbar)
    left = _maxabs(lap @ jbar)
    right = _maxabs(jbar @ lap)
    rank = matrix_rank(jbar, tol)
    return [
        CheckResult("jbar_rows_sum_to_one", rows <= ROW_SUM_TOL, rows),
        CheckResult("jbar_idempotent", idem <= PROJECTOR_ALGEBRA_TOL, idem),
        CheckResult("L_jbar_zero", left <= PROJECTOR_ALGEBRA_TOL, left),
        CheckResult("jbar_L_zero", right <= PROJECTOR_ALGEBRA_TOL, right),
        CheckResult("jbar_rank_equals_d", rank == d, float(abs(rank - d)), f"rank {rank}, d {d}"),
    ]


def analyze_graph(
    g: Digraph,
    tau: float = 1e8,
    epsilon: float | None = None,
    tol: float | None = None,
    enumerate_forests: bool = True,
) -> Analysis:
    """Run every applicable cross-check on ``g``."""
    lap = laplacian(g)
    dec = decompose(g)
    report = spectrum(lap, tol)
    pm = perron(lap, epsilon)
    a = Analysis(g, lap, dec, report, pm)
    checks = a.checks
    d = a.d
    n = g.n

    row = _maxabs(lap.sum(axis=1)) if n else 0.0
    checks.append(CheckResult("laplacian_rows_sum_to_zero", row <= ROW_SUM_TOL * max(1.0, _maxabs(lap)), row))
    checks.append(CheckResult("scc_matches_reachability", scc_matches_closure(g, dec)))
    spanning = has_spanning_converging_tree(g, dec)
    checks.append(
        CheckResult("spanning_tree_iff_d_is_1", spanning == (d == 1), detail=f"spanning tree {spanning}, d {d}")
    )
    checks.append(
        CheckResult(
            "wcc_le_d_le_scc",
            dec.wcc_count <= d <= dec.scc_count,
            detail=f"{dec.wcc_count} <= {d} <= {dec.scc_count}",
        )
    )
    checks.append(CheckResult("spectrum_localized", check_spectrum_localization(report)))
    checks.append(
        CheckResult(
            "rank_law",
            check_rank_law(report, d),
            float(abs(report.numerical_rank - (n - d))),
            f"rank {report.numerical_rank}, n-d {n - d}, zero multiplicity {report.zero_multiplicity}",
        )
    )

    if enumerate_forests:
        try:
            a.family = enumerate_maximal_in_forests(g)
        except EnumerationLimitError as exc:
            checks.append(CheckResult("forest_enumeration", True, detail=f"skipped: {exc}"))
    if a.family is not None:
        a.forest_projector = forest_matrix(a.family)
        checks.append(
            CheckResult(
                "forest_d_equals_sink_count",
                a.family.d == d,
                float(abs(a.family.d - d)),
                f"enumerated d {a.family.d}, sink SCCs {d}",
            )
        )
        checks.extend(projector_checks(lap, a.forest_projector, d, report.tol))

    try:
        a.resolvent_projector = eigenprojector_resolvent(lap, tau)
    except SpectralError as exc:
        checks.append(CheckResult("resolvent_solve", False, detail=str(exc)))
    else:
        # nonzero singular values of a projector are >= 1; the O(1/tau)
        # remainder sits far below 0.5
        rank = matrix_rank(a.resolvent_projector, 0.5)
        checks.append(CheckResult("resolvent_rank_equals_d", rank == d, float(abs(rank - d)), f"rank {rank}"))

    if pm.stochastic:
        mode = "power" if pm.positive_diagonal else "cesaro"
        try:
            a.long_run_projector = long_run_matrix(pm, mode)
            a.long_run_mode = mode
        except ConvergenceError as exc:
            checks.append(CheckResult("long_run_converged", False, exc.residual, str(exc)))

    reference = a.forest_projector
    if reference is not None:
        if a.resolvent_projector is not None:
            err = _maxabs(a.resolvent_projector - reference)
            checks.append(CheckResult("resolvent_matches_forests", err <= RESOLVENT_TOL, err))
        if a.long_run_projector is not None:
            tol_lr = POWER_TOL if a.long_run_mode == "power" else CESARO_TOL
            err = _maxabs(a.long_run_projector - reference)
            checks.append(CheckResult("long_run_matches_forests", err <= tol_lr, err, a.long_run_mode))
    elif a.resolvent_projector is not None and a.long_run_projector is not None:
        err = _maxabs(a.resolvent_projector - a.long_run_projector)
        checks.append(CheckResult("resolvent_matches_long_run", err <= RESOLVENT_TOL, err))

    if pm.stochastic and pm.primitive and a.long_run_projector is not None and a.long_run_mode == "power":
        v, w, vw = primitive_limit(pm)
        err = _maxabs(a.long_run_projector - vw)
        norm = abs(float(v @ w) - 1.0)
        checks.append(
            CheckResult("primitive_limit_matches_power", err <= PRIMITIVE_LIMIT_TOL and norm <= 1e-12, err)
        )
    return a
