"""Consensus dynamics: Perron matrices, long-run limits and trajectories.

Continuous protocol: ``x' = -L x``.  Discrete protocol:
``x(k+1) = P x(k)`` with ``P = I - eps L``.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from typing import Literal

import numpy as np

from digraph_consensus.spectral import eigenprojector_resolvent

PRIMITIVE_TOL = 1e-9


class ConvergenceError(RuntimeError):
    def __init__(self, message: str, residual: float):
        super().__init__(f"{message} (achieved residual {residual:.3g})")
        self.residual = residual


def max_out_degree(lap: np.ndarray) -> float:
    return float(np.diag(lap).max()) if lap.size else 0.0


def default_epsilon(lap: np.ndarray) -> float:
    """``1 / (2 max l_ii)``, or 1 when the graph has no arcs."""
    top = max_out_degree(lap)
    return 1.0 if top == 0 else 1.0 / (2.0 * top)


@dataclass(frozen=True)
class PerronMatrix:
    epsilon: float
    P: np.ndarray
    stochastic: bool
    positive_diagonal: bool
    primitive: bool
    laplacian: np.ndarray

    @property
    def n(self) -> int:
        return self.P.shape[0]


def perron(lap: np.ndarray, epsilon: float | None = None) -> PerronMatrix:
    """``P = I - eps L`` with stochasticity, diagonal and primitivity flags.

    Primitivity means exactly one eigenvalue of modulus 1 (within 1e-9).
    """
    lap = np.asarray(lap, dtype=float)
    if epsilon is None:
        epsilon = default_epsilon(lap)
    if not epsilon > 0:
        raise ValueError(f"epsilon must be positive, got {epsilon!r}")
    n = lap.shape[0]
    p = np.eye(n) - epsilon * lap
    stochastic = bool(np.all(p >= 0))
    positive_diagonal = bool(np.all(np.diag(p) > 0))
    if n:
        moduli = np.abs(np.linalg.eigvals(p))
        primitive = int(np.sum(np.abs(moduli - 1.0) <= PRIMITIVE_TOL)) == 1
    else:
        primitive = False
    return PerronMatrix(float(epsilon), p, stochastic, positive_diagonal, primitive, lap)


def long_run_matrix(
    pm: PerronMatrix,
    mode: Literal["power", "cesaro"] = "power",
    tolerance: float | None = None,
    max_iter: int | None = None,
) -> np.ndarray:
    """Long-run transition matrix of a stochastic Perron matrix.

    ``power``: repeated squaring ``P^(2^t)`` until successive iterates differ
    by less than ``tolerance`` (default 1e-12, at most 60 squarings).  Needs a
    positive diagonal, which makes every recurrent class aperiodic.

    ``cesaro``: running averages ``A_m = m^-1 sum_{k=1..m} P^k`` evaluated at
    ``m = 1, 2, 4, ...`` via ``A_2m = (A_m + P^m A_m) / 2``, stopping once
    ``|A_2m - A_m| < tolerance`` (default 1e-6; doubling stops at the first
    power of two reaching ``max_iter``, default 1e6).
    """
    if not pm.stochastic:
        raise ValueError("long-run matrix needs a stochastic Perron matrix")
    p = pm.P
    if mode == "power":
        if not pm.positive_diagonal:
            raise ValueError("power mode needs a positive diagonal; use mode='cesaro'")
        tolerance = 1e-12 if tolerance is None else tolerance
        max_iter = 60 if max_iter is None else max_iter
        cur = p.copy()
        residual = math.inf
        for _ in range(max_iter):
            nxt = cur @ cur
            residual = float(np.abs(nxt - cur).max()) if cur.size else 0.0
            cur = nxt
            if residual < tolerance:
                return cur
        raise ConvergenceError("power iteration did not converge", residual)
    if mode == "cesaro":
        tolerance = 1e-6 if tolerance is None else tolerance
        max_iter = 10**6 if max_iter is None else max_iter
        avg = p.copy()
        power = p.copy()  # P^m
        m = 1
        residual = math.inf
        while m < max_iter:
            nxt = 0.5 * (avg + power @ avg)
            power = power @ power
            m *= 2
            residual = float(np.abs(nxt - avg).max()) if avg.size else 0.0
            avg = nxt
            if residual < tolerance:
                return avg
        raise ConvergenceError(f"Cesaro averages not Cauchy by m={m}", residual)
    raise ValueError(f"unknown mode {mode!r}")


def primitive_limit(pm: PerronMatrix) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """``(v, w, v w^T)`` for a primitive stochastic ``P``.

    ``v`` is the all-ones right eigenvector and ``w`` the left eigenvector
    for eigenvalue 1, scaled so that ``sum(v * w) == 1``.
    """
    if not (pm.primitive and pm.stochastic):
        raise ValueError("primitive_limit needs a primitive stochastic Perron matrix")
    vals, vecs = np.linalg.eig(pm.P.T)
    k = int(np.argmin(np.abs(vals - 1.0)))
    w = np.real(vecs[:, k])
    v = np.ones(pm.n)
    w = w / np.dot(v, w)
    return v, w, np.outer(v, w)


@dataclass(frozen=True)
class TrajectoryRecord:
    times: np.ndarray
    states: np.ndarray  # shape (samples, n)
    limit_prediction: np.ndarray

    @property
    def final(self) -> np.ndarray:
        return self.states[-1]

    def final_deviation(self) -> float:
        """``max_i |x_i(final) - (Jbar x0)_i|``."""
        if self.states.shape[1] == 0:
            return 0.0
        return float(np.abs(self.final - self.limit_prediction).max())

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        n = self.states.shape[1]
        writer.writerow(["t"] + [f"x{i}" for i in range(n)])
        for t, x in zip(self.times, self.states):
            writer.writerow([repr(float(t))] + [repr(float(v)) for v in x])
        return buf.getvalue()


def _prediction(lap: np.ndarray, x0: np.ndarray, jbar: np.ndarray | None) -> np.ndarray:
    if jbar is None:
        jbar = eigenprojector_resolvent(lap)
    return np.asarray(jbar, dtype=float) @ x0


def _initial_state(x0, n: int) -> np.ndarray:
    x0 = np.asarray(x0, dtype=float).reshape(-1)
    if x0.shape != (n,):
        raise ValueError(f"initial state has length {x0.size}, graph has {n} vertices")
    return x0


def simulate_discrete(
    pm: PerronMatrix, x0, steps: int, jbar: np.ndarray | None = None
) -> TrajectoryRecord:
    """Iterate ``x(k+1) = P x(k)`` for ``steps`` steps.

    ``limit_prediction`` is ``jbar @ x0``; without ``jbar`` the resolvent
    approximation of the eigenprojector is used.
    """
    if steps < 0:
        raise ValueError("steps must be non-negative")
    x = _initial_state(x0, pm.n)
    states = np.empty((steps + 1, pm.n))
    states[0] = x
    for k in range(steps):
        x = pm.P @ x
        states[k + 1] = x
    return TrajectoryRecord(
        times=np.arange(steps + 1, dtype=float),
        states=states,
        limit_prediction=_prediction(pm.laplacian, states[0], jbar),
    )


def max_stable_dt(lap: np.ndarray) -> float:
    top = max_out_degree(lap)
    return math.inf if top == 0 else 0.5 / top


def simulate_continuous(
    lap: np.ndarray, x0, t_end: float, dt: float | None = None, jbar: np.ndarray | None = None
) -> TrajectoryRecord:
    """Classical fourth-order Runge-Kutta for ``x' = -L x``, sampled every ``dt``.

    ``dt`` must lie in ``(0, 0.5 / max l_ii]`` and defaults to that bound
    (or 0.1 for a graph without arcs).  The last step is shortened to land
    exactly on ``t_end``.
    """
    lap = np.asarray(lap, dtype=float)
    n = lap.shape[0]
    if not t_end > 0:
        raise ValueError("t_end must be positive")
    bound = max_stable_dt(lap)
    if dt is None:
        dt = 0.1 if math.isinf(bound) else bound
    if not (0 < dt <= bound):
        raise ValueError(f"dt={dt!r} outside the stable range (0, {bound:.6g}]")
    x = _initial_state(x0, n)

    # For a linear field one RK4 step is multiplication by the degree-4
    # Taylor polynomial of exp(-h L); building it once gives the same
    # iterates as evaluating the four stages every step.
    def step_matrix(h: float) -> np.ndarray:
        a = -h * lap
        a2 = a @ a
        return np.eye(n) + a + a2 / 2 + a2 @ a / 6 + a2 @ a2 / 24

    steps = int(math.floor(t_end / dt + 1e-9))
    times = [k * dt for k in range(steps + 1)]
    if t_end - times[-1] > 1e-12 * max(1.0, t_end):
        times.append(t_end)
    states = np.empty((len(times), n))
    states[0] = x
    full = step_matrix(dt)
    for k in range(1, len(times)):
        h = times[k] - times[k - 1]
        x = (full if k <= steps else step_matrix(h)) @ x
        states[k] = x
    return TrajectoryRecord(
        times=np.asarray(times),
        states=states,
        limit_prediction=_prediction(lap, states[0], jbar),
    )


def rk4_step(lap: np.ndarray, x: np.ndarray, h: float) -> np.ndarray:
    """One stage-by-stage RK4 step; reference for the propagator form."""
    k1 = -lap @ x
    k2 = -lap @ (x + h / 2 * k1)
    k3 = -lap @ (x + h / 2 * k2)
    k4 = -lap @ (x + h * k3)
    return x + h / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
