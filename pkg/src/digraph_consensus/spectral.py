"""Spectrum, numerical rank and the zero eigenprojector of a Laplacian."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

SPECTRAL_LIMIT = 64


class SpectralError(RuntimeError):
    """Eigen-solver failure or an ill-conditioned solve."""


def default_tolerance(lap: np.ndarray) -> float:
    """``1e-9 * max(1, max |l_ii|)``."""
    diag = np.abs(np.diag(lap))
    scale = float(diag.max()) if diag.size else 0.0
    return 1e-9 * max(1.0, scale)


@dataclass(frozen=True)
class SpectralReport:
    eigenvalues: tuple[complex, ...]
    singular_values: tuple[float, ...]
    tol: float
    numerical_rank: int
    zero_multiplicity: int
    # None when every eigenvalue is trivial
    min_positive_real_part: float | None

    @property
    def n(self) -> int:
        return len(self.eigenvalues)

    @property
    def nullity(self) -> int:
        return self.n - self.numerical_rank

    @property
    def semisimple_zero(self) -> bool:
        return self.zero_multiplicity == self.nullity


def spectrum(lap: np.ndarray, tol: float | None = None) -> SpectralReport:
    """Eigenvalues, singular-value rank and zero multiplicity of ``lap``.

    ``numerical_rank`` counts singular values above ``tol``;
    ``zero_multiplicity`` counts eigenvalues of modulus at most ``tol``.
    """
    lap = np.asarray(lap, dtype=float)
    n = lap.shape[0]
    if lap.shape != (n, n):
        raise ValueError(f"expected a square matrix, got shape {lap.shape}")
    if n > SPECTRAL_LIMIT:
        raise ValueError(f"n={n} exceeds the dense spectral limit {SPECTRAL_LIMIT}")
    if tol is None:
        tol = default_tolerance(lap)
    if n == 0:
        return SpectralReport((), (), tol, 0, 0, None)
    try:
        eig = np.linalg.eigvals(lap)
        sv = np.linalg.svd(lap, compute_uv=False)
    except np.linalg.LinAlgError as exc:
        raise SpectralError(f"eigen-solver did not converge: {exc}") from exc
    order = np.lexsort((eig.imag, eig.real))
    eig = eig[order]
    nontrivial = eig[np.abs(eig) > tol]
    return SpectralReport(
        eigenvalues=tuple(complex(z) for z in eig),
        singular_values=tuple(float(s) for s in sv),
        tol=tol,
        numerical_rank=int(np.sum(sv > tol)),
        zero_multiplicity=int(np.sum(np.abs(eig) <= tol)),
        min_positive_real_part=float(nontrivial.real.min()) if nontrivial.size else None,
    )


def check_rank_law(report: SpectralReport, d: int) -> bool:
    """``rank(L) == n - d`` with eigenvalue 0 semisimple of multiplicity ``d``."""
    return report.numerical_rank == report.n - d and report.zero_multiplicity == d


def check_spectrum_localization(report: SpectralReport, tol: float | None = None) -> bool:
    """Every eigenvalue is either (numerically) zero or has positive real part."""
    if tol is None:
        tol = report.tol
    return all(abs(z) <= tol or z.real > tol for z in report.eigenvalues)


def eigenprojector_resolvent(
    lap: np.ndarray, tau: float = 1e8, residual_tol: float = 1e-6
) -> np.ndarray:
    """``(I + tau L)^{-1}``, which tends to the zero eigenprojector as tau grows.

    The error is O(1/tau) because eigenvalue 0 of a digraph Laplacian is
    semisimple.  Raises ``SpectralError`` if the solve residual exceeds
    ``residual_tol``.
    """
    if tau <= 0:
        raise ValueError("tau must be positive")
    lap = np.asarray(lap, dtype=float)
    n = lap.shape[0]
    eye = np.eye(n)
    m = eye + tau * lap
    try:
        res = np.linalg.solve(m, eye)
    except np.linalg.LinAlgError as exc:
        raise SpectralError(f"I + tau*L is singular: {exc}") from exc
    # residual relative to the matrix scale; an absolute check would reject
    # every large tau
    scale = max(1.0, float(np.abs(m).max()))
    residual = float(np.abs(m @ res - eye).max()) / scale
    if not np.isfinite(residual) or residual > residual_tol:
        raise SpectralError(f"ill-conditioned resolvent solve, residual {residual:.3g}")
    return res


def matrix_rank(a: np.ndarray, tol: float) -> int:
    if a.size == 0:
        return 0
    return int(np.sum(np.linalg.svd(a, compute_uv=False) > tol))
