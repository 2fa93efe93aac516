"""
Logarithmic least squares priorities for (incomplete) pairwise comparison matrices.

With x = log w, the first-order conditions of

    sum over known (i, j) of (log a_ij - x_i + x_j)^2

are L x = r, where L is the Laplacian of the comparison graph and
r_i = sum over known j of log a_ij. L is singular along the all-ones
direction, so the last coordinate is pinned to 0 and the remaining SPD
system is solved by Cholesky factorization.
"""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np
import numpy.typing as npt
import scipy.linalg

from .matrix import IncompletePairwiseMatrix, comparison_graph, connected_components


class DisconnectedError(ValueError):
    """The comparison graph has more than one component, so the optimum is not unique."""

    def __init__(self, components: list[tuple[str, ...]]) -> None:
        self.components = components
        parts = "; ".join("{" + ", ".join(c) + "}" for c in components)
        super().__init__(f"comparison graph is disconnected into {len(components)} components: {parts}")


class SolverFault(RuntimeError):
    """The reduced system was numerically singular despite a connected graph."""


@dataclass(frozen=True)
class WeightVector:
    labels: tuple[str, ...]
    weights: tuple[float, ...]
    objective_value: float
    residual_norm: float

    def __len__(self) -> int:
        return len(self.weights)

    def __getitem__(self, label: str) -> float:
        return self.weights[self.labels.index(label)]

    def as_array(self) -> npt.NDArray[np.float64]:
        return np.asarray(self.weights, dtype=float)

    def as_dict(self) -> dict[str, float]:
        return dict(zip(self.labels, self.weights))


def laplacian_system(m: IncompletePairwiseMatrix) -> tuple[npt.NDArray[np.float64], npt.NDArray[np.float64]]:
    """The normal equations (L, r) of the log-space least squares problem."""
    n = m.n
    lap = np.zeros((n, n))
    rhs = np.zeros(n)
    for (i, j), a in m.entries.items():
        # each ordered entry (i, j) contributes to row i only
        lap[i, i] += 1
        lap[i, j] -= 1
        rhs[i] += np.log(a)
    return lap, rhs


def _normalize(log_w: npt.NDArray[np.float64]) -> npt.NDArray[np.float64]:
    w = np.exp(log_w - log_w.max())
    return w / w.sum()


def objective_value(m: IncompletePairwiseMatrix, w: WeightVector | Sequence[float]) -> float:
    """Sum over known ordered pairs of (log a_ij - log(w_i / w_j))^2."""
    weights = w.weights if isinstance(w, WeightVector) else w
    if len(weights) != m.n:
        raise ValueError(f"weight vector has {len(weights)} entries, matrix has {m.n}")
    log_w = np.log(np.asarray(weights, dtype=float))
    if not np.all(np.isfinite(log_w)):
        raise ValueError("weights must be positive")
    total = 0.0
    for (i, j), a in m.entries.items():
        total += (np.log(a) - (log_w[i] - log_w[j])) ** 2
    return float(total)


def _check_connected(m: IncompletePairwiseMatrix) -> None:
    parts = connected_components(comparison_graph(m))
    if len(parts) > 1:
        raise DisconnectedError([tuple(m.labels[v] for v in sorted(p)) for p in parts])


def solve_llsm(m: IncompletePairwiseMatrix) -> WeightVector:
    """
    Optimal LLSM weights, normalized to sum to 1.

    Raises:
        DisconnectedError: not every pair of alternatives is compared, directly
            or through a chain; the error lists the components.

    """
    if m.n == 0:
        raise ValueError("matrix has no alternatives")
    _check_connected(m)

    lap, rhs = laplacian_system(m)
    log_w = np.zeros(m.n)
    if m.n > 1:
        try:
            factor = scipy.linalg.cho_factor(lap[:-1, :-1])
        except np.linalg.LinAlgError as exc:
            raise SolverFault(f"reduced Laplacian is not positive definite: {exc}") from exc
        log_w[:-1] = scipy.linalg.cho_solve(factor, rhs[:-1])

    residual = float(np.max(np.abs(lap @ log_w - rhs), initial=0.0))
    weights = _normalize(log_w)
    return WeightVector(m.labels, tuple(weights.tolist()), objective_value(m, weights), residual)


def geometric_mean_weights(m: IncompletePairwiseMatrix) -> WeightVector:
    """Closed-form LLSM weights of a complete matrix: normalized geometric row means."""
    if not m.is_complete():
        raise ValueError("geometric mean weights need a complete matrix")
    n = m.n
    log_a = np.zeros((n, n))
    for (i, j), a in m.entries.items():
        log_a[i, j] = np.log(a)
    log_w = log_a.mean(axis=1)
    lap, rhs = laplacian_system(m)
    residual = float(np.max(np.abs(lap @ log_w - rhs), initial=0.0))
    weights = _normalize(log_w)
    return WeightVector(m.labels, tuple(weights.tolist()), objective_value(m, weights), residual)
