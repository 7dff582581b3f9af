"""Constrained cluster extraction: regularize the affinity matrix so every
local solution must touch the user-selected vertices, then peel clusters
off until the selection is exhausted.

The guarantee rests on a spectral bound: once the diagonal penalty on the
unselected vertices exceeds the largest eigenvalue of their affinity
submatrix, no solution can hide entirely among them.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .dynamics import (
    SolverOutcome,
    SolverSettings,
    kkt_residual,
    run_pairwise_dynamics,
    run_replicator,
)
from .graph import DEFAULT_CLIQUE_CAP, enumerate_maximal_cliques

DEFAULT_MARGIN = 0.1

DYNAMICS = {
    "replicator": run_replicator,
    "pairwise": run_pairwise_dynamics,
}


class ExtractionError(RuntimeError):
    """A converged cluster missed the constraint set: numerically impossible
    under a valid penalty, so the run aborts with full diagnostics."""

    def __init__(self, message: str, diagnostics: dict):
        super().__init__(message)
        self.diagnostics = diagnostics


@dataclass(frozen=True)
class SpectralBound:
    value: float
    converged: bool  # False when power iteration hit its cap; estimate degraded
    iterations: int
    method: str  # "empty" | "zero" | "dense" | "power"


def spectral_bound(
    A,
    S,
    tol: float = 1e-9,
    max_iterations: int = 5000,
    dense_cutoff: int = 32,
) -> SpectralBound:
    """Largest eigenvalue of the affinity submatrix on the unselected
    vertices; the penalty must exceed it.

    Small submatrices use a dense symmetric eigensolve.  Larger ones use
    power iteration from the normalized all-ones vector on the submatrix
    shifted by its largest row sum, which keeps the spectrum nonnegative so
    the iteration cannot be misled by a dominant negative eigenvalue.
    """
    a = np.asarray(A, dtype=float)
    n = a.shape[0]
    selected = set(int(v) for v in S)
    rest = [v for v in range(n) if v not in selected]
    if not rest:
        return SpectralBound(0.0, True, 0, "empty")
    sub = a[np.ix_(rest, rest)]
    if not sub.any():
        return SpectralBound(0.0, True, 0, "zero")
    if len(rest) <= dense_cutoff:
        top = float(np.linalg.eigvalsh(sub)[-1])
        return SpectralBound(top, True, 0, "dense")

    shift = float(sub.sum(axis=1).max())  # Gershgorin: eigenvalues of sub+shift*I are >= 0
    v = np.full(len(rest), 1.0 / np.sqrt(len(rest)))
    estimate = 0.0
    for iteration in range(1, max_iterations + 1):
        w = sub @ v + shift * v
        rayleigh = float(v @ w)
        norm = float(np.linalg.norm(w))
        if norm == 0.0:
            return SpectralBound(0.0, True, iteration, "power")
        v = w / norm
        new_estimate = rayleigh - shift
        if abs(new_estimate - estimate) <= tol * max(1.0, abs(new_estimate)):
            return SpectralBound(new_estimate, True, iteration, "power")
        estimate = new_estimate
    return SpectralBound(estimate, False, max_iterations, "power")


def choose_alpha(A, S, margin: float = DEFAULT_MARGIN) -> float:
    """Penalty strictly above the spectral bound: (1 + margin) times the
    bound, or the margin itself when the bound is zero.

    If the bound estimate did not converge, the margin is doubled to cover
    the degraded confidence.
    """
    if margin <= 0:
        raise ValueError("margin must be strictly positive: the penalty must exceed the bound")
    bound = spectral_bound(A, S)
    effective = margin if bound.converged else 2.0 * margin
    if bound.value <= 0.0:
        return effective
    return (1.0 + effective) * bound.value


def build_regularized_matrix(A, S, alpha: float) -> np.ndarray:
    """Copy of the affinity matrix with -alpha written on the diagonal of
    every unselected vertex; the selection keeps its zero diagonal."""
    if alpha <= 0:
        raise ValueError("alpha must be positive")
    a = np.asarray(A, dtype=float)
    selected = set(int(v) for v in S)
    if not selected:
        raise ValueError("S must be nonempty; the unconstrained problem is the caller's case")
    if not selected <= set(range(a.shape[0])):
        raise IndexError(f"S contains vertices outside [0, {a.shape[0]})")
    m = a.copy()
    for i in range(a.shape[0]):
        if i not in selected:
            m[i, i] = -alpha
    return m


@dataclass(frozen=True)
class ExtractedCluster:
    support: tuple[int, ...]  # original vertex ids
    vector: np.ndarray  # full-length simplex vector, zero off the active set
    objective: float  # x'(A - alpha I_hat)x on the active subgraph
    kkt_residual: float
    alpha: float
    bound: float
    converged: bool
    iterations: int
    min_step_gain: float = 0.0  # solver monotonicity watermark
    max_simplex_error: float = 0.0  # solver simplex-invariance watermark


@dataclass(frozen=True)
class ExtractionResult:
    clusters: tuple[ExtractedCluster, ...]
    leftover_constraints: tuple[int, ...]

    @property
    def union_of_supports(self) -> tuple[int, ...]:
        merged: set[int] = set()
        for cluster in self.clusters:
            merged.update(cluster.support)
        return tuple(sorted(merged))


def extract_constrained_clusters(
    A,
    S,
    settings: SolverSettings | None = None,
    margin: float = DEFAULT_MARGIN,
    dynamics: str = "replicator",
) -> ExtractionResult:
    """Peel off constrained clusters until the selection is exhausted.

    Each round recomputes the penalty on the shrunken subgraph (the bound
    only drops as vertices leave), solves from the perturbed barycenter,
    records the support with its diagnostics, and removes the support from
    both the active graph and the selection.  Every support must intersect
    the selection still active at its round; a miss aborts loudly since the
    penalty makes it analytically impossible.
    """
    solve = DYNAMICS.get(dynamics)
    if solve is None:
        raise ValueError(f"unknown dynamics {dynamics!r}; pick one of {sorted(DYNAMICS)}")
    a = np.asarray(A, dtype=float)
    n = a.shape[0]
    settings = settings or SolverSettings()
    remaining = sorted(set(int(v) for v in S))
    if not remaining:
        raise ValueError("S must be nonempty")
    if not set(remaining) <= set(range(n)):
        raise IndexError(f"S contains vertices outside [0, {n})")

    active = list(range(n))
    clusters: list[ExtractedCluster] = []
    while remaining:
        sub = a[np.ix_(active, active)]
        local_s = [active.index(v) for v in remaining]
        bound = spectral_bound(sub, local_s)
        effective_margin = margin if bound.converged else 2.0 * margin
        alpha = (1.0 + effective_margin) * bound.value if bound.value > 0 else effective_margin

        if not sub.any():
            # edgeless remainder: every selected vertex is its own cluster
            vertex = remaining[0]
            vector = np.zeros(n)
            vector[vertex] = 1.0
            clusters.append(
                ExtractedCluster((vertex,), vector, 0.0, 0.0, alpha, bound.value, True, 0)
            )
            active = [v for v in active if v != vertex]
            remaining = [v for v in remaining if v != vertex]
            continue

        matrix = build_regularized_matrix(sub, local_s, alpha)
        outcome: SolverOutcome = solve(matrix, settings=settings)
        support_global = tuple(sorted(active[i] for i in outcome.support))
        captured = set(support_global) & set(remaining)
        residual = kkt_residual(
            sub, outcome.solution, local_s, alpha, settings.support_epsilon
        )
        vector = np.zeros(n)
        vector[active] = outcome.solution
        clusters.append(
            ExtractedCluster(
                support_global,
                vector,
                outcome.objective,
                residual,
                alpha,
                bound.value,
                outcome.converged,
                outcome.iterations_used,
                outcome.min_step_gain,
                outcome.max_simplex_error,
            )
        )
        if not captured:
            raise ExtractionError(
                "converged support contains no constraint vertex",
                diagnostics={
                    "active": list(active),
                    "remaining": list(remaining),
                    "support": list(support_global),
                    "alpha": alpha,
                    "bound": bound.value,
                    "solution": outcome.solution.tolist(),
                    "kkt_residual": residual,
                    "converged": outcome.converged,
                },
            )
        active = [v for v in active if v not in set(support_global)]
        remaining = [v for v in remaining if v not in set(support_global)]

    return ExtractionResult(tuple(clusters), tuple(remaining))


def clique_union_oracle(A, S, cap: int = DEFAULT_CLIQUE_CAP) -> tuple[int, ...]:
    """Ground truth for unweighted graphs: the union of all maximal cliques
    containing one of the maximal cliques of the subgraph induced by S."""
    a = np.asarray(A)
    members = sorted(set(int(v) for v in S))
    if not members:
        raise ValueError("S must be nonempty")
    cliques = enumerate_maximal_cliques(a, cap)
    induced = a[np.ix_(members, members)]
    seeds = [
        frozenset(members[i] for i in local)
        for local in enumerate_maximal_cliques(induced, cap)
    ]
    union: set[int] = set()
    for clique in cliques:
        clique_set = frozenset(clique)
        if any(seed <= clique_set for seed in seeds):
            union.update(clique_set)
    return tuple(sorted(union))
