"""Weighted-graph core: affinity matrices, the coherence-weight recursion,
and brute-force clique oracles for small instances.

The weight recursion is exponential in the set size and exists to validate
the simplex solvers on desk-scale graphs, not to compete with them.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

DEFAULT_RECURSION_CAP = 15
DEFAULT_CLIQUE_CAP = 64


class GraphFormatError(ValueError):
    """Raised when a graph file violates the `n m` / `i j w` format."""


class OracleSizeError(ValueError):
    """Raised when a brute-force oracle is asked to exceed its size cap."""


def validate_affinity(weights) -> np.ndarray:
    """Check symmetry, zero diagonal and nonnegativity; return a float array."""
    a = np.asarray(weights, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"affinity matrix must be square, got shape {a.shape}")
    if not np.allclose(a, a.T, atol=0.0):
        raise ValueError("affinity matrix must be symmetric")
    if np.any(np.diagonal(a) != 0.0):
        raise ValueError("affinity matrix must have a zero diagonal")
    if np.any(a < 0.0):
        raise ValueError("affinity matrix entries must be nonnegative")
    return a


def _check_vertices(n: int, vertices) -> tuple[int, ...]:
    members = tuple(int(v) for v in vertices)
    if len(set(members)) != len(members):
        raise ValueError(f"duplicate vertices in {members}")
    for v in members:
        if not 0 <= v < n:
            raise IndexError(f"vertex {v} out of range [0, {n})")
    return members


def demo_graph() -> np.ndarray:
    """8-vertex unweighted graph whose maximal cliques are
    {0,1}, {1,2}, {3,4} and {4,5,6,7}; used throughout the test suite."""
    edges = [(0, 1), (1, 2), (3, 4), (4, 5), (4, 6), (4, 7), (5, 6), (5, 7), (6, 7)]
    a = np.zeros((8, 8))
    for i, j in edges:
        a[i, j] = a[j, i] = 1.0
    return a


def load_graph(path) -> np.ndarray:
    """Read the plain-text `n m` header + `i j w` edge-line format.

    Rejects self-loops and duplicate edges that disagree on the weight.
    """
    text = Path(path).read_text()
    lines = [ln for ln in (raw.split("#", 1)[0].strip() for raw in text.splitlines()) if ln]
    if not lines:
        raise GraphFormatError(f"{path}: empty graph file")
    header = lines[0].split()
    if len(header) != 2:
        raise GraphFormatError(f"{path}: header must be 'n m', got {lines[0]!r}")
    try:
        n, m = int(header[0]), int(header[1])
    except ValueError as exc:
        raise GraphFormatError(f"{path}: non-integer header {lines[0]!r}") from exc
    if n <= 0 or m < 0:
        raise GraphFormatError(f"{path}: invalid sizes n={n} m={m}")
    if len(lines) - 1 != m:
        raise GraphFormatError(f"{path}: header promises {m} edges, found {len(lines) - 1}")
    a = np.zeros((n, n))
    seen: dict[tuple[int, int], float] = {}
    for ln in lines[1:]:
        parts = ln.split()
        if len(parts) != 3:
            raise GraphFormatError(f"{path}: bad edge line {ln!r}")
        try:
            i, j, w = int(parts[0]), int(parts[1]), float(parts[2])
        except ValueError as exc:
            raise GraphFormatError(f"{path}: bad edge line {ln!r}") from exc
        if not (0 <= i < n and 0 <= j < n):
            raise GraphFormatError(f"{path}: edge ({i},{j}) out of range for n={n}")
        if i == j:
            raise GraphFormatError(f"{path}: self-loop on vertex {i}")
        if w < 0:
            raise GraphFormatError(f"{path}: negative weight on edge ({i},{j})")
        key = (min(i, j), max(i, j))
        if key in seen and seen[key] != w:
            raise GraphFormatError(
                f"{path}: edge ({i},{j}) listed twice with weights {seen[key]} and {w}"
            )
        seen[key] = w
        a[i, j] = a[j, i] = w
    return a


def save_graph(path, weights) -> None:
    a = validate_affinity(weights)
    i_idx, j_idx = np.nonzero(np.triu(a, k=1))
    lines = [f"{a.shape[0]} {len(i_idx)}"]
    lines += [f"{i} {j} {a[i, j]:.17g}" for i, j in zip(i_idx, j_idx)]
    Path(path).write_text("\n".join(lines) + "\n")


def relative_similarity(A, S, i: int, j: int) -> float:
    """Similarity of j to i relative to the average similarity of i to S."""
    a = np.asarray(A, dtype=float)
    members = _check_vertices(a.shape[0], S)
    if not members:
        raise ValueError("S must be nonempty")
    i, j = int(i), int(j)
    _check_vertices(a.shape[0], [i, j])
    if i not in members:
        raise ValueError(f"vertex {i} must belong to S")
    if j in members:
        raise ValueError(f"vertex {j} must lie outside S")
    return float(a[i, j] - a[i, list(members)].mean())


class WeightOracle:
    """Memoized evaluator of the recursive coherence weights.

    The recursion visits every subset of the query set, so it is capped
    (default 15 vertices) and refuses larger sets loudly.
    """

    def __init__(self, A, cap: int = DEFAULT_RECURSION_CAP):
        self.a = np.asarray(A, dtype=float)
        self.n = self.a.shape[0]
        self.cap = int(cap)
        self._memo: dict[tuple[frozenset[int], int], float] = {}

    def _guard(self, members: tuple[int, ...]) -> None:
        if len(members) > self.cap:
            raise OracleSizeError(
                f"set of size {len(members)} exceeds the recursion cap {self.cap}"
            )

    def vertex_weight(self, S, i: int) -> float:
        members = _check_vertices(self.n, S)
        i = int(i)
        if i not in members:
            raise ValueError(f"vertex {i} must belong to S")
        self._guard(members)
        return self._weight(frozenset(members), i)

    def _weight(self, s: frozenset[int], i: int) -> float:
        if len(s) == 1:
            return 1.0
        key = (s, i)
        cached = self._memo.get(key)
        if cached is not None:
            return cached
        rest = s - {i}
        rest_list = sorted(rest)
        mean_row = self.a[np.ix_(rest_list, rest_list)].mean(axis=1)
        total = 0.0
        for idx, j in enumerate(rest_list):
            phi = self.a[j, i] - mean_row[idx]
            total += phi * self._weight(rest, j)
        self._memo[key] = total
        return total

    def total_weight(self, S) -> float:
        members = _check_vertices(self.n, S)
        if not members:
            raise ValueError("S must be nonempty")
        self._guard(members)
        s = frozenset(members)
        return float(sum(self._weight(s, i) for i in members))


def vertex_weight(A, S, i: int, cap: int = DEFAULT_RECURSION_CAP) -> float:
    return WeightOracle(A, cap).vertex_weight(S, i)


def total_weight(A, S, cap: int = DEFAULT_RECURSION_CAP) -> float:
    return WeightOracle(A, cap).total_weight(S)


@dataclass(frozen=True)
class DominantSetCertificate:
    members: tuple[int, ...]
    internal_weights: tuple[float, ...]
    total_weight: float

    @property
    def accepted(self) -> bool:
        return True

    def characteristic_vector(self, n: int) -> np.ndarray:
        x = np.zeros(n)
        x[list(self.members)] = np.asarray(self.internal_weights) / self.total_weight
        return x


@dataclass(frozen=True)
class DominantSetRejection:
    reason: str  # "nonpositive-subset-weight" | "internal" | "external"
    witness: tuple[int, ...]

    @property
    def accepted(self) -> bool:
        return False


def is_dominant_set(
    A,
    S,
    cap: int = DEFAULT_RECURSION_CAP,
    oracle: WeightOracle | None = None,
    tol: float = 1e-10,
):
    """Decide whether S is a maximally coherent set, via the weight recursion.

    Returns a certificate on acceptance, otherwise the first violated
    condition together with the witnessing vertices.  An outside vertex with
    a zero attachment weight cannot improve the set and does not reject it;
    only a strictly positive attachment does.  `tol` absorbs rounding noise
    around that boundary, which unweighted graphs hit routinely.
    """
    if oracle is None:
        oracle = WeightOracle(A, cap)
    members = _check_vertices(oracle.n, S)
    if not members:
        raise ValueError("S must be nonempty")
    if len(members) + 1 > oracle.cap:
        raise OracleSizeError(
            f"set of size {len(members)} needs the recursion on size "
            f"{len(members) + 1}, above the cap {oracle.cap}"
        )
    ordered = tuple(sorted(members))
    for size in range(1, len(ordered) + 1):
        for sub in itertools.combinations(ordered, size):
            if oracle.total_weight(sub) <= tol:
                return DominantSetRejection("nonpositive-subset-weight", sub)
    internal = [oracle.vertex_weight(ordered, i) for i in ordered]
    for i, w in zip(ordered, internal):
        if w <= tol:
            return DominantSetRejection("internal", (i,))
    outside = [v for v in range(oracle.n) if v not in members]
    for j in outside:
        if oracle.vertex_weight(ordered + (j,), j) > tol:
            return DominantSetRejection("external", (j,))
    return DominantSetCertificate(ordered, tuple(internal), float(sum(internal)))


def enumerate_maximal_cliques(A, cap: int = DEFAULT_CLIQUE_CAP) -> list[tuple[int, ...]]:
    """All maximal cliques of the graph whose edges are the entries > 0.

    Bron-Kerbosch with pivoting; output sorted lexicographically by the
    sorted member tuples, so the order is deterministic.
    """
    a = np.asarray(A)
    n = a.shape[0]
    if n > cap:
        raise OracleSizeError(f"graph with {n} vertices exceeds the clique cap {cap}")
    adj = [frozenset(np.nonzero(a[v] > 0)[0].tolist()) for v in range(n)]
    out: list[tuple[int, ...]] = []

    def expand(r: list[int], p: set[int], x: set[int]) -> None:
        if not p and not x:
            out.append(tuple(sorted(r)))
            return
        pivot = max(sorted(p | x), key=lambda u: len(p & adj[u]))
        for v in sorted(p - adj[pivot]):
            expand(r + [v], p & adj[v], x & adj[v])
            p.remove(v)
            x.add(v)

    expand([], set(range(n)), set())
    return sorted(out)
