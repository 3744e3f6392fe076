"""Communication graphs with doubly stochastic mixing weights."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import UsageError


@dataclass(frozen=True)
class NetworkGraph:
    node_count: int
    edges: tuple[tuple[int, int], ...]
    mixing: np.ndarray  # (N, N), doubly stochastic

    def __post_init__(self):
        W = np.asarray(self.mixing, float)
        if W.shape != (self.node_count, self.node_count):
            raise UsageError("mixing matrix shape mismatch")
        if np.any(np.abs(W.sum(axis=0) - 1.0) > 1e-10) or np.any(
            np.abs(W.sum(axis=1) - 1.0) > 1e-10
        ):
            raise UsageError("mixing matrix must be doubly stochastic")
        object.__setattr__(self, "mixing", W)


def _connected(n: int, adj: list[set[int]]) -> bool:
    seen = {0}
    stack = [0]
    while stack:
        v = stack.pop()
        for w in adj[v]:
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return len(seen) == n


def metropolis_weights(edges, n: int) -> NetworkGraph:
    """Doubly stochastic weights W_ij = 1/(1 + max(deg_i, deg_j)) on
    edges, diagonal absorbing the remainder; requires a connected graph."""
    edges = tuple(tuple(sorted((int(a), int(b)))) for a, b in edges)
    adj = [set() for _ in range(n)]
    for a, b in edges:
        if not (0 <= a < n and 0 <= b < n) or a == b:
            raise UsageError(f"bad edge ({a}, {b})")
        adj[a].add(b)
        adj[b].add(a)
    if n > 1 and not _connected(n, adj):
        raise UsageError("graph must be connected")
    deg = [len(a) for a in adj]
    W = np.zeros((n, n))
    for a, b in edges:
        W[a, b] = W[b, a] = 1.0 / (1.0 + max(deg[a], deg[b]))
    for i in range(n):
        W[i, i] = 1.0 - W[i].sum()
    return NetworkGraph(node_count=n, edges=edges, mixing=W)


def complete_graph(n: int) -> NetworkGraph:
    return metropolis_weights(
        [(i, j) for i in range(n) for j in range(i + 1, n)], n
    )
