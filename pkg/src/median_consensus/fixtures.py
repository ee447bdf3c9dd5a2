"""Small parametric network families used throughout the tests and demos."""

from __future__ import annotations

from fractions import Fraction

from .median import to_fraction
from .network import InfluenceNetwork

__all__ = [
    "complete_uniform",
    "lattice",
    "bridged_cliques",
    "disjoint_cliques",
    "directed_ring",
    "self_loop_nodes",
]


def complete_uniform(n: int, *, self_loops: bool = False) -> InfluenceNetwork:
    """Complete graph with uniform rows.

    Without self-loops each node spreads 1/(n-1) over the others; then the
    full node set is the only maximal cohesive set, so consensus is certain.
    With self-loops the weight is 1/n on everyone including oneself; for
    even n a half-half split is then maximal cohesive on both sides.
    """
    if self_loops:
        if n < 1:
            raise ValueError("need n >= 1")
        w = Fraction(1, n)
        return InfluenceNetwork.from_edges(
            n, [(i, j, w) for i in range(n) for j in range(n)]
        )
    if n < 2:
        raise ValueError("need n >= 2 without self-loops")
    w = Fraction(1, n - 1)
    return InfluenceNetwork.from_edges(
        n, [(i, j, w) for i in range(n) for j in range(n) if i != j]
    )


def lattice(rows: int, cols: int) -> InfluenceNetwork:
    """Grid with 4-neighbor adjacency, a self-loop, and uniform weights."""
    if rows < 1 or cols < 1:
        raise ValueError("need a positive grid shape")
    n = rows * cols
    edges = []
    for r in range(rows):
        for c in range(cols):
            i = r * cols + c
            nbrs = [i]
            if r > 0:
                nbrs.append(i - cols)
            if r < rows - 1:
                nbrs.append(i + cols)
            if c > 0:
                nbrs.append(i - 1)
            if c < cols - 1:
                nbrs.append(i + 1)
            w = Fraction(1, len(nbrs))
            edges.extend((i, j, w) for j in nbrs)
    return InfluenceNetwork.from_edges(n, edges)


def bridged_cliques(clique_size: int = 3, cross="1/3") -> InfluenceNetwork:
    """Two cliques exchanging a minority of attention.

    Each node spreads ``1 - cross`` uniformly over its own clique (itself
    included) and ``cross`` uniformly over the other clique.  For
    ``cross <= 1/2`` both cliques are maximal cohesive, so opinion profiles
    separating the cliques can never reach consensus.
    """
    k = clique_size
    if k < 1:
        raise ValueError("need a positive clique size")
    c = to_fraction(cross)
    if not 0 < c <= Fraction(1, 2):
        raise ValueError("cross mass must lie in (0, 1/2] to keep the cliques cohesive")
    own = (1 - c) / k
    other = c / k
    n = 2 * k
    edges = []
    for i in range(n):
        mine = range(k) if i < k else range(k, n)
        theirs = range(k, n) if i < k else range(k)
        edges.extend((i, j, own) for j in mine)
        edges.extend((i, j, other) for j in theirs)
    return InfluenceNetwork.from_edges(n, edges)


def disjoint_cliques(clique_size: int = 3, blocks: int = 2) -> InfluenceNetwork:
    """Disconnected cliques, uniform weights over the other clique members."""
    k = clique_size
    if k < 2 or blocks < 1:
        raise ValueError("need clique_size >= 2 and blocks >= 1")
    w = Fraction(1, k - 1)
    edges = []
    for b in range(blocks):
        base = b * k
        for i in range(base, base + k):
            edges.extend((i, j, w) for j in range(base, base + k) if j != i)
    return InfluenceNetwork.from_edges(blocks * k, edges)


def directed_ring(n: int) -> InfluenceNetwork:
    """Each node copies its successor: weight 1 on (i+1) mod n."""
    if n < 1:
        raise ValueError("need n >= 1")
    return InfluenceNetwork.from_edges(n, [(i, (i + 1) % n, Fraction(1)) for i in range(n)])


def self_loop_nodes(n: int) -> InfluenceNetwork:
    """Isolated nodes, each listening only to itself."""
    if n < 1:
        raise ValueError("need n >= 1")
    return InfluenceNetwork.from_edges(n, [(i, i, Fraction(1)) for i in range(n)])
