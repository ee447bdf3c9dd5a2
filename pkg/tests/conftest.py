"""Shared generators for randomized tests.

Everything here is deterministic given a ``random.Random`` instance, so each
test pins its own seed and failures replay exactly.
"""

from __future__ import annotations

import random
from fractions import Fraction

from median_consensus import InfluenceNetwork, fixtures


def random_row(rnd: random.Random, support_size: int, max_den: int = 24):
    """Random positive weights on ``support_size`` entries summing exactly to 1.

    Draws a denominator d and splits it into positive integer parts, so every
    weight is a Fraction with denominator dividing d.
    """
    d = rnd.randint(max(support_size, 2), max(max_den, support_size + 1))
    if support_size == 1:
        return [Fraction(1)]
    cuts = sorted(rnd.sample(range(1, d), support_size - 1))
    bounds = [0] + cuts + [d]
    return [Fraction(b - a, d) for a, b in zip(bounds, bounds[1:])]


def random_network(rnd: random.Random, n: int, max_den: int = 24,
                   allow_self: bool = True) -> InfluenceNetwork:
    """Random influence network with exact rational rows."""
    dense = []
    for i in range(n):
        candidates = list(range(n)) if (allow_self or n == 1) else [j for j in range(n) if j != i]
        k = rnd.randint(1, len(candidates))
        support = rnd.sample(candidates, k)
        weights = random_row(rnd, k, max_den)
        row = [Fraction(0)] * n
        for j, w in zip(support, weights):
            row[j] = w
        dense.append(row)
    return InfluenceNetwork.from_rows(dense)


def random_weights(rnd: random.Random, n: int, max_den: int = 24,
                   zeros_ok: bool = True):
    """Random weight vector (sum exactly 1), possibly with zero entries."""
    if zeros_ok and n > 1 and rnd.random() < 0.5:
        support = rnd.randint(1, n)
    else:
        support = n
    picked = rnd.sample(range(n), support)
    weights = [Fraction(0)] * n
    for j, w in zip(picked, random_row(rnd, support, max_den)):
        weights[j] = w
    return weights


def random_profile(rnd: random.Random, n: int, spread: int = 3):
    """Random integer opinion profile with repeats likely."""
    return tuple(rnd.randint(0, spread) for _ in range(n))


def network_corpus():
    """A spread of structurally different networks for dynamics sweeps."""
    return [
        fixtures.complete_uniform(4),
        fixtures.complete_uniform(8),
        fixtures.lattice(3, 3),
        fixtures.lattice(5, 6),
        fixtures.bridged_cliques(clique_size=3, cross="1/3"),
        fixtures.disjoint_cliques(clique_size=3, blocks=2),
        fixtures.directed_ring(5),
        fixtures.self_loop_nodes(3),
        fixtures.lattice(5, 5),
        fixtures.bridged_cliques(clique_size=4, cross="1/4"),
    ]
