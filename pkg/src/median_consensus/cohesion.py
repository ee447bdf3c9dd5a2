"""Cohesive node sets: strict-majority structure of an influence network.

A non-empty set M is *cohesive* when every member places at least half of
its weight inside M, and *maximal cohesive* when additionally no outside
node places strictly more than half of its weight into M.  The *expansion*
of a set repeatedly admits any outside node with strict-majority weight on
the current set; the result is independent of admission order, and for a
cohesive seed it is the smallest maximal cohesive superset.

Maximal cohesive sets are exactly the blocks that can hold an opinion
forever: once all members agree, no member ever leaves and no strict
majority ever forms outside pressure into the set.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .median import HALF
from .network import InfluenceNetwork

__all__ = [
    "ExpansionTrace",
    "is_cohesive",
    "is_maximal_cohesive",
    "cohesive_expansion",
    "enumerate_maximal_cohesive_sets",
    "has_nontrivial_maximal_cohesive_set",
]

DEFAULT_ENUMERATION_BOUND = 16


def _check_members(net: InfluenceNetwork, members: Iterable[int]) -> frozenset:
    m = frozenset(members)
    if not m:
        raise ValueError("the empty set is rejected: cohesion is defined for non-empty sets")
    for i in m:
        if not isinstance(i, int) or not 0 <= i < net.n:
            raise ValueError(f"node {i!r} out of range for n={net.n}")
    return m


def is_cohesive(net: InfluenceNetwork, members: Iterable[int]) -> bool:
    """Every member keeps weight >= 1/2 inside the set."""
    m = _check_members(net, members)
    return all(net.row_mass(i, m) >= HALF for i in m)


def is_maximal_cohesive(net: InfluenceNetwork, members: Iterable[int]) -> bool:
    """Cohesive, and no outside node has weight > 1/2 into the set."""
    m = _check_members(net, members)
    if not all(net.row_mass(i, m) >= HALF for i in m):
        return False
    return all(net.row_mass(i, m) <= HALF for i in range(net.n) if i not in m)


@dataclass(frozen=True)
class ExpansionTrace:
    """Result of a cohesive expansion: the final set plus admission order."""

    result: frozenset
    additions: tuple[tuple[int, int], ...]  # (node, admission step), steps from 1


def cohesive_expansion(
    net: InfluenceNetwork,
    members: Iterable[int],
    order_hint: Sequence[int] | None = None,
) -> ExpansionTrace:
    """Iteratively admit outside nodes holding a strict majority on the set.

    ``order_hint`` is a node priority order used to pick among simultaneous
    qualifiers; by default the lowest index is admitted first.  The final
    set never depends on this choice.
    """
    current = set(_check_members(net, members))
    if order_hint is not None:
        hint = list(order_hint)
        if sorted(hint) != list(range(net.n)):
            raise ValueError("order_hint must be a permutation of all node indices")
        priority = {node: pos for pos, node in enumerate(hint)}
    else:
        priority = None
    additions: list[tuple[int, int]] = []
    step = 0
    while True:
        qualifiers = [
            i for i in range(net.n)
            if i not in current and net.row_mass(i, current) > HALF
        ]
        if not qualifiers:
            break
        if priority is not None:
            chosen = min(qualifiers, key=priority.__getitem__)
        else:
            chosen = min(qualifiers)
        step += 1
        current.add(chosen)
        additions.append((chosen, step))
    return ExpansionTrace(result=frozenset(current), additions=tuple(additions))


def enumerate_maximal_cohesive_sets(
    net: InfluenceNetwork, *, bound: int = DEFAULT_ENUMERATION_BOUND
) -> list[frozenset]:
    """All maximal cohesive sets, by exhaustive subset check.

    Refuses networks larger than ``bound`` nodes (the check is exponential).
    The full node set always qualifies, so the result is never empty.
    Sets are returned in a deterministic order (by size, then members).
    """
    n = net.n
    if n > bound:
        raise ValueError(
            f"n={n} exceeds the enumeration bound {bound}; "
            "raise `bound` explicitly to force the exhaustive check"
        )
    int_rows = net.integer_rows
    found = []
    for mask in range(1, 1 << n):
        ok = True
        for i in range(n):
            nbrs, wints, denom = int_rows[i]
            mass = 0
            for j, w in zip(nbrs, wints):
                if mask >> j & 1:
                    mass += w
            if mask >> i & 1:
                if 2 * mass < denom:
                    ok = False
                    break
            elif 2 * mass > denom:
                ok = False
                break
        if ok:
            found.append(frozenset(i for i in range(n) if mask >> i & 1))
    found.sort(key=lambda s: (len(s), sorted(s)))
    return found


def has_nontrivial_maximal_cohesive_set(
    net: InfluenceNetwork, *, bound: int = DEFAULT_ENUMERATION_BOUND
) -> tuple[bool, frozenset | None]:
    """Is some proper subset maximal cohesive?  Returns (answer, witness)."""
    full = frozenset(range(net.n))
    for s in enumerate_maximal_cohesive_sets(net, bound=bound):
        if s != full:
            return True, s
    return False, None
