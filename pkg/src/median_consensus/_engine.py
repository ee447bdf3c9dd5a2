"""Integer hot path for opinion updates.

Opinion order is all that matters to the update rule, so states are encoded
as small ints (ranks) and each row's weights are pre-cleared to integers
over a common denominator.  All half-threshold comparisons become integer
comparisons; no Fractions appear in the loops.
"""

from __future__ import annotations


def encode_profile(values):
    """Map a profile to rank ints; returns (state list, decode table)."""
    try:
        table = sorted(set(values))
    except TypeError as exc:
        raise TypeError("opinion values must be mutually comparable") from exc
    rank = {v: k for k, v in enumerate(table)}
    return [rank[v] for v in values], table


def update_value(int_rows, state, i):
    """New value for node i: its closest weighted median of the profile.

    Computes the median interval of the weights' support and clamps node
    i's current value into it; values outside the support never become
    interval endpoints, so the support is enough.
    """
    nbrs, wints, denom = int_rows[i]
    masses: dict = {}
    for j, w in zip(nbrs, wints):
        v = state[j]
        if v in masses:
            masses[v] += w
        else:
            masses[v] = w
    below = 0
    lo = hi = None
    for v in sorted(masses):
        m = masses[v]
        above = denom - below - m
        if 2 * below <= denom and 2 * above <= denom:
            if lo is None:
                lo = v
            hi = v
        elif lo is not None:
            break
        below += m
    ref = state[i]
    if ref < lo:
        return lo
    if ref > hi:
        return hi
    return ref
