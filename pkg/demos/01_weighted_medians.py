"""Weighted medians of an opinion profile, exactly.

A weighted median of values x_1..x_n under weights w_1..w_n (summing to 1)
is any profile value with at most half the weight strictly below it and at
most half strictly above.  There can be several; the dynamics pick the one
closest to the updating agent's current opinion.
"""

from fractions import Fraction as F

from median_consensus import (
    closest_weighted_median,
    l1_best_responses,
    weighted_median_set,
)

values = (1, 2, 3)
weights = (F("1/5"), F("3/10"), F("1/2"))

print("profile:", values)
print("weights:", [str(w) for w in weights])
print()

medians = weighted_median_set(values, weights)
print("weighted median set:", medians)

# the same set minimizes the weighted absolute deviation sum(w_j * |z - x_j|)
for z in values:
    cost = sum((w * abs(z - v) for v, w in zip(values, weights)), F(0))
    marker = "  <- minimal" if z in medians else ""
    print(f"  cost at z={z}: {cost}{marker}")
assert l1_best_responses(values, weights) == medians
print()

# tie-breaking: an agent holding 1 moves to 2 (the nearest median), an agent
# already inside the median set stays put
print("agent at 1 updates to:", closest_weighted_median(values, weights, 1))
print("agent at 3 updates to:", closest_weighted_median(values, weights, 3))
print()

# exactness matters at the 1/2 boundary: floats would wobble, Fractions don't
knife_edge = weighted_median_set((0, 1), (F(1, 2), F(1, 2)))
print("half/half split keeps both values as medians:", knife_edge)
