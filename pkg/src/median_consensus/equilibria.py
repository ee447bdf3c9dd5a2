"""Equilibria of the dynamics: recognition, enumeration, and reachability.

A state is an equilibrium exactly when it is a consensus or when every
threshold cut through its values splits the nodes into two maximal cohesive
sets.  Whether a network can reach consensus at all reduces to a finite
search: only the ordering of the initial opinions matters, so it is enough
to search profiles with values in {-1, 0, 1} having exactly one zero entry
(for consensus on a designated opinion) or rank permutations (for consensus
on an arbitrary one).  Both searches here are exhaustive breadth-first
explorations of the reachable state space and therefore exponential; they
refuse inputs beyond an explicit node bound.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from . import _engine
from .cohesion import (
    DEFAULT_ENUMERATION_BOUND,
    enumerate_maximal_cohesive_sets,
    is_maximal_cohesive,
)
from .dynamics import RandomSchedule, default_budget, is_equilibrium, run
from .median import HALF
from .network import (
    InfluenceNetwork,
    decisive_subgraph,
    has_globally_reachable_node,
    has_half_ties,
)

__all__ = [
    "ClassificationReport",
    "ConsensusCertificate",
    "DEFAULT_DECISION_BOUND",
    "is_equilibrium_structural",
    "enumerate_equilibria",
    "classify",
    "build_update_sequence",
    "decide_consensus_reachable",
    "verify_certificate",
    "consensus_reachability_cross_check",
]

DEFAULT_DECISION_BOUND = 12
DEFAULT_STATE_BUDGET = 10**6


# -- recognition -------------------------------------------------------------


def is_equilibrium_structural(net: InfluenceNetwork, x) -> bool:
    """Equilibrium test via cohesion alone, no median computations.

    True iff the state is a consensus or, for every way of cutting the
    value axis between two adjacent occurring values, the below-cut and
    above-cut node sets are each maximal cohesive.
    """
    vals = list(x)
    if len(vals) != net.n:
        raise ValueError(f"state length {len(vals)} != n={net.n}")
    distinct = sorted(set(vals))
    if len(distinct) == 1:
        return True
    for cut in distinct[:-1]:
        low = frozenset(i for i, v in enumerate(vals) if v <= cut)
        high = frozenset(range(net.n)) - low
        if not is_maximal_cohesive(net, low):
            return False
        if not is_maximal_cohesive(net, high):
            return False
    return True


def enumerate_equilibria(
    net: InfluenceNetwork, opinion_values, *, max_states: int = DEFAULT_STATE_BUDGET
) -> list[tuple]:
    """All equilibria over states drawn from a finite label domain.

    Checks every state in ``opinion_values ** n`` against the fixed-point
    condition, so it refuses when the state count exceeds ``max_states``.
    """
    labels = sorted(set(opinion_values))
    if len(labels) != len(list(opinion_values)):
        raise ValueError("opinion_values must be distinct")
    if not labels:
        raise ValueError("need at least one opinion value")
    n = net.n
    count = len(labels) ** n
    if count > max_states:
        raise ValueError(
            f"{len(labels)}^{n} = {count} states exceeds the budget {max_states}"
        )
    rows = net.integer_rows
    out = []
    ranks = range(len(labels))
    for state in itertools.product(ranks, repeat=n):
        if all(_engine.update_value(rows, state, i) == state[i] for i in range(n)):
            out.append(tuple(labels[v] for v in state))
    return out


# -- classification ------------------------------------------------------------


@dataclass(frozen=True)
class ClassificationReport:
    """What the network structure says about long-run outcomes.

    ``consensus_certain``  -- every run from every initial state reaches
    consensus almost surely (the full node set is the only maximal cohesive
    set).  None when the exhaustive check was out of bounds.
    ``dissensus_witness``  -- a proper maximal cohesive set, when one exists:
    initial states separating it from the rest can never reach consensus
    (``decision_scope["witness_recipe"]`` spells out the separation).
    ``dissensus_certain``  -- dissensus is forced from any all-distinct
    initial state: no globally reachable node over the decisive links when
    rows are half-tie-free, or over all links otherwise.
    """

    consensus_certain: bool | None
    dissensus_witness: frozenset | None
    dissensus_certain: bool
    decision_scope: dict

    def to_json_dict(self) -> dict:
        witness = (
            sorted(i + 1 for i in self.dissensus_witness)
            if self.dissensus_witness is not None
            else None
        )
        return {
            "consensus_certain": self.consensus_certain,
            "dissensus_witness": witness,
            "dissensus_certain": self.dissensus_certain,
            "decision_scope": self.decision_scope,
        }


def classify(
    net: InfluenceNetwork,
    *,
    cohesion_bound: int = DEFAULT_ENUMERATION_BOUND,
    mc_replicas: int = 0,
    seed: int = 0,
    budget: int | None = None,
) -> ClassificationReport:
    """Classify a network's long-run behavior.

    Within ``cohesion_bound`` nodes the maximal-cohesive enumeration decides
    ``consensus_certain`` exactly.  Beyond it those fields are left undecided
    (None); if ``mc_replicas`` > 0, seeded runs from an all-distinct initial
    state are used as falsification only -- an observed consensus proves
    consensus is reachable, absence of one proves nothing -- and the scope
    notes say so.
    """
    n = net.n
    exhaustive = n <= cohesion_bound
    scope: dict = {"cohesion_bound": cohesion_bound, "cohesion_exhaustive": exhaustive}
    consensus_certain: bool | None = None
    witness: frozenset | None = None
    if exhaustive:
        full = frozenset(range(n))
        for s in enumerate_maximal_cohesive_sets(net, bound=cohesion_bound):
            if s != full:
                witness = s
                break
        consensus_certain = witness is None
        if witness is not None:
            members = ",".join(str(i + 1) for i in sorted(witness))
            scope["witness_recipe"] = (
                f"any initial state where every opinion inside {{{members}}} is "
                "strictly below (or strictly above) every opinion outside it "
                "never reaches consensus"
            )
    else:
        scope["note"] = "n exceeds cohesion_bound; consensus_certain undecided"
        if mc_replicas > 0:
            eff_budget = budget if budget is not None else default_budget(n)
            observed = False
            x0 = tuple(range(n))
            for r in range(mc_replicas):
                traj = run(net, x0, RandomSchedule(seed=int(seed) + r, budget=eff_budget))
                if traj.converged and len(set(traj.terminal)) == 1:
                    observed = True
                    break
            scope["monte_carlo"] = {
                "replicas": mc_replicas,
                "budget": eff_budget,
                "consensus_observed": observed,
                "note": "falsification only: absence of consensus proves nothing",
            }

    reachable, node = has_globally_reachable_node(decisive_subgraph(net))
    scope["globally_reachable_witness"] = None if node is None else node + 1
    if reachable:
        dissensus_certain = False
    elif not has_half_ties(net):
        # Tie-free rows: opinions can only spread along decisive links, so a
        # missing globally reachable node rules consensus out entirely.
        dissensus_certain = True
    else:
        # Some subset of a row sums to exactly 1/2.  Median sets can then be
        # wide enough for the tie-break to adopt a formally indecisive
        # neighbor's value, so the decisive subgraph does not bound opinion
        # travel.  Fall back to the whole network: adopted values always come
        # from a positive-weight neighbor, so consensus still needs a
        # globally reachable node there.
        full_reachable, _ = has_globally_reachable_node(net)
        dissensus_certain = not full_reachable
        scope["half_tie_note"] = (
            "a row has a subset of weights summing to exactly 1/2; the "
            "decisive-link criterion is inconclusive, used full-network "
            "reachability instead"
        )
    assert not (dissensus_certain and consensus_certain)
    return ClassificationReport(
        consensus_certain=consensus_certain,
        dissensus_witness=witness,
        dissensus_certain=dissensus_certain,
        decision_scope=scope,
    )


# -- constructive convergence ---------------------------------------------------


def build_update_sequence(net: InfluenceNetwork, x0) -> tuple[tuple[int, ...], tuple]:
    """A deterministic update sequence from ``x0`` to an equilibrium.

    Processes the occurring values from lowest to highest.  For each value
    class: first repeatedly update any node of the class whose weight on
    strictly higher values exceeds 1/2 (each such update leaves the class),
    then expand the settled low block by updating outside nodes holding a
    strict majority on it (each such update joins the class).  Both loops
    pick the lowest-index qualifier, so the schedule is deterministic.

    Returns ``(schedule, terminal)``.  The terminal state is verified to be
    an equilibrium by replaying the schedule; failure raises RuntimeError.
    """
    vals = list(x0)
    if len(vals) != net.n:
        raise ValueError(f"state length {len(vals)} != n={net.n}")
    state, table = _engine.encode_profile(vals)
    rows = net.integer_rows
    n = net.n
    schedule: list[int] = []

    for level in range(len(table) - 1):
        # Escape loop: class members pulled away by a strict high-side majority.
        while True:
            pick = None
            for i in range(n):
                if state[i] > level:
                    continue
                nbrs, wints, denom = rows[i]
                mass = 0
                for j, w in zip(nbrs, wints):
                    if state[j] > level:
                        mass += w
                if 2 * mass > denom:
                    pick = i
                    break
            if pick is None:
                break
            new = _engine.update_value(rows, state, pick)
            if new <= level:
                raise RuntimeError("escape update failed to leave the value class")
            state[pick] = new
            schedule.append(pick)
        # Expansion loop: outside nodes with a strict majority on the block.
        while True:
            members = [j for j in range(n) if state[j] <= level]
            if not members:
                break
            member_set = set(members)
            pick = None
            for i in range(n):
                if i in member_set:
                    continue
                nbrs, wints, denom = rows[i]
                mass = 0
                for j, w in zip(nbrs, wints):
                    if j in member_set:
                        mass += w
                if 2 * mass > denom:
                    pick = i
                    break
            if pick is None:
                break
            new = _engine.update_value(rows, state, pick)
            if new > level:
                raise RuntimeError("expansion update failed to join the value class")
            state[pick] = new
            schedule.append(pick)

    terminal = tuple(table[v] for v in state)
    traj = run(net, tuple(vals), tuple(schedule))
    if traj.terminal != terminal or not is_equilibrium(net, terminal):
        raise RuntimeError("constructed update sequence failed replay verification")
    return tuple(schedule), terminal


# -- consensus reachability -------------------------------------------------------


@dataclass(frozen=True)
class ConsensusCertificate:
    """A replayable witness that consensus is reachable.

    Replaying ``sequence`` from ``initial`` reaches the all-zero state at
    time ``target_time`` (= the sequence length).
    """

    initial: tuple
    sequence: tuple[int, ...]
    target_time: int

    def __post_init__(self):
        if self.target_time != len(self.sequence):
            raise ValueError("target_time must equal the sequence length")

    def to_json_dict(self) -> dict:
        from ._io import opinion_to_json

        return {
            "initial": [opinion_to_json(v) for v in self.initial],
            "sequence": [i + 1 for i in self.sequence],
            "target_time": self.target_time,
        }

    @staticmethod
    def from_json_dict(payload: dict) -> "ConsensusCertificate":
        from ._io import opinion_from_json

        try:
            initial = tuple(opinion_from_json(v) for v in payload["initial"])
            sequence = tuple(int(i) - 1 for i in payload["sequence"])
            target_time = int(payload["target_time"])
        except (KeyError, TypeError, ValueError) as exc:
            raise ValueError(f"malformed certificate payload: {exc}") from exc
        return ConsensusCertificate(initial=initial, sequence=sequence, target_time=target_time)


def verify_certificate(net: InfluenceNetwork, cert: ConsensusCertificate) -> bool:
    """Replay the certificate; true iff it ends at the all-zero state."""
    if len(cert.initial) != net.n:
        return False
    if any(not 0 <= i < net.n for i in cert.sequence):
        return False
    traj = run(net, cert.initial, cert.sequence)
    return all(v == 0 for v in traj.terminal)


def _frozen_nodes(net: InfluenceNetwork) -> list[int]:
    """Nodes with self-weight >= 1/2: their opinion can never change."""
    return [i for i in range(net.n) if net.weight(i, i) >= HALF]


def _cohesive_pairs(net: InfluenceNetwork) -> list[list[int]]:
    """Per node, partners forming a two-node cohesive set with it.

    If both members of such a pair hold the same opinion, neither ever
    leaves it, so states where a pair agrees on a nonzero value can never
    reach the all-zero state.
    """
    partners: list[list[int]] = [[] for _ in range(net.n)]
    for a in range(net.n):
        for b in range(a + 1, net.n):
            if (
                net.weight(a, a) + net.weight(a, b) >= HALF
                and net.weight(b, b) + net.weight(b, a) >= HALF
            ):
                partners[a].append(b)
                partners[b].append(a)
    return partners


def _pair_blocked(state, node: int, partners: list[list[int]]) -> bool:
    v = state[node]
    if v == 0:
        return False
    for p in partners[node]:
        if state[p] == v:
            return True
    return False


def decide_consensus_reachable(
    net: InfluenceNetwork, *, bound: int = DEFAULT_DECISION_BOUND
) -> tuple[bool, ConsensusCertificate | None]:
    """Can some ternary initial state with one zero entry reach all-zero?

    Exhaustive seeded search: for every choice of the zero node and signs of
    the rest, breadth-first exploration of the reachable states.  States
    proven unable to reach all-zero are cached across start states, and the
    search exploits the sign-flip symmetry of the dynamics.  On success the
    returned certificate (initial state + shortest update sequence for it)
    is verified by replay before being returned.
    """
    n = net.n
    if n > bound:
        raise ValueError(
            f"n={n} exceeds the decision bound {bound}; the search is exponential -- "
            "raise `bound` explicitly to force it"
        )
    if n == 1:
        cert = ConsensusCertificate(initial=(0,), sequence=(), target_time=0)
        assert verify_certificate(net, cert)
        return True, cert
    rows = net.integer_rows
    frozen = _frozen_nodes(net)
    if len(frozen) >= 2:
        # Two or more never-changing nodes, but only one may start at zero.
        return False, None
    zero_choices = frozen if frozen else list(range(n))
    partners = _cohesive_pairs(net)
    target = (0,) * n
    dead: set = set()

    for z in zero_choices:
        others = [i for i in range(n) if i != z]
        # The dynamics commute with flipping every sign, so the first
        # non-zero node can be pinned to -1.
        for signs in itertools.product((-1, 1), repeat=len(others) - 1):
            y0 = [0] * n
            y0[others[0]] = -1
            for node, s in zip(others[1:], signs):
                y0[node] = s
            y0 = tuple(y0)
            cert = _search_to_zero(rows, n, y0, target, dead, partners)
            if cert is not None:
                assert verify_certificate(net, cert)
                return True, cert
    return False, None


def _search_to_zero(rows, n, y0, target, dead, partners):
    """BFS from y0 toward the all-zero state with cross-start memoization."""
    neg0 = tuple(-v for v in y0)
    if min(y0, neg0) in dead:
        return None
    if any(_pair_blocked(y0, i, partners) for i in range(n)):
        dead.add(min(y0, neg0))
        return None
    parents = {y0: None}
    frontier = [y0]
    found = None
    while frontier and found is None:
        nxt = []
        for s in frontier:
            for i in range(n):
                new = _engine.update_value(rows, s, i)
                if new == s[i]:
                    continue
                s2 = s[:i] + (new,) + s[i + 1 :]
                if s2 in parents:
                    continue
                canon = min(s2, tuple(-v for v in s2))
                if canon in dead:
                    continue
                parents[s2] = (s, i)
                if s2 == target:
                    found = s2
                    break
                if _pair_blocked(s2, i, partners):
                    dead.add(canon)
                    del parents[s2]
                    continue
                nxt.append(s2)
            if found is not None:
                break
        frontier = nxt
    if found is None:
        for s in parents:
            dead.add(min(s, tuple(-v for v in s)))
        return None
    sequence = []
    cur = found
    while parents[cur] is not None:
        prev, agent = parents[cur]
        sequence.append(agent)
        cur = prev
    sequence.reverse()
    return ConsensusCertificate(
        initial=y0, sequence=tuple(sequence), target_time=len(sequence)
    )


# -- cross-check of the two reachability formulations -----------------------------


def _distinct_profile_consensus_search(net: InfluenceNetwork) -> bool:
    """Can some all-distinct initial profile reach consensus on any value?

    Only the opinion ordering matters, so initial profiles are searched as
    rank permutations; BFS explores reachable rank states, memoizing states
    whose closure contains no consensus.  The order-reversal symmetry of the
    dynamics halves the work.
    """
    n = net.n
    if n == 1:
        return True
    rows = net.integer_rows
    dead: set = set()
    top = n - 1

    def mirror(s):
        return tuple(top - v for v in s)

    for perm in itertools.permutations(range(n)):
        y0 = tuple(perm)
        if min(y0, mirror(y0)) in dead:
            continue
        seen = {y0}
        frontier = [y0]
        while frontier:
            nxt = []
            for s in frontier:
                for i in range(n):
                    new = _engine.update_value(rows, s, i)
                    if new == s[i]:
                        continue
                    s2 = s[:i] + (new,) + s[i + 1 :]
                    if s2 in seen or min(s2, mirror(s2)) in dead:
                        continue
                    if len(set(s2)) == 1:
                        return True
                    seen.add(s2)
                    nxt.append(s2)
            frontier = nxt
        for s in seen:
            dead.add(min(s, mirror(s)))
    return False


def consensus_reachability_cross_check(net: InfluenceNetwork, *, bound: int = 6) -> bool:
    """Run the two independent consensus-reachability searches; do they agree?

    One search works over all-distinct rank profiles and accepts consensus
    on any value; the other works over one-zero ternary profiles and accepts
    only the all-zero state.  The two must always return the same verdict.
    """
    if net.n > bound:
        raise ValueError(f"n={net.n} exceeds the cross-check bound {bound}")
    via_ranks = _distinct_profile_consensus_search(net)
    via_ternary, _ = decide_consensus_reachable(net, bound=max(bound, net.n))
    return via_ranks == via_ternary
