"""Cohesive sets: definitions, expansion, enumeration, structural laws."""

from __future__ import annotations

import random
from fractions import Fraction as F

import pytest

from conftest import random_network
from median_consensus import (
    InfluenceNetwork,
    cohesive_expansion,
    enumerate_maximal_cohesive_sets,
    fixtures,
    has_nontrivial_maximal_cohesive_set,
    is_cohesive,
    is_maximal_cohesive,
)


def oracle_maximal_sets(net):
    """Exhaustive subset check straight from the definition, no shared code
    with the library's integer-mask enumeration."""
    half = F(1, 2)

    def mass(i, members):
        return sum((w for j, w in net.rows[i] if j in members), F(0))

    found = []
    for mask in range(1, 1 << net.n):
        s = {i for i in range(net.n) if mask >> i & 1}
        if all(mass(i, s) >= half for i in s) and all(
            not mass(o, s) > half for o in range(net.n) if o not in s
        ):
            found.append(frozenset(s))
    return sorted(found, key=lambda s: (len(s), sorted(s)))


class TestDefinitions:
    def test_full_set_always_cohesive(self):
        rnd = random.Random(1)
        for _ in range(10):
            net = random_network(rnd, rnd.randint(1, 6))
            assert is_cohesive(net, set(range(net.n)))
            assert is_maximal_cohesive(net, set(range(net.n)))

    def test_singleton_threshold(self):
        net = InfluenceNetwork.from_rows(
            [[F(1, 2), F(1, 2)], [F(3, 5), F(2, 5)]]
        )
        assert is_cohesive(net, {0}) is True
        assert is_cohesive(net, {1}) is False

    def test_empty_set_rejected(self):
        net = fixtures.complete_uniform(3)
        with pytest.raises(ValueError, match="non-empty"):
            is_cohesive(net, set())

    def test_out_of_range_member(self):
        net = fixtures.complete_uniform(3)
        with pytest.raises(ValueError):
            is_cohesive(net, {0, 5})

    def test_clique_pair_is_cohesive_but_not_maximal(self):
        # inside one 3-clique (no self-loops) a pair holds exactly 1/2 per
        # member, but the third member pours full mass in
        net = fixtures.disjoint_cliques(clique_size=3, blocks=2)
        assert is_cohesive(net, {0, 1})
        assert not is_maximal_cohesive(net, {0, 1})
        assert is_maximal_cohesive(net, {0, 1, 2})


class TestExpansion:
    def test_fixed_point_on_maximal(self):
        net = fixtures.disjoint_cliques(clique_size=3, blocks=2)
        trace = cohesive_expansion(net, {0, 1, 2})
        assert trace.result == frozenset({0, 1, 2})
        assert trace.additions == ()

    def test_pair_pulls_in_third(self):
        net = fixtures.disjoint_cliques(clique_size=3, blocks=2)
        trace = cohesive_expansion(net, {0, 1})
        assert trace.result == frozenset({0, 1, 2})
        assert trace.additions == ((2, 1),)

    def test_additions_reconstruct_result(self):
        rnd = random.Random(404)
        for _ in range(30):
            net = random_network(rnd, rnd.randint(2, 7))
            seed = set(rnd.sample(range(net.n), rnd.randint(1, net.n)))
            trace = cohesive_expansion(net, seed)
            assert trace.result == frozenset(seed) | {i for i, _ in trace.additions}

    def test_order_hint_never_changes_result(self):
        rnd = random.Random(0x0BDE)
        for _ in range(15):
            net = random_network(rnd, rnd.randint(2, 8))
            seed = set(rnd.sample(range(net.n), rnd.randint(1, net.n)))
            base = cohesive_expansion(net, seed).result
            for _ in range(5):
                order = list(range(net.n))
                rnd.shuffle(order)
                assert cohesive_expansion(net, seed, order_hint=order).result == base

    def test_bad_order_hint(self):
        net = fixtures.complete_uniform(3)
        with pytest.raises(ValueError):
            cohesive_expansion(net, {0}, order_hint=[0, 1])


class TestEnumeration:
    def test_complete_uniform_has_only_full_set(self):
        for n in (3, 4, 8):
            net = fixtures.complete_uniform(n)
            assert enumerate_maximal_cohesive_sets(net) == [frozenset(range(n))]

    def test_disjoint_cliques(self):
        net = fixtures.disjoint_cliques(clique_size=3, blocks=2)
        assert enumerate_maximal_cohesive_sets(net) == [
            frozenset({0, 1, 2}),
            frozenset({3, 4, 5}),
            frozenset(range(6)),
        ]

    def test_bridged_cliques_keep_both_blocks(self):
        net = fixtures.bridged_cliques(clique_size=3, cross="1/3")
        sets = enumerate_maximal_cohesive_sets(net)
        assert frozenset({0, 1, 2}) in sets and frozenset({3, 4, 5}) in sets

    def test_half_self_loops_make_every_subset_maximal(self):
        # w_ii = w_partner = 1/2: every member self-supports at exactly 1/2
        # and no outsider ever gets strictly above it, so all 15 non-empty
        # subsets qualify
        rows = [
            [F(1, 2), F(1, 2), F(0), F(0)],
            [F(1, 2), F(1, 2), F(0), F(0)],
            [F(0), F(0), F(1, 2), F(1, 2)],
            [F(0), F(0), F(1, 2), F(1, 2)],
        ]
        net = InfluenceNetwork.from_rows(rows)
        assert len(enumerate_maximal_cohesive_sets(net)) == 15

    def test_single_node(self):
        net = fixtures.self_loop_nodes(1)
        assert enumerate_maximal_cohesive_sets(net) == [frozenset({0})]

    def test_bound_refusal(self):
        net = fixtures.self_loop_nodes(17)
        with pytest.raises(ValueError, match="bound"):
            enumerate_maximal_cohesive_sets(net)
        assert len(enumerate_maximal_cohesive_sets(net, bound=17)) == 2 ** 17 - 1

    def test_matches_subset_oracle(self):
        rnd = random.Random(0xC0DE)
        for _ in range(40):
            net = random_network(rnd, rnd.randint(1, 6))
            assert enumerate_maximal_cohesive_sets(net) == oracle_maximal_sets(net)

    def test_nontrivial_wrapper(self):
        assert has_nontrivial_maximal_cohesive_set(fixtures.complete_uniform(4)) == (False, None)
        found, witness = has_nontrivial_maximal_cohesive_set(
            fixtures.disjoint_cliques(clique_size=3, blocks=2)
        )
        assert found and len(witness) == 3


class TestStructuralLaws:
    """The five structural properties of cohesive sets: closure of unions,
    the two expansion monotonicity laws, the smallest-maximal-superset law,
    and the complement partition law."""

    NETWORKS = 30

    def _networks(self):
        rnd = random.Random(0x1A3)
        for _ in range(self.NETWORKS):
            yield rnd, random_network(rnd, rnd.randint(2, 6))

    def _cohesive_sets(self, net):
        for mask in range(1, 1 << net.n):
            s = frozenset(i for i in range(net.n) if mask >> i & 1)
            if is_cohesive(net, s):
                yield s

    def test_union_of_cohesive_is_cohesive(self):
        for _, net in self._networks():
            sets = list(self._cohesive_sets(net))
            for a in sets:
                for b in sets:
                    assert is_cohesive(net, a | b)

    def test_expansion_monotone_in_seed(self):
        for rnd, net in self._networks():
            big = set(rnd.sample(range(net.n), rnd.randint(1, net.n)))
            small = set(rnd.sample(sorted(big), rnd.randint(1, len(big))))
            assert cohesive_expansion(net, small).result <= cohesive_expansion(net, big).result

    def test_expansion_union_bound(self):
        for rnd, net in self._networks():
            a = set(rnd.sample(range(net.n), rnd.randint(1, net.n)))
            b = set(rnd.sample(range(net.n), rnd.randint(1, net.n)))
            lhs = cohesive_expansion(net, a).result | cohesive_expansion(net, b).result
            assert lhs <= cohesive_expansion(net, a | b).result

    def test_expansion_of_cohesive_is_smallest_maximal_superset(self):
        for _, net in self._networks():
            maximal = enumerate_maximal_cohesive_sets(net)
            for m in self._cohesive_sets(net):
                grown = cohesive_expansion(net, m).result
                assert is_maximal_cohesive(net, grown)
                for cover in maximal:
                    if m <= cover:
                        assert grown <= cover

    def test_complement_partition(self):
        for _, net in self._networks():
            full = frozenset(range(net.n))
            for m in enumerate_maximal_cohesive_sets(net):
                if m != full:
                    assert is_maximal_cohesive(net, full - m)
