"""Structural equilibrium analysis, classification, decision procedures."""

from __future__ import annotations

import random
from fractions import Fraction as F

import pytest

from conftest import random_network, random_profile
from median_consensus import (
    ConsensusCertificate,
    InfluenceNetwork,
    RandomSchedule,
    build_update_sequence,
    classify,
    consensus_reachability_cross_check,
    decide_consensus_reachable,
    enumerate_equilibria,
    fixtures,
    is_equilibrium,
    is_equilibrium_structural,
    run,
    verify_certificate,
)


class TestStructuralCharacterization:
    def test_consensus_accepted(self):
        net = fixtures.lattice(2, 3)
        assert is_equilibrium_structural(net, (4,) * 6)

    def test_split_blocks_accepted(self):
        net = fixtures.bridged_cliques(clique_size=3, cross="1/3")
        assert is_equilibrium_structural(net, (0, 0, 0, 1, 1, 1))

    def test_bad_middle_cut_rejected(self):
        net = fixtures.disjoint_cliques(clique_size=3, blocks=2)
        # the cut between 1 and 2 leaves {0,1,2,3} with node 3 starved
        assert not is_equilibrium_structural(net, (0, 0, 0, 1, 2, 2))

    def test_agrees_with_pointwise_definition(self):
        rnd = random.Random(0x7E57)
        for _ in range(150):
            net = random_network(rnd, rnd.randint(1, 6))
            x = random_profile(rnd, net.n)
            assert is_equilibrium_structural(net, x) == is_equilibrium(net, x)


class TestEnumerateEquilibria:
    def test_complete_uniform_two_labels(self):
        net = fixtures.complete_uniform(4)
        assert enumerate_equilibria(net, (0, 1)) == [(0,) * 4, (1,) * 4]

    def test_disjoint_cliques_four(self):
        net = fixtures.disjoint_cliques(clique_size=3, blocks=2)
        assert enumerate_equilibria(net, (0, 1)) == [
            (0, 0, 0, 0, 0, 0),
            (0, 0, 0, 1, 1, 1),
            (1, 1, 1, 0, 0, 0),
            (1, 1, 1, 1, 1, 1),
        ]

    def test_single_node(self):
        net = fixtures.self_loop_nodes(1)
        assert enumerate_equilibria(net, ("a", "b", "c")) == [("a",), ("b",), ("c",)]

    def test_duplicate_labels_rejected(self):
        with pytest.raises(ValueError):
            enumerate_equilibria(fixtures.complete_uniform(3), (0, 0))

    def test_state_budget_refusal(self):
        net = fixtures.self_loop_nodes(21)
        with pytest.raises(ValueError, match="state"):
            enumerate_equilibria(net, (0, 1))

    def test_members_all_satisfy_structural_acceptor(self):
        rnd = random.Random(0x97)
        for _ in range(25):
            net = random_network(rnd, rnd.randint(1, 5))
            found = enumerate_equilibria(net, (0, 1, 2))
            for state in found:
                assert is_equilibrium_structural(net, state)


class TestClassify:
    def test_complete_uniform_consensus_certain(self):
        rep = classify(fixtures.complete_uniform(6))
        assert rep.consensus_certain is True
        assert rep.dissensus_witness is None
        assert rep.dissensus_certain is False

    def test_bridged_cliques_witness(self):
        rep = classify(fixtures.bridged_cliques(clique_size=3, cross="1/3"))
        assert rep.consensus_certain is False
        assert rep.dissensus_witness in (frozenset({0, 1, 2}), frozenset({3, 4, 5}))
        # the cross links are decisive here, so full dissensus is not forced
        assert rep.dissensus_certain is False

    def test_isolated_nodes_dissensus_certain(self):
        rep = classify(fixtures.self_loop_nodes(3))
        assert rep.dissensus_certain is True
        assert rep.consensus_certain is False

    def test_half_ties_defer_to_cohesion(self):
        # Only node 1 has decisive out-links, so the decisive subgraph has no
        # globally reachable node -- yet the exact-half rows let opinions
        # cross the formally indecisive links, every equilibrium is a
        # consensus, and runs do reach one.  The decisive criterion must
        # stand down rather than declare dissensus.
        net = InfluenceNetwork.from_rows(
            [
                [F(0), F(1, 2), F(1, 2)],
                [F(1, 3), F(1, 3), F(1, 3)],
                [F(1, 2), F(1, 2), F(0)],
            ]
        )
        rep = classify(net)
        assert rep.consensus_certain is True
        assert rep.dissensus_certain is False
        assert "half_tie_note" in rep.decision_scope
        traj = run(net, (0, 1, 2), RandomSchedule(seed=3))
        assert traj.converged and len(set(traj.terminal)) == 1

    def test_undecided_beyond_bound_with_falsification(self):
        rep = classify(fixtures.complete_uniform(6), cohesion_bound=3, mc_replicas=40, seed=4)
        assert rep.consensus_certain is None
        mc = rep.decision_scope["monte_carlo"]
        assert mc["consensus_observed"] is True
        assert "falsification" in mc["note"]

    def test_flags_agree_with_reachability_decision(self):
        nets = [
            fixtures.complete_uniform(4),
            fixtures.bridged_cliques(clique_size=3, cross="1/3"),
            fixtures.disjoint_cliques(clique_size=3, blocks=2),
            fixtures.self_loop_nodes(3),
            fixtures.directed_ring(4),
            InfluenceNetwork.from_rows(
                [
                    [F(0), F(1, 2), F(1, 2)],
                    [F(1, 3), F(1, 3), F(1, 3)],
                    [F(1, 2), F(1, 2), F(0)],
                ]
            ),
        ]
        for net in nets:
            rep = classify(net)
            reachable, _ = decide_consensus_reachable(net)
            if rep.consensus_certain:
                assert reachable
            if rep.dissensus_certain:
                assert not reachable

    def test_json_round(self):
        rep = classify(fixtures.disjoint_cliques(clique_size=3, blocks=2))
        payload = rep.to_json_dict()
        assert payload["dissensus_witness"] == [1, 2, 3]
        assert payload["dissensus_certain"] is True


class TestBuildUpdateSequence:
    def test_consensus_input_gives_empty_sequence(self):
        net = fixtures.complete_uniform(5)
        schedule, terminal = build_update_sequence(net, (2,) * 5)
        assert schedule == () and terminal == (2,) * 5

    def test_misaligned_node_gets_pulled_over(self):
        net = fixtures.bridged_cliques(clique_size=3, cross="1/3")
        schedule, terminal = build_update_sequence(net, (0, 0, 1, 1, 1, 1))
        assert len(schedule) >= 1
        assert is_equilibrium(net, terminal)

    def test_terminal_always_structural_equilibrium(self):
        rnd = random.Random(0x5E)
        for _ in range(60):
            net = random_network(rnd, rnd.randint(1, 7))
            x0 = random_profile(rnd, net.n)
            schedule, terminal = build_update_sequence(net, x0)
            assert is_equilibrium_structural(net, terminal)

    def test_schedule_replays_to_terminal(self):
        rnd = random.Random(0xAB)
        for _ in range(40):
            net = random_network(rnd, rnd.randint(2, 7))
            x0 = random_profile(rnd, net.n)
            schedule, terminal = build_update_sequence(net, x0)
            traj = run(net, x0, list(schedule)) if schedule else None
            assert (traj.terminal if traj else x0) == terminal

    def test_only_full_set_maximal_forces_consensus(self):
        for n in (3, 5, 8):
            net = fixtures.complete_uniform(n)
            _, terminal = build_update_sequence(net, tuple(range(n)))
            assert len(set(terminal)) == 1


class TestDecideConsensusReachable:
    def test_complete_uniform_reachable_with_certificate(self):
        net = fixtures.complete_uniform(4)
        ok, cert = decide_consensus_reachable(net)
        assert ok and cert is not None
        assert verify_certificate(net, cert)
        assert cert.initial.count(0) == 1
        assert all(v in (-1, 0, 1) for v in cert.initial)

    def test_disjoint_cliques_unreachable(self):
        assert decide_consensus_reachable(fixtures.disjoint_cliques(3, 2)) == (False, None)

    def test_single_node_trivial(self):
        ok, cert = decide_consensus_reachable(fixtures.self_loop_nodes(1))
        assert ok and cert.sequence == () and cert.target_time == 0

    def test_two_frozen_nodes_unreachable(self):
        assert decide_consensus_reachable(fixtures.self_loop_nodes(2)) == (False, None)

    def test_bound_refusal(self):
        with pytest.raises(ValueError, match="bound"):
            decide_consensus_reachable(fixtures.complete_uniform(13), bound=12)

    def test_certificates_are_shortest_nontrivial(self):
        # every certificate replays, and no strict prefix already reaches
        # the all-zero state
        rnd = random.Random(0xCE27)
        for _ in range(20):
            net = random_network(rnd, rnd.randint(2, 5))
            ok, cert = decide_consensus_reachable(net)
            if not ok:
                continue
            assert verify_certificate(net, cert)
            state = list(cert.initial)
            for k, node in enumerate(cert.sequence[:-1]):
                from median_consensus import step

                state = list(step(net, state, node))
                assert set(state) != {0}


class TestCertificates:
    def test_json_roundtrip(self):
        cert = ConsensusCertificate(initial=(-1, 0, 1), sequence=(2, 0), target_time=2)
        back = ConsensusCertificate.from_json_dict(cert.to_json_dict())
        assert back == cert

    def test_target_time_must_match_length(self):
        with pytest.raises(ValueError):
            ConsensusCertificate(initial=(0, 1), sequence=(1,), target_time=5)

    def test_wrong_length_rejected_by_verify(self):
        net = fixtures.complete_uniform(4)
        cert = ConsensusCertificate(initial=(-1, 0, 1), sequence=(), target_time=0)
        assert verify_certificate(net, cert) is False

    def test_non_reaching_sequence_fails(self):
        net = fixtures.complete_uniform(4)
        cert = ConsensusCertificate(initial=(-1, 0, 1, 1), sequence=(0,), target_time=1)
        assert verify_certificate(net, cert) is False

    def test_out_of_range_node_fails(self):
        net = fixtures.complete_uniform(3)
        cert = ConsensusCertificate(initial=(-1, 0, 1), sequence=(9,), target_time=1)
        assert verify_certificate(net, cert) is False


class TestCrossCheck:
    def test_fixture_agreement(self):
        for net in (
            fixtures.complete_uniform(4),
            fixtures.disjoint_cliques(clique_size=3, blocks=2),
            fixtures.directed_ring(4),
            fixtures.self_loop_nodes(3),
        ):
            assert consensus_reachability_cross_check(net)

    def test_bound_refusal(self):
        with pytest.raises(ValueError):
            consensus_reachability_cross_check(fixtures.complete_uniform(8), bound=6)

    def test_random_agreement(self):
        rnd = random.Random(0xAC)
        for _ in range(12):
            net = random_network(rnd, rnd.randint(2, 5))
            assert consensus_reachability_cross_check(net)


class TestOrderNeighborhood:
    """Nudging every opinion by less than half the minimum gap preserves the
    whole trajectory's order structure under the same schedule."""

    def test_perturbed_replay_has_same_rank_pattern(self):
        rnd = random.Random(0x0DD)
        for _ in range(25):
            net = random_network(rnd, rnd.randint(2, 6))
            n = net.n
            base = list(range(n))
            rnd.shuffle(base)
            x0 = tuple(base)  # distinct ints, gap 1
            schedule, terminal = build_update_sequence(net, x0)
            eps = [F(rnd.randint(-4, 4), 10) for _ in range(n)]  # |e| <= 2/5 < 1/2
            perturbed = tuple(v + e for v, e in zip(x0, eps))
            if schedule:
                shaken = run(net, perturbed, list(schedule)).terminal
            else:
                shaken = perturbed
            rank = {v: r for r, v in enumerate(sorted(set(terminal)))}
            shaken_rank = {v: r for r, v in enumerate(sorted(set(shaken)))}
            assert [rank[v] for v in terminal] == [shaken_rank[v] for v in shaken]
