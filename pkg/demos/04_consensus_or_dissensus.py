"""Will a network agree?  Classification, equilibria, and exact decisions.

Three structural verdicts:
  - if the whole node set is the only maximal cohesive set, every run ends
    in consensus;
  - a nontrivial maximal cohesive set sustains dissent from separated
    starting opinions forever;
  - if the decisive subgraph has no globally reachable node, dissensus is
    guaranteed from any all-distinct start.
For small networks the consensus-reachability question is decided exactly by
searching ternary {-1, 0, +1} states, and a positive answer comes with a
replayable certificate.
"""

from median_consensus import (
    build_update_sequence,
    classify,
    decide_consensus_reachable,
    enumerate_equilibria,
    fixtures,
    verify_certificate,
)

NETS = {
    "complete uniform n=6": fixtures.complete_uniform(6),
    "bridged cliques": fixtures.bridged_cliques(clique_size=3, cross="1/3"),
    "disjoint cliques": fixtures.disjoint_cliques(clique_size=3, blocks=2),
    "isolated self-loops": fixtures.self_loop_nodes(3),
}

for name, net in NETS.items():
    rep = classify(net)
    verdict = ("consensus certain" if rep.consensus_certain
               else "dissensus certain" if rep.dissensus_certain
               else "dissensus sustainable")
    print(f"{name:24s} -> {verdict}")
    if rep.dissensus_witness:
        print(f"{'':24s}    witness block: {sorted(i + 1 for i in rep.dissensus_witness)}")
print()

# all equilibria over two labels, by exhaustive fixed-point check
net = fixtures.disjoint_cliques(clique_size=3, blocks=2)
print("two-label equilibria of the disjoint cliques:")
for state in enumerate_equilibria(net, (0, 1)):
    print("  ", state)
print()

# a deterministic update sequence that provably reaches an equilibrium
schedule, terminal = build_update_sequence(fixtures.complete_uniform(5), (0, 1, 2, 3, 4))
print("constructive schedule on complete n=5:",
      [i + 1 for i in schedule], "->", terminal)
print()

# the exact decision, with certificate
for name in ("complete uniform n=6", "disjoint cliques"):
    net = NETS[name]
    reachable, cert = decide_consensus_reachable(net)
    print(f"consensus reachable on {name}: {reachable}")
    if cert is not None:
        print(f"  certificate: start {cert.initial}, update "
              f"{[i + 1 for i in cert.sequence]}, all-zero at t={cert.target_time}, "
              f"verified: {verify_certificate(net, cert)}")
