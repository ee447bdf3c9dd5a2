"""Why no fast classifier exists: consensus reachability encodes NAE3SAT.

Every monotone not-all-equal 3-SAT instance maps to a gadget network (one
sink, a node pair per variable, a chain node per clause) such that consensus
is reachable on the gadget exactly when the instance is satisfiable.  The
mapping is polynomial, so deciding reachability in general is NP-hard.
Satisfying assignments convert into explicit update-sequence certificates
that zero the whole network in exactly 2n+m ticks.
"""

from median_consensus import (
    brute_force_nae3sat,
    build_svc_graph,
    certificate_from_assignment,
    decide_consensus_reachable,
    parse_instance_text,
    reduction_roundtrip,
    verify_certificate,
)

SAT_TEXT = """\
c one doubled clause, one distinct clause
p nae3sat 3 2
1 1 2
1 2 3
"""

UNSAT_TEXT = """\
c pairwise-inequality triangle: needs three values, has two
p nae3sat 3 3
1 1 2
2 2 3
1 1 3
"""

for label, text in (("satisfiable", SAT_TEXT), ("unsatisfiable", UNSAT_TEXT)):
    inst = parse_instance_text(text)
    n, m = inst.num_vars, len(inst.clauses)
    svc = build_svc_graph(inst)
    print(f"{label} instance: n={n} variables, m={m} clauses")
    print(f"  gadget: {svc.network.n} nodes (= 2n+m+1), sink {svc.sink + 1}, "
          f"variable pairs {[(v + 1, vb + 1) for v, vb in svc.var_nodes]}, "
          f"clause chain {[c + 1 for c in svc.clause_nodes]}")

    assignment = brute_force_nae3sat(inst)
    reachable, _ = decide_consensus_reachable(svc.network, bound=13)
    print(f"  brute-force satisfiable: {assignment is not None}; "
          f"consensus reachable on gadget: {reachable}; "
          f"sides agree: {reduction_roundtrip(inst)}")

    if assignment is not None:
        cert = certificate_from_assignment(svc, assignment)
        print(f"  assignment {assignment} -> certificate: clauses first, then "
              f"variable pairs, all-zero at t={cert.target_time} (= 2n+m = {2 * n + m}), "
              f"verified: {verify_certificate(svc.network, cert)}")
    print()
