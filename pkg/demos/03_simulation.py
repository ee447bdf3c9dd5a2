"""Running the dynamics: one agent per tick moves to its weighted median.

Each tick picks one agent uniformly at random; the agent recomputes the
weighted median of the whole profile under its own weight row and adopts the
median value closest to its current opinion.  No new opinions are ever
created, and every run settles into an equilibrium in finite time.
"""

import numpy as np

from median_consensus import (
    GridUniform,
    LabelUniform,
    RandomSchedule,
    ensemble,
    fixtures,
    is_equilibrium,
    run,
)

net = fixtures.lattice(5, 5)
rng = np.random.default_rng(12)
x0 = GridUniform(points=11).draw(rng, net.n)

traj = run(net, x0, RandomSchedule(seed=7))
print(f"5x5 lattice from {len(set(x0))} distinct grid opinions")
print(f"converged: {traj.converged} after {traj.steps_used} ticks "
      f"({len(traj.steps)} actual opinion changes)")
print(f"terminal has {len(set(traj.terminal))} distinct opinions")
print("terminal really is a fixed point:", is_equilibrium(net, traj.terminal))
print()

# the trajectory is replayable: (time, node, old, new) records are complete
assert traj.replay() == traj.terminal
t, node, old, new = traj.steps[0]
print(f"first change: t={t}, node {node + 1}: {old} -> {new}")
print()

# same seed, same run -- bit for bit
again = run(net, x0, RandomSchedule(seed=7))
print("identical rerun with the same seed:", again == traj)
print()

# ensembles aggregate many independent seeded replicas (and use all cores)
report = ensemble(net, LabelUniform(k=4), replicas=200, seed=99)
print(f"ensemble of {report.replicas} replicas from 4-label initial states:")
print(f"  converged {report.converged_count}, consensus fraction "
      f"{report.consensus_fraction:.2f}, steps mean {report.steps_mean:.0f} "
      f"(min {report.steps_min}, max {report.steps_max})")
print("  most common terminal patterns:")
for pattern, count in sorted(report.census.items(), key=lambda kv: -kv[1])[:3]:
    distinct = len(set(pattern.split(",")))
    print(f"    {count:4d} runs ended with {distinct} opinion cluster(s)")
