# %% [markdown]
# # Path finding on a 3x3 delay-line mesh
#
# Input port 1 feeds the top-left cell, outputs leave from the right column.
# Cells are labelled column by column from the bottom-left, so the top row
# reads 3 6 9.

# %%
import math

from ringsim.compiler import build_mesh_problem, solve_shortest
from ringsim.engine import sweep_gain, sweep_phase

# %% phase sweep: how many paths close for each output phase
circuit = build_mesh_problem("example2").circuit
report = sweep_phase(circuit, 0.0, 2 * math.pi, 0.1 * math.pi)
for rec in reversed(report.records):
    if rec.count:
        outs = sorted({r.path.output_port for r in rec.resonant})
        print(f"2pi - psi = {2 - rec.value:.1f}pi: {rec.count} path(s) to outputs {outs}")

# %% [markdown]
# Lowering the gain starves long paths first; the last survivor is the
# shortest path that still closes in phase.

# %%
problem = build_mesh_problem("example3")
ladder = sweep_gain(problem.circuit, problem.gain_levels)
print("gain  paths:", [(int(r.value), r.count) for r in ladder.records])
best = solve_shortest(problem)
print(f"shortest at {best.gain:g} A0: nodes {best.path.path.node_ids}")
print(ladder.record_at(best.gain).sensors.render())

# %% shortest path forced through cells 2, 4 and 6
problem = build_mesh_problem("example4")
best = solve_shortest(problem)
print(f"\nvia {sorted(problem.via_nodes)}: {best.gain:g} A0, nodes {best.path.path.node_ids}")
print(sweep_gain(problem.circuit, [best.gain]).records[0].sensors.render())
