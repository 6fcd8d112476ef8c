# %% [markdown]
# # Self-oscillation in an active ring
#
# A ring builds up a signal only when its round-trip gain beats the loss and
# its round-trip phase closes on itself.  First the amplitude picture, then a
# two-path ring where the phase shifter picks which delay line lights up.

# %%
import math

import numpy as np

from ringsim.circuit import two_path_chain
from ringsim.engine import find_resonant_routes, simulate_rounds

# %% amplitude build-up for three detunings at the same small excess gain
g = 1.01
plateau = simulate_rounds(g, 0.0, 50_000).plateau
for detune in (0.0, 0.1 * math.pi, 0.3 * math.pi):
    tr = simulate_rounds(g, detune, 200)
    marks = tr.magnitudes[::25] / plateau
    print(f"detuning {detune / math.pi:.1f}pi:", np.array2string(marks, precision=3))

# %% [markdown]
# One block, two delay lines: 1.7pi on top, 1.0pi below.  The external phase
# decides which one closes the loop.

# %%
ring = two_path_chain([1.7 * math.pi], [1.0 * math.pi])
for psi in (0.3, 1.0, 0.5):
    hits = find_resonant_routes(ring.with_psi(psi * math.pi))
    names = ["upper" if r.route == (0,) else "lower" for r in hits]
    print(f"psi = {psi}pi ->", names or "silent")

# %% three blocks (0.1, 0.3, 1.5 pi upper, straight lower)
chain = two_path_chain([0.1 * math.pi, 0.3 * math.pi, 1.5 * math.pi])
for psi in (0.5, 1.9, 0.2):
    for r in find_resonant_routes(chain.with_psi(psi * math.pi)):
        upper = [i + 1 for i, c in enumerate(r.route) if c == 0]
        print(f"psi = {psi}pi -> upper lines in blocks {upper}, channel f{r.channel}")
