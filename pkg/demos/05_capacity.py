# %% [markdown]
# # How much does a bigger mesh buy?
#
# Corner-to-corner lattice paths grow as C(2n, n).  Spread over the chip area
# and the time a wave needs to cross it, that gives the functional
# throughput.

# %%
from ringsim.combinatorics import functional_throughput

for n in (3, 5, 10, 50):
    r = functional_throughput(n, 100e-6, 1e4)
    print(
        f"n={n:>2}  corner paths={r.corner_paths:.3e}  area={r.area_m2 * 1e6:.3g} mm^2  "
        f"time={r.time_s * 1e6:.3g} us  throughput={r.throughput:.3e} /(m^2 s)"
    )
