# %% [markdown]
# # Spin-wave dispersion of the delay lines
#
# Surface waves rise from sqrt(fH (fH + fM)) toward fH + fM/2; backward volume
# waves fall from the same start toward fH.  The phase a line adds at a
# given frequency is k(f) times its length.

# %%
import numpy as np

from ringsim.dispersion import BVMSW, YIG_DELAY_LINE_1, YIG_DELAY_LINE_2, band_limits, frequency_at, phase_over_length

for film in (YIG_DELAY_LINE_1, YIG_DELAY_LINE_2):
    lo, hi = band_limits(film)
    print(f"d0 = {film.d0 * 1e6:.1f} um: MSSW band {lo:.4f}..{hi:.4f} GHz")

kd = np.array([1e-3, 0.1, 0.5, 1.0, 3.0])
k = kd / YIG_DELAY_LINE_1.d0
print("kd0  ", kd)
print("MSSW ", np.round(frequency_at(YIG_DELAY_LINE_1, k), 4))
print("BVMSW", np.round(frequency_at(YIG_DELAY_LINE_1.with_geometry(BVMSW), k), 4))

# %% phase accumulated over 1 mm at a few frequencies
for f in (2.5, 2.8, 3.1):
    print(f"{f} GHz over 1 mm: {phase_over_length(YIG_DELAY_LINE_1, f, 1e-3).pi_units:.3f}pi (mod 2pi)")
