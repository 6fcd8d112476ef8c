# %% [markdown]
# # Factoring with a phase chain
#
# Block i's upper line carries pi*log10(p_i).  Setting the output phase to
# 2pi - pi*log10(N) makes exactly the route whose upper lines multiply to N
# oscillate, so the sensors on the upper lines read the factors.

# %%
from ringsim.compiler import build_factorization_device, factorize_detail

device = build_factorization_device([3, 5, 7, 11, 13])

for n in (15, 1001, 15015, 107):
    res = factorize_detail(device, n)
    top = "".join("█" if b else "·" for b in res.sensors[0])
    bottom = "".join("█" if b else "·" for b in res.sensors[1])
    answer = " × ".join(map(str, sorted(res.factors))) if res.factors else "none"
    print(f"N = {n:>5}  psi = {res.psi.pi_units:.4f}pi  {top} / {bottom}  -> {answer}")

# %% [markdown]
# Phases live on a circle, so log10 values two apart look the same to the
# device.  150 and 15015 share a phase; the decoder checks the product and
# drops the alias.

# %%
res = factorize_detail(device, 150)
print("150:", res.factors, "aliases rejected:", len(res.aliases))
