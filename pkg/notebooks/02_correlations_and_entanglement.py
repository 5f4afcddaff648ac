"""
Correlations, mutual information and entanglement
=================================================

Decay of the two-site mutual information and of C^xx_R in the gapless chiral
phase, and the effective central charge from block entropies.
"""

# %%
import matplotlib.pyplot as plt
import numpy as np

from chiralchain import gaussian
from chiralchain.core import ModelParams
from chiralchain.entanglement import central_charge_fit, chord_log, entropy_profile
from chiralchain.spincorr import correlation_profile, decay_exponent

# %% [markdown]
# Profiles at N = 512 for three fall-off rates.  Fits use R in [4, N/8];
# when C^xx_R oscillates only its local maxima (the envelope) are fitted.

# %%
fig, (ax_i, ax_c) = plt.subplots(1, 2, figsize=(9, 3.5))
for alpha in (0.5, 0.8, 1.3):
    state = gaussian.ground_state(ModelParams(0.5, 1.5, 0.5, alpha, 512))
    r, mi, cxx = correlation_profile(state, 64)
    fit_i = decay_exponent(r, mi, (3, 64))
    fit_c = decay_exponent(r, cxx, (3, 64))
    print(f"alpha={alpha}: I_R ~ R^-{fit_i.exponent:.2f}, Cxx_R ~ R^-{fit_c.exponent:.2f}")
    ax_i.loglog(r, mi, label=f"alpha={alpha}")
    ax_c.loglog(r, np.abs(cxx), label=f"alpha={alpha}")
ax_i.set_xlabel("R")
ax_i.set_ylabel("I_R (bits)")
ax_c.set_xlabel("R")
ax_c.set_ylabel("|Cxx_R|")
ax_i.legend()
fig.tight_layout()
fig.savefig("correlation_decay.png", dpi=120)
plt.close(fig)

# %% [markdown]
# Block entropy of the critical transverse-field Ising point grows like
# (c/3) log2 of the chord length with c = 1/2.

# %%
ising = ModelParams(1.0, 0.0, 1.0, 500.0, 512)
ls = np.arange(2, 129)
s = entropy_profile(gaussian.ground_state(ising), ls)
fit = central_charge_fit(ising)
print(f"c_eff = {fit.slope:.4f}, a = {fit.intercept:.4f}")
plt.plot(chord_log(512, ls), s, ".")
plt.xlabel("(1/3) log2[(N/pi) sin(pi l/N)]")
plt.ylabel("S_l (bits)")
plt.savefig("ising_entropy.png", dpi=120)
plt.close()

# %% [markdown]
# c_eff against alpha with and without the DM term.

# %%
alphas = np.linspace(0.5, 3.0, 11)
for d in (0.0, 1.3):
    values = [central_charge_fit(ModelParams(1.0, d, 1.0, a, 512)).slope for a in alphas]
    plt.plot(alphas, values, "o-", label=f"D={d}")
plt.xlabel("alpha")
plt.ylabel("c_eff")
plt.legend()
plt.savefig("ceff.png", dpi=120)
