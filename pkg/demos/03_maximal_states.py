# %% [markdown]
# # How large can the measure get?
#
# For any observable the measure is bounded by half the spectral span, and the
# bound is reached by an equal superposition of the two extreme eigenvectors.
# Two numerical checks: sample many states and see none exceed the bound, then
# let an optimizer search for the maximum directly.

# %%
import numpy as np

from macrocoherence import mmqs, oracle
from macrocoherence.measure import measure

obs = oracle.random_spectrum(6, seed=4)
print("eigenvalues:", np.round(obs.eigenvalues, 3))
print("half span  :", obs.span() / 2)

psi = mmqs.construct_mmqs(obs)
print("M(maximal) :", measure(psi, obs).m)

# %% [markdown]
# Sampled Hilbert-Schmidt density matrices and Haar-like pure states:

# %%
rep = mmqs.verify_theorem(obs, trials=5000, seed=1)
print(f"largest sampled mixed {rep.max_sampled_mixed:.4f}, pure {rep.max_sampled_pure:.4f}")
print("violations:", rep.bound_violations)

# %% [markdown]
# The optimizer works on the simplex of per-eigenvalue weights.  Interior
# classes end with zero weight, all of it sitting on the two extremes.

# %%
opt = mmqs.maximize_measure(obs, restarts=20, seed=0)
print("best M     :", opt.best_m)
print("weights    :", np.round(opt.weights, 6))
