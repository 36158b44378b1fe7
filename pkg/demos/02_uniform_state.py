# %% [markdown]
# # The uniform product state, counted exactly
#
# Every density matrix element of the uniform state equals 2^-n, so the
# distance distribution is a pure counting problem: how many ordered pairs of
# bitstrings differ in popcount by d.  Python integers make the count exact.

# %%
import math

from macrocoherence import analytic, oracle, states

for n in range(1, 9):
    exact = analytic.uniform_measure_sum(n)
    brute = oracle.dense_measure_pure(states.uniform(n), states.magnetization_z(n))
    print(f"n={n}  exact={str(exact):>12s}  = {float(exact):.6f}   brute force {brute:.6f}")

# %% [markdown]
# The frequently quoted closed form does not match the count from n = 2
# onwards, and it grows much faster.  The count itself collapses to
# n C(2n, n) / 4^n, which grows like sqrt(n / pi) rather than settling at a
# constant.

# %%
for n in (2, 4, 8, 16, 64, 256):
    exact = float(analytic.uniform_measure_sum(n))
    closed = analytic.uniform_measure_closed(n)
    print(f"n={n:4d}  count {exact:9.4f}  sqrt(n/pi) {math.sqrt(n / math.pi):9.4f}  closed form {closed:.4g}")
