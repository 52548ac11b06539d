# %% [markdown]
# # A character as an additive phase
#
# On 1 + pZ a primitive character mod p^n is e(a0 log_p(1+pt) / p^n).
# Build one, find a0, and look at both sides for a few t.

# %%
from padic_charsums.characters import UnitPhase, char_construct, char_eval, postnikov_a0
from padic_charsums.padic_core import log1p_series

p, n = 5, 4
chi = char_construct(p, n, 1)
a0 = postnikov_a0(chi).a0
print("a0 =", a0)

# %%
for t in range(6):
    lhs = char_eval(chi, 1 + p * t)
    rhs = UnitPhase(a0 * log1p_series(p * t, p, n), p**n)
    print(t, lhs.fraction, rhs.fraction, lhs == rhs)

# %% [markdown]
# The check above is exact: phases are stored as k / p^n, never as floats.
