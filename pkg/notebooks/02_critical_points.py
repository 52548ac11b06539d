# %%
# Complete sums mod p^m versus the critical-point bound, for one function.
from padic_charsums.expsums import RationalFunc, clz_check, critical_points

p = 5
f = RationalFunc.from_coeffs([0, 0, 0, 1], [1, 1])  # x^3 / (1 + x)
t, pts = critical_points(f, p)
print("t =", t, "critical points:", [(c.alpha, c.nu) for c in pts])

# %%
for m in range(t + 2, 6):
    for a in range(p):
        if a == p - 1:  # pole of 1/(1+x) mod 5
            continue
        r = clz_check(f, p, m, a)
        print(f"m={m} alpha={a} nu={r.nu} |S|={r.abs_sum:9.4f} bound={r.bound:9.4f}")

# %%
# x^2 at alpha = 0 mod 25 meets the bound with equality
from padic_charsums.expsums import complete_sum

print(complete_sum(RationalFunc.from_coeffs([0, 0, 1], [1]), 5, 2, 0))
