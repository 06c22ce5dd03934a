"""Sweep f_lambda through the B_tau cones and print where each verdict flips."""
from fractions import Fraction as F

from blenders.quartics import btau_membership, f_lambda

TAUS = [F(-1, 3), F(-1, 4), F(-1, 6), F(0)]

print("lambda  " + "  ".join(f"tau={t!s:>5}" for t in TAUS))
for k in range(-8, 9):
    lam = F(k, 4)
    p = f_lambda(lam)
    codes = [btau_membership(p, t).verdict.code for t in TAUS]
    print(f"{lam!s:>6}  " + "  ".join(f"{c:>9}" for c in codes))
