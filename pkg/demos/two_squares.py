"""Decompose a few even symmetric octics as scale * (q1^2 + q2^2)."""
from fractions import Fraction as F

from blenders.waring import EvenSymmetricOctic, WaringError, two_square_decomposition, wtilde_membership

for A, B, C in [(1, 0, 3), (1, -4, 6), (2, 1, 5), (0, 0, 7), (1, 0, -2)]:
    p = EvenSymmetricOctic(F(A), F(B), F(C))
    print(f"(A, B, C) = ({A}, {B}, {C}): {wtilde_membership(p).verdict.name}")
    try:
        d = two_square_decomposition(p)
    except WaringError as exc:
        print(f"  no decomposition: {exc}")
        continue
    print(f"  branch {d.branch}, scale {d.scale}")
    print(f"  q1 = {d.q1}")
    print(f"  q2 = {d.q2}")
    print(f"  verified: {d.verify()}")
