"""The connecting map from invertible matrices to torsion classes.

A polynomial matrix whose determinant survives in S presents a torsion
module; the map d sends the matrix to the class of that determinant.
The demo shows d respecting products, collapsing a block triangular
presentation, flattening a cyclic block matrix by hand, and finally
landing on the Fitting ideal of the limit module after the change of
variable.

Run:  python3 demos/connecting_map.py
"""

from nclfun.coeffring import CoeffRing, Poly
from nclfun.relk import (
    block_reduction_check,
    d_connecting,
    verify_d_exactness,
    verify_d_fitting_consistency,
    verify_d_multiplicative,
)

ring = CoeffRing(3, 2)


def P(*ints):
    return Poly.from_ints(ring, list(ints))


alpha = [[P(1, 5), P(0, 1)],
         [P(3), P(2, 0, 1)]]
beta = [[P(2), P(1, 1)],
        [P(0), P(1, 4)]]

cls = d_connecting(ring, alpha)
print("d(alpha) is the class of:", cls.num_gens[0])

out = verify_d_multiplicative(ring, alpha, beta, prec=24)
print(f"d(beta alpha) = d(beta) d(alpha): {out['ok']} "
      f"(determinants equal exactly: {out['det_exact']})")
assert out["ok"]
print()

off = [[P(0, 0, 7), P(1)], [P(2, 2), P(0)]]
out = verify_d_exactness(ring, alpha, beta, off, prec=24)
print("block triangular class splits:", out["ok"])
assert out["ok"]
print()

# the 2-block reduction in full: [[1, -A], [-1, 1]] -> diag(1, 1 - A)
out = block_reduction_check(ring, [[P(0, 4)]], 2)
print(f"cyclic 2-block reduction lands on diag(1, {out['right']}): "
      f"{out['diagonal_exact']}, determinant preserved: {out['ok']}")
assert out["ok"]

out = block_reduction_check(ring, [[P(2, 1), P(0, 1)], [P(1), P(5, 2)]], 4)
print(f"4 blocks of a 2x2 matrix reduce the same way: {out['ok']}")
assert out["ok"]
print()

out = verify_d_fitting_consistency(ring, [[ring.int_embed(4)]], prec=24)
print(f"d(1 - T Phi) carried to the Y side: {out['left']}")
print(f"equals the Fitting ideal of the limit module: {out['ok']}")
assert out["ok"]
