"""Climb a tower, take the limit, and compare two ideals.

A single matrix Phi over Z/9 drives everything.  The cokernels of its
3^n-th powers stabilize after finitely many steps, witnessed by a
literal repeat of the matrix power rather than a heuristic.  The stable
cokernel is a module with a gamma action, whose Fitting ideal in the
variable Y = gamma - 1 has to agree with the ideal of the
characteristic element.  The bridge back to the L-function variable T
is an exact polynomial substitution.

Run:  python3 demos/iwasawa_limits.py
"""

from nclfun.coeffring import CoeffRing, Poly, render_poly_terms
from nclfun.limits import (
    char_element,
    coker_tower,
    fitting_ideal,
    iwasawa_transform,
    kernel_chain_report,
    limit_module,
    verify_mc_commutative,
)

ring = CoeffRing(3, 2)
Phi = [[ring.int_embed(4)]]

print("Phi = [[4]] over Z/9")
print()

tower = coker_tower(ring, Phi)
sizes = [layer.coker_size for layer in tower.layers[:tower.stable_from + 2]]
print(f"cokernel sizes up the tower: {sizes}")
print(f"stable from level {tower.stable_from} "
      f"(power repeat at {tower.repeat_at}, period {tower.period})")
print()

module = limit_module(ring, Phi, tower=tower)
print(f"limit module: rank {module.rank}, size {module.size()}")

fit = fitting_ideal(module)
gens = [render_poly_terms(ring, g.coeffs, var="Y") for g in fit.num_gens]
print("Fitting ideal generators:", "; ".join(gens))

char = char_element(ring, Phi)
print("characteristic element :", render_poly_terms(ring, char.coeffs,
                                                    var="Y"))
print()

# the exact bridge from det(1 - T Phi) in T to the Y side
det_T = Poly.from_ints(ring, [1, -4])
bridged = iwasawa_transform(ring, det_T, 1)
print("det(1 - T Phi)          :", det_T)
print("after the Y substitution:", render_poly_terms(ring, bridged.coeffs,
                                                     var="Y"))
assert bridged == char
print()

out = verify_mc_commutative(ring, Phi, prec=32)
print(f"guarded ideal comparison: ok = {out['ok']} "
      f"(left {out['left']!r}, right {out['right']!r})")
assert out["ok"]

chain = kernel_chain_report(ring, Phi, tower=tower)
print(f"kernel chain: stable from {chain.stable_from}, trace transition "
      f"acts by 3: {chain.trace_is_mult_by_ell}, "
      f"inverse limit certified zero: {chain.vanishing_certified}")
