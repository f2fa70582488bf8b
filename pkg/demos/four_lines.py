"""Four lines in general position in the plane, from section counts to certificates.

Run: python demos/four_lines.py
"""
from quasihyp.bounds import alpha, bound_cor55, bound_prop41, bound_thm54, lambda_d
from quasihyp.certify import certify
from quasihyp.filtration import nu_truncated
from quasihyp.geometry import MonomialModel, h0, linear_form
from quasihyp.lattice import max_theta, product_lattice
from quasihyp.multiplicity import find_fixed_point

model = MonomialModel.projective_space(2, [
    linear_form("x", [1, 0, 0]), linear_form("y", [0, 1, 0]),
    linear_form("z", [0, 0, 1]), linear_form("w", [1, 1, 1])])
L = (4,)

print(f"h0(O(4)) = {h0(model, L)}")
print(f"alpha(O(4); x) = {alpha(model, L, 0)}")

est = nu_truncated(model, L, max_weight=4)
print(f"upper estimate for nu over weights <= 4: {est.value} at I={est.witness.I}, a={est.witness.a}")

low = bound_prop41(model, L, 2)
print(f"certified lower bound from pairwise intersections: {low.value}"
      f" (hypotheses: {[h.status for h in low.hypotheses]})")

form, cone = product_lattice((2,))
H = form.basis_class("H")
theta = max_theta(form, cone, 4 * H, [H] * 4).value
print(f"largest theta with O(4) - 2 theta H nef: {theta}")
print(f"theta bound {bound_thm54(form, 4 * H, [H] * 4, theta).value}"
      f" vs lambda_2 * theta = {lambda_d(2)} * {theta} = {bound_cor55(2, theta).value}")

fp = find_fixed_point(form, [H] * 4)
print(f"simplex fixed point {[str(t) for t in fp.point]}, multiplicities {fp.multiplicities}")

for theorem in ("3.3", "2.1", "1.1", "1.2", "2.2"):
    cert = certify(theorem, model, m=1, delta=2)
    print(f"{theorem:>4}: {cert.verdict:<28} chain {list(cert.rendered_chain)}")
