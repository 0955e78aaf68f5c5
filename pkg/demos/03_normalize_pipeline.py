"""Normalize a concrete reversible vector field, end to end.

We build a random polynomial field reversible under both R0 and a second
involution S, push it through the degree-by-degree normalization, and
verify that the result (a) is still reversible under both involutions,
(b) is a genuine conjugation of the input, and (c) is a fixed point of the
normalization.  Finally we linearize a polynomial involution and use the
change of coordinates to flatten a twisted field.
"""

import random
from fractions import Fraction

from revequiv import (
    Poly,
    PolyMap,
    PolyVF,
    R0,
    ResonanceSpec,
    belitskii_normalize,
    check_symmetry,
    conjugate,
    generate_closure,
    linearize_involution,
    real_group_representative,
    sign_assignment,
)

rng = random.Random("demo-normalize")
spec = ResonanceSpec(1, 2)
s = real_group_representative(3)
DEGREE = 4

# reversible fields form a linear subspace; project rough noise onto it by
# the signed average (1/|G|) sum rho(g) * g_# X over the group <R0, S>
group = generate_closure([R0, s])
rho = sign_assignment(group, spec.linear_matrix())


def project_reversible(x):
    acc = PolyVF([Poly()] * 4, x.max_degree)
    for g, sign in zip(group.elements, rho.signs):
        push = conjugate(x, PolyMap.from_linear(g, x.max_degree))
        acc = acc + push.scale(sign)
    return acc.scale(Fraction(1, len(group.elements)))


def random_noise():
    comps = []
    for _ in range(4):
        p = Poly()
        for _ in range(6):
            e = [0, 0, 0, 0]
            for _k in range(rng.randrange(2, DEGREE + 1)):
                e[rng.randrange(4)] += 1
            p = p + Poly.monomial(tuple(e), Fraction(rng.randint(-4, 4), 3))
        comps.append(p)
    return PolyVF(comps, DEGREE)


lin = PolyVF.from_linear(spec.linear_matrix(), DEGREE)
nonlinear = project_reversible(random_noise())
while nonlinear.is_zero():
    nonlinear = project_reversible(random_noise())
x = lin + nonlinear

print("input field (reversible under R0 and S):")
print(x)
assert check_symmetry(x, R0, -1).ok and check_symmetry(x, s, -1).ok

nf, h = belitskii_normalize(x, spec, DEGREE)
print("\nnormal form:")
print(nf)
print("\nstill reversible under R0:", check_symmetry(nf, R0, -1).ok)
print("still reversible under S: ", check_symmetry(nf, s, -1).ok)
print("conjugation is exact:     ", conjugate(x, h) == nf)
nf2, _ = belitskii_normalize(nf, spec, DEGREE)
print("normalization idempotent: ", nf2 == nf)

# --- linearizing a polynomial involution -----------------------------------
g = PolyMap(
    [
        Poly.variable(0) + Poly.monomial((0, 0, 2, 0), Fraction(1, 3)),
        Poly.variable(1),
        Poly.variable(2) + Poly.monomial((1, 1, 0, 0), 1),
        Poly.variable(3),
    ],
    6,
)
phi = g.compose(PolyMap.from_linear(R0, 6)).compose(g.inverse())
hmap = linearize_involution(phi, 6)
back = hmap.compose(phi).compose(hmap.inverse())
print("\npolynomial involution conjugated back to R0:",
      back == PolyMap.from_linear(R0, 6))
