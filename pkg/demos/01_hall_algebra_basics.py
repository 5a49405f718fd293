"""Tour of the basic objects: iso-class registries and the Hall algebra.

Everything below is exact: coefficients live in Q(sqrt(q)), automorphism
counts are integers certified by the orbit mass identity, and the Hopf
pairing identity is checked as an equality.
"""

from hallforge import (GF, HallAlgebra, IsoRegistry, kronecker, simple_rep)

q = 2
quiver = kronecker()
ctx = GF.of(q)
registry = IsoRegistry(quiver, ctx)
hall = HallAlgebra(registry)

print(f"Kronecker quiver over GF({q})")
print()

print("Isomorphism classes in dimension (1,1):")
for cls in registry.classes((1, 1)):
    mats = [m.tolist() for m in cls.canon.mats]
    tag = "indecomposable" if cls.indec else "split"
    print(f"  #{cls.index}  matrices {mats}  |Aut| = {cls.aut_order}  {tag}"
          f"  [{cls.pri_class}]")
print()

s1 = registry.identify(simple_rep(quiver, ctx, 0))
s2 = registry.identify(simple_rep(quiver, ctx, 1))

print("[S2] * [S1] (no extensions, only the split class):")
for key, coeff in hall.multiply(hall.basis(s2), hall.basis(s1)):
    print(f"  {coeff}  on class {key}")
print()

print("[S1] * [S2] (every dimension-(1,1) class is an extension):")
for key, coeff in hall.multiply(hall.basis(s1), hall.basis(s2)):
    print(f"  {coeff}  on class {key}")
print()

st = next(c.key for c in registry.classes((1, 1)) if c.indec)
print(f"Coproduct of a regular simple {st}:")
for (u, v), coeff in hall.comultiply(hall.basis(st)):
    print(f"  {coeff}  on {u} (x) {v}")
print()

print("Hopf pairing identity (fg, h) = (f (x) g, Delta h) on a sample:")
f, g = hall.basis(s1), hall.basis(s2)
h = hall.basis(st)
lhs = hall.green_pairing(hall.multiply(f, g), h)
rhs = hall.tensor_pairing(hall.tensor(f, g), hall.comultiply(h))
print(f"  both sides equal {lhs}: {lhs == rhs}")
