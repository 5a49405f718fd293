"""Closed-form primitives for the one-loop quiver and cyclic quivers.

The one-loop (single vertex, single loop) Hall algebra has an explicit
cuspidal basis indexed by closed points of the affine line: the element
attached to a point of degree d at level r weights the partition classes
sitting over that point by prod_{i < l(lambda)} (1 - q^{d i}).  Nilpotent
cyclic quivers carry a single primitive line per level, taking equal
values on all indecomposables of that dimension.
"""

from hallforge import (GF, HallAlgebra, IsoRegistry, cuspidal_space,
                       cyclic_nilpotent_cuspidal, cyclic_quiver, jordan,
                       monic_irreducibles, one_loop_cuspidal_closed_form)

q = 2
registry = IsoRegistry(jordan(), GF.of(q))
hall = HallAlgebra(registry)

print(f"One-loop quiver over GF({q})")
for r in (1, 2, 3):
    space = cuspidal_space(hall, (r,))
    irr = monic_irreducibles(registry.ctx, r)
    points = [(d, pt) for d in range(1, r + 1) if r % d == 0 for pt in irr[d]]
    print(f"  dimension {r}: cuspidal dim {space.dim} "
          f"= #points of degree dividing {r} = {len(points)}")
    for d, pt in points:
        f = one_loop_cuspidal_closed_form(hall, r // d, pt)
        assert hall.is_primitive(f)
        terms = {key[1]: str(v) for key, v in f.terms.items()}
        print(f"    point {pt} (degree {d}): closed form {terms}  [primitive]")
print()

print("Nilpotent cyclic quivers: one primitive line per level")
for n in (2, 3):
    reg = IsoRegistry(cyclic_quiver(n), GF.of(q), nilpotent_only=True)
    h = HallAlgebra(reg)
    for level in (1, 2):
        f = cyclic_nilpotent_cuspidal(h, level)
        indec = [c.key for c in reg.classes((level,) * n) if c.indec]
        print(f"  C_{n}, level {level}: support size {len(f.terms)}, "
              f"value 1 on all {len(indec)} indecomposables")
