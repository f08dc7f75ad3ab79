"""From an invertible Killing-Yano tensor back to a complex structure.

The complexified path on three vertices carries a one-dimensional space of
Killing-Yano tensors.  Its generator T is invertible, -T^2 is scalar on the
complement of the center, and normalising T block by block recovers the
bi-invariant complex structure the algebra was built from.
"""

from kyform import graphs
from kyform.ky import is_ky, ky_space_2step
from kyform.scalars import all_zero
from kyform.structure import canonical_form, eigen_blocks, extract_complex_structure

A = graphs.build_complex(graphs.path(3))
L = A.L
space = ky_space_2step(L)
T = space.basis[0]
print(f"dim g = {L.dim}, KY dim = {space.dim}, certified: {bool(is_ky(L, None, T))}")

blocks = eigen_blocks(L, T)
print(f"eigenvalue squares of -T^2 on v: {blocks.squares}")
print(f"block ranks: W = {[W.rank for W in blocks.W]}, [W,W] = {[S.rank for S in blocks.commutators]}")

cs = extract_complex_structure(L, T)
print(f"recovered J equals the native J: {all_zero(cs.J - A.J)}")

cf = canonical_form(L, T)
print(f"canonical form: p = {cf.p}, q = {cf.q}, a^2 = {cf.a_squared}")
print("template (orthonormal basis, center first):")
for row in cf.template:
    print("  " + " ".join(f"{str(x):>3}" for x in row))
