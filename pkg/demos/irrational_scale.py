"""An exact Killing-Yano tensor whose scale is irrational.

Rescaling the metric on the complexified edge gives a generator T with
-T^2 = (1/2) Id on v, so the complex structure J = T/a needs a = sqrt(1/2).
Exact arithmetic keeps it as a surd; approximate mode agrees to rounding.
"""

import numpy as np

from kyform.cli import data_path
from kyform.io import load_algebra
from kyform.ky import ky_space_2step
from kyform.scalars import APPROX
from kyform.structure import extract_complex_structure, is_complex_structure

L = load_algebra(data_path("k2_weighted.json"))
T = ky_space_2step(L).basis[0]
cs = extract_complex_structure(L, T)
print(f"a^2 = {cs.blocks.squares[0]}, a = {cs.blocks.values[0]!s}")
print("exact J:")
for row in cs.J:
    print("  " + "  ".join(f"{str(x):>12}" for x in row))
print(f"J is a bi-invariant complex structure: {bool(is_complex_structure(L, cs.J))}")

Lf = L.with_mode(APPROX)
Jf = extract_complex_structure(Lf, ky_space_2step(Lf).basis[0]).J
exact = np.array([[float(x) for x in row] for row in cs.J])
print(f"max |J_exact - J_approx| = {np.abs(exact - Jf).max():.2e}")
