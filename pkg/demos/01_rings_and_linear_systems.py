"""Finite local rings and complete linear-system solving.

A finite commutative local ring has a unique maximal ideal: every element
is either a unit or a zero divisor inside that ideal.  This demo builds a
few such rings, pokes at their arithmetic, and solves a linear system
whose solution set is a coset with four elements -- something that cannot
happen over a field.

Run:  python demos/01_rings_and_linear_systems.py
"""

import numpy as np

from lrpc_rings import Zmod, galois_ring, quotient_ring, solve_linear
from lrpc_rings.errors import NotLocal

# ---------------------------------------------------------------------------
# Z4: the simplest ring with zero divisors

z4 = Zmod(4)
print("ring:", z4.spec_string, "| residue field size q =", z4.q,
      "| size q^upsilon =", z4.size)
three = z4.elem(3)
print("3 + 3 =", three + three, "   3 * 3 =", three * three,
      "   inverse(3) =", three.inverse())
print("is 2 a unit?", z4.elem(2).is_unit(), " (2 generates the maximal ideal)")

# Z6 is not local: it splits as Z2 x Z3 (see the composite-rings demo)
try:
    Zmod(6)
except NotLocal as exc:
    print("Z6 ->", exc)

# ---------------------------------------------------------------------------
# A quotient ring with nilpotents: R = Z4[x]/(x^2)

ring = quotient_ring(2, 2, [0, 0, 1])
print("\nring:", ring.spec_string, "| rank over its Galois subring:",
      ring.gamma, "| size:", ring.size)
xi = ring.from_poly([0, 1])
print("xi^2 =", xi * xi, " (nilpotent)")
print("(1+xi)(1+3xi) =", ring.from_poly([1, 1]) * ring.from_poly([1, 3]))
print("residue of 2+3xi:", ring.from_poly([2, 3]).residue(),
      "(it lies in the maximal ideal <2, xi>)")

# Galois rings GR(p^s, mu) are the local rings with gamma = 1
gr = galois_ring(2, 2, 2)
print("\nring:", gr.spec_string, "| q =", gr.q, "| modulus h =", list(gr.base.h))

# ---------------------------------------------------------------------------
# A 2x2 linear system over Z4[x]/(x^2) with exactly four solutions
#
#   [ 2      xi+1 ] [x1]   [ 0    ]
#   [ xi     2xi+1] [x2] = [ xi+2 ]

e = lambda c0, c1=0: ring.from_poly([c0, c1]).flat
a_mat = np.array([[e(2), e(1, 1)], [e(0, 1), e(1, 2)]])
b_vec = np.array([e(0), e(2, 1)])
solution = solve_linear(ring, a_mat, b_vec)
print("\nsolving the 2x2 system: consistent =", solution.is_consistent)
print("homogeneous kernel generators:", solution.kernel_gens.shape[0])
for x in solution.all_solutions():
    x1, x2 = ring.elem(x[0]), ring.elem(x[1])
    print("   x1 =", x1, "  x2 =", x2)
print("the solution set is a coset of the kernel: particular + span(kernel)")
