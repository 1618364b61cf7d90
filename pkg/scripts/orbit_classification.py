"""
Generating tuples up to GL_n(Z)
===============================

The normal form diag(1, ..., 1, p) modulo M sorts generating tuples of a
finite abelian group into orbits.  Here it is compared with a brute-force
orbit computation.
"""

import numpy as np

from lietorus.classify import normalize_mod_ideal, oracle_agreement, orbit_representatives

# a single matrix: (1, 0; 0, 2) modulo (5, 5)
nf = normalize_mod_ideal([[1, 0], [0, 2]], (5, 5))
print("P =", nf.P, " p =", nf.p)

# orbit counts against the representatives (tau_1, ..., tau_n^p)
for factors, n in [([5, 5], 2), ([8], 1), ([12], 1), ([4, 2], 2), ([3, 3, 3], 3), ([7], 2)]:
    rep = oracle_agreement(factors, n)
    reps = [r.p for r in orbit_representatives(factors, n)]
    print(f"G = {factors!s:10s} n = {n}: {rep['generating']:6d} generating tuples, "
          f"{rep['orbits']} orbits, p in {reps}, agree = {rep['agree']}")

# all tuples of Z/5 + Z/5 split into exactly two generating orbits
rep = oracle_agreement([5, 5], 2)
print(np.round(rep["generating"] / rep["tuples"], 3), "of all pairs generate")
