"""
Diagram automorphisms with one slot
===================================

Each nontrivial symmetry of a Dynkin diagram gives a loop algebra that is a
Lie torus; A2 and A4 produce the non-reduced types BC1 and BC2.
"""

import time

from lietorus import catalog
from lietorus.autos import check_A_conditions

for case in catalog.DIAGRAM_CASES:
    t0 = time.perf_counter()
    s, sigma = catalog.diagram_tuple(case)
    rep = check_A_conditions(s, sigma)
    print(f"{case:5s} order {sigma.orders[0]}  fixed {str(rep.delta_g.type):3s}  "
          f"Delta {str(rep.delta.type):4s}  {rep.relation:24s} passed={rep.passed}  "
          f"({time.perf_counter() - t0:.2f}s)")
