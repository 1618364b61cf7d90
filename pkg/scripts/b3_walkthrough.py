"""
A multiloop Lie torus of type A1 inside B3
==========================================

Three commuting involutions of o(7) give a Z^3-graded algebra whose root
grading comes from the single Cartan element e11 - e33.
"""

from lietorus import catalog
from lietorus.autos import conjugation_automorphism
from lietorus.classify import biiso_fingerprint, certificate_check
from lietorus.rootsys import RootLatticeHom
from lietorus.torus import build_multiloop, make_isotope, verify_lie_torus_axioms

# the algebra, the tuple and the Cartan element
s = catalog.b3_algebra()
sigma = catalog.b3_tuple(s)
h = catalog.b3_cartan(s)
print("dim s =", s.dim, " orders =", sigma.orders, " |<sigma>| =", sigma.group_order)

T = build_multiloop(s, sigma, h)
print("fixed algebra:", T.a_report.fixed_dim, str(T.a_report.delta_g.type))
print("component dims:", T.char_grading.dims())

# every axiom is checked on the finite kernel of the grading
ax = verify_lie_torus_axioms(T)
print({k: v["pass"] if isinstance(v, dict) else v for k, v in ax.items()})

# supports of the root eps1 and of 0, as residues mod 2
print("Lambda_eps1:", sorted(T.residues_of((1,))))
print("Lambda_0   :", sorted(T.residues_of((0,))))

# shifting eps1 by (1,1,1) is admissible
iso = make_isotope(T, RootLatticeHom(3, [(1, 1, 1)]), radius=1)
print("isotope window check:", iso.window_check, iso.feasibility)

# ... and the twisted tuple is sigma composed with conjugation by diag(-1,1,-1,1,1,1,1)
twist = [conjugation_automorphism(s, catalog.B3_TWIST)] * 3
ident = [[1, 0, 0], [0, 1, 0], [0, 0, 1]]
print("isotopy certificate:", certificate_check(T, iso.new_torus, ident, None, "isotopy", twist))

# the two tori are not bi-isomorphic: the fixed-point dimensions of the group elements differ
f1, f2 = biiso_fingerprint(T), biiso_fingerprint(iso.new_torus)
print("fixed dims:", f1.fixed_dims, "vs", f2.fixed_dims)
print("differing invariants:", f1.differences(f2))

# shifting by (1,1,0) leaves an abelian fixed algebra
try:
    make_isotope(T, RootLatticeHom(3, [(1, 1, 0)]))
except Exception as exc:
    print(type(exc).__name__, exc.witness)
