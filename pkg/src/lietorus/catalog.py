"""Ready-made algebras and automorphism tuples used by the examples and CLI."""

from __future__ import annotations

from .algebra import LieAlgebra
from .autos import AutTuple, conjugation_automorphism, diagram_automorphism, identity_automorphism
from .chevalley import chevalley_basis, orthogonal_algebra
from .field import FieldContext
from .rootsys import RootSystemType

# the B3 example lives in o(f) for f = diag(J_3, Id_4); Q(i) leaves room for the
# order-4 scalars that appear when twisting by torus automorphisms
B3_CONDUCTOR = 4


def _diag(*entries) -> list[list[int]]:
    n = len(entries)
    return [[entries[i] if i == j else 0 for j in range(n)] for i in range(n)]


def b3_gram() -> list[list[int]]:
    g = _diag(0, 1, 0, 1, 1, 1, 1)
    g[0][2] = g[2][0] = 1
    return g


B3_D = (
    _diag(1, 1, 1, -1, 1, 1, -1),
    _diag(1, 1, 1, 1, -1, 1, -1),
    _diag(1, 1, 1, 1, 1, -1, -1),
)
B3_TWIST = _diag(-1, 1, -1, 1, 1, 1, 1)


def b3_algebra() -> LieAlgebra:
    return orthogonal_algebra(b3_gram(), FieldContext(B3_CONDUCTOR))


def b3_tuple(s: LieAlgebra | None = None) -> AutTuple:
    s = s or b3_algebra()
    return AutTuple([conjugation_automorphism(s, d) for d in B3_D])


def b3_cartan(s: LieAlgebra):
    """k(e11 - e33)."""
    return s.span([s.vector_of(_diag(1, 0, -1, 0, 0, 0, 0))])


# nontrivial diagram symmetries, as permutations of the simple roots (Bourbaki order)
DIAGRAM_CASES = {
    "A2": ("A2", (1, 0)),
    "A3": ("A3", (2, 1, 0)),
    "A4": ("A4", (3, 2, 1, 0)),
    "D4": ("D4", (0, 1, 3, 2)),
    "D4-3": ("D4", (2, 1, 3, 0)),
    "E6": ("E6", (5, 1, 4, 3, 2, 0)),
}


def diagram_tuple(name: str):
    """(s, (sigma,)) for a named diagram automorphism.

    The field is enlarged to Q(zeta_k) for the order k of the symmetry, so
    that the eigenvalues of sigma are available.
    """
    family, perm = DIAGRAM_CASES[name]
    s, ep = chevalley_basis(family)
    s = s.over(FieldContext(_perm_order(perm)))
    return s, AutTuple([diagram_automorphism(s, ep, perm)])


def _perm_order(perm) -> int:
    k, cur = 1, list(perm)
    while cur != list(range(len(perm))):
        cur = [perm[i] for i in cur]
        k += 1
    return k


def untwisted_tuple(t: RootSystemType | str, n: int = 1):
    s, _ = chevalley_basis(t)
    return s, AutTuple([identity_automorphism(s)] * n)
