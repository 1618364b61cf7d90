"""Lie algebras over cyclotomic fields: constructions and structure theory.

This module gathers the public interface; the implementation lives in
:mod:`lietorus.algebra`, :mod:`lietorus.chevalley` and
:mod:`lietorus.structure`.
"""

from .algebra import LieAlgebra, Subspace
from .chevalley import Epinglage, chevalley_basis, orthogonal_algebra
from .structure import (
    ModuleReport,
    RootDatum,
    SimplicityResult,
    Summand,
    WeightFrame,
    analyze_module,
    cartan_subalgebra,
    is_simple,
    joint_eigenspaces,
    killing_form,
    root_space_decomposition,
)

__all__ = [
    "Epinglage",
    "LieAlgebra",
    "ModuleReport",
    "RootDatum",
    "SimplicityResult",
    "Subspace",
    "Summand",
    "WeightFrame",
    "analyze_module",
    "cartan_subalgebra",
    "chevalley_basis",
    "is_simple",
    "joint_eigenspaces",
    "killing_form",
    "orthogonal_algebra",
    "root_space_decomposition",
]
