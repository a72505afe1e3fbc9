"""
Cells of p-canonical bases of Hecke algebras of finite Coxeter groups.

Typical use:

    >>> from heckecells import build_system, preset, builtin_table, cells
    >>> W = build_system(preset("B2"))
    >>> table = builtin_table(W, p=2).ensure_validated()
    >>> [[W.name(x) for x in c] for c in cells(table, "two-sided").cells]
    [['e'], ['1'], ['2', '12', '21', '121', '212'], ['1212']]
"""

__version__ = "0.1.0"

from .laurent import LaurentPoly
from .coxeter import CartanSpec, CoxeterSystem, build_system, load_cartan, preset
from .hecke import HeckeElement, KLBasisTable, bar_involution, iota, kl_basis, mu_coefficient
from .canonical import CanonicalBasisTable, builtin_table, load_table, structure_coefficients, validate
from .cells import CellDecomposition, CellModule, cell_module, cells, preorder_graph
from .tableaux import (
    Partition, StandardTableau, chain_witness, dominance_leq, evacuation, knuth_class, rs, rs_inverse,
    tableau_descents,
)
from .characters import CharacterTable, irreducible_characters
from .perron import (
    WeightVector, apex, conjecture_check, ej_idempotent, families, pf_analyze, special_module, specialize_action,
)
from .cellular import (
    build_cell_datum, struct_coeff_independence, verify_axioms, verify_orders, verify_property_A,
)

__all__ = [
    "LaurentPoly", "CartanSpec", "CoxeterSystem", "build_system", "load_cartan", "preset",
    "HeckeElement", "KLBasisTable", "bar_involution", "iota", "kl_basis", "mu_coefficient",
    "CanonicalBasisTable", "builtin_table", "load_table", "structure_coefficients", "validate",
    "CellDecomposition", "CellModule", "cell_module", "cells", "preorder_graph",
    "Partition", "StandardTableau", "chain_witness", "dominance_leq", "evacuation", "knuth_class",
    "rs", "rs_inverse", "tableau_descents",
    "CharacterTable", "irreducible_characters",
    "WeightVector", "apex", "conjecture_check", "ej_idempotent", "families", "pf_analyze",
    "special_module", "specialize_action",
    "build_cell_datum", "struct_coeff_independence", "verify_axioms", "verify_orders", "verify_property_A",
]
