"""
Left, right and two-sided p-cells and their cell modules.

The preorders are generated by generator products: every h in the Hecke
algebra is a Z[v, v^-1]-combination of products of the b_s, so the
transitive closure of the edges "pkl_x occurs in b_s pkl_y" (resp.
"pkl_y b_s") is the preorder "pkl_x occurs in h pkl_y for some h"
(resp. "pkl_y h") used to define p-cells.

Edges point downwards: y -> x means x <= y. The identity is the top of
every preorder and w0 the bottom.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Iterator, Mapping, Sequence

import networkx as nx
import numpy as np

from .canonical import CanonicalBasisTable
from .coxeter import CoxeterSystem
from .laurent import LaurentPoly, ZERO, ONE, V

__all__ = [
    "CellDecomposition", "CellModule",
    "preorder_graph", "cells", "decompose", "cell_module", "subquotient_module",
    "exact_matmul",
]

SIDES = ("left", "right", "two-sided")


def preorder_graph(table: CanonicalBasisTable, side: str) -> dict[int, set[int]]:
    """Adjacency y -> {x != y : pkl_x occurs in b_s pkl_y (left) / pkl_y b_s (right)}."""
    if side not in SIDES:
        raise ValueError(f"side must be one of {SIDES}")
    table.ensure_validated()
    W = table.system
    graph: dict[int, set[int]] = {y: set() for y in range(W.order)}
    sides = ("left", "right") if side == "two-sided" else (side,)
    for sd in sides:
        for y in range(W.order):
            for s in range(W.rank):
                graph[y].update(table.generator_product(s, y, sd))
    for y in graph:
        graph[y].discard(y)
    return graph


@dataclass(eq=False)
class CellDecomposition:
    """
    Cells as strongly connected components, with their condensation order.

    `edges` is the transitively reduced condensation: (i, j) means cell j
    lies strictly below cell i. `below[i]` is a bitset of every cell <= i.
    """
    system: CoxeterSystem
    side: str
    cells: list[tuple[int, ...]]
    cell_of: list[int]
    edges: set[tuple[int, int]]
    below: list[int] = field(repr=False)

    def __len__(self):
        return len(self.cells)

    def leq(self, i: int, j: int) -> bool:
        """Cell i <= cell j."""
        return bool(self.below[j] >> i & 1)

    def element_leq(self, x: int, y: int) -> bool:
        return self.leq(self.cell_of[x], self.cell_of[y])

    def same_cell(self, x: int, y: int) -> bool:
        return self.cell_of[x] == self.cell_of[y]

    def cell_containing(self, x: int) -> tuple[int, ...]:
        return self.cells[self.cell_of[x]]

    def as_sets(self) -> set[frozenset[int]]:
        return {frozenset(c) for c in self.cells}

    def to_json(self) -> dict:
        W = self.system
        return {
            "side": self.side,
            "cells": [[W.name(w) for w in c] for c in self.cells],
            "condensation_edges": sorted([i, j] for i, j in self.edges),
        }

    def to_dot(self) -> str:
        W = self.system
        lines = [f'digraph "{self.side}_cells" {{', "  rankdir=TB;", "  node [shape=box];"]
        for i, c in enumerate(self.cells):
            label = ", ".join(W.name(w) for w in c)
            if len(label) > 60:
                label = label[:57] + "..."
            lines.append(f'  c{i} [label="{i}: {label}"];')
        for i, j in sorted(self.edges):
            lines.append(f"  c{i} -> c{j};")
        lines.append("}")
        return "\n".join(lines) + "\n"


def decompose(system: CoxeterSystem, graph: Mapping[int, Iterable[int]], side: str) -> CellDecomposition:
    """Condense an arbitrary preorder graph on the elements of `system`."""
    G = nx.DiGraph()
    G.add_nodes_from(range(system.order))
    G.add_edges_from((y, x) for y, xs in graph.items() for x in xs if x != y)
    comps = sorted((tuple(sorted(c)) for c in nx.strongly_connected_components(G)), key=lambda c: c[0])
    cell_of = [0] * system.order
    for i, c in enumerate(comps):
        for w in c:
            cell_of[w] = i
    D = nx.DiGraph()
    D.add_nodes_from(range(len(comps)))
    D.add_edges_from((cell_of[y], cell_of[x]) for y, x in G.edges if cell_of[y] != cell_of[x])
    below = [0] * len(comps)
    for i in reversed(list(nx.topological_sort(D))):
        mask = 1 << i
        for j in D.successors(i):
            mask |= below[j]
        below[i] = mask
    reduced = nx.transitive_reduction(D)
    return CellDecomposition(system, side, comps, cell_of, set(reduced.edges), below)


def cells(table: CanonicalBasisTable, side: str) -> CellDecomposition:
    return decompose(table.system, preorder_graph(table, side), side)


def exact_matmul(A: np.ndarray, B: np.ndarray) -> np.ndarray:
    """Integer matrix product that falls back to Python ints when int64 could overflow."""
    if A.dtype == np.int64 and B.dtype == np.int64 and A.size and B.size:
        bound = int(np.abs(A).max()) * int(np.abs(B).max()) * A.shape[1]
        if bound < 2**62:
            return A @ B
    return np.dot(A.astype(object), B.astype(object))


def _to_int64(M: np.ndarray) -> np.ndarray:
    """Downcast an exact object array to int64 when every entry is a small integer."""
    if (M.dtype == object and M.size and all(int(x) == x for x in M.flat)
            and max(abs(int(x)) for x in M.flat) < 2**62):
        return M.astype(np.int64)
    return M


@dataclass(eq=False)
class CellModule:
    """
    A subquotient of the regular module spanned by the pkl basis on `basis`.

    `actions[s][i][j]` is the coefficient of pkl_{basis[i]} in
    b_s * pkl_{basis[j]} (left modules) or pkl_{basis[j]} * b_s (right
    modules), i.e. matrices act on coordinate columns. Terms landing
    outside the basis are recorded in `discarded` as
    (s, source, target, coefficient).
    """
    table: CanonicalBasisTable
    basis: tuple[int, ...]
    side: str
    actions: list[list[list[LaurentPoly]]]
    discarded: list[tuple[int, int, int, LaurentPoly]]

    @property
    def system(self) -> CoxeterSystem:
        return self.table.system

    @property
    def dim(self) -> int:
        return len(self.basis)

    @cached_property
    def position(self) -> dict[int, int]:
        return {x: i for i, x in enumerate(self.basis)}

    def generator_matrix_at_one(self, s: int) -> np.ndarray:
        return np.array([[c.eval_at_one() for c in row] for row in self.actions[s]], dtype=np.int64).reshape(
            self.dim, self.dim)

    def standard_matrix(self, s: int) -> list[list[LaurentPoly]]:
        """Action of H_s = b_s - v."""
        d = self.dim
        B = self.actions[s]
        return [[B[i][j] - (V if i == j else ZERO) for j in range(d)] for i in range(d)]

    def check_relations(self) -> bool:
        """Quadratic and braid relations of the H_s, as exact matrix identities."""
        d = self.dim
        W = self.system
        ident = _lp_identity(d)
        H = [self.standard_matrix(s) for s in range(W.rank)]
        quad = LaurentPoly({-1: 1, 1: -1})
        for s in range(W.rank):
            lhs = _lp_matmul(H[s], H[s])
            rhs = _lp_add(_lp_scale(H[s], quad), ident)
            if lhs != rhs:
                return False
        m = W.coxeter_matrix
        for s in range(W.rank):
            for t in range(s + 1, W.rank):
                a, b = ident, ident
                for k in range(m[s][t]):
                    a = _lp_matmul(a, H[s] if k % 2 == 0 else H[t])
                    b = _lp_matmul(b, H[t] if k % 2 == 0 else H[s])
                if a != b:
                    return False
        return True

    # -- specialization at v = 1 -------------------------------------------------

    def iter_standard_action(self) -> Iterator[tuple[int, np.ndarray]]:
        """
        Yield (w, matrix of H_w at v = 1) for every w in index order.

        At v = 1 these matrices form a representation of W itself. Only
        one length level is kept in memory at a time.
        """
        W = self.system
        gens = [self.generator_matrix_at_one(s) - np.eye(self.dim, dtype=np.int64) for s in range(W.rank)]
        prev: dict[int, np.ndarray] = {}
        cur: dict[int, np.ndarray] = {0: np.eye(self.dim, dtype=np.int64)}
        level = 0
        yield 0, cur[0]
        for w in range(1, W.order):
            if W.length[w] != level + 1 and W.length[w] != level:
                raise AssertionError("elements are not sorted by length")
            if W.length[w] > level:
                prev, cur, level = cur, {}, W.length[w]
            if self.side == "left":
                # H_w = H_s H_{sw}: act by H_{sw} first
                s = W.words[w][0]
                M = _to_int64(exact_matmul(gens[s], prev[W.lmul[s][w]]))
            else:
                # right action of H_w = H_{ws} H_s: apply H_{ws} first, then H_s
                s = W.words[w][-1]
                M = _to_int64(exact_matmul(gens[s], prev[W.rmul[s][w]]))
            cur[w] = M
            yield w, M

    def combinations_at_one(self, coefficients: Mapping[object, Mapping[int, object]]) -> dict[object, np.ndarray]:
        """
        Exact matrices of sum_y c_y H_y at v = 1 for several coefficient maps.

        Coefficients may be ints or Fractions; results are int64 or object
        arrays accordingly.
        """
        wanted: dict[int, list[tuple[object, object]]] = {}
        for key, coeffs in coefficients.items():
            for y, c in coeffs.items():
                if c:
                    wanted.setdefault(y, []).append((key, c))
        acc: dict[object, np.ndarray] = {key: np.zeros((self.dim, self.dim), dtype=object) for key in coefficients}
        for w, M in self.iter_standard_action():
            for key, c in wanted.get(w, ()):
                acc[key] = acc[key] + M.astype(object) * c
        return {key: _to_int64(M) for key, M in acc.items()}

    def pkl_actions_at_one(self, elements: Iterable[int]) -> dict[int, np.ndarray]:
        """Exact integer matrices of pkl_x at v = 1 for each requested x."""
        table = self.table
        return self.combinations_at_one(
            {x: {y: f.eval_at_one() for y, f in table.std(x).items()} for x in elements})

    def to_json(self) -> dict:
        W = self.system
        return {
            "side": self.side,
            "basis": [W.name(x) for x in self.basis],
            "actions": {
                W.labels[s]: [[str(c) for c in row] for row in self.actions[s]] for s in range(W.rank)
            },
            "discarded": [[W.labels[s], W.name(x), W.name(z), str(c)] for s, x, z, c in self.discarded],
        }


def subquotient_module(basis: Iterable[int], table: CanonicalBasisTable, side: str = "left") -> CellModule:
    """
    The module with basis `basis`, where products leaving the basis are dropped.

    This is only a module when the complement of `basis` inside its upward
    closure is an ideal for the chosen side, as for cells, two-sided cells
    and sets of the form {x : x >= J}.
    """
    if side not in ("left", "right"):
        raise ValueError("module side must be 'left' or 'right'")
    table.ensure_validated()
    W = table.system
    basis = tuple(basis)
    pos = {x: i for i, x in enumerate(basis)}
    d = len(basis)
    actions = []
    discarded = []
    for s in range(W.rank):
        M = [[ZERO] * d for _ in range(d)]
        for j, y in enumerate(basis):
            for z, c in sorted(table.generator_product(s, y, side).items()):
                i = pos.get(z)
                if i is None:
                    discarded.append((s, y, z, c))
                else:
                    M[i][j] = c
        actions.append(M)
    return CellModule(table, basis, side, actions, discarded)


def cell_module(cell: Iterable[int], table: CanonicalBasisTable, side: str = "left") -> CellModule:
    """Cell module of a left (or right) cell, basis in system order."""
    return subquotient_module(sorted(cell), table, side)


# -- tiny LaurentPoly matrix helpers ---------------------------------------------

def _lp_identity(d: int) -> list[list[LaurentPoly]]:
    return [[ONE if i == j else ZERO for j in range(d)] for i in range(d)]


def _lp_matmul(A: Sequence[Sequence[LaurentPoly]], B: Sequence[Sequence[LaurentPoly]]) -> list[list[LaurentPoly]]:
    d, k, e = len(A), len(B), len(B[0]) if B else 0
    out = []
    for i in range(d):
        row = []
        for j in range(e):
            acc = ZERO
            for t in range(k):
                a = A[i][t]
                if a:
                    b = B[t][j]
                    if b:
                        acc = acc + a * b
            row.append(acc)
        out.append(row)
    return out


def _lp_add(A, B):
    return [[a + b for a, b in zip(ra, rb)] for ra, rb in zip(A, B)]


def _lp_scale(A, c: LaurentPoly):
    return [[a * c for a in row] for row in A]
