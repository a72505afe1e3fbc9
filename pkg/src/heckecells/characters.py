"""
Irreducible characters of symmetric groups (Murnaghan-Nakayama) and of B2.

Characters are stored per conjugacy class. Every character of a Weyl
group is rational-valued, so chi(w^-1) = chi(w) and plain integer sums
give exact inner products.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Mapping, Sequence

from .coxeter import CoxeterSystem
from .errors import UnsupportedType
from .tableaux import Partition, partitions

__all__ = ["CharacterTable", "irreducible_characters", "mn_character", "partition_label"]

MAX_TYPE_A_N = 8


def partition_label(lam: Sequence[int]) -> str:
    return "(" + ",".join(map(str, lam)) + ")"


def _beta_set(lam: Sequence[int], k: int) -> tuple[int, ...]:
    lam = list(lam) + [0] * (k - len(lam))
    return tuple(lam[i] + k - 1 - i for i in range(k))


def _from_beta(beta: Sequence[int]) -> tuple[int, ...]:
    k = len(beta)
    b = sorted(beta, reverse=True)
    return tuple(p for p in (b[i] - (k - 1 - i) for i in range(k)) if p)


@lru_cache(maxsize=None)
def mn_character(lam: tuple[int, ...], rho: tuple[int, ...]) -> int:
    """chi^lam on the class of cycle type rho, by stripping rim hooks of size rho[0]."""
    if sum(lam) != sum(rho):
        raise ValueError("partition sizes differ")
    if not rho:
        return 1
    r, rest = rho[0], rho[1:]
    beta = _beta_set(lam, len(lam))
    occupied = set(beta)
    total = 0
    for b in beta:
        if b - r >= 0 and b - r not in occupied:
            # a rim hook of length r; its height is the number of beads jumped over
            height = sum(1 for c in beta if b - r < c < b)
            new = _from_beta(tuple(c if c != b else b - r for c in beta))
            total += (-1) ** height * mn_character(new, rest)
    return total


def _cycle_type(perm: Sequence[int]) -> tuple[int, ...]:
    n = len(perm)
    seen = [False] * n
    out = []
    for i in range(n):
        if not seen[i]:
            k, j = 0, i
            while not seen[j]:
                seen[j] = True
                j = perm[j] - 1
                k += 1
            out.append(k)
    return tuple(sorted(out, reverse=True))


@dataclass(eq=False)
class CharacterTable:
    system: CoxeterSystem
    names: list[str]
    classes: list[tuple[int, ...]]
    values: dict[str, list[int]]
    class_of: list[int]

    def dim(self, name: str) -> int:
        return self.values[name][self.class_of[0]]

    def value(self, name: str, w: int) -> int:
        return self.values[name][self.class_of[w]]

    def element_values(self, name: str) -> list[int]:
        row = self.values[name]
        return [row[c] for c in self.class_of]

    def inner_product(self, f: Sequence, g: Sequence) -> Fraction:
        """<f, g> for class functions given element-wise (real valued)."""
        return Fraction(sum(a * b for a, b in zip(f, g)), self.system.order)

    def decompose(self, character: Sequence) -> dict[str, int]:
        """Multiplicities of each irreducible in an element-wise character."""
        out = {}
        for name in self.names:
            m = self.inner_product(character, self.element_values(name))
            if m.denominator != 1:
                raise ValueError(f"multiplicity of {name} is not an integer: {m}")
            out[name] = int(m)
        return out

    def is_orthonormal(self) -> bool:
        rows = [self.element_values(nm) for nm in self.names]
        return all(
            self.inner_product(rows[i], rows[j]) == (1 if i == j else 0)
            for i in range(len(rows)) for j in range(len(rows)))

    def to_json(self) -> dict:
        W = self.system
        return {
            "classes": [W.name(c[0]) for c in self.classes],
            "characters": {nm: list(self.values[nm]) for nm in self.names},
        }


def _type_a_table(W: CoxeterSystem) -> CharacterTable:
    n = W.type_a_rank + 1
    types: dict[tuple[int, ...], list[int]] = {}
    for w in range(W.order):
        types.setdefault(_cycle_type(W.one_line(w)), []).append(w)
    classes = sorted((tuple(v) for v in types.values()), key=lambda c: c[0])
    class_types = [_cycle_type(W.one_line(c[0])) for c in classes]
    class_of = [0] * W.order
    for i, c in enumerate(classes):
        for w in c:
            class_of[w] = i
    names, values = [], {}
    for lam in partitions(n):
        nm = partition_label(lam)
        names.append(nm)
        values[nm] = [mn_character(tuple(lam), rho) for rho in class_types]
    return CharacterTable(W, names, classes, values, class_of)


# class representatives as words in the generators s = 1, t = 2 (0-based here)
_B2_REPS = [(), (0,), (1,), (0, 1), (0, 1, 0, 1)]
_B2_VALUES = {
    "triv": [1, 1, 1, 1, 1],
    "sgn": [1, -1, -1, 1, 1],
    "sgn_s": [1, 1, -1, -1, 1],
    "sgn_t": [1, -1, 1, -1, 1],
    "geom": [2, 0, 0, 0, -2],
}


def _b2_table(W: CoxeterSystem) -> CharacterTable:
    reps = [W.from_word(word) for word in _B2_REPS]
    by_rep = {}
    for cls in W.conjugacy_classes():
        for i, r in enumerate(reps):
            if r in cls:
                by_rep[i] = tuple(sorted(cls))
    classes = [by_rep[i] for i in range(len(reps))]
    class_of = [0] * W.order
    for i, c in enumerate(classes):
        for w in c:
            class_of[w] = i
    names = list(_B2_VALUES)
    return CharacterTable(W, names, classes, {k: list(v) for k, v in _B2_VALUES.items()}, class_of)


def _is_b2(W: CoxeterSystem) -> bool:
    return W.rank == 2 and W.coxeter_matrix[0][1] == 4


def irreducible_characters(W: CoxeterSystem) -> CharacterTable:
    """Character table for type A_{n-1} (n <= 8) or B2."""
    if W.is_type_a and W.type_a_rank + 1 <= MAX_TYPE_A_N:
        return _type_a_table(W)
    if _is_b2(W):
        return _b2_table(W)
    raise UnsupportedType(f"no character table for {W.spec.name or 'this system'}; only A1..A7 and B2 are supported")
