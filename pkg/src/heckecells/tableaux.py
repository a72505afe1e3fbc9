"""
Robinson-Schensted, Knuth moves, evacuation, tableau descents, dominance.

Permutations are tuples in one-line notation with values 1..n. The
symmetric group acts as in `coxeter`: right multiplication by s_i swaps
positions i and i+1, left multiplication swaps the values i and i+1.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Iterator, Sequence

from .errors import NotAPartition, NotComparable, ShapeMismatch, SizeMismatch

__all__ = [
    "Partition", "StandardTableau",
    "rs", "rs_inverse", "knuth_class", "knuth_neighbours", "tableau_descents", "evacuation",
    "dominance_leq", "dominance_covers", "partitions", "standard_tableaux", "chain_witness",
    "apply_right", "permutation_length", "render_diagram",
]

Perm = tuple[int, ...]


class Partition(tuple):
    """Weakly decreasing tuple of positive parts; trailing zeros are dropped."""

    def __new__(cls, parts: Iterable[int] = ()):
        parts = [int(p) for p in parts]
        while parts and parts[-1] == 0:
            parts.pop()
        if any(p <= 0 for p in parts) or any(a < b for a, b in zip(parts, parts[1:])):
            raise NotAPartition(f"{parts} is not a weakly decreasing sequence of positive integers")
        return super().__new__(cls, parts)

    @property
    def size(self) -> int:
        return sum(self)

    def part(self, i: int) -> int:
        """The i-th part, 1-based, zero beyond the length."""
        return self[i - 1] if 1 <= i <= len(self) else 0

    def transpose(self) -> Partition:
        return Partition(sum(1 for p in self if p > j) for j in range(self[0] if self else 0))

    def __repr__(self):
        return f"Partition({list(self)})"


@dataclass(frozen=True)
class StandardTableau:
    rows: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        rows = tuple(tuple(r) for r in self.rows if len(r))
        object.__setattr__(self, "rows", rows)
        entries = sorted(x for r in rows for x in r)
        if entries != list(range(1, len(entries) + 1)):
            raise ValueError("entries must be exactly 1..n")
        Partition(len(r) for r in rows)
        for r in rows:
            if any(a >= b for a, b in zip(r, r[1:])):
                raise ValueError(f"row {r} is not increasing")
        for upper, lower in zip(rows, rows[1:]):
            if any(lower[j] <= upper[j] for j in range(len(lower))):
                raise ValueError("columns must increase downwards")

    @property
    def shape(self) -> Partition:
        return Partition(len(r) for r in self.rows)

    @property
    def n(self) -> int:
        return sum(len(r) for r in self.rows)

    def position(self, k: int) -> tuple[int, int]:
        """(row, column), 0-based, of entry k."""
        for i, r in enumerate(self.rows):
            if k in r:
                return i, r.index(k)
        raise KeyError(k)

    def transpose(self) -> StandardTableau:
        if not self.rows:
            return self
        return StandardTableau(tuple(
            tuple(r[j] for r in self.rows if len(r) > j) for j in range(len(self.rows[0]))))

    def to_json(self) -> list[list[int]]:
        return [list(r) for r in self.rows]

    def __str__(self):
        width = len(str(self.n))
        return "\n".join(" ".join(str(x).rjust(width) for x in r) for r in self.rows)


def _as_perm(w) -> Perm:
    if isinstance(w, tuple) and not hasattr(w, "word"):
        return w
    if hasattr(w, "one_line"):
        return tuple(w.one_line)
    return tuple(w)


def rs(w) -> tuple[StandardTableau, StandardTableau]:
    """Row-insertion tableau P and recording tableau Q of a permutation."""
    w = _as_perm(w)
    P: list[list[int]] = []
    Q: list[list[int]] = []
    for step, x in enumerate(w, start=1):
        row = 0
        while True:
            if row == len(P):
                P.append([x])
                Q.append([step])
                break
            r = P[row]
            # first entry larger than x gets bumped
            j = next((j for j, y in enumerate(r) if y > x), None)
            if j is None:
                r.append(x)
                Q[row].append(step)
                break
            r[j], x = x, r[j]
            row += 1
    return StandardTableau(tuple(map(tuple, P))), StandardTableau(tuple(map(tuple, Q)))


def rs_inverse(P: StandardTableau, Q: StandardTableau) -> Perm:
    """The permutation with insertion tableau P and recording tableau Q."""
    if P.shape != Q.shape:
        raise ShapeMismatch(f"shapes {list(P.shape)} and {list(Q.shape)} differ")
    rows = [list(r) for r in P.rows]
    qpos = {k: Q.position(k) for k in range(1, Q.n + 1)}
    out = [0] * P.n
    for step in range(P.n, 0, -1):
        i, j = qpos[step]
        x = rows[i].pop()
        assert j == len(rows[i])
        for r in range(i - 1, -1, -1):
            # largest entry smaller than x is bumped up
            row = rows[r]
            k = max(k for k, y in enumerate(row) if y < x)
            row[k], x = x, row[k]
        out[step - 1] = x
        if not rows[i]:
            rows.pop(i)
    return tuple(out)


def knuth_neighbours(w: Sequence[int]) -> Iterator[Perm]:
    """Permutations one elementary Knuth move away from w."""
    w = tuple(w)
    for k in range(len(w) - 2):
        a, b, c = w[k:k + 3]
        # y x z <-> y z x with x < y < z
        if b < a < c or c < a < b:
            yield w[:k] + (a, c, b) + w[k + 3:]
        # x z y <-> z x y with x < y < z
        if a < c < b or b < c < a:
            yield w[:k] + (b, a, c) + w[k + 3:]


def knuth_class(w) -> set[Perm]:
    w = _as_perm(w)
    seen = {w}
    todo = [w]
    while todo:
        for u in knuth_neighbours(todo.pop()):
            if u not in seen:
                seen.add(u)
                todo.append(u)
    return seen


def tableau_descents(T: StandardTableau) -> set[int]:
    """i such that i+1 lies strictly below and weakly left of i."""
    out = set()
    for i in range(1, T.n):
        r1, c1 = T.position(i)
        r2, c2 = T.position(i + 1)
        if r2 > r1 and c2 <= c1:
            out.add(i)
    return out


def _slide_out_min(rows: list[list[int]]) -> tuple[int, int]:
    """Remove the top-left entry and slide the hole outward; returns the vacated cell."""
    i, j = 0, 0
    while True:
        right = rows[i][j + 1] if j + 1 < len(rows[i]) else None
        below = rows[i + 1][j] if i + 1 < len(rows) and j < len(rows[i + 1]) else None
        if right is None and below is None:
            rows[i].pop()
            if not rows[i]:
                rows.pop()
            return i, j
        if below is None or (right is not None and right < below):
            rows[i][j] = right
            j += 1
        else:
            rows[i][j] = below
            i += 1


def evacuation(T: StandardTableau) -> StandardTableau:
    """Schutzenberger evacuation: entry n+1-k goes where the k-th slide ends."""
    n = T.n
    rows = [list(r) for r in T.rows]
    out = [[0] * len(r) for r in T.rows]
    for k in range(1, n + 1):
        i, j = _slide_out_min(rows)
        out[i][j] = n + 1 - k
    return StandardTableau(tuple(map(tuple, out)))


def _check_same_size(lam: Sequence[int], mu: Sequence[int]):
    if sum(lam) != sum(mu):
        raise SizeMismatch(f"{list(lam)} and {list(mu)} are partitions of different integers")


def dominance_leq(lam: Sequence[int], mu: Sequence[int]) -> bool:
    """lam <= mu: every prefix sum of lam is at most that of mu."""
    _check_same_size(lam, mu)
    a = b = 0
    for k in range(max(len(lam), len(mu))):
        a += lam[k] if k < len(lam) else 0
        b += mu[k] if k < len(mu) else 0
        if a > b:
            return False
    return True


@lru_cache(maxsize=None)
def _partitions(n: int, largest: int) -> tuple[tuple[int, ...], ...]:
    if n == 0:
        return ((),)
    out = []
    for first in range(min(n, largest), 0, -1):
        for rest in _partitions(n - first, first):
            out.append((first,) + rest)
    return tuple(out)


def partitions(n: int) -> list[Partition]:
    """All partitions of n, in reverse lexicographic order."""
    return [Partition(p) for p in _partitions(n, n)]


def dominance_covers(lam: Sequence[int]) -> list[Partition]:
    """
    Partitions covering lam in dominance order.

    Covers are obtained by moving one box from row j to row i < j where
    either j = i + 1 or lam_i = lam_j (Brylawski's description).
    """
    lam = list(lam)
    parts = lam + [0]
    out = set()
    for i in range(len(parts)):
        for j in range(i + 1, len(parts)):
            if not (j == i + 1 or parts[i] == parts[j]):
                continue
            new = parts[:]
            new[i] += 1
            new[j] -= 1
            if all(a >= b for a, b in zip(new, new[1:])) and min(new) >= 0:
                out.add(Partition(new))
    return sorted(out, reverse=True)


def standard_tableaux(shape: Sequence[int]) -> list[StandardTableau]:
    """All standard tableaux of a given shape, by placing n in a corner recursively."""
    shape = Partition(shape)

    def rec(sh: tuple[int, ...]) -> list[list[list[int]]]:
        n = sum(sh)
        if n == 0:
            return [[[] for _ in sh]]
        out = []
        for i, part in enumerate(sh):
            if part and (i + 1 == len(sh) or sh[i + 1] < part):
                smaller = sh[:i] + (part - 1,) + sh[i + 1:]
                for rows in rec(smaller):
                    new = [r[:] for r in rows]
                    new[i].append(n)
                    out.append(new)
        return out

    return sorted((StandardTableau(tuple(map(tuple, rows))) for rows in rec(tuple(shape))),
                  key=lambda t: t.rows)


def apply_right(w: Sequence[int], j: int) -> Perm:
    """w * s_j: swap positions j and j+1 (1-based)."""
    w = list(w)
    w[j - 1], w[j] = w[j], w[j - 1]
    return tuple(w)


def permutation_length(w: Sequence[int]) -> int:
    n = len(w)
    return sum(1 for a in range(n) for b in range(a + 1, n) if w[a] > w[b])


def _reading_word(rows: Sequence[Sequence[int]]) -> Perm:
    """Rows read from bottom to top, each left to right."""
    return tuple(x for r in reversed(rows) for x in r)


def _fill_columns(shape: Sequence[int], first_row: int, last_row: int, start: int, rows: list[list[int]]) -> int:
    """Fill rows first_row..last_row (0-based, inclusive) column by column; returns next free integer."""
    k = start
    width = shape[first_row] if first_row < len(shape) else 0
    for j in range(width):
        for i in range(first_row, last_row + 1):
            if i < len(shape) and j < shape[i]:
                rows[i][j] = k
                k += 1
    return k


def _superstandard(shape: Sequence[int], i: int) -> list[list[int]]:
    """
    Column-superstandard filling of `shape` in three pieces: rows above i,
    rows i and i+1, and the rows below (i is 1-based).
    """
    rows = [[0] * p for p in shape]
    k = 1
    if i > 1:
        k = _fill_columns(shape, 0, i - 2, k, rows)
    k = _fill_columns(shape, i - 1, min(i, len(shape) - 1), k, rows)
    if i + 1 < len(shape):
        k = _fill_columns(shape, i + 1, len(shape) - 1, k, rows)
    assert k == sum(shape) + 1
    return rows


def _shape(w: Sequence[int]) -> Partition:
    return rs(tuple(w))[0].shape


def _witness_case1(mu: Partition, i: int) -> tuple[Perm, int, Partition]:
    nu = list(mu) + [0, 0]
    nu[i - 1] += 1
    nu[i] -= 1
    nu = Partition(nu)
    rows = _superstandard(nu, i)
    y = _reading_word(rows)
    k = sum(nu[:i - 1])
    a = k + nu.part(i) + nu.part(i + 1)
    # swap the last entry of row i with its left neighbour in the reading word
    j = y.index(a - 1) + 1
    assert y[j] == a, "construction invariant: a - 1 and a are adjacent in the reading word"
    x = apply_right(y, j)
    return x, j, nu


def _witness_case2(mu: Partition, i: int) -> tuple[Perm, int, Partition]:
    n = mu.size
    m = max(r for r in range(i + 1, len(mu) + 1) if mu.part(r) == mu.part(i + 1))
    nu = list(mu) + [0]
    if mu.part(i) == mu.part(i + 1):
        nu[i - 1] += 1
    else:
        nu[i] += 1
    nu[m - 1] -= 1
    nu = Partition(nu)
    mt, nt = mu.transpose(), nu.transpose()
    # nu^T < mu^T, and they differ first at a row l where mu^T has the extra box
    l = next(r for r in range(1, max(len(mt), len(nt)) + 1) if mt.part(r) != nt.part(r))
    rows = _superstandard(mt, l)
    y = _reading_word(rows)
    k = sum(mt[:l - 1])
    a = k + mt.part(l) + mt.part(l + 1)
    j = y.index(a - 1) + 1
    assert y[j] == a, "construction invariant: a - 1 and a are adjacent in the reading word"
    # conjugate by w0: x = y w0 and t = w0 s_j w0 = s_{n-j}
    x = tuple(reversed(y))
    return x, n - j, nu


def chain_witness(lam: Sequence[int], mu: Sequence[int], n: int | None = None) -> tuple[Perm, int, Partition]:
    """
    For lam > mu in dominance order, find (x, j, nu) with shape(x) = mu,
    x s_j < x, shape(x s_j) = nu and lam >= nu > mu.

    Shapes are those of the RS insertion tableau. The result is checked
    by direct RS computation before it is returned.
    """
    lam, mu = Partition(lam), Partition(mu)
    if n is not None and (lam.size != n or mu.size != n):
        raise SizeMismatch(f"expected partitions of {n}")
    _check_same_size(lam, mu)
    if lam == mu or not dominance_leq(mu, lam):
        raise NotComparable(f"{list(lam)} does not strictly dominate {list(mu)}")
    i = next(r for r in range(1, len(lam) + 1) if lam.part(r) > mu.part(r))
    if mu.part(i + 1) > mu.part(i + 2):
        x, j, nu = _witness_case1(mu, i)
    else:
        x, j, nu = _witness_case2(mu, i)
    xs = apply_right(x, j)
    ok = (
        _shape(x) == mu
        and _shape(xs) == nu
        and permutation_length(xs) < permutation_length(x)
        and dominance_leq(nu, lam)
        and nu != mu and dominance_leq(mu, nu)
    )
    if not ok:
        raise AssertionError(f"chain witness for {list(lam)} > {list(mu)} failed its post-conditions")
    return x, j, nu


def render_diagram(shape_or_tableau) -> str:
    """Young diagram text art; tableaux show their entries."""
    if isinstance(shape_or_tableau, StandardTableau):
        return str(shape_or_tableau)
    return "\n".join("[]" * p for p in Partition(shape_or_tableau))
