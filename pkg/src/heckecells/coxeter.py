"""
Finite crystallographic Coxeter groups built from Cartan matrices.

Each element is represented by the permutation it induces on the (finite)
root system; the group is enumerated breadth first from the identity, so
element indices are sorted by length and then by the ShortLex order of
their canonical reduced words.

>>> W = build_system(preset("B2"))
>>> [W.name(w) for w in range(W.order)]
['e', '1', '2', '12', '21', '121', '212', '1212']
>>> W.length[W.w0], W.coxeter_matrix[0][1]
(4, 4)
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path
from typing import NamedTuple, Sequence

from .errors import InfiniteGroup, MalformedCartan, UnknownElement

__all__ = [
    "CartanSpec", "CoxeterSystem", "Element", "ElementAttributes",
    "build_system", "preset", "PRESETS", "load_cartan",
]

DEFAULT_ELEMENT_BOUND = 50_000
BRUHAT_BITSET_LIMIT = 1_000

# product a_ij * a_ji  ->  order of s_i s_j
_ORDER_FROM_PRODUCT = {0: 2, 1: 3, 2: 4, 3: 6}


@dataclass(frozen=True)
class CartanSpec:
    labels: tuple[str, ...]
    matrix: tuple[tuple[int, ...], ...]
    # preset name such as "A3" or "B2"; None for custom matrices
    name: str | None = None

    def __post_init__(self):
        object.__setattr__(self, "labels", tuple(str(x) for x in self.labels))
        object.__setattr__(self, "matrix", tuple(tuple(int(a) for a in row) for row in self.matrix))
        self.check()

    @property
    def rank(self) -> int:
        return len(self.labels)

    def check(self):
        r = len(self.labels)
        if len(set(self.labels)) != r:
            raise MalformedCartan("generator labels must be distinct")
        if len(self.matrix) != r or any(len(row) != r for row in self.matrix):
            raise MalformedCartan("Cartan matrix must be square with one row per label")
        for i in range(r):
            if self.matrix[i][i] != 2:
                raise MalformedCartan(f"diagonal entry a[{i}][{i}] must be 2")
            for j in range(r):
                if i == j:
                    continue
                a, b = self.matrix[i][j], self.matrix[j][i]
                if a > 0:
                    raise MalformedCartan(f"off-diagonal entry a[{i}][{j}] = {a} is positive")
                if (a == 0) != (b == 0):
                    raise MalformedCartan(f"a[{i}][{j}] and a[{j}][{i}] must vanish together")
                if a * b >= 4:
                    raise InfiniteGroup(
                        f"a[{i}][{j}]*a[{j}][{i}] = {a * b} gives an element of infinite order")

    def coxeter_matrix(self) -> list[list[int]]:
        r = self.rank
        return [[1 if i == j else _ORDER_FROM_PRODUCT[self.matrix[i][j] * self.matrix[j][i]]
                 for j in range(r)] for i in range(r)]

    def to_json(self) -> dict:
        return {"labels": list(self.labels), "matrix": [list(row) for row in self.matrix]}

    @classmethod
    def from_json(cls, doc: dict, name: str | None = None) -> CartanSpec:
        try:
            return cls(tuple(doc["labels"]), tuple(tuple(r) for r in doc["matrix"]), name or doc.get("name"))
        except (KeyError, TypeError) as exc:
            raise MalformedCartan(f"bad Cartan document: {exc}") from exc


def _type_a(n: int) -> tuple[tuple[int, ...], ...]:
    return tuple(tuple(2 if i == j else (-1 if abs(i - j) == 1 else 0) for j in range(n)) for i in range(n))


PRESETS: dict[str, CartanSpec] = {
    **{f"A{n}": CartanSpec(tuple(str(i + 1) for i in range(n)), _type_a(n), f"A{n}") for n in range(1, 8)},
    "B2": CartanSpec(("1", "2"), ((2, -2), (-1, 2)), "B2"),
    "B3": CartanSpec(("1", "2", "3"), ((2, -1, 0), (-1, 2, -2), (0, -1, 2)), "B3"),
}


def preset(name: str) -> CartanSpec:
    try:
        return PRESETS[name.upper()]
    except KeyError:
        raise MalformedCartan(f"unknown preset {name!r}; choose from {sorted(PRESETS)}") from None


def load_cartan(path: str | Path) -> CartanSpec:
    with open(path) as fh:
        return CartanSpec.from_json(json.load(fh))


class Element(NamedTuple):
    index: int
    word: str


class ElementAttributes(NamedTuple):
    length: int
    left_descents: frozenset[int]
    right_descents: frozenset[int]
    inverse: int
    one_line: tuple[int, ...] | None


@dataclass(eq=False)
class CoxeterSystem:
    """
    An enumerated finite Coxeter group.

    Elements are integers `0..order-1`; index 0 is the identity and
    `w0` is the last index. `rmul[s][w] = w*s` and `lmul[s][w] = s*w`.
    """
    spec: CartanSpec
    words: list[tuple[int, ...]]
    length: list[int]
    rmul: list[list[int]]
    lmul: list[list[int]]
    inverse: list[int]
    n_positive_roots: int
    _bruhat_down: list[int] | None = field(default=None, repr=False)

    # -- basic data -------------------------------------------------------

    @property
    def order(self) -> int:
        return len(self.words)

    @property
    def rank(self) -> int:
        return self.spec.rank

    @property
    def labels(self) -> tuple[str, ...]:
        return self.spec.labels

    @property
    def identity(self) -> int:
        return 0

    @property
    def w0(self) -> int:
        return self.order - 1

    @cached_property
    def coxeter_matrix(self) -> list[list[int]]:
        return self.spec.coxeter_matrix()

    @cached_property
    def type_a_rank(self) -> int | None:
        """`n-1` if this is the standard type A_{n-1} Cartan matrix, else None."""
        if self.spec.matrix == _type_a(self.rank):
            return self.rank
        return None

    @property
    def is_type_a(self) -> bool:
        return self.type_a_rank is not None

    def name(self, w: int) -> str:
        """Digit-string name, e.g. "212"; the identity is "e"."""
        word = self.words[w]
        if not word:
            return "e"
        return "".join(self.labels[i] for i in word)

    def element(self, w: int) -> Element:
        return Element(w, self.name(w))

    @cached_property
    def _by_name(self) -> dict[str, int]:
        return {self.name(w): w for w in range(self.order)}

    def index(self, x) -> int:
        """Resolve an Element, an index, a name or any reduced word to an index."""
        if isinstance(x, Element):
            return x.index
        if isinstance(x, int):
            if not 0 <= x < self.order:
                raise UnknownElement(f"index {x} out of range")
            return x
        if isinstance(x, str):
            if x in self._by_name:
                return self._by_name[x]
            if x in ("", "id", "1_W"):
                return 0
            return self.from_word(self._split_word(x), reduced=True)
        if isinstance(x, (tuple, list)):
            return self.from_word([self._gen_index(g) for g in x], reduced=True)
        raise UnknownElement(f"cannot interpret {x!r} as an element")

    def _gen_index(self, g) -> int:
        if isinstance(g, int) and not isinstance(g, bool) and 0 <= g < self.rank:
            return g
        try:
            return self.labels.index(str(g))
        except ValueError:
            raise UnknownElement(f"unknown generator {g!r}") from None

    def _split_word(self, text: str) -> list[int]:
        if all(len(lab) == 1 for lab in self.labels):
            return [self._gen_index(ch) for ch in text]
        return [self._gen_index(tok) for tok in text.replace(",", " ").split()]

    def from_word(self, word: Sequence[int], reduced: bool = False) -> int:
        w = 0
        for s in word:
            w = self.rmul[s][w]
        if reduced and self.length[w] != len(word):
            raise UnknownElement(f"word {word!r} is not reduced")
        return w

    # -- descents and attributes ------------------------------------------

    def left_descents(self, w: int) -> frozenset[int]:
        lw = self.length[w]
        return frozenset(s for s in range(self.rank) if self.length[self.lmul[s][w]] < lw)

    def right_descents(self, w: int) -> frozenset[int]:
        lw = self.length[w]
        return frozenset(s for s in range(self.rank) if self.length[self.rmul[s][w]] < lw)

    def is_left_descent(self, s: int, w: int) -> bool:
        return self.length[self.lmul[s][w]] < self.length[w]

    def is_right_descent(self, s: int, w: int) -> bool:
        return self.length[self.rmul[s][w]] < self.length[w]

    def multiply(self, x: int, y: int) -> int:
        for s in self.words[y]:
            x = self.rmul[s][x]
        return x

    def attributes(self, w: int) -> ElementAttributes:
        return ElementAttributes(
            self.length[w], self.left_descents(w), self.right_descents(w),
            self.inverse[w], self.one_line(w) if self.is_type_a else None,
        )

    # -- type A ------------------------------------------------------------

    def one_line(self, w: int) -> tuple[int, ...]:
        """One-line notation of w in S_n, with generator i swapping i+1, i+2."""
        n = self.type_a_rank
        if n is None:
            raise ValueError("one-line notation needs a type A system")
        perm = list(range(1, n + 2))
        for s in self.words[w]:
            # right multiplication by s_i swaps positions i, i+1
            perm[s], perm[s + 1] = perm[s + 1], perm[s]
        return tuple(perm)

    @cached_property
    def _by_one_line(self) -> dict[tuple[int, ...], int]:
        return {self.one_line(w): w for w in range(self.order)}

    def from_one_line(self, perm: Sequence[int]) -> int:
        try:
            return self._by_one_line[tuple(perm)]
        except KeyError:
            raise UnknownElement(f"{tuple(perm)} is not a permutation of this system") from None

    # -- Bruhat order -------------------------------------------------------

    def bruhat_leq(self, x: int, y: int) -> bool:
        if self._bruhat_down is not None:
            return bool(self._bruhat_down[y] >> x & 1)
        length, lmul = self.length, self.lmul
        while True:
            if x == y:
                return True
            if length[x] >= length[y]:
                return False
            ly = length[y]
            # pick any left descent s of y and use the lifting property
            for s in range(self.rank):
                sy = lmul[s][y]
                if length[sy] < ly:
                    break
            sx = lmul[s][x]
            if length[sx] < length[x]:
                x = sx
            y = sy

    def bruhat_interval_below(self, y: int) -> list[int]:
        if self._bruhat_down is not None:
            mask = self._bruhat_down[y]
            return [x for x in range(y + 1) if mask >> x & 1]
        return [x for x in range(y + 1) if self.bruhat_leq(x, y)]

    def _materialize_bruhat(self):
        down = [0] * self.order
        down[0] = 1
        for y in range(1, self.order):
            s = self.words[y][0]
            sy = self.lmul[s][y]
            mask = down[sy]
            extra = 0
            m, x = mask, 0
            while m:
                if m & 1:
                    extra |= 1 << self.lmul[s][x]
                m >>= 1
                x += 1
            down[y] = mask | extra
        self._bruhat_down = down

    def conjugacy_classes(self) -> list[list[int]]:
        seen = [-1] * self.order
        classes = []
        for w in range(self.order):
            if seen[w] >= 0:
                continue
            orbit, stack = [w], [w]
            seen[w] = len(classes)
            while stack:
                x = stack.pop()
                for s in range(self.rank):
                    y = self.rmul[s][self.lmul[s][x]]
                    if seen[y] < 0:
                        seen[y] = len(classes)
                        orbit.append(y)
                        stack.append(y)
            classes.append(sorted(orbit))
        return classes


def _root_system(spec: CartanSpec, bound: int):
    """All roots as coefficient tuples in the simple-root basis, plus reflection tables."""
    r = spec.rank
    A = spec.matrix

    def reflect(i, beta):
        # s_i(beta) = beta - <alpha_i^vee, beta> alpha_i
        pairing = sum(A[i][j] * beta[j] for j in range(r))
        if not pairing:
            return beta
        out = list(beta)
        out[i] -= pairing
        return tuple(out)

    simple = [tuple(1 if j == i else 0 for j in range(r)) for i in range(r)]
    roots = list(simple)
    index = {b: k for k, b in enumerate(roots)}
    k = 0
    while k < len(roots):
        beta = roots[k]
        for i in range(r):
            gamma = reflect(i, beta)
            if gamma not in index:
                index[gamma] = len(roots)
                roots.append(gamma)
                if len(roots) > bound:
                    raise InfiniteGroup("root system closure exceeded the configured bound")
        k += 1
    positive = [b for b in roots if all(c >= 0 for c in b)]
    if 2 * len(positive) != len(roots):
        raise MalformedCartan("root closure is not split into positive and negative roots")
    # positive roots get the indices below len(positive)
    allroots = positive + [tuple(-c for c in b) for b in positive]
    index = {b: k for k, b in enumerate(allroots)}
    gens = [tuple(index[reflect(i, b)] for b in allroots) for i in range(r)]
    return allroots, len(positive), gens


def build_system(spec: CartanSpec, bound: int = DEFAULT_ELEMENT_BOUND) -> CoxeterSystem:
    """
    Enumerate the Coxeter group of a Cartan matrix.

    Raises InfiniteGroup if more than `bound` elements (or a comparable
    number of roots) are generated.
    """
    spec.check()
    r = spec.rank
    roots, npos, gens = _root_system(spec, bound=max(4 * bound, 1000))
    nroots = len(roots)
    identity = tuple(range(nroots))

    def right_mul(perm, s):
        # (w s)(beta) = w(s(beta))
        g = gens[s]
        return tuple(perm[g[b]] for b in range(nroots))

    perms = [identity]
    words: list[tuple[int, ...]] = [()]
    index = {identity: 0}
    frontier = [0]
    while frontier:
        nxt = []
        # words of the frontier are in ShortLex order, so first visits are ShortLex-minimal
        for w in frontier:
            for s in range(r):
                q = right_mul(perms[w], s)
                if q in index:
                    continue
                if len(perms) >= bound:
                    raise InfiniteGroup(f"more than {bound} elements enumerated")
                index[q] = len(perms)
                perms.append(q)
                words.append(words[w] + (s,))
                nxt.append(index[q])
        frontier = nxt

    order = len(perms)
    length = [sum(1 for b in range(npos) if p[b] >= npos) for p in perms]
    rmul = [[index[right_mul(perms[w], s)] for w in range(order)] for s in range(r)]
    lmul = [[index[tuple(gens[s][p[b]] for b in range(nroots))] for p in perms] for s in range(r)]
    inverse = [0] * order
    for w, p in enumerate(perms):
        inv = [0] * nroots
        for b, pb in enumerate(p):
            inv[pb] = b
        inverse[w] = index[tuple(inv)]

    W = CoxeterSystem(spec, words, length, rmul, lmul, inverse, npos)
    if order <= BRUHAT_BITSET_LIMIT:
        W._materialize_bruhat()
    return W
