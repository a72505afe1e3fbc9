"""
The Hecke algebra of a finite Coxeter system over Z[v, v^-1].

Conventions: H_s^2 = (v^-1 - v) H_s + 1, bar(v) = v^-1,
bar(H_x) = (H_{x^-1})^-1, and the Kazhdan-Lusztig basis element

    b_w = H_w + sum_{y < w} h_{y,w} H_y,   h_{y,w} in v Z[v],

is the unique bar-invariant element of that shape. The mu-coefficient
mu(y, w) is the coefficient of v^1 in h_{y,w}.
"""

from __future__ import annotations

import threading
import weakref
from typing import Callable, Iterable, Mapping

from .coxeter import CoxeterSystem
from .laurent import LaurentPoly, ONE, ZERO, V

__all__ = [
    "HeckeElement", "KLBasisTable",
    "std_multiply", "bar_involution", "iota", "kl_basis", "mu_coefficient",
    "left_mul_b", "right_mul_b",
]

# v^-1 - v
_QUAD = LaurentPoly({-1: 1, 1: -1})
# v - v^-1, the constant term of bar(H_s)
_QUAD_BAR = LaurentPoly({1: 1, -1: -1})

Terms = dict[int, LaurentPoly]


def _acc(d: Terms, key: int, p: LaurentPoly):
    q = d.get(key)
    if q is None:
        if p:
            d[key] = p
    else:
        q = q + p
        if q:
            d[key] = q
        else:
            del d[key]


# -- raw generator actions on {index: poly} dicts ----------------------------

def left_mul_b(W: CoxeterSystem, s: int, terms: Mapping[int, LaurentPoly]) -> Terms:
    """b_s * h, where b_s = H_s + v."""
    out: Terms = {}
    lmul, length = W.lmul[s], W.length
    for x, f in terms.items():
        sx = lmul[x]
        _acc(out, sx, f)
        # H_s H_x = H_sx, plus (v^-1 - v) H_x when sx < x
        _acc(out, x, f.shift(1) if length[sx] > length[x] else f.shift(-1))
    return out


def right_mul_b(W: CoxeterSystem, s: int, terms: Mapping[int, LaurentPoly]) -> Terms:
    """h * b_s."""
    out: Terms = {}
    rmul, length = W.rmul[s], W.length
    for x, f in terms.items():
        xs = rmul[x]
        _acc(out, xs, f)
        _acc(out, x, f.shift(1) if length[xs] > length[x] else f.shift(-1))
    return out


def _right_mul_H(W: CoxeterSystem, s: int, terms: Mapping[int, LaurentPoly]) -> Terms:
    out: Terms = {}
    rmul, length = W.rmul[s], W.length
    for x, f in terms.items():
        xs = rmul[x]
        _acc(out, xs, f)
        if length[xs] < length[x]:
            _acc(out, x, f * _QUAD)
    return out


def _right_mul_bar_H(W: CoxeterSystem, s: int, terms: Mapping[int, LaurentPoly]) -> Terms:
    # bar(H_s) = H_s^-1 = H_s + (v - v^-1)
    out = _right_mul_H(W, s, terms)
    for x, f in terms.items():
        _acc(out, x, f * _QUAD_BAR)
    return out


class HeckeElement:
    """A finite Z[v, v^-1]-combination of standard basis elements H_w."""
    __slots__ = ("system", "terms")

    def __init__(self, system: CoxeterSystem, terms: Mapping[int, LaurentPoly] | None = None):
        self.system = system
        self.terms: Terms = {}
        for w, f in (terms or {}).items():
            if not isinstance(f, LaurentPoly):
                f = LaurentPoly(f) if isinstance(f, int) else LaurentPoly.parse(f)
            _acc(self.terms, system.index(w), f)

    @classmethod
    def _wrap(cls, system, terms: Terms) -> HeckeElement:
        h = cls.__new__(cls)
        h.system = system
        h.terms = terms
        return h

    @classmethod
    def std(cls, system: CoxeterSystem, w, coeff: LaurentPoly = ONE) -> HeckeElement:
        return cls._wrap(system, {system.index(w): coeff} if coeff else {})

    @classmethod
    def one(cls, system: CoxeterSystem) -> HeckeElement:
        return cls.std(system, 0)

    def coefficient(self, w) -> LaurentPoly:
        return self.terms.get(self.system.index(w), ZERO)

    def support(self) -> list[int]:
        return sorted(self.terms)

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if not isinstance(other, HeckeElement):
            return NotImplemented
        return self.system is other.system and self.terms == other.terms

    def __add__(self, other: HeckeElement) -> HeckeElement:
        out = dict(self.terms)
        for w, f in other.terms.items():
            _acc(out, w, f)
        return HeckeElement._wrap(self.system, out)

    def __neg__(self) -> HeckeElement:
        return HeckeElement._wrap(self.system, {w: -f for w, f in self.terms.items()})

    def __sub__(self, other: HeckeElement) -> HeckeElement:
        return self + (-other)

    def scale(self, c: LaurentPoly | int) -> HeckeElement:
        if isinstance(c, int):
            c = LaurentPoly(c)
        if not c:
            return HeckeElement._wrap(self.system, {})
        return HeckeElement._wrap(self.system, {w: f * c for w, f in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, HeckeElement):
            return std_multiply(self, other)
        if isinstance(other, (LaurentPoly, int)):
            return self.scale(other)
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, (LaurentPoly, int)):
            return self.scale(other)
        return NotImplemented

    def bar(self) -> HeckeElement:
        return bar_involution(self)

    def iota(self) -> HeckeElement:
        return iota(self)

    def to_json(self) -> dict[str, str]:
        W = self.system
        return {W.name(w): str(f) for w, f in sorted(self.terms.items())}

    def __repr__(self):
        W = self.system
        body = " + ".join(f"({f})H[{W.name(w)}]" for w, f in sorted(self.terms.items()))
        return f"HeckeElement({body or '0'})"


def std_multiply(a: HeckeElement, b: HeckeElement) -> HeckeElement:
    """Product in the standard basis, using H_x H_s for reduced words of b's support."""
    W = a.system
    if b.system is not W:
        raise ValueError("elements live in different Hecke algebras")
    out: Terms = {}
    for y, g in b.terms.items():
        cur = a.terms
        for s in W.words[y]:
            cur = _right_mul_H(W, s, cur)
        for x, f in cur.items():
            _acc(out, x, f * g)
    return HeckeElement._wrap(W, out)


_bar_cache: "weakref.WeakKeyDictionary[CoxeterSystem, list]" = weakref.WeakKeyDictionary()
_bar_lock = threading.Lock()


def bar_of_standard(W: CoxeterSystem, x: int) -> Terms:
    """Standard expansion of bar(H_x), memoized per system in length order."""
    with _bar_lock:
        cache = _bar_cache.get(W)
        if cache is None:
            cache = [None] * W.order
            cache[0] = {0: ONE}
            _bar_cache[W] = cache
        if cache[x] is None:
            todo = []
            y = x
            while cache[y] is None:
                todo.append(y)
                s = W.words[y][-1]
                y = W.rmul[s][y]
            for y in reversed(todo):
                s = W.words[y][-1]
                cache[y] = _right_mul_bar_H(W, s, cache[W.rmul[s][y]])
        return cache[x]


def bar_involution(h: HeckeElement) -> HeckeElement:
    W = h.system
    out: Terms = {}
    for x, f in h.terms.items():
        fb = f.bar()
        for y, g in bar_of_standard(W, x).items():
            _acc(out, y, g * fb)
    return HeckeElement._wrap(W, out)


def iota(h: HeckeElement) -> HeckeElement:
    """The Z[v, v^-1]-linear anti-involution with H_x -> H_{x^-1}."""
    inv = h.system.inverse
    return HeckeElement._wrap(h.system, {inv[x]: f for x, f in h.terms.items()})


class KLBasisTable:
    """
    Kazhdan-Lusztig basis of a finite Coxeter system, memoized per element.

    `expansion(w)` returns the dict y -> h_{y,w} (with h_{w,w} = 1).
    Elements are computed on demand with the standard recursion
    b_w = b_s b_{sw} - sum mu(y, sw) b_y over y < sw with sy < y.
    """

    def __init__(self, system: CoxeterSystem):
        self.system = system
        self._std: list[Terms | None] = [None] * system.order
        self._std[0] = {0: ONE}
        self._lock = threading.RLock()

    def expansion(self, w) -> Terms:
        w = self.system.index(w)
        got = self._std[w]
        if got is None:
            with self._lock:
                got = self._compute(w)
        return got

    def _compute(self, w: int) -> Terms:
        if self._std[w] is not None:
            return self._std[w]
        W = self.system
        s = W.words[w][0]
        u = W.lmul[s][w]
        bu = self._compute(u)
        out = left_mul_b(W, s, bu)
        for y, f in bu.items():
            if y == u:
                continue
            mu = f.coefficient(1)
            if mu and W.length[W.lmul[s][y]] < W.length[y]:
                by = self._compute(y)
                for z, g in by.items():
                    _acc(out, z, g * -mu)
        for y, f in out.items():
            if y != w and (f.min_degree() < 1 or not f.is_nonnegative()):
                raise RuntimeError(
                    f"KL recursion produced h_{{{W.name(y)},{W.name(w)}}} = {f}; this is a bug")
        if out.get(w) != ONE:
            raise RuntimeError(f"KL recursion lost unitriangularity at {W.name(w)}")
        self._std[w] = out
        return out

    def compute_all(self, progress: Callable[[int, int], None] | None = None) -> KLBasisTable:
        for w in range(self.system.order):
            self.expansion(w)
            if progress is not None:
                progress(w + 1, self.system.order)
        return self

    def element(self, w) -> HeckeElement:
        return HeckeElement._wrap(self.system, dict(self.expansion(w)))

    def h(self, y, w) -> LaurentPoly:
        W = self.system
        return self.expansion(w).get(W.index(y), ZERO)

    def mu(self, y, w) -> int:
        return self.h(y, w).coefficient(1)

    def to_json(self, w) -> dict:
        W = self.system
        w = W.index(w)
        return {"w": W.name(w), "expansion": self.element(w).to_json()}

    def elements(self) -> Iterable[int]:
        return range(self.system.order)


def kl_basis(system: CoxeterSystem, eager: bool = False) -> KLBasisTable:
    table = KLBasisTable(system)
    if eager:
        table.compute_all()
    return table


def mu_coefficient(table: KLBasisTable, y, w) -> int:
    return table.mu(y, w)


def kl_element(system: CoxeterSystem, terms: Mapping) -> HeckeElement:
    """Convenience constructor: HeckeElement from {element: poly-or-string}."""
    return HeckeElement(system, terms)


def generator_b(system: CoxeterSystem, s: int) -> HeckeElement:
    """b_s = H_s + v H_e."""
    return HeckeElement._wrap(system, {system.lmul[s][0]: ONE, 0: V})
