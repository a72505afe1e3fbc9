"""
Sparse Laurent polynomials in one variable `v` with integer coefficients.

A polynomial is stored as a dict mapping exponents to nonzero Python ints,
so coefficients never overflow. Values are immutable and hashable.

>>> p = LaurentPoly.parse("v^-1 + 2 + v^3")
>>> str(p * p.bar())
'v^-4 + 2v^-3 + 2v^-1 + 6 + 2v + 2v^3 + v^4'
>>> p.eval_at_one()
4
"""

from __future__ import annotations

import re
from typing import Iterable, Mapping

__all__ = ["LaurentPoly", "ZERO", "ONE", "V", "V_INV", "QUANTUM_TWO"]


class LaurentPoly:
    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[int, int] | Iterable[tuple[int, int]] | int | None = None):
        if terms is None:
            clean = {}
        elif isinstance(terms, int):
            clean = {0: terms} if terms else {}
        else:
            items = terms.items() if isinstance(terms, Mapping) else terms
            clean = {}
            for e, c in items:
                c = clean.get(e, 0) + c
                if c:
                    clean[e] = c
                else:
                    clean.pop(e, None)
        self._terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, terms: dict[int, int]) -> LaurentPoly:
        # caller guarantees no zero coefficients
        obj = cls.__new__(cls)
        obj._terms = terms
        obj._hash = None
        return obj

    @classmethod
    def monomial(cls, exponent: int, coefficient: int = 1) -> LaurentPoly:
        return cls._raw({exponent: coefficient} if coefficient else {})

    # -- inspection -------------------------------------------------------

    @property
    def terms(self) -> dict[int, int]:
        return dict(self._terms)

    def coefficient(self, exponent: int) -> int:
        return self._terms.get(exponent, 0)

    def items(self):
        return sorted(self._terms.items())

    def min_degree(self) -> int | None:
        return min(self._terms) if self._terms else None

    def max_degree(self) -> int | None:
        return max(self._terms) if self._terms else None

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self) -> bool:
        return bool(self._terms)

    def is_self_dual(self) -> bool:
        t = self._terms
        return all(t.get(-e) == c for e, c in t.items())

    def is_nonnegative(self) -> bool:
        return all(c > 0 for c in self._terms.values())

    def eval_at_one(self) -> int:
        return sum(self._terms.values())

    def __call__(self, value):
        return sum(c * value**e for e, c in self._terms.items())

    # -- ring operations --------------------------------------------------

    def __add__(self, other) -> LaurentPoly:
        if isinstance(other, int):
            other = LaurentPoly(other)
        elif not isinstance(other, LaurentPoly):
            return NotImplemented
        a, b = self._terms, other._terms
        if len(a) < len(b):
            a, b = b, a
        out = dict(a)
        for e, c in b.items():
            c += out.get(e, 0)
            if c:
                out[e] = c
            else:
                del out[e]
        return LaurentPoly._raw(out)

    __radd__ = __add__

    def __neg__(self) -> LaurentPoly:
        return LaurentPoly._raw({e: -c for e, c in self._terms.items()})

    def __sub__(self, other) -> LaurentPoly:
        if isinstance(other, int):
            other = LaurentPoly(other)
        elif not isinstance(other, LaurentPoly):
            return NotImplemented
        out = dict(self._terms)
        for e, c in other._terms.items():
            c = out.get(e, 0) - c
            if c:
                out[e] = c
            else:
                del out[e]
        return LaurentPoly._raw(out)

    def __rsub__(self, other) -> LaurentPoly:
        return (-self) + other

    def __mul__(self, other) -> LaurentPoly:
        if isinstance(other, int):
            if not other:
                return ZERO
            return LaurentPoly._raw({e: c * other for e, c in self._terms.items()})
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        a, b = self._terms, other._terms
        if not a or not b:
            return ZERO
        if len(b) == 1:
            (eb, cb), = b.items()
            return LaurentPoly._raw({e + eb: c * cb for e, c in a.items()})
        if len(a) == 1:
            (ea, ca), = a.items()
            return LaurentPoly._raw({e + ea: c * ca for e, c in b.items()})
        out: dict[int, int] = {}
        for ea, ca in a.items():
            for eb, cb in b.items():
                e = ea + eb
                out[e] = out.get(e, 0) + ca * cb
        return LaurentPoly._raw({e: c for e, c in out.items() if c})

    __rmul__ = __mul__

    def __pow__(self, k: int) -> LaurentPoly:
        if k < 0:
            if len(self._terms) != 1:
                raise ValueError("only monomials are invertible")
            (e, c), = self._terms.items()
            if c not in (1, -1):
                raise ValueError("only unit monomials are invertible")
            # c is a unit, so c**-k == c**k
            return LaurentPoly._raw({e * k: c ** -k})
        out = ONE
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def shift(self, k: int) -> LaurentPoly:
        """Multiply by `v**k`."""
        if not k:
            return self
        return LaurentPoly._raw({e + k: c for e, c in self._terms.items()})

    def bar(self) -> LaurentPoly:
        """The ring involution `v -> v^-1`."""
        return LaurentPoly._raw({-e: c for e, c in self._terms.items()})

    def positive_part(self) -> LaurentPoly:
        """Terms of strictly positive degree."""
        return LaurentPoly._raw({e: c for e, c in self._terms.items() if e > 0})

    # -- comparison and hashing -------------------------------------------

    def __eq__(self, other) -> bool:
        if isinstance(other, LaurentPoly):
            return self._terms == other._terms
        if isinstance(other, int):
            return self._terms == ({0: other} if other else {})
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    # -- string codec -----------------------------------------------------

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for e, c in sorted(self._terms.items()):
            mag = abs(c)
            if e == 0:
                body = str(mag)
            else:
                mono = "v" if e == 1 else f"v^{e}"
                body = mono if mag == 1 else f"{mag}{mono}"
            if not parts:
                parts.append(("-" if c < 0 else "") + body)
            else:
                parts.append(("- " if c < 0 else "+ ") + body)
        return " ".join(parts)

    def __repr__(self) -> str:
        return f"LaurentPoly({str(self)!r})"

    _TERM = re.compile(r"([+-]?)(\d*)\*?(v(?:\^\(?(-?\d+)\)?)?)?")

    @classmethod
    def parse(cls, text: str | int) -> LaurentPoly:
        """
        Parse the monomial-sum format produced by `str`, e.g. "v^-1 + 2 + v^3".

        Also accepts "2*v^3", "v^(-2)" and bare integers.
        """
        if isinstance(text, int):
            return cls(text)
        s = text.replace(" ", "")
        if s in ("", "0"):
            return ZERO
        out: dict[int, int] = {}
        pos = 0
        while pos < len(s):
            m = cls._TERM.match(s, pos)
            if m is None or m.end() == pos:
                raise ValueError(f"cannot parse Laurent polynomial {text!r}")
            sign, digits, mono, exp = m.groups()
            if not digits and not mono:
                raise ValueError(f"cannot parse Laurent polynomial {text!r}")
            c = int(digits) if digits else 1
            if sign == "-":
                c = -c
            e = 0 if not mono else (int(exp) if exp is not None else 1)
            out[e] = out.get(e, 0) + c
            pos = m.end()
            if pos < len(s) and s[pos] not in "+-":
                raise ValueError(f"cannot parse Laurent polynomial {text!r}")
        return cls(out)


ZERO = LaurentPoly()
ONE = LaurentPoly(1)
V = LaurentPoly.monomial(1)
V_INV = LaurentPoly.monomial(-1)
# v + v^-1, the eigenvalue of b_s on anything it stabilizes
QUANTUM_TWO = LaurentPoly({1: 1, -1: 1})
