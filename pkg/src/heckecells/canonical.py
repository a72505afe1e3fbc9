"""
p-canonical bases stored as corrections to the Kazhdan-Lusztig basis.

A table records, for each w, the expansion pkl_w = sum_y m_{y,w} b_y.
Elements missing from a table document default to pkl_w = b_w, so the
characteristic-zero table is the identity. The characteristic p is only a
label: all arithmetic happens over Z[v, v^-1].

Table documents look like

    {"system": "B2", "p": 2,
     "basis": {"121": {"121": "1", "1": "1"}},
     "provenance": "hand-computed"}
"""

from __future__ import annotations

import heapq
import json
import threading
from dataclasses import dataclass, field
from pathlib import Path
from typing import Mapping

from .coxeter import CoxeterSystem
from .errors import MalformedDocument, MissingTable, NonUnitriangular, ValidationFailed
from .hecke import HeckeElement, KLBasisTable, Terms, _acc, kl_basis, left_mul_b, right_mul_b, std_multiply
from .laurent import LaurentPoly, ONE

__all__ = [
    "CanonicalBasisTable", "ValidationReport", "CheckResult",
    "load_table", "builtin_table", "validate", "structure_coefficients",
    "PRESET_TABLES",
]

PRESET_TABLES: dict[tuple[str, int], dict] = {
    ("B2", 2): {
        "system": "B2",
        "p": 2,
        "basis": {"121": {"121": "1", "1": "1"}},
        "provenance": "B2 in characteristic 2: pkl_121 = b_121 + b_1, all others equal b_w",
    },
}

# all pairs (x, y) are multiplied during validation up to this group order
FULL_PRODUCT_CHECK_LIMIT = 24


def _is_prime(p: int) -> bool:
    return p >= 2 and all(p % d for d in range(2, int(p**0.5) + 1))


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: str = ""
    witnesses: list = field(default_factory=list)


@dataclass
class ValidationReport:
    checks: list[CheckResult]

    @property
    def ok(self) -> bool:
        return all(c.passed for c in self.checks)

    def __getitem__(self, name: str) -> CheckResult:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def failures(self) -> list[CheckResult]:
        return [c for c in self.checks if not c.passed]

    def to_json(self) -> dict:
        return {
            "ok": self.ok,
            "checks": [
                {"name": c.name, "passed": c.passed, "detail": c.detail, "witnesses": c.witnesses[:20]}
                for c in self.checks
            ],
        }


class CanonicalBasisTable:
    """
    The p-canonical basis of one Coxeter system, layered over its KL basis.

    Use `validate()` (or `ensure_validated()`) before computing cells; the
    structure-coefficient methods refuse to run on a table that has not
    passed validation.
    """

    def __init__(self, system: CoxeterSystem, p: int, in_kl: Mapping[int, Mapping[int, LaurentPoly]] | None = None,
                 kl: KLBasisTable | None = None, provenance: str = ""):
        self.system = system
        self.p = p
        self.kl = kl if kl is not None else kl_basis(system)
        self.provenance = provenance
        # only the non-identity columns are stored
        self._in_kl: dict[int, dict[int, LaurentPoly]] = {
            w: {y: f for y, f in col.items() if f} for w, col in (in_kl or {}).items()
            if dict(col) != {w: ONE}
        }
        self._std: dict[int, Terms] = {}
        self._products: dict[tuple, dict[int, LaurentPoly]] = {}
        self._lock = threading.Lock()
        self._report: ValidationReport | None = None

    # -- the basis -----------------------------------------------------------

    @property
    def corrected(self) -> list[int]:
        """Elements whose pkl differs from the KL basis element."""
        return sorted(self._in_kl)

    def in_kl(self, w) -> dict[int, LaurentPoly]:
        """The p-multiplicities: y -> m_{y,w}."""
        w = self.system.index(w)
        col = self._in_kl.get(w)
        return dict(col) if col is not None else {w: ONE}

    def std(self, w: int) -> Terms:
        """Standard-basis expansion y -> ph_{y,w} of pkl_w (do not mutate)."""
        if w not in self._in_kl:
            return self.kl.expansion(w)
        got = self._std.get(w)
        if got is None:
            out: Terms = {}
            for y, m in self._in_kl[w].items():
                for z, g in self.kl.expansion(y).items():
                    _acc(out, z, g * m)
            self._std[w] = got = out
        return got

    def element(self, w) -> HeckeElement:
        return HeckeElement._wrap(self.system, dict(self.std(self.system.index(w))))

    def to_pkl_basis(self, terms: Mapping[int, LaurentPoly]) -> dict[int, LaurentPoly]:
        """
        Rewrite a standard-basis expansion in the pkl basis.

        Unitriangularity lets us peel off the element of largest index
        (hence of maximal length) repeatedly.
        """
        rest = dict(terms)
        heap = [-x for x in rest]
        heapq.heapify(heap)
        out: dict[int, LaurentPoly] = {}
        while heap:
            z = -heapq.heappop(heap)
            c = rest.pop(z, None)
            if c is None:
                continue
            out[z] = c
            for y, g in self.std(z).items():
                if y == z:
                    continue
                had = y in rest
                _acc(rest, y, g * -c)
                if not had and y in rest:
                    heapq.heappush(heap, -y)
        return out

    # -- products ------------------------------------------------------------

    def _require_valid(self):
        if self._report is None or not self._report.ok:
            raise ValidationFailed("table must pass validation before use; call validate() first", self._report)

    def generator_product(self, s: int, y: int, side: str = "left") -> dict[int, LaurentPoly]:
        """b_s * pkl_y (side="left") or pkl_y * b_s (side="right") in the pkl basis."""
        self._require_valid()
        return self._generator_product(s, y, side)

    def _generator_product(self, s: int, y: int, side: str) -> dict[int, LaurentPoly]:
        key = (side, s, y)
        got = self._products.get(key)
        if got is None:
            mul = left_mul_b if side == "left" else right_mul_b
            got = self.to_pkl_basis(mul(self.system, s, self.std(y)))
            # identical values if two threads race here
            got = self._products.setdefault(key, got)
        return got

    def product(self, x, y) -> dict[int, LaurentPoly]:
        """pkl_x * pkl_y = sum_z mu^z_{x,y} pkl_z, as z -> mu^z_{x,y}."""
        self._require_valid()
        return self._product(self.system.index(x), self.system.index(y))

    def _product(self, x: int, y: int) -> dict[int, LaurentPoly]:
        W = self.system
        if W.length[x] == 1 and x not in self._in_kl:
            return self._generator_product(W.words[x][0], y, "left")
        if W.length[y] == 1 and y not in self._in_kl:
            return self._generator_product(W.words[y][0], x, "right")
        if x == 0:
            return {y: ONE}
        if y == 0:
            return {x: ONE}
        key = ("pair", x, y)
        got = self._products.get(key)
        if got is None:
            prod = std_multiply(self.element(x), self.element(y))
            got = self._products.setdefault(key, self.to_pkl_basis(prod.terms))
        return got

    # -- validation ----------------------------------------------------------

    @property
    def validated(self) -> bool:
        return self._report is not None and self._report.ok

    def validate(self) -> ValidationReport:
        if self._report is None:
            self._report = _run_validation(self)
        return self._report

    def ensure_validated(self) -> CanonicalBasisTable:
        report = self.validate()
        if not report.ok:
            names = ", ".join(c.name for c in report.failures())
            raise ValidationFailed(f"table failed validation: {names}", report)
        return self

    # -- serialization ---------------------------------------------------------

    def to_json(self) -> dict:
        W = self.system
        return {
            "system": W.spec.name or "custom",
            "p": self.p,
            "basis": {
                W.name(w): {W.name(y): str(f) for y, f in sorted(col.items())}
                for w, col in sorted(self._in_kl.items())
            },
            "provenance": self.provenance,
        }


def _run_validation(table: CanonicalBasisTable) -> ValidationReport:
    W = table.system
    checks = []

    bad = []
    for w, col in table._in_kl.items():
        for y, m in col.items():
            if y != w and not m.is_nonnegative():
                bad.append([W.name(y), W.name(w), str(m)])
    checks.append(CheckResult("kl_multiplicities_nonnegative", not bad,
                              "m_{y,w} has nonnegative coefficients", bad))

    bad = []
    for w, col in table._in_kl.items():
        for y, m in col.items():
            if not m.is_self_dual():
                bad.append([W.name(y), W.name(w), str(m)])
    checks.append(CheckResult("self_duality", not bad,
                              "every m_{y,w} is bar-invariant, hence so is pkl_w", bad))

    bad = []
    inv = W.inverse
    for w in set(table._in_kl) | {inv[x] for x in table._in_kl}:
        a = table.in_kl(w)
        b = {inv[y]: f for y, f in table.in_kl(inv[w]).items()}
        if a != b:
            bad.append([W.name(w), W.name(inv[w])])
    checks.append(CheckResult("iota_compatibility", not bad,
                              "m_{y,x} = m_{y^-1,x^-1}", bad))

    bad = [W.name(w) for w in table._in_kl if W.length[w] <= 1]
    checks.append(CheckResult("generators_are_kl", not bad,
                              "pkl_e = 1 and pkl_s = b_s", bad))

    if all(c.passed for c in checks):
        bad = []
        for y in range(W.order):
            for s in range(W.rank):
                for side in ("left", "right"):
                    for z, c in table._generator_product(s, y, side).items():
                        if not (c.is_nonnegative() and c.is_self_dual()):
                            bad.append([side, W.labels[s], W.name(y), W.name(z), str(c)])
        if W.order <= FULL_PRODUCT_CHECK_LIMIT:
            for x in range(W.order):
                for y in range(W.order):
                    for z, c in table._product(x, y).items():
                        if not (c.is_nonnegative() and c.is_self_dual()):
                            bad.append(["pair", W.name(x), W.name(y), W.name(z), str(c)])
        checks.append(CheckResult(
            "structure_coefficients", not bad,
            "mu^z_{x,y} is self-dual with nonnegative coefficients "
            + ("(all pairs)" if W.order <= FULL_PRODUCT_CHECK_LIMIT else "(generator products)"),
            bad))
    else:
        checks.append(CheckResult("structure_coefficients", False, "skipped: earlier checks failed"))
    return ValidationReport(checks)


def validate(table: CanonicalBasisTable) -> ValidationReport:
    return table.validate()


def structure_coefficients(x, y, table: CanonicalBasisTable) -> dict[int, LaurentPoly]:
    return table.product(x, y)


def _parse_document(source) -> dict:
    if isinstance(source, Mapping):
        return dict(source)
    if isinstance(source, Path) or (isinstance(source, str) and not source.lstrip().startswith("{")):
        try:
            with open(source) as fh:
                return json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise MalformedDocument(f"cannot read table {source}: {exc}") from exc
    try:
        return json.loads(source)
    except (TypeError, json.JSONDecodeError) as exc:
        raise MalformedDocument(f"table is not valid JSON: {exc}") from exc


def load_table(source, system: CoxeterSystem, kl: KLBasisTable | None = None) -> CanonicalBasisTable:
    """
    Build a table from a JSON document (dict, JSON text or file path).

    Raises MalformedDocument, UnknownElement or NonUnitriangular. The
    returned table is not yet validated.
    """
    doc = _parse_document(source)
    if not isinstance(doc, dict) or "basis" not in doc or "p" not in doc:
        raise MalformedDocument("table document needs 'p' and 'basis' keys")
    name = doc.get("system")
    if name and system.spec.name and name.upper() != system.spec.name.upper():
        raise MalformedDocument(f"table is for system {name!r}, not {system.spec.name!r}")
    p = doc["p"]
    if not isinstance(p, int) or not (p == 0 or _is_prime(p)):
        raise MalformedDocument(f"p must be 0 or a prime, got {p!r}")
    basis = doc["basis"]
    if not isinstance(basis, Mapping):
        raise MalformedDocument("'basis' must map element names to expansions")

    in_kl: dict[int, dict[int, LaurentPoly]] = {}
    for wname, col in basis.items():
        w = system.index(wname)
        if not isinstance(col, Mapping):
            raise MalformedDocument(f"expansion of {wname!r} must be an object")
        parsed: dict[int, LaurentPoly] = {}
        for yname, text in col.items():
            y = system.index(yname)
            try:
                f = LaurentPoly.parse(text)
            except ValueError as exc:
                raise MalformedDocument(str(exc)) from exc
            if f:
                parsed[y] = parsed.get(y, LaurentPoly()) + f
        if parsed.get(w) != ONE:
            raise NonUnitriangular(f"coefficient of b_{wname} in pkl_{wname} must be 1")
        for y in parsed:
            if y != w and not system.bruhat_leq(y, w):
                raise NonUnitriangular(
                    f"b_{system.name(y)} appears in pkl_{wname} but {system.name(y)} is not below {wname}")
        if w in in_kl:
            raise MalformedDocument(f"duplicate entry for {wname!r}")
        in_kl[w] = parsed
    return CanonicalBasisTable(system, p, in_kl, kl=kl, provenance=str(doc.get("provenance", "")))


def builtin_table(system: CoxeterSystem, p: int = 0, kl: KLBasisTable | None = None) -> CanonicalBasisTable:
    """The KL table for p = 0, or a shipped preset such as B2 at p = 2."""
    if p == 0:
        return CanonicalBasisTable(system, 0, kl=kl, provenance="Kazhdan-Lusztig basis")
    key = (system.spec.name or "", p)
    if key not in PRESET_TABLES:
        raise MissingTable(f"no built-in table for system {key[0] or 'custom'} at p = {p}")
    return load_table(PRESET_TABLES[key], system, kl=kl)
