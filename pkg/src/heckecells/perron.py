"""
Perron-Frobenius analysis of cell modules at v = 1.

Matrix conventions. Module objects (`CellModule`) act on coordinate
columns. Everything returned from this module as a "matrix of the action"
uses the row convention instead: row x holds the expansion of a * pkl_x.
This is the transpose of the column matrix and is the layout in which the
B2 (p = 2) example matrix [[3,4,3],[4,6,4],[3,4,3]] / [[6,4],[8,6]] is
usually displayed. The coefficients d_x of e_J come from the column
recursion d_{m+1} = N_col d_m / lambda, i.e. d = N_J^T c / lambda in row
convention.

The weighted element is a_c = sum_w c_w pkl_w over the whole group
(`restrict_to=None`) or over one two-sided cell J (`restrict_to=J`). Both
act through nonnegative matrices with a positive block on cells of J.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Iterable, Mapping, Sequence

import numpy as np

from .canonical import CanonicalBasisTable
from .cells import CellDecomposition, CellModule, cell_module, cells, subquotient_module
from .characters import CharacterTable, irreducible_characters
from .coxeter import CoxeterSystem
from .errors import AmbiguousProjection, NoConvergence, NoMinimum, NotAPartition, NotPositive, UnsupportedType

__all__ = [
    "WeightVector", "PerronData", "PFResult", "IdempotentReport", "SpecialModule", "CellAnalysis",
    "specialize_action", "pf_analyze", "perron_data", "ej_idempotent", "apex", "special_module",
    "families", "conjecture_check",
    "POWER_RESIDUAL", "POWER_MAX_ITER", "DENSE_CHECK_DIM",
]

POWER_RESIDUAL = 1e-13
POWER_MAX_ITER = 1_000_000
DENSE_CHECK_DIM = 200
EIGEN_TOL = 1e-9


# -- weights --------------------------------------------------------------------

@dataclass(frozen=True)
class WeightVector:
    """Positive weights c_w, exact as Fractions; missing elements weigh 1."""
    system: CoxeterSystem
    values: Mapping[int, Fraction] = field(default_factory=dict)
    label: str = "uniform"

    def __post_init__(self):
        for w, c in self.values.items():
            if not c > 0:
                raise NotPositive(f"weight of {self.system.name(w)} must be positive, got {c}")

    def __getitem__(self, w: int) -> Fraction | int:
        return self.values.get(w, 1)

    @property
    def is_uniform(self) -> bool:
        return all(c == 1 for c in self.values.values())

    @classmethod
    def uniform(cls, system: CoxeterSystem) -> WeightVector:
        return cls(system, {}, "uniform")

    @classmethod
    def random(cls, system: CoxeterSystem, seed: int) -> WeightVector:
        """Weights k/100 with k uniform in 1..1000, from a seeded generator."""
        rng = random.Random(seed)
        return cls(system, {w: Fraction(rng.randint(1, 1000), 100) for w in range(system.order)},
                   f"random:{seed}")

    @classmethod
    def from_mapping(cls, system: CoxeterSystem, doc: Mapping, label: str = "file") -> WeightVector:
        values = {}
        for name, c in doc.items():
            values[system.index(name)] = Fraction(str(c))
        return cls(system, values, label)

    @classmethod
    def from_file(cls, system: CoxeterSystem, path: str | Path) -> WeightVector:
        with open(path) as fh:
            return cls.from_mapping(system, json.load(fh), f"file:{Path(path).name}")

    def to_json(self) -> dict:
        W = self.system
        return {"label": self.label, "overrides": {W.name(w): str(c) for w, c in sorted(self.values.items())}}


# -- matrices -------------------------------------------------------------------

def _weighted_std_coefficients(table: CanonicalBasisTable, weights: WeightVector,
                               elements: Iterable[int]) -> dict[int, object]:
    """y -> sum_w c_w ph_{y,w}(1), the standard coefficients of a_c at v = 1."""
    out: dict[int, object] = {}
    for w in elements:
        c = weights[w]
        for y, f in table.std(w).items():
            out[y] = out.get(y, 0) + c * f.eval_at_one()
    return out


def _column_action(module: CellModule, weights: WeightVector, restrict_to: Iterable[int] | None) -> np.ndarray:
    W = module.system
    elements = range(W.order) if restrict_to is None else sorted(restrict_to)
    coeffs = _weighted_std_coefficients(module.table, weights, elements)
    return module.combinations_at_one({"a": coeffs})["a"]


def specialize_action(module: CellModule, weights: WeightVector | None = None,
                      restrict_to: Iterable[int] | None = None) -> np.ndarray:
    """
    Exact row-convention matrix of a_c on `module` at v = 1.

    Entries are ints (int64) for integer weights and Fractions (object
    arrays) otherwise.
    """
    weights = weights or WeightVector.uniform(module.system)
    return _column_action(module, weights, restrict_to).T.copy()


def _as_float(M: np.ndarray) -> np.ndarray:
    return np.array(M, dtype=object).astype(float) if M.dtype == object else M.astype(float)


# -- Perron-Frobenius --------------------------------------------------------------

@dataclass
class PFResult:
    lam: float
    right: np.ndarray
    left: np.ndarray
    projector: np.ndarray
    iterations: int
    residual: float
    dense_lambda: float | None = None


def _power(M: np.ndarray, tol: float, max_iter: int) -> tuple[float, np.ndarray, int, float]:
    d = M.shape[0]
    x = np.full(d, 1.0 / d)
    lam, res = 0.0, np.inf
    for it in range(1, max_iter + 1):
        y = M @ x
        lam = float(x @ y / (x @ x))
        res = float(np.linalg.norm(y - lam * x) / (abs(lam) * np.linalg.norm(x)))
        if res < tol:
            return lam, x / x.sum(), it, res
        x = y / y.sum()
    raise NoConvergence(f"power iteration stalled at relative residual {res:.3e} after {max_iter} steps")


def pf_analyze(M, tol: float = POWER_RESIDUAL, max_iter: int = POWER_MAX_ITER) -> PFResult:
    """
    Perron-Frobenius data of a strictly positive square matrix.

    Right and left eigenvectors are positive, the right one sums to 1 and
    the left one is scaled so that left . right = 1; the projector is
    right left^T.
    """
    A = _as_float(np.asarray(M))
    if A.ndim != 2 or A.shape[0] != A.shape[1] or A.shape[0] == 0:
        raise ValueError("need a nonempty square matrix")
    if not (A > 0).all():
        raise NotPositive("Perron-Frobenius analysis needs a strictly positive matrix")
    lam, v, it_r, res_r = _power(A, tol, max_iter)
    lam_l, u, it_l, res_l = _power(A.T, tol, max_iter)
    u = u / (u @ v)
    dense = None
    if A.shape[0] <= DENSE_CHECK_DIM:
        dense = float(np.max(np.abs(np.linalg.eigvals(A))))
        if abs(dense - lam) > EIGEN_TOL * dense or abs(lam_l - lam) > EIGEN_TOL * lam:
            raise NoConvergence(f"power iteration found {lam}, dense solver {dense}")
    return PFResult(lam, v, u, np.outer(v, u), max(it_r, it_l), max(res_r, res_l), dense)


@dataclass
class PerronData:
    cell: tuple[int, ...]
    matrix: np.ndarray        # row convention, exact
    pf: PFResult

    @property
    def lam(self) -> float:
        return self.pf.lam

    @property
    def projector(self) -> np.ndarray:
        return self.pf.projector

    def to_json(self, system: CoxeterSystem) -> dict:
        return {
            "members": [system.name(x) for x in self.cell],
            "matrix": [[str(x) for x in row] for row in self.matrix.tolist()],
            "lambda": self.lam,
            "eigenvector": self.pf.right.tolist(),
            "left_eigenvector": self.pf.left.tolist(),
            "projector": self.pf.projector.tolist(),
            "iterations": self.pf.iterations,
            "residual": self.pf.residual,
        }


def perron_data(cell: Sequence[int], table: CanonicalBasisTable, weights: WeightVector | None = None,
                restrict_to: Iterable[int] | None = None) -> PerronData:
    module = cell_module(cell, table)
    M = specialize_action(module, weights, restrict_to)
    return PerronData(tuple(module.basis), M, pf_analyze(M))


# -- the idempotent e_J ------------------------------------------------------------

@dataclass
class IdempotentReport:
    J: tuple[int, ...]
    basis: tuple[int, ...]
    left_cells: list[tuple[int, ...]]
    lam: float
    d: dict[int, float]
    N: np.ndarray             # row convention, exact
    N_J: np.ndarray           # row convention
    cell_data: list[PerronData]
    idempotency_residual: float
    offdiagonal_residual: float
    block_residual: float
    lambda_spread: float
    tol: float

    @property
    def positive(self) -> bool:
        return all(v > 0 for v in self.d.values())

    @property
    def ok(self) -> bool:
        return (self.positive and self.idempotency_residual <= self.tol
                and self.offdiagonal_residual <= self.tol and self.block_residual <= self.tol
                and self.lambda_spread <= self.tol)

    def to_json(self, system: CoxeterSystem) -> dict:
        nm = system.name
        return {
            "J": [nm(x) for x in self.J],
            "basis": [nm(x) for x in self.basis],
            "left_cells": [[nm(x) for x in c] for c in self.left_cells],
            "lambda": self.lam,
            "d": {nm(x): v for x, v in self.d.items()},
            "N": [[str(x) for x in row] for row in self.N.tolist()],
            "N_J": self.N_J.tolist(),
            "idempotency_residual": self.idempotency_residual,
            "offdiagonal_residual": self.offdiagonal_residual,
            "block_residual": self.block_residual,
            "lambda_spread": self.lambda_spread,
            "positive": self.positive,
            "ok": self.ok,
        }


LIMIT_TOL = 1e-12


def _limit_power(A: np.ndarray, max_squarings: int = 64) -> np.ndarray:
    """lim A^m by repeated squaring; A must have spectral radius 1 with semisimple top eigenvalue."""
    # stop as soon as A is idempotent to float accuracy: further squarings only
    # amplify the rounding error in lambda (A^(2^k) drifts like (1 + eps)^(2^k))
    for _ in range(max_squarings):
        B = A @ A
        if np.max(np.abs(B - A)) <= LIMIT_TOL * max(1.0, np.max(np.abs(B))):
            return B
        if not np.isfinite(B).all() or np.max(np.abs(B)) > 1e12:
            break
        A = B
    raise NoConvergence("powers of N / lambda do not converge")


def ej_idempotent(J: Sequence[int], table: CanonicalBasisTable, weights: WeightVector | None = None,
                  left: CellDecomposition | None = None, two_sided: CellDecomposition | None = None,
                  tol: float = EIGEN_TOL) -> IdempotentReport:
    """
    Build e_J = sum_{x in J} d_x pkl_x from the J-restricted a_c and check it.

    The basis of J is ordered by left cell (cell number), then by element.
    """
    W = table.system
    weights = weights or WeightVector.uniform(W)
    left = left or cells(table, "left")
    two_sided = two_sided or cells(table, "two-sided")
    Jset = set(J)
    cids = sorted({left.cell_of[x] for x in Jset})
    blocks = [tuple(sorted(left.cells[c])) for c in cids]
    if set().union(*map(set, blocks)) != Jset:
        raise ValueError("J is not a union of left cells")
    basis = tuple(x for b in blocks for x in b)
    module = subquotient_module(basis, table, "left")
    N_col = _column_action(module, weights, Jset)
    N = N_col.T.copy()

    cell_data = []
    offsets = []
    k = 0
    for b in blocks:
        sub = N[k:k + len(b), k:k + len(b)]
        cell_data.append(PerronData(b, sub, pf_analyze(sub)))
        offsets.append((k, k + len(b)))
        k += len(b)
    lams = [cd.lam for cd in cell_data]
    lam = lams[0]
    spread = (max(lams) - min(lams)) / lam

    Nf = _as_float(N)
    N_J = _limit_power(Nf / lam)
    c = np.array([float(weights[x]) for x in basis])
    dvec = N_J.T @ c / lam
    d = {x: float(v) for x, v in zip(basis, dvec)}

    # block structure of N_J: off-diagonal zero, diagonal equal to the projectors M_C
    off = 0.0
    blk = 0.0
    for i, (a, b) in enumerate(offsets):
        for j, (c0, c1) in enumerate(offsets):
            part = N_J[a:b, c0:c1]
            if i == j:
                blk = max(blk, float(np.max(np.abs(part - cell_data[i].projector))))
            else:
                off = max(off, float(np.max(np.abs(part)))) if part.size else off

    # e_J^2 = e_J in the regular representation of H / I_J
    J_cell = two_sided.cell_of[basis[0]]
    upper = [x for x in range(W.order) if two_sided.leq(J_cell, two_sided.cell_of[x])]
    quotient = subquotient_module(upper, table, "left")
    pkl = quotient.pkl_actions_at_one(basis)
    E = sum(_as_float(pkl[x]) * d[x] for x in basis)
    idem = float(np.max(np.abs(E @ E - E)))

    # e_J also acts on the J-module via the block diagonal projector
    pkl_J = module.pkl_actions_at_one(basis)
    E_J = sum(_as_float(pkl_J[x]) * d[x] for x in basis)
    blk = max(blk, float(np.max(np.abs(E_J.T - _block_diag([cd.projector for cd in cell_data])))))

    return IdempotentReport(tuple(sorted(Jset)), basis, blocks, lam, d, N, N_J, cell_data,
                            idem, off, blk, spread, tol)


def _block_diag(blocks: Sequence[np.ndarray]) -> np.ndarray:
    n = sum(b.shape[0] for b in blocks)
    out = np.zeros((n, n))
    k = 0
    for b in blocks:
        m = b.shape[0]
        out[k:k + m, k:k + m] = b
        k += m
    return out


# -- apex -------------------------------------------------------------------------

def apex(cell: Sequence[int], table: CanonicalBasisTable, two_sided: CellDecomposition | None = None) -> int:
    """
    Index (in `two_sided`) of the minimal two-sided cell acting nonzero on M(C).

    Structure coefficients are nonnegative, so pkl_x acts by zero exactly
    when its matrix vanishes at v = 1.
    """
    W = table.system
    two_sided = two_sided or cells(table, "two-sided")
    module = cell_module(cell, table)
    acting = module.pkl_actions_at_one(range(W.order))
    X = sorted({two_sided.cell_of[x] for x, M in acting.items() if np.any(M != 0)})
    for j in X:
        if all(two_sided.leq(j, k) for k in X):
            return j
    raise NoMinimum(
        f"two-sided cells acting on the module of {[W.name(x) for x in cell]} have no minimum: {X}")


# -- special modules and families -------------------------------------------------

@dataclass
class SpecialModule:
    cell: tuple[int, ...]
    label: str
    lam: float
    multiplicities: dict[str, int]
    projection_norms: dict[str, float]

    def to_json(self, system: CoxeterSystem) -> dict:
        return {
            "members": [system.name(x) for x in self.cell],
            "special": self.label,
            "lambda": self.lam,
            "multiplicities": {k: v for k, v in self.multiplicities.items() if v},
        }


def module_character(module: CellModule) -> list[int]:
    """Trace of each w at v = 1, element-wise."""
    out = [0] * module.system.order
    for w, M in module.iter_standard_action():
        out[w] = int(np.trace(M))
    return out


def special_module(cell: Sequence[int], table: CanonicalBasisTable, weights: WeightVector | None = None,
                   chars: CharacterTable | None = None, tol: float = EIGEN_TOL) -> SpecialModule:
    """
    The irreducible constituent of M(C) carrying the Perron-Frobenius eigenvalue.

    The positive eigenvector of a_c (full sum over W) is projected onto each
    isotypic component with (dim chi / |W|) sum_w chi(w^-1) rho(w).
    """
    W = table.system
    chars = chars or irreducible_characters(W)
    module = cell_module(cell, table)
    A_col = _column_action(module, weights or WeightVector.uniform(W), None)
    pf = pf_analyze(A_col)
    u = pf.right
    projections = {nm: np.zeros(module.dim) for nm in chars.names}
    trace = [0] * W.order
    for w, M in module.iter_standard_action():
        Mu = _as_float(M) @ u
        trace[w] = int(np.trace(M))
        for nm in chars.names:
            # characters are real and constant on classes, so chi(w^-1) = chi(w)
            projections[nm] += chars.value(nm, w) * Mu
    norms = {nm: float(np.linalg.norm(vec * chars.dim(nm) / W.order)) for nm, vec in projections.items()}
    ranked = sorted(norms.items(), key=lambda kv: -kv[1])
    best, top = ranked[0]
    if len(ranked) > 1 and top - ranked[1][1] <= tol * top:
        raise AmbiguousProjection(f"projection norms {ranked[:2]} cannot be separated")
    return SpecialModule(tuple(module.basis), best, pf.lam, chars.decompose(trace), norms)


def families(table: CanonicalBasisTable, chars: CharacterTable | None = None,
             two_sided: CellDecomposition | None = None) -> dict[int, frozenset[str]]:
    """
    Two-sided cell index -> {L : [M(J) : L] != 0}.

    Raises NotAPartition unless the families partition Irr(W).
    """
    W = table.system
    chars = chars or irreducible_characters(W)
    two_sided = two_sided or cells(table, "two-sided")
    out = {}
    for j, J in enumerate(two_sided.cells):
        module = subquotient_module(sorted(J), table, "left")
        mult = chars.decompose(module_character(module))
        out[j] = frozenset(nm for nm, m in mult.items() if m)
    seen: dict[str, int] = {}
    for j, fam in out.items():
        for nm in fam:
            if nm in seen:
                raise NotAPartition(f"{nm} occurs in the modules of two-sided cells {seen[nm]} and {j}")
            seen[nm] = j
    missing = set(chars.names) - set(seen)
    if missing:
        raise NotAPartition(f"irreducibles {sorted(missing)} occur in no two-sided cell module")
    return out


# -- the monotonicity conjecture ---------------------------------------------------

@dataclass
class CellAnalysis:
    cell: tuple[int, ...]
    two_sided: int
    lam: float
    special: str | None


def conjecture_check(table: CanonicalBasisTable, weights: WeightVector | None = None,
                     tol: float = EIGEN_TOL, left: CellDecomposition | None = None,
                     two_sided: CellDecomposition | None = None, check_special: bool = True,
                     executor=None) -> dict:
    """
    Check that the eigenvalue of a_c is constant on two-sided cells and
    weakly decreasing upwards in the two-sided order; when a character
    table exists, also check that L_C matches the uniform-weight choice.
    """
    W = table.system
    weights = weights or WeightVector.uniform(W)
    left = left or cells(table, "left")
    two_sided = two_sided or cells(table, "two-sided")
    chars = None
    if check_special:
        try:
            chars = irreducible_characters(W)
        except UnsupportedType:
            chars = None

    def analyse(c: tuple[int, ...]) -> CellAnalysis:
        lam = perron_data(c, table, weights).lam
        spec = special_module(c, table, weights, chars).label if chars else None
        return CellAnalysis(c, two_sided.cell_of[c[0]], lam, spec)

    mapper = executor.map if executor is not None else map
    per_cell = list(mapper(analyse, left.cells))

    constant = []
    by_J: dict[int, list[CellAnalysis]] = {}
    for ca in per_cell:
        by_J.setdefault(ca.two_sided, []).append(ca)
    a_of_J = {}
    for j, group in sorted(by_J.items()):
        lams = [g.lam for g in group]
        spread = (max(lams) - min(lams)) / max(lams)
        a_of_J[j] = lams[0]
        constant.append({"J": j, "lambdas": lams, "spread": spread, "passed": spread <= tol})

    monotone = []
    for i in range(len(two_sided)):
        for j in range(len(two_sided)):
            if i != j and two_sided.leq(i, j):
                # i below j, so a(i) >= a(j)
                ok = a_of_J[i] >= a_of_J[j] * (1 - tol)
                monotone.append({"lower": i, "upper": j, "a_lower": a_of_J[i], "a_upper": a_of_J[j], "passed": ok})

    special = []
    if chars is not None:
        uniform = WeightVector.uniform(W)
        same_J_labels: dict[int, set[str]] = {}
        for ca in per_cell:
            ref = ca.special if weights.is_uniform else special_module(ca.cell, table, uniform, chars).label
            same_J_labels.setdefault(ca.two_sided, set()).add(ca.special)
            special.append({"cell": [W.name(x) for x in ca.cell], "special": ca.special,
                            "uniform_special": ref, "passed": ca.special == ref})
        for j, labels in sorted(same_J_labels.items()):
            special.append({"J": j, "labels": sorted(labels), "passed": len(labels) == 1})

    passed = all(r["passed"] for r in constant + monotone + special)
    return {
        "weights": weights.label,
        "tolerance": tol,
        "two_sided_cells": [[W.name(x) for x in c] for c in two_sided.cells],
        "a": {str(j): a for j, a in sorted(a_of_J.items())},
        "constant_on_two_sided_cells": constant,
        "monotone": monotone,
        "special_modules": special,
        "passed": passed,
    }
