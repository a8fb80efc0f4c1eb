"""Solver-agnostic description of a linear conic problem (LP / SDP).

A :class:`ConicProblem` has scalar variables and symmetric matrix variable
blocks.  The flat column space used by every coefficient is: scalars first
(in declaration order), then for each block its upper triangle, row by row,
so a size-s block occupies s*(s+1)/2 columns.  Constraints are named linear
equalities, named linear inequalities (<=), and named PSD constraints of the
form  constant + sum_k coef_k * x_k * E(i_k, j_k)  >= 0  (E places the
coefficient symmetrically at (i, j) and (j, i)).  The objective is a linear
functional to be minimized.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InputValidationError


def tri_count(size: int) -> int:
    return size * (size + 1) // 2


def tri_index(i: int, j: int, size: int) -> int:
    """Position of upper-triangle entry (i, j), 0-based, i <= j after swap."""
    if i > j:
        i, j = j, i
    return i * size - i * (i + 1) // 2 + j


@dataclass(frozen=True)
class LinearRow:
    """One named linear constraint row: sum of coef * column compared to rhs."""
    name: str
    terms: tuple  # ((column, coefficient), ...)
    rhs: float


@dataclass(frozen=True)
class PsdConstraint:
    """constant + sum coef * x_col placed symmetrically at (i, j) must be PSD."""
    name: str
    size: int
    constant: np.ndarray          # (size, size), symmetric, read-only
    terms: tuple                  # ((column, i, j, coefficient), ...) with i <= j


@dataclass(frozen=True)
class ConicProblem:
    scalars: tuple                # scalar variable names
    blocks: tuple                 # ((block name, size), ...)
    objective: tuple              # ((column, coefficient), ...), minimized
    equalities: tuple             # LinearRow...
    inequalities: tuple           # LinearRow..., sense <=
    psd_constraints: tuple        # PsdConstraint...

    def __post_init__(self):
        ncols = self.num_columns
        names = set()
        for name in self.scalars:
            if name in names:
                raise InputValidationError(f"duplicate scalar name {name!r}")
            names.add(name)
        for name, size in self.blocks:
            if size < 1:
                raise InputValidationError(f"block {name!r} must have size >= 1")
            if name in names:
                raise InputValidationError(f"duplicate block name {name!r}")
            names.add(name)
        cnames = set()
        for row in self.equalities + self.inequalities:
            self._check_row(row, ncols, cnames)
        for psd in self.psd_constraints:
            if psd.name in cnames:
                raise InputValidationError(f"duplicate constraint name {psd.name!r}")
            cnames.add(psd.name)
            if psd.constant.shape != (psd.size, psd.size):
                raise InputValidationError(f"psd constant shape mismatch in {psd.name!r}")
            if not np.all(np.isfinite(psd.constant)):
                raise InputValidationError(f"non-finite constant in {psd.name!r}")
            for col, i, j, coef in psd.terms:
                if not (0 <= col < ncols):
                    raise InputValidationError(f"column {col} out of range in {psd.name!r}")
                if not (0 <= i <= j < psd.size):
                    raise InputValidationError(f"bad entry ({i},{j}) in {psd.name!r}")
                if not math.isfinite(coef):
                    raise InputValidationError(f"non-finite coefficient in {psd.name!r}")
        for col, coef in self.objective:
            if not (0 <= col < ncols):
                raise InputValidationError(f"objective column {col} out of range")
            if not math.isfinite(coef):
                raise InputValidationError("non-finite objective coefficient")

    @staticmethod
    def _check_row(row: LinearRow, ncols: int, cnames: set):
        if row.name in cnames:
            raise InputValidationError(f"duplicate constraint name {row.name!r}")
        cnames.add(row.name)
        if not math.isfinite(row.rhs):
            raise InputValidationError(f"non-finite rhs in {row.name!r}")
        for col, coef in row.terms:
            if not (0 <= col < ncols):
                raise InputValidationError(f"column {col} out of range in {row.name!r}")
            if not math.isfinite(coef):
                raise InputValidationError(f"non-finite coefficient in {row.name!r}")

    @property
    def num_columns(self) -> int:
        return len(self.scalars) + sum(tri_count(size) for _, size in self.blocks)

    def scalar_column(self, name: str) -> int:
        return self.scalars.index(name)

    def block_column(self, name: str, i: int, j: int) -> int:
        """Column of upper-triangle entry (i, j), 0-based, of a named block."""
        off = len(self.scalars)
        for bname, size in self.blocks:
            if bname == name:
                return off + tri_index(i, j, size)
            off += tri_count(size)
        raise KeyError(name)

    def column_label(self, col: int) -> str:
        """Human-readable 1-based label of a flat column, used in dumps."""
        if col < len(self.scalars):
            return self.scalars[col]
        off = len(self.scalars)
        for bname, size in self.blocks:
            if col < off + tri_count(size):
                k = col - off
                for i in range(size):
                    width = size - i
                    if k < width:
                        return f"{bname}[{i + 1},{i + k + 1}]"
                    k -= width
            off += tri_count(size)
        raise IndexError(col)


class ProblemBuilder:
    """Mutable accumulator producing an immutable ConicProblem."""

    def __init__(self):
        self._scalars = []
        self._blocks = []
        self._objective = []
        self._eqs = []
        self._les = []
        self._psds = []

    def add_scalar(self, name: str) -> int:
        self._scalars.append(name)
        return len(self._scalars) - 1

    def add_block(self, name: str, size: int):
        self._blocks.append((name, size))

    def column(self, name: str, i: int = None, j: int = None) -> int:
        """Flat column of a scalar (i, j omitted) or a block entry (0-based)."""
        if i is None:
            return self._scalars.index(name)
        off = len(self._scalars)
        for bname, size in self._blocks:
            if bname == name:
                if not (0 <= i < size and 0 <= j < size):
                    raise InputValidationError(
                        f"entry ({i},{j}) out of range for block {name!r} of size {size}"
                    )
                return off + tri_index(i, j, size)
            off += tri_count(size)
        raise KeyError(name)

    def set_objective(self, terms):
        self._objective = list(terms)

    def add_eq(self, name: str, terms, rhs: float):
        self._eqs.append(LinearRow(name, tuple(terms), float(rhs)))

    def add_le(self, name: str, terms, rhs: float):
        self._les.append(LinearRow(name, tuple(terms), float(rhs)))

    def add_psd(self, name: str, size: int, constant, terms):
        const = np.array(constant, dtype=float)
        const.flags.writeable = False
        self._psds.append(PsdConstraint(name, size, const, tuple(terms)))

    def build(self) -> ConicProblem:
        return ConicProblem(
            scalars=tuple(self._scalars),
            blocks=tuple(self._blocks),
            objective=tuple(self._objective),
            equalities=tuple(self._eqs),
            inequalities=tuple(self._les),
            psd_constraints=tuple(self._psds),
        )


def _fmt(x: float) -> str:
    return f"{x:.17g}"


def _terms_text(p: ConicProblem, terms) -> str:
    parts = []
    for col, coef in terms:
        sign = "+" if coef >= 0 else "-"
        parts.append(f"{sign}{_fmt(abs(coef))}*{p.column_label(col)}")
    return " ".join(parts) if parts else "0"


def problem_to_text(p: ConicProblem) -> str:
    """Stable human-readable listing of a ConicProblem.

    One line per scalar, block and linear constraint; PSD constraints list
    their nonzero constant entries and terms one per line.  All indices are
    1-based.  The format is fixed so dumps can be diffed across runs.
    """
    out = []
    out.append(f"conic problem: {len(p.scalars)} scalar(s), {len(p.blocks)} block(s), "
               f"{len(p.equalities)} eq, {len(p.inequalities)} le, "
               f"{len(p.psd_constraints)} psd")
    for name in p.scalars:
        out.append(f"scalar {name}")
    for name, size in p.blocks:
        out.append(f"block {name} size {size}")
    out.append(f"minimize {_terms_text(p, p.objective)}")
    for row in p.equalities:
        out.append(f'eq "{row.name}": {_terms_text(p, row.terms)} = {_fmt(row.rhs)}')
    for row in p.inequalities:
        out.append(f'le "{row.name}": {_terms_text(p, row.terms)} <= {_fmt(row.rhs)}')
    for psd in p.psd_constraints:
        out.append(f'psd "{psd.name}" size {psd.size}')
        for i in range(psd.size):
            for j in range(i, psd.size):
                v = psd.constant[i, j]
                if v != 0.0:
                    out.append(f"  const[{i + 1},{j + 1}] = {_fmt(v)}")
        for col, i, j, coef in psd.terms:
            sign = "+" if coef >= 0 else "-"
            out.append(f"  {sign}{_fmt(abs(coef))}*{p.column_label(col)} @ [{i + 1},{j + 1}]")
    return "\n".join(out) + "\n"
