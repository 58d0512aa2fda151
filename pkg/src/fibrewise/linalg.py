"""Exact sparse linear algebra over the rationals.

Vectors and matrix rows are dicts {column index: Fraction} holding only
nonzero entries.  Everything is deterministic: pivots are chosen as the
first usable row in index order, so repeated runs produce identical
echelon forms, kernels and particular solutions.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable

Vector = dict[int, Fraction]


def vec_add(a: Vector, b: Vector, scale: Fraction = Fraction(1)) -> Vector:
    out = dict(a)
    for col, val in b.items():
        total = out.get(col, 0) + val * scale
        if total:
            out[col] = total
        else:
            out.pop(col, None)
    return out


def vec_scale(a: Vector, scale: Fraction) -> Vector:
    if not scale:
        return {}
    return {col: val * scale for col, val in a.items()}


def rref(rows: Iterable[Vector], ncols: int) -> tuple[list[int], list[Vector]]:
    """Reduced row echelon form.

    Returns (pivot columns ascending, reduced nonzero rows); row i has its
    leading 1 in pivot column i and zeros in every other pivot column.
    """
    work = [dict(r) for r in rows if r]
    pivots: list[int] = []
    reduced: list[Vector] = []
    for col in range(ncols):
        pivot_row = None
        for i, row in enumerate(work):
            if row.get(col):
                pivot_row = i
                break
        if pivot_row is None:
            continue
        row = work.pop(pivot_row)
        row = vec_scale(row, Fraction(1) / row[col])
        for other in work:
            val = other.get(col)
            if val:
                updated = vec_add(other, row, -val)
                other.clear()
                other.update(updated)
        for other in reduced:
            val = other.get(col)
            if val:
                updated = vec_add(other, row, -val)
                other.clear()
                other.update(updated)
        work = [r for r in work if r]
        pivots.append(col)
        reduced.append(row)
    return pivots, reduced


def rank(rows: Iterable[Vector], ncols: int) -> int:
    return len(rref(rows, ncols)[0])


def nullspace(rows: Iterable[Vector], ncols: int) -> list[Vector]:
    """Deterministic kernel basis of the linear map with the given equation
    rows: one vector per free column, ascending, with a 1 at that column."""
    pivots, reduced = rref(rows, ncols)
    pivot_set = set(pivots)
    basis: list[Vector] = []
    for free in range(ncols):
        if free in pivot_set:
            continue
        vec: Vector = {free: Fraction(1)}
        for pivot, row in zip(pivots, reduced):
            val = row.get(free)
            if val:
                vec[pivot] = -val
        basis.append(vec)
    return basis


def solve(rows: list[Vector], rhs: Vector, ncols: int) -> Vector | None:
    """One solution of the equation system `rows . x = rhs`, free variables
    set to zero; None when the system is inconsistent."""
    augmented = []
    for i, row in enumerate(rows):
        aug = dict(row)
        val = rhs.get(i)
        if val:
            aug[ncols] = val
        if aug:
            augmented.append(aug)
    pivots, reduced = rref(augmented, ncols + 1)
    solution: Vector = {}
    for pivot, row in zip(pivots, reduced):
        if pivot == ncols:
            return None
        val = row.get(ncols)
        if val:
            solution[pivot] = val
    return solution


def in_span(rows: list[Vector], vec: Vector, ncols: int) -> bool:
    """Whether `vec` lies in the row span of `rows`."""
    base_rank = rank(rows, ncols)
    return rank(rows + [vec], ncols) == base_rank


def same_span(a: list[Vector], b: list[Vector], ncols: int) -> bool:
    ra = rank(a, ncols)
    rb = rank(b, ncols)
    return ra == rb == rank(a + b, ncols)
