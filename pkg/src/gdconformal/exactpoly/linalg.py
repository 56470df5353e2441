"""Exact linear algebra over Q (and over polynomial rings, for rank tests).

Large sparse systems go through :class:`RowSpace`, an incremental echelon
form on integer rows: elimination is fraction-free (cross multiplication
followed by division by the row content), so no rational ever appears
inside the reduction loop.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Iterable, Mapping, NamedTuple, Sequence

from .poly import Poly, VecPoly, VariableMismatch, to_fraction

__all__ = [
    "RowSpace",
    "integer_row",
    "rref",
    "kernel",
    "Solution",
    "vecpoly_linsolve",
    "poly_rank",
    "poly_kernel_vector",
]


def integer_row(row: Mapping[int, Fraction]) -> dict[int, int]:
    """Scale a sparse rational row to a primitive integer row (sign unchanged)."""
    items = [(k, to_fraction(v)) for k, v in row.items() if v]
    if not items:
        return {}
    den = 1
    for _, v in items:
        den = den * v.denominator // gcd(den, v.denominator)
    ints = {k: int(v * den) for k, v in items}
    g = 0
    for v in ints.values():
        g = gcd(g, v)
    return {k: v // g for k, v in ints.items()}


def _primitive(row: dict[int, int]) -> dict[int, int]:
    g = 0
    for v in row.values():
        g = gcd(g, v)
        if g == 1:
            return row
    return {k: v // g for k, v in row.items()}


class RowSpace:
    """Incremental echelon basis of a subspace of Q^(columns), sparse integer rows.

    The pivot of a row is its smallest column index; every stored row has a
    positive pivot entry and no entry in an earlier pivot column.
    """

    def __init__(self):
        self.pivots: dict[int, dict[int, int]] = {}

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def _reduce(self, row: dict[int, int]) -> dict[int, int]:
        # Reduce until the leading column is not a pivot.  Entries in later
        # pivot columns may survive; see reduce_full.
        row = dict(row)
        while row:
            c = min(row)
            piv = self.pivots.get(c)
            if piv is None:
                return row
            a = row[c]
            p = piv[c]
            g = gcd(a, p)
            ma, mp = p // g, a // g
            if ma != 1:
                row = {k: v * ma for k, v in row.items()}
            for k, v in piv.items():
                nv = row.get(k, 0) - mp * v
                if nv:
                    row[k] = nv
                else:
                    row.pop(k, None)
            if row:
                row = _primitive(row)
        return row

    def add(self, row: Mapping[int, Fraction | int]) -> bool:
        """Insert a row; returns True iff it enlarged the space."""
        r = self._reduce(integer_row(row))
        if not r:
            return False
        c = min(r)
        if r[c] < 0:
            r = {k: -v for k, v in r.items()}
        self.pivots[c] = r
        return True

    def reduce_full(self, row: Mapping[int, Fraction | int]) -> dict[int, Fraction]:
        """Remainder of ``row`` with every pivot column eliminated (exact, rational)."""
        vec = {k: to_fraction(v) for k, v in row.items() if v}
        for c in sorted(self.pivots):
            a = vec.get(c)
            if not a:
                continue
            piv = self.pivots[c]
            f = a / piv[c]
            for k, v in piv.items():
                nv = vec.get(k, 0) - f * v
                if nv:
                    vec[k] = nv
                else:
                    vec.pop(k, None)
        return vec

    def contains(self, row: Mapping[int, Fraction | int]) -> bool:
        return not self._reduce(integer_row(row))

    def free_columns(self, columns: Iterable[int]) -> list[int]:
        return [c for c in columns if c not in self.pivots]


def rref(rows: Sequence[Sequence[Fraction]], ncols: int) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form of a dense rational matrix; returns (rows, pivot columns)."""
    m = [[to_fraction(x) for x in r] for r in rows]
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        pr = next((i for i in range(r, len(m)) if m[i][c]), None)
        if pr is None:
            continue
        m[r], m[pr] = m[pr], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c]:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


def kernel(rows: Sequence[Sequence[Fraction]], ncols: int) -> list[list[Fraction]]:
    """Basis of {x : A x = 0}, one vector per free column (free entry set to 1)."""
    red, pivots = rref(rows, ncols)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for row, p in zip(red, pivots):
            v[p] = -row[f]
        basis.append(v)
    return basis


class Solution(NamedTuple):
    """Affine solution set ``particular + span(basis)``; ``particular`` is None if inconsistent."""

    particular: list[Fraction] | None
    basis: list[list[Fraction]]

    @property
    def dimension(self) -> int:
        return -1 if self.particular is None else len(self.basis)


def vecpoly_linsolve(system: Iterable[Poly | VecPoly], unknowns: Sequence[str]) -> Solution:
    """Solve equations ``= 0`` whose coefficients are affine in the named unknowns.

    Each equation is a polynomial (or vector of polynomials) whose context
    contains the unknowns; every coefficient of every monomial in the
    remaining variables gives one scalar linear equation.
    """
    unknowns = tuple(unknowns)
    n = len(unknowns)
    rows: list[list[Fraction]] = []
    for eq in system:
        polys = eq.comps if isinstance(eq, VecPoly) else (eq,)
        for p in polys:
            idx = []
            for u in unknowns:
                if u not in p.vars:
                    raise VariableMismatch(f"unknown {u!r} not in context {p.vars}")
                idx.append(p.vars.index(u))
            iu = set(idx)
            grouped: dict[tuple, list[Fraction]] = {}
            for e, c in p.terms.items():
                deg = sum(e[i] for i in idx)
                if deg > 1:
                    raise ValueError("equation is not linear in the unknowns")
                rest = tuple(k for i, k in enumerate(e) if i not in iu)
                row = grouped.setdefault(rest, [Fraction(0)] * (n + 1))
                if deg == 0:
                    row[n] += c
                else:
                    j = next(j for j, i in enumerate(idx) if e[i])
                    row[j] += c
            rows.extend(grouped.values())
    # A x + b = 0  ->  [A | b]
    red, pivots = rref(rows, n + 1) if rows else ([], [])
    if n in pivots:
        return Solution(None, kernel([r[:n] for r in red], n))
    particular = [Fraction(0)] * n
    for row, p in zip(red, pivots):
        particular[p] = -row[n]
    return Solution(particular, kernel([r[:n] for r in red], n))


def _bareiss(matrix: list[list[Poly]]) -> tuple[int, list[list[Poly]], list[int]]:
    m = [list(r) for r in matrix]
    nrows = len(m)
    ncols = len(m[0]) if m else 0
    prev = None
    r = 0
    pivcols = []
    for c in range(ncols):
        pr = next((i for i in range(r, nrows) if m[i][c]), None)
        if pr is None:
            continue
        m[r], m[pr] = m[pr], m[r]
        for i in range(r + 1, nrows):
            for j in range(c + 1, ncols):
                val = m[r][c] * m[i][j] - m[i][c] * m[r][j]
                m[i][j] = val.divexact(prev) if prev is not None else val
            m[i][c] = Poly.zero(m[i][c].vars)
        prev = m[r][c]
        pivcols.append(c)
        r += 1
        if r == nrows:
            break
    return r, m, pivcols


def poly_rank(matrix: Sequence[Sequence[Poly]]) -> int:
    """Rank over the fraction field of the polynomial ring (fraction-free Bareiss)."""
    if not matrix or not matrix[0]:
        return 0
    return _bareiss([list(r) for r in matrix])[0]


def poly_kernel_vector(rows: Sequence[Sequence[Poly]]) -> list[Poly] | None:
    """A nonzero polynomial vector ``c`` with ``sum_i c_i * rows[i] = 0``, or None.

    Works on the transposed system via Bareiss elimination; the vector is
    cleared of denominators so its entries are polynomials.
    """
    if not rows:
        return None
    nrows = len(rows)
    ncols = len(rows[0])
    vars = rows[0][0].vars if ncols else ()
    # columns of the transpose are the rows; solve sum_i c_i rows[i][j] = 0 for all j
    mt = [[rows[i][j] for i in range(nrows)] for j in range(ncols)]
    if not mt:
        one = Poly.const(vars, 1)
        return [one] + [Poly.zero(vars)] * (nrows - 1)
    rank, ech, pivcols = _bareiss(mt)
    free = [c for c in range(nrows) if c not in pivcols]
    if not free:
        return None
    f = free[0]
    # back substitution over the fraction field, cleared to polynomials at the end
    sol: dict[int, tuple[Poly, Poly]] = {f: (Poly.const(vars, 1), Poly.const(vars, 1))}
    for k in reversed(range(rank)):
        c = pivcols[k]
        num = Poly.zero(vars)
        den = Poly.const(vars, 1)
        for j in range(c + 1, nrows):
            if j in sol and ech[k][j]:
                sn, sd = sol[j]
                num = num * sd + ech[k][j] * sn * den
                den = den * sd
        # ech[k][c] * x_c + num/den = 0
        sol[c] = (-num, ech[k][c] * den)
    common = Poly.const(vars, 1)
    for _, d in sol.values():
        common = common * d
    out = []
    for i in range(nrows):
        if i in sol:
            n_, d_ = sol[i]
            out.append((n_ * common).divexact(d_))
        else:
            out.append(Poly.zero(vars))
    return out
