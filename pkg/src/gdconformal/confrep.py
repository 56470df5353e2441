"""Conformal representations: gc_{n|m}, module checks, faithfulness, finite faithful modules.

gc_{n|m} is realised as (n+m)x(n+m) matrices over Q[D, x] (D the module
derivation, x the matrix variable) with

    [A _lam B] = A(x) B(x + lam) - (-1)^{|A||B|} B(x) A(x - D - lam)

on D-free matrices, extended sesquilinearly.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Mapping, Sequence

from .confalg import (
    D2,
    LAM2,
    SesquiTable,
    _check_triples,
    module_residual,
    quadratic_bracket,
)
from .envelope.freealg import Elem, Truncation, TruncationOverflow, word_key
from .envelope.ideal import Window, speciality_kernel, with_zero_bracket
from .exactpoly import CTX2, CTX4, Poly, RowSpace, VecPoly, poly_kernel_vector, poly_rank, rref
from .gdcore import AxiomError, AxiomReport, SuperAlgebra, SuperBasis, check_gd

D4 = Poly.var(CTX4, "D")
LAM4 = Poly.var(CTX4, "lam")
MU4 = Poly.var(CTX4, "mu")
X4 = Poly.var(CTX4, "x")


# ---------------------------------------------------------------------------
# gc_{n|m}


@dataclass(frozen=True)
class GcElement:
    """Sparse supermatrix with entries in Q[D, lam, mu, x]; lam and mu act as parameters."""

    n: int
    m: int
    entries: Mapping
    parity: int = 0

    def __post_init__(self):
        for (i, j), p in self.entries.items():
            if p.vars != CTX4:
                raise ValueError("entries must live in (D, lam, mu, x)")
            if p and self.block_parity(i, j) != self.parity:
                raise ValueError(f"entry ({i}, {j}) is outside the blocks of parity {self.parity}")

    @property
    def size(self) -> int:
        return self.n + self.m

    def block_parity(self, i: int, j: int) -> int:
        return int(i >= self.n) ^ int(j >= self.n)

    @classmethod
    def unit(cls, n: int, m: int, i: int, j: int, k: int = 0) -> "GcElement":
        """x^k E_ij."""
        par = int(i >= n) ^ int(j >= n)
        return cls(n, m, {(i, j): X4 ** k}, par)

    def is_zero(self) -> bool:
        return not any(self.entries.values())

    def map(self, fn) -> "GcElement":
        out = {k: fn(p) for k, p in self.entries.items()}
        return GcElement(self.n, self.m, {k: p for k, p in out.items() if p}, self.parity)

    def __add__(self, other: "GcElement") -> "GcElement":
        out = dict(self.entries)
        for k, p in other.entries.items():
            out[k] = out[k] + p if k in out else p
        return GcElement(self.n, self.m, {k: p for k, p in out.items() if p}, self.parity)

    def __sub__(self, other: "GcElement") -> "GcElement":
        return self + other.map(lambda p: -p)

    def scale(self, c) -> "GcElement":
        return self.map(lambda p: p * c)

    def format(self) -> str:
        if self.is_zero():
            return "0"
        return "; ".join(f"E{i}{j}: {p}" for (i, j), p in sorted(self.entries.items()) if p)


def _matmul(a: Mapping, b: Mapping) -> dict:
    out: dict = {}
    for (i, k), p in a.items():
        for (k2, j), q in b.items():
            if k == k2:
                out[(i, j)] = out[(i, j)] + p * q if (i, j) in out else p * q
    return {k: v for k, v in out.items() if v}


def gc_bracket(A: GcElement, B: GcElement, var: Poly = LAM4) -> GcElement:
    """[A _var B] for elements whose entries may involve D (and parameters)."""
    if (A.n, A.m) != (B.n, B.m):
        raise ValueError("size mismatch")
    s = -1 if A.parity and B.parity else 1
    # A(D -> -var) and B(D -> D + var), then the x-shifts
    a_left = {k: p.compose(CTX4, {"D": -var}) for k, p in A.entries.items()}
    b_shift = {k: p.compose(CTX4, {"D": D4 + var, "x": X4 + var}) for k, p in B.entries.items()}
    b_plain = {k: p.compose(CTX4, {"D": D4 + var}) for k, p in B.entries.items()}
    a_shift = {k: p.compose(CTX4, {"D": -var, "x": X4 - D4 - var}) for k, p in A.entries.items()}
    first = _matmul(a_left, b_shift)
    second = _matmul(b_plain, a_shift)
    for k, p in second.items():
        first[k] = first[k] - p * s if k in first else -(p * s)
    par = A.parity ^ B.parity
    return GcElement(A.n, A.m, {k: p for k, p in first.items() if p}, par)


def gc_units(n: int, m: int, cap: int) -> list[tuple[str, GcElement]]:
    out = []
    for i, j in product(range(n + m), repeat=2):
        for k in range(cap + 1):
            out.append((f"x^{k}E{i}{j}", GcElement.unit(n, m, i, j, k)))
    return out


def check_gc_jacobi(n: int, m: int, degree_cap: int) -> AxiomReport:
    """Skew-symmetry and conformal Jacobi of gc_{n|m} on all units x^k E_ij, k <= cap."""
    if n < 0 or m < 0 or n + m == 0 or degree_cap < 0:
        raise ValueError("need n + m >= 1 and a non-negative degree cap")
    units = gc_units(n, m, degree_cap)
    rep = AxiomReport(name="gc")
    br = {}
    for (la, a), (lb, b) in product(units, repeat=2):
        br[(la, lb)] = gc_bracket(a, b, LAM4)
    for (la, a), (lb, b) in product(units, repeat=2):
        s = -1 if a.parity and b.parity else 1
        flipped = br[(lb, la)].map(lambda p: p.compose(CTX4, {"lam": -D4 - LAM4}))
        res = br[(la, lb)] + flipped.scale(s)
        rep.checked += 1
        if not res.is_zero():
            rep.add("gc.skew_symmetry", (la, lb), res.format())
    for (la, a), (lb, b) in product(units, repeat=2):
        s = -1 if a.parity and b.parity else 1
        ab = br[(la, lb)]
        for lc, c in units:
            bc_mu = br[(lb, lc)].map(lambda p: p.compose(CTX4, {"lam": MU4}))
            ac = br[(la, lc)]
            t1 = gc_bracket(a, bc_mu, LAM4)
            t2 = gc_bracket(b, ac, MU4)
            t3 = gc_bracket(ab, c, LAM4 + MU4)
            res = t1 - t2.scale(s) - t3
            rep.checked += 1
            if not res.is_zero():
                rep.add("gc.jacobi", (la, lb, lc), res.format())
    return rep


# ---------------------------------------------------------------------------
# modules


def check_module(L: SesquiTable, rho: SesquiTable) -> AxiomReport:
    """rho_lam(a, rho_mu(b, x)) - (-1)^{|a||b|} rho_mu(b, rho_lam(a, x)) = rho_{lam+mu}([a _lam b], x)."""
    if rho.left != L.left:
        raise ValueError("representation and algebra use different generators")
    return _check_triples(
        L, lambda i, j, k: module_residual(L, rho, i, j, k), "module", third=rho.right, target=rho.target
    )


@dataclass
class Faithfulness:
    """Verdict plus evidence: a witnessing column, or coefficients f_i(lam) of
    a combination sum_i f_i(-D) a_i that acts as zero."""

    faithful: bool
    witness: str | None = None
    relation: list | None = None

    def __bool__(self) -> bool:
        return self.faithful

    def combination(self, names) -> str:
        if not self.relation:
            return ""
        parts = [f"({p})*{n}" for p, n in zip(self.relation, names) if str(p) != "0"]
        return " + ".join(parts)


def _coefficient_rows(rho: SesquiTable, cols: Sequence[int]) -> list[list[Poly]]:
    """Per generator a, the entries of rho_lam(a, e_j), j in cols, split by powers of D (polys in lam)."""
    rows = []
    n = rho.left.dim
    slots: list = []
    for j in cols:
        for k in range(rho.target.dim):
            top = max((rho.entry(a, j)[k].degree("D") for a in range(n)), default=0)
            slots.extend((j, k, e) for e in range(max(top, 0) + 1))
    for a in range(n):
        row = []
        for j, k, e in slots:
            p = rho.entry(a, j)[k]
            terms = {(0, ex[1]): c for ex, c in p.terms.items() if ex[0] == e}
            row.append(Poly(CTX2, terms))
        rows.append(row)
    return rows


def check_faithful(L: SesquiTable, rho: SesquiTable, prefer: str | None = "1") -> Faithfulness:
    """Is the action of sum_i f_i(D) a_i zero only for f = 0?

    rho_lam(f(D) a, e_j) = f(-lam) rho_lam(a, e_j), so faithfulness is the
    independence over Q(lam) of the rows a -> (rho_lam(a, e_j))_j with each
    entry split by powers of D.  Single columns are tried first, starting
    with the one labelled ``prefer``; a hit there is the witness.
    """
    n = rho.left.dim
    if n == 0:
        return Faithfulness(True)
    cols = list(range(rho.right.dim))
    if prefer in rho.right.names:
        j0 = rho.right.index(prefer)
        cols = [j0] + [j for j in cols if j != j0]
    for j in cols:
        if poly_rank(_coefficient_rows(rho, [j])) == n:
            return Faithfulness(True, rho.right.names[j])
    rows = _coefficient_rows(rho, range(rho.right.dim))
    if rows and rows[0] and poly_rank(rows) == n:
        return Faithfulness(True, "all columns")
    if not rows or not rows[0]:
        return Faithfulness(False, rho.left.names[0], ["1"] + ["0"] * (n - 1))
    rel = poly_kernel_vector(rows)
    lead = next(i for i, p in enumerate(rel) if p)
    return Faithfulness(False, rho.left.names[lead], [str(p) for p in rel])


def action_matrices(rho: SesquiTable) -> dict[str, list[list[str]]]:
    """rho as matrices over Q[D, lam]: column j holds the coordinates of rho_lam(a, e_j)."""
    out = {}
    for a in range(rho.left.dim):
        mat = []
        for k in range(rho.target.dim):
            mat.append([str(rho.entry(a, j)[k]) for j in range(rho.right.dim)])
        out[rho.left.names[a]] = mat
    return out


# ---------------------------------------------------------------------------
# finite faithful representation


class FfrError(ArithmeticError):
    """The window is too small (or inconsistent) for the construction."""


@dataclass
class FfrModule:
    """Action of L(V) on H (x) (U_-1 + U_0/N), computed in a truncation window."""

    V: SuperAlgebra
    algebra: SesquiTable
    umin1_basis: list
    u0q_basis: list
    action: SesquiTable
    module_report: AxiomReport
    faithfulness: Faithfulness
    dims: dict = field(default_factory=dict)

    @property
    def rank(self) -> int:
        return self.action.right.dim

    @property
    def passed(self) -> bool:
        return self.module_report.passed and self.faithfulness.faithful


def _stable_umin1(window: Window) -> None:
    comp = window.component(-1)
    V = window.V
    gens = {((( g, 0),),) for g in range(V.dim)}
    if comp.dim != V.dim or set(comp.quotient_basis) != gens:
        raise FfrError(f"U_-1 has dimension {comp.dim} in the window, expected {V.dim}")


def _solve(columns: list[list[Fraction]], target: list[Fraction]) -> list[Fraction] | None:
    """c with sum_i c_i columns[i] = target, or None."""
    k = len(columns)
    rows = [[col[r] for col in columns] + [target[r]] for r in range(len(target))]
    red, piv = rref(rows, k + 1)
    if k in piv:
        return None
    out = [Fraction(0)] * k
    for row, p in zip(red, piv):
        out[p] = row[k]
    return out


def build_ffr(V: SuperAlgebra, T: Truncation, check_previous: bool = True) -> FfrModule:
    """Finite faithful module of the quadratic conformal algebra L(V).

    U_-1 is identified with V (checked in the window and, with
    ``check_previous``, in the window of degree R-1 as well).  U_0/N is
    spanned by weight-0 monomials told apart by their signatures
    u -> (x_a u)_a in U_-1.  On a class u in U_0/N

        rho_lam(a, u) = {a, u} + D d(a)u + lam d(au)  (in U_0/N)  +  lam au  (in U_-1)

    and on U_-1 the action is the quadratic lambda-bracket.
    """
    Vb = with_zero_bracket(V)
    rep = check_gd(Vb)
    if not rep.passed:
        raise AxiomError(rep.violations[0].describe(V.format_vector))
    if T.R < 3:
        raise FfrError("degree bound must be at least 3")
    window = Window(Vb, T, "free")
    if speciality_kernel(Vb, T, window).exceptional:
        raise AxiomError("speciality kernel is nonzero")
    _stable_umin1(window)
    dims = {"U_-1": window.component(-1).dim}
    if check_previous:
        prev = Window(Vb, T.with_degree(T.R - 1), "free")
        _stable_umin1(prev)
        dims["U_-1(R-1)"] = prev.component(-1).dim
    alg = window.alg
    um1 = window.component(-1)
    n = V.dim
    gens = [alg.gen(a) for a in range(n)]

    def signature(u: Elem) -> list[Fraction]:
        out = []
        for g in gens:
            out.extend(um1.coordinates(alg.mul(g, u)))
        return out

    def action_parts(u: Elem):
        parts = []
        for a, g in enumerate(gens):
            au = alg.mul(g, u)
            parts.append(
                (
                    alg.bracket(g, u),
                    alg.mul(alg.d(g), u),
                    alg.d(au),
                    um1.coordinates(au),
                )
            )
        return parts

    cands = sorted(
        alg.monomials(0, T.R - 2), key=lambda m: (alg.mono_degree(m), [word_key(w) for w in m])
    )
    space = RowSpace()
    reps, sigs, acts = [], [], []
    for m in cands:
        u = Elem({m: 1})
        sig = signature(u)
        if not any(sig):
            continue
        if not space.contains(dict(enumerate(sig))):
            try:
                parts = action_parts(u)
            except TruncationOverflow:
                continue
            space.add(dict(enumerate(sig)))
            reps.append(m)
            sigs.append(sig)
            acts.append(parts)
    if len(reps) > n * n:
        raise FfrError(f"U_0/N has {len(reps)} classes, more than dim(V)^2")

    def in_quotient(u: Elem) -> list[Fraction]:
        coords = _solve(sigs, signature(u))
        if coords is None:
            raise FfrError("the action leaves the span of the chosen classes; enlarge the window")
        return coords

    # module basis: even generators and classes first
    rep_labels = [alg.format_mono(m) for m in reps]
    rep_par = [alg.mono_parity(m) for m in reps]
    items = [("g", a, V.basis.names[a], V.basis.parity[a]) for a in range(n)]
    items += [("u", i, rep_labels[i], rep_par[i]) for i in range(len(reps))]
    order = sorted(range(len(items)), key=lambda t: (items[t][3], t))
    pos = {(items[t][0], items[t][1]): p for p, t in enumerate(order)}
    M = SuperBasis(tuple(items[t][2] for t in order), tuple(items[t][3] for t in order))
    L = quadratic_bracket(Vb, check=False)

    entries = {}
    zero = Poly.zero(CTX2)
    for a in range(n):
        for b in range(n):
            comps = [zero] * M.dim
            vec = L.entry(a, b)
            for k in range(n):
                comps[pos[("g", k)]] = vec[k]
            entries[(a, pos[("g", b)])] = VecPoly(CTX2, comps)
        for i in range(len(reps)):
            br, dau, dau2, au = acts[i][a]
            c_br, c_d, c_dau = in_quotient(br), in_quotient(dau), in_quotient(dau2)
            comps = [zero] * M.dim
            for r in range(len(reps)):
                comps[pos[("u", r)]] = c_br[r] + D2 * c_d[r] + LAM2 * c_dau[r]
            for k in range(n):
                comps[pos[("g", k)]] = LAM2 * au[k]
            entries[(a, pos[("u", i)])] = VecPoly(CTX2, comps)
    action = SesquiTable(V.basis, M, M, entries, f"ffr({V.name})" if V.name else "ffr")
    report = check_module(L, action)
    faithful = check_faithful(L, action)
    dims["U_0/N"] = len(reps)
    dims["rank"] = M.dim
    return FfrModule(V, L, [V.basis.names[a] for a in range(n)], rep_labels, action, report, faithful, dims)
