"""Lambda-brackets on free H-modules, H = Q[D].

A sesquilinear operation on free modules is stored as a table of vector
polynomials in (D, lam): the value on a pair of module generators.  The
value on arbitrary elements follows from

    [f(D) x _lam g(D) y] = f(-lam) g(D + lam) [x _lam y].

Skew-symmetry is taken in the form [x _lam y] = -(-1)^{|x||y|} [y _{-D-lam} x],
the convention under which the Virasoro bracket D v + 2 lam v is skew.

Checks run in the context (D, lam, mu).  Tables may be partial (a window of
an infinite object); a lookup outside the window raises OutsideWindow and the
checkers skip that instance and count it.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Callable, Iterable, Mapping, Sequence

from .exactpoly import CTX2, CTX3, Poly, VecPoly
from .gdcore import (
    AxiomError,
    AxiomReport,
    PoissonAlgebra,
    SuperAlgebra,
    SuperBasis,
    apply_matrix,
    check_derivation,
    check_gd,
    check_poisson,
    make_tensor,
    pd_algebra,
)

D2 = Poly.var(CTX2, "D")
LAM2 = Poly.var(CTX2, "lam")
D3 = Poly.var(CTX3, "D")
LAM3 = Poly.var(CTX3, "lam")
MU3 = Poly.var(CTX3, "mu")


class OutsideWindow(LookupError):
    """A value needed by a check lies outside a truncated table."""


@dataclass(frozen=True)
class SesquiTable:
    """Sesquilinear map  left x right -> target[lam]  on free H-modules.

    ``entries[(i, j)]`` is a VecPoly in (D, lam) over ``target``.  With
    left = right = target this is a lambda-bracket (or conformal product);
    with left = algebra and right = target = module it is a representation
    or a cochain.
    """

    left: SuperBasis
    right: SuperBasis
    target: SuperBasis
    entries: Mapping
    name: str = ""
    _cache: dict = field(default_factory=dict, compare=False, repr=False, hash=False)

    def __post_init__(self):
        for (i, j), v in self.entries.items():
            if v.vars != CTX2 or len(v) != self.target.dim:
                raise ValueError(f"entry ({i}, {j}) has wrong shape or context")
            want = (self.left.parity[i] + self.right.parity[j]) % 2
            for k in v.support():
                if self.target.parity[k] != want:
                    raise ValueError(
                        f"entry ({self.left.names[i]}, {self.right.names[j]}) has a component "
                        f"on {self.target.names[k]} of the wrong parity"
                    )

    @property
    def is_square(self) -> bool:
        return self.left == self.right == self.target

    @property
    def complete(self) -> bool:
        return len(self.entries) == self.left.dim * self.right.dim

    def entry(self, i: int, j: int) -> VecPoly:
        try:
            return self.entries[(i, j)]
        except KeyError:
            raise OutsideWindow((self.left.names[i], self.right.names[j])) from None

    def at(self, i: int, j: int, var: Poly) -> VecPoly:
        """Entry (i, j) in context (D, lam, mu) with lam replaced by ``var``."""
        key = (i, j, var)
        hit = self._cache.get(key)
        if hit is None:
            hit = self.entry(i, j).compose(CTX3, {"D": D3, "lam": var})
            self._cache[key] = hit
        return hit

    def left_act(self, i: int, vec: VecPoly, var: Poly) -> VecPoly:
        """[e_i _var vec] for vec over the right basis, coefficients in (D, lam, mu)."""
        out = VecPoly.zero(CTX3, self.target.dim)
        shift = {"D": D3 + var}
        for w in vec.support():
            coef = vec[w].compose(CTX3, shift)
            out = out + self.at(i, w, var).scale(coef)
        return out

    def right_act(self, vec: VecPoly, j: int, var: Poly) -> VecPoly:
        """[vec _var e_j] for vec over the left basis."""
        out = VecPoly.zero(CTX3, self.target.dim)
        sub = {"D": -var}
        for w in vec.support():
            coef = vec[w].compose(CTX3, sub)
            out = out + self.at(w, j, var).scale(coef)
        return out

    def format_entry(self, i: int, j: int) -> str:
        return self.entry(i, j).format(self.target.names)

    def lines(self, sym: str = "_lam") -> list[str]:
        out = []
        for i, j in sorted(self.entries):
            v = self.entries[(i, j)]
            out.append(f"[{self.left.names[i]} {sym} {self.right.names[j]}] = {v.format(self.target.names)}")
        return out


LambdaBracketTable = SesquiTable
ReprTable = SesquiTable
CocycleTable = SesquiTable


def square_table(basis: SuperBasis, entries: Mapping, name: str = "") -> SesquiTable:
    return SesquiTable(basis, basis, basis, dict(entries), name)


def zero_table(basis: SuperBasis) -> SesquiTable:
    z = VecPoly.zero(CTX2, basis.dim)
    return square_table(basis, {(i, j): z for i in range(basis.dim) for j in range(basis.dim)})


def table_from_polys(left: SuperBasis, right: SuperBasis, target: SuperBasis, fn, name: str = "") -> SesquiTable:
    """Build a table from ``fn(i, j) -> VecPoly or None`` (None: outside window)."""
    entries = {}
    for i in range(left.dim):
        for j in range(right.dim):
            v = fn(i, j)
            if v is not None:
                entries[(i, j)] = v
    return SesquiTable(left, right, target, entries, name)


# ---------------------------------------------------------------------------
# quadratic brackets


def quadratic_bracket(A: SuperAlgebra, check: bool = True) -> SesquiTable:
    """[a _lam b] = [a, b] + (-1)^{|a||b|} (D + lam)(b o a) + lam (a o b)."""
    if check:
        rep = check_gd(A)
        if not rep.passed:
            raise AxiomError(f"not a GD-superalgebra: {rep.violations[0].describe(A.format_vector)}")
    n = A.dim
    bracket = A.bracket if A.bracket is not None else make_tensor(n)
    one = Poly.const(CTX2, 1)
    entries = {}
    for i, j in product(range(n), repeat=2):
        s = A.basis.sign(i, j)
        comps = []
        for k in range(n):
            comps.append(
                one * bracket[i][j][k] + (D2 + LAM2) * (s * A.circ[j][i][k]) + LAM2 * A.circ[i][j][k]
            )
        entries[(i, j)] = VecPoly(CTX2, comps)
    return square_table(A.basis, entries, f"L({A.name})" if A.name else "")


def gd_from_quadratic(T: SesquiTable, name: str = "") -> SuperAlgebra:
    """Read GD data off a table linear in D and lam (inverse of quadratic_bracket).

    With [a _lam b] = c0 + cD D + cL lam:  [a, b] = c0,  a o b = cL - cD.
    """
    if not T.is_square or not T.complete:
        raise ValueError("need a complete lambda-bracket table")
    n = T.left.dim
    circ, br = {}, {}
    for (i, j), v in T.entries.items():
        for k in range(n):
            p = v[k]
            if p.degree() > 1:
                raise ValueError("table is not linear in D and lam")
            c0 = p.coeff((0, 0))
            cD = p.coeff((1, 0))
            cL = p.coeff((0, 1))
            if c0:
                br.setdefault((i, j), {})[k] = c0
            if cL - cD:
                circ.setdefault((i, j), {})[k] = cL - cD
    return SuperAlgebra(T.left, make_tensor(n, circ), make_tensor(n, br), name)


def bracket_eval(T: SesquiTable, f: Poly, i: int, g: Poly, j: int) -> VecPoly:
    """[f(D) e_i _lam g(D) e_j] as a VecPoly in (D, lam); f, g are polynomials in D."""
    f2 = f.extend(CTX2) if f.vars != CTX2 else f
    g2 = g.extend(CTX2) if g.vars != CTX2 else g
    coef = f2.compose(CTX2, {"D": -LAM2}) * g2.compose(CTX2, {"D": D2 + LAM2})
    return T.entry(i, j).scale(coef)


# ---------------------------------------------------------------------------
# checks


def _skew_residual(T: SesquiTable, i: int, j: int, sign: int) -> VecPoly:
    flipped = T.entry(j, i).compose(CTX2, {"D": D2, "lam": -D2 - LAM2})
    return T.entry(i, j) - flipped.scale(sign)


def check_skew(T: SesquiTable) -> AxiomReport:
    """[x _lam y] + (-1)^{|x||y|} [y _{-D-lam} x] = 0 on generator pairs."""
    return _check_pairs(T, sign_mode=-1, axiom="conformal.skew_symmetry")


def check_commutativity(T: SesquiTable) -> AxiomReport:
    """(x _lam y) - (-1)^{|x||y|} (y _{-D-lam} x) = 0 on generator pairs."""
    return _check_pairs(T, sign_mode=1, axiom="conformal.commutativity")


def _check_pairs(T: SesquiTable, sign_mode: int, axiom: str) -> AxiomReport:
    rep = AxiomReport(name=axiom)
    names = T.left.names
    for i, j in product(range(T.left.dim), repeat=2):
        try:
            res = _skew_residual(T, i, j, sign_mode * T.left.sign(i, j))
        except OutsideWindow:
            rep.skipped += 1
            continue
        rep.checked += 1
        if not res.is_zero():
            rep.add(axiom, (names[i], names[j]), res.format(T.target.names))
    return rep


def jacobi_residual(T: SesquiTable, i: int, j: int, k: int) -> VecPoly:
    """[x_lam [y_mu z]] - (-1)^{|x||y|}[y_mu [x_lam z]] - [[x_lam y]_{lam+mu} z]."""
    s = T.left.sign(i, j)
    t1 = T.left_act(i, T.at(j, k, MU3), LAM3)
    t2 = T.left_act(j, T.at(i, k, LAM3), MU3)
    t3 = T.right_act(T.at(i, j, LAM3), k, LAM3 + MU3)
    return t1 - t2.scale(s) - t3


def _check_triples(
    T: SesquiTable, residual, axiom: str, third: SuperBasis | None = None, target: SuperBasis | None = None
) -> AxiomReport:
    rep = AxiomReport(name=axiom)
    third = third or T.left
    target = target or T.target
    names = T.left.names
    for i, j in product(range(T.left.dim), repeat=2):
        for k in range(third.dim):
            try:
                res = residual(i, j, k)
            except OutsideWindow:
                rep.skipped += 1
                continue
            rep.checked += 1
            if not res.is_zero():
                rep.add(axiom, (names[i], names[j], third.names[k]), res.format(target.names))
    return rep


def check_conformal_jacobi(T: SesquiTable) -> AxiomReport:
    return _check_triples(T, lambda i, j, k: jacobi_residual(T, i, j, k), "conformal.jacobi")


def check_lie_conformal(T: SesquiTable) -> AxiomReport:
    rep = check_skew(T).merge(check_conformal_jacobi(T))
    rep.name = "lie_conformal"
    return rep


# ---------------------------------------------------------------------------
# Poisson conformal superalgebras


@dataclass(frozen=True)
class PoissonConformal:
    basis: SuperBasis
    lie_table: SesquiTable
    assoc_table: SesquiTable
    name: str = ""

    def __post_init__(self):
        for t in (self.lie_table, self.assoc_table):
            if not (t.left == t.right == t.target == self.basis):
                raise ValueError("both tables must live on the shared basis")


def associativity_residual(P: SesquiTable, i: int, j: int, k: int) -> VecPoly:
    """(a _lam (b _mu c)) - ((a _lam b) _{lam+mu} c)."""
    return P.left_act(i, P.at(j, k, MU3), LAM3) - P.right_act(P.at(i, j, LAM3), k, LAM3 + MU3)


def leibniz_residual(lie: SesquiTable, assoc: SesquiTable, i: int, j: int, k: int) -> VecPoly:
    """[a _lam (b _mu c)] - ([a _lam b] _{lam+mu} c) - (-1)^{|a||b|} (b _mu [a _lam c])."""
    s = lie.left.sign(i, j)
    t1 = lie.left_act(i, assoc.at(j, k, MU3), LAM3)
    t2 = assoc.right_act(lie.at(i, j, LAM3), k, LAM3 + MU3)
    t3 = assoc.left_act(j, lie.at(i, k, LAM3), MU3)
    return t1 - t2 - t3.scale(s)


def check_poisson_conformal(P: PoissonConformal) -> AxiomReport:
    rep = check_lie_conformal(P.lie_table)
    A = P.assoc_table
    rep = rep.merge(
        _check_triples(A, lambda i, j, k: associativity_residual(A, i, j, k), "poisson_conformal.associativity"),
        check_commutativity(A),
        _check_triples(
            A,
            lambda i, j, k: leibniz_residual(P.lie_table, A, i, j, k),
            "poisson_conformal.leibniz",
        ),
    )
    rep.name = "poisson_conformal"
    return rep


def _const_table(basis: SuperBasis, tensor, name="") -> SesquiTable:
    one = Poly.const(CTX2, 1)
    n = basis.dim
    return square_table(
        basis,
        {(i, j): VecPoly.from_vector(CTX2, tensor[i][j], one) for i in range(n) for j in range(n)},
        name,
    )


def build_current_poisson(p: PoissonAlgebra) -> PoissonConformal:
    """Cur p: (a _lam b) = ab and [a _lam b] = {a, b} on generators of p."""
    rep = check_poisson(p)
    if not rep.passed:
        raise AxiomError(f"not a Poisson superalgebra: {rep.violations[0].describe()}")
    return PoissonConformal(
        p.basis,
        _const_table(p.basis, p.bracket),
        _const_table(p.basis, p.product),
        f"Cur({p.name})" if p.name else "",
    )


def build_Lpd(p: PoissonAlgebra, d: Sequence[Sequence]) -> PoissonConformal:
    """L(p, d): (a _lam b) = ab,  [a _lam b] = {a, b} + D a'b + lam (ab)'."""
    rep = check_poisson(p).merge(check_derivation(p, d))
    if not rep.passed:
        raise AxiomError(f"bad Poisson data or derivation: {rep.violations[0].describe()}")
    n = p.dim
    entries = {}
    for i, j in product(range(n), repeat=2):
        a, b = p.e(i), p.e(j)
        brk = p.br(a, b)
        dab = p.mul(apply_matrix(d, a), b)
        d_ab = apply_matrix(d, p.mul(a, b))
        entries[(i, j)] = VecPoly(
            CTX2, [Poly.const(CTX2, brk[k]) + D2 * dab[k] + LAM2 * d_ab[k] for k in range(n)]
        )
    lie = square_table(p.basis, entries)
    return PoissonConformal(p.basis, lie, _const_table(p.basis, p.product), f"L({p.name},d)" if p.name else "")


def gr_cend_fixture(cap: int) -> PoissonConformal:
    """Window of gr Cend_{1,x}: basis x^1..x^cap,
    (x^n _lam x^m) = x^(n+m),  [x^n _lam x^m] = (n D + (n+m) lam) x^(n+m-1).

    Entries whose value leaves the window are absent.
    """
    basis = SuperBasis.even([f"x^{n}" for n in range(1, cap + 1)])
    one = Poly.const(CTX2, 1)
    assoc, lie = {}, {}
    for a in range(cap):
        for b in range(cap):
            n, m = a + 1, b + 1
            if n + m <= cap:
                assoc[(a, b)] = VecPoly.from_dict(CTX2, cap, {n + m - 1: one})
            if n + m - 1 <= cap:
                lie[(a, b)] = VecPoly.from_dict(CTX2, cap, {n + m - 2: D2 * n + LAM2 * (n + m)})
    return PoissonConformal(basis, square_table(basis, lie), square_table(basis, assoc), f"grCend(1,x)<= {cap}")


# ---------------------------------------------------------------------------
# subalgebras, representations, cocycles


def sub_basis(basis: SuperBasis, idx: Sequence[int]) -> SuperBasis:
    return SuperBasis([basis.names[i] for i in idx], [basis.parity[i] for i in idx])


def check_closed(T: SesquiTable, idx: Sequence[int]) -> bool:
    """Is H (x) span{e_i : i in idx} closed under T (within the window)?"""
    idx = list(idx)
    s = set(idx)
    for i, j in product(idx, repeat=2):
        try:
            v = T.entry(i, j)
        except OutsideWindow:
            continue
        if any(k not in s for k in v.support()):
            return False
    return True


def restrict_table(T: SesquiTable, idx: Sequence[int]) -> SesquiTable:
    """The subalgebra table on generators ``idx`` (assumed closed)."""
    idx = list(idx)
    B = sub_basis(T.left, idx)
    entries = {}
    for a, i in enumerate(idx):
        for b, j in enumerate(idx):
            try:
                v = T.entry(i, j)
            except OutsideWindow:
                continue
            entries[(a, b)] = VecPoly(CTX2, [v[k] for k in idx])
    return square_table(B, entries)


def acting_rows(T: SesquiTable, idx: Sequence[int], name: str = "") -> SesquiTable:
    """Rows ``idx`` of T as a map sub x whole -> whole (e.g. the regular representation)."""
    idx = list(idx)
    B = sub_basis(T.left, idx)
    entries = {}
    for a, i in enumerate(idx):
        for j in range(T.right.dim):
            if (i, j) in T.entries:
                entries[(a, j)] = T.entries[(i, j)]
    return SesquiTable(B, T.right, T.target, entries, name)


def regular_rep(T: SesquiTable, idx: Sequence[int] | None = None) -> SesquiTable:
    idx = range(T.left.dim) if idx is None else idx
    return acting_rows(T, idx, "regular")


def twisted_rep(P: PoissonConformal, L: Sequence[int] | None = None) -> SesquiTable:
    """rho_lam(a, x) = [a _lam x] + lam (a _lam x) for a in the subalgebra spanned by L."""
    L = list(range(P.basis.dim)) if L is None else list(L)
    if not check_closed(P.lie_table, L):
        raise AxiomError("generators do not span a conformal subalgebra")
    lie, assoc = P.lie_table, P.assoc_table
    entries = {}
    for a, i in enumerate(L):
        for j in range(P.basis.dim):
            if (i, j) in lie.entries and (i, j) in assoc.entries:
                entries[(a, j)] = lie.entries[(i, j)] + assoc.entries[(i, j)].scale(LAM2)
    return SesquiTable(sub_basis(P.basis, L), P.basis, P.basis, entries, "twisted")


def lambda_times(T: SesquiTable, idx: Sequence[int] | None = None) -> SesquiTable:
    """phi_lam(a, x) = lam (a _lam x), rows restricted to ``idx``."""
    rows = acting_rows(T, range(T.left.dim) if idx is None else idx)
    return SesquiTable(
        rows.left, rows.right, rows.target, {k: v.scale(LAM2) for k, v in rows.entries.items()}, "lam*(.)"
    )


def module_residual(L: SesquiTable, rho: SesquiTable, i: int, j: int, k: int) -> VecPoly:
    """rho_lam(a, rho_mu(b, x)) - (-1)^{|a||b|} rho_mu(b, rho_lam(a, x)) - rho_{lam+mu}([a _lam b], x)."""
    s = L.left.sign(i, j)
    t1 = rho.left_act(i, rho.at(j, k, MU3), LAM3)
    t2 = rho.left_act(j, rho.at(i, k, LAM3), MU3)
    t3 = rho.right_act(L.at(i, j, LAM3), k, LAM3 + MU3)
    return t1 - t2.scale(s) - t3


def cocycle_residual(L: SesquiTable, rho: SesquiTable, phi: SesquiTable, i: int, j: int, k: int) -> VecPoly:
    s = L.left.sign(i, j)
    lhs = phi.right_act(L.at(i, j, LAM3), k, LAM3 + MU3)
    r1 = phi.left_act(i, rho.at(j, k, MU3), LAM3)
    r2 = rho.left_act(i, phi.at(j, k, MU3), LAM3)
    r3 = phi.left_act(j, rho.at(i, k, LAM3), MU3)
    r4 = rho.left_act(j, phi.at(i, k, LAM3), MU3)
    return lhs - r1 - r2 + r3.scale(s) + r4.scale(s)


def check_cocycle(L: SesquiTable, rho: SesquiTable, phi: SesquiTable) -> AxiomReport:
    return _check_triples(
        L, lambda i, j, k: cocycle_residual(L, rho, phi, i, j, k), "cocycle", third=rho.right, target=rho.target
    )
