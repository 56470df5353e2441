"""Weight components of the enveloping quotients F / I_V inside a truncation window.

The ideal I_V is generated by

    u(x, y) = x y' - x o y                      (both modes)
    b(x, y) = {x, y} - [x, y]                   (free mode only)

for generators x, y of V.  Inside the window it is spanned by products
m * {l1, {l2, ... {lk, d^j s}}} with s a generator relation, li plain letters
(free mode only, since I_V is then a Poisson ideal) and m a monomial.  Any
element whose construction leaves the window is dropped and counted; this
keeps every row a genuine element of I_V.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from ..exactpoly import RowSpace, kernel
from ..gdcore import AxiomError, SuperAlgebra, check_gd, check_novikov, make_tensor
from .freealg import Elem, FreeAlgebra, Monomial, Truncation, TruncationOverflow, word_key


def _mono_key(alg: FreeAlgebra, m: Monomial):
    # high degree first, so generators end up in the last columns
    return (-alg.mono_degree(m), [word_key(w) for w in m])


@dataclass
class WeightComponent:
    """The window F_n and the span of I_V inside it, in echelon form."""

    weight: int
    basis: list
    index: dict
    space: RowSpace
    relations: int = 0
    dropped: int = 0
    quotient_columns: list = field(default_factory=list)

    @property
    def quotient_basis(self) -> list:
        return [self.basis[c] for c in self.quotient_columns]

    @property
    def dim(self) -> int:
        return len(self.quotient_columns)

    def vector(self, u: Elem) -> dict:
        row = {}
        for m, c in u.terms.items():
            col = self.index.get(m)
            if col is None:
                raise TruncationOverflow(f"monomial outside the weight-{self.weight} window")
            row[col] = c
        return row

    def contains(self, u: Elem) -> bool:
        return not u.terms or self.space.contains(self.vector(u))

    def coordinates(self, u: Elem) -> list[Fraction]:
        """Coordinates of the class of u on the quotient basis."""
        rem = self.space.reduce_full(self.vector(u))
        pos = {c: i for i, c in enumerate(self.quotient_columns)}
        out = [Fraction(0)] * len(pos)
        for c, v in rem.items():
            out[pos[c]] = v
        return out


def generator_relations(alg: FreeAlgebra, V: SuperAlgebra) -> tuple[list[Elem], int]:
    """The relations u(x, y) (and b(x, y) in free mode) that fit the window, plus a count of those that do not."""
    n = V.dim
    rels, dropped = [], 0
    bracket = V.bracket if V.bracket is not None else make_tensor(n)
    for i in range(n):
        for j in range(n):
            try:
                u = alg.mul(alg.gen(i), alg.gen(j, 1)) - alg.linear(V.circ[i][j])
            except TruncationOverflow:
                dropped += 1
                continue
            if u:
                rels.append(u)
    if alg.mode == "free":
        for i in range(n):
            for j in range(i, n):
                try:
                    b = alg.bracket(alg.gen(i), alg.gen(j)) - alg.linear(bracket[i][j])
                except TruncationOverflow:
                    dropped += 1
                    continue
                if b:
                    rels.append(b)
    return rels, dropped


class Window:
    """The truncated algebra F together with the closure of the generator relations."""

    def __init__(self, V: SuperAlgebra, trunc: Truncation, mode: str):
        self.V = V
        self.trunc = trunc
        self.alg = FreeAlgebra(V.basis.parity, trunc, mode, names=V.basis.names)
        self.dropped = 0
        self.closure = self._closure()
        self._monos: dict = {}
        self._components: dict = {}

    def _closure(self) -> list[tuple[Elem, int, int]]:
        """Relations as (element, weight, degree), each weight-homogeneous."""
        alg = self.alg
        level = []
        gens, self.dropped = generator_relations(alg, self.V)
        for s in gens:
            cur = s
            while True:
                level.append(cur)
                try:
                    cur = alg.d(cur)
                except TruncationOverflow:
                    self.dropped += 1
                    break
                if not cur:
                    break
        out = list(level)
        if alg.mode == "free":
            letters = [alg.gen(g, n) for g in range(self.V.dim) for n in range(self.trunc.D + 1)]
            while level:
                nxt = []
                for g in level:
                    for ell in letters:
                        try:
                            h = alg.bracket(ell, g)
                        except TruncationOverflow:
                            self.dropped += 1
                            continue
                        if h:
                            nxt.append(h)
                out.extend(nxt)
                level = nxt
        result = []
        for g in out:
            wt = alg.weight(g)
            deg = max(alg.mono_degree(m) for m in g.terms)
            result.append((g, wt, deg))
        return result

    def monomials(self, weight: int, max_degree: int) -> list:
        key = (weight, max_degree)
        hit = self._monos.get(key)
        if hit is None:
            hit = self.alg.monomials(weight, max_degree) if max_degree >= 0 else []
            self._monos[key] = hit
        return hit

    def component(self, n: int) -> WeightComponent:
        hit = self._components.get(n)
        if hit is not None:
            return hit
        alg = self.alg
        R = self.trunc.R
        basis = sorted(self.monomials(n, R), key=lambda m: _mono_key(alg, m))
        index = {m: i for i, m in enumerate(basis)}
        comp = WeightComponent(n, basis, index, RowSpace())
        for g, wg, dg in self.closure:
            for m in self.monomials(n - wg, R - dg):
                row: dict = {}
                for mg, c in g.terms.items():
                    s, prod = alg.mono_mul(m, mg)
                    if s:
                        col = index[prod]
                        v = row.get(col, 0) + s * c
                        if v:
                            row[col] = v
                        else:
                            row.pop(col)
                if row:
                    comp.relations += 1
                    comp.space.add(row)
        comp.dropped = self.dropped
        comp.quotient_columns = comp.space.free_columns(range(len(basis)))
        self._components[n] = comp
        return comp


def ideal_component(V: SuperAlgebra, n: int, T: Truncation, mode: str = "free") -> WeightComponent:
    """Weight-n piece of F and of I_V within the window T."""
    _require(V, mode)
    return Window(V, T, mode).component(n)


def with_zero_bracket(V: SuperAlgebra) -> SuperAlgebra:
    return V if V.bracket is not None else V.with_bracket(make_tensor(V.dim))


def _require(V: SuperAlgebra, mode: str) -> None:
    rep = check_novikov(V) if mode == "defined" else check_gd(with_zero_bracket(V))
    if not rep.passed:
        raise AxiomError(rep.violations[0].describe(V.format_vector))


# ---------------------------------------------------------------------------
# speciality


@dataclass
class SpecialityResult:
    """Generators of V whose images fall into I_V within the window."""

    kernel: list
    component: WeightComponent
    trunc: Truncation

    @property
    def exceptional(self) -> bool:
        return bool(self.kernel)

    @property
    def dimension(self) -> int:
        return len(self.kernel)


def generator_remainders(window: Window) -> list[dict]:
    comp = window.component(-1)
    alg = window.alg
    return [comp.space.reduce_full(comp.vector(alg.gen(g))) for g in range(window.V.dim)]


def speciality_kernel(V: SuperAlgebra, T: Truncation, window: Window | None = None) -> SpecialityResult:
    """Subspace of V mapped into I_V at weight -1; nonzero means V is exceptional."""
    if window is None:
        _require(V, "free")
        window = Window(V, T, "free")
    rems = generator_remainders(window)
    cols = sorted({c for r in rems for c in r})
    # sum_g c_g rem_g = 0
    rows = [[r.get(g_col, Fraction(0)) for r in rems] for g_col in cols]
    if not cols:
        ker = [[Fraction(int(i == j)) for j in range(V.dim)] for i in range(V.dim)]
    else:
        ker = kernel(rows, V.dim)
    return SpecialityResult([_normalize(v) for v in ker], window.component(-1), T)


def _normalize(v: Sequence[Fraction]) -> list[Fraction]:
    lead = next((c for c in v if c), None)
    return [c / lead for c in v] if lead else list(v)


# ---------------------------------------------------------------------------
# envelopes


@dataclass
class NovikovEnvelope:
    """Truncated U(V) for a Novikov superalgebra, with the defined-mode bracket."""

    V: SuperAlgebra
    window: Window
    checks: dict

    @property
    def alg(self) -> FreeAlgebra:
        return self.window.alg

    def component(self, n: int) -> WeightComponent:
        return self.window.component(n)

    def reduces_to(self, u: Elem, v: Elem) -> bool:
        diff = u - v
        if not diff:
            return True
        return self.component(self.alg.weight(diff)).contains(diff)

    @property
    def passed(self) -> bool:
        return all(self.checks.values())


def build_novikov_envelope(V: SuperAlgebra, T: Truncation) -> NovikovEnvelope:
    """U(V) = sComDer<X, d>/I_V in the window; checks that V^(-) sits inside it.

    For every pair of generators: {x, y} = x o y - (-1)^{|x||y|} y o x and
    x y' = x o y modulo I_V.
    """
    _require(V, "defined")
    window = Window(V, T, "defined")
    env = NovikovEnvelope(V, window, {})
    alg = window.alg
    comp = window.component(-1)
    for i in range(V.dim):
        for j in range(V.dim):
            x, y = alg.gen(i), alg.gen(j)
            s = V.basis.sign(i, j)
            comm = alg.linear(V.circ[i][j]) - alg.linear(V.circ[j][i]).scale(s)
            a, b = V.basis.names[i], V.basis.names[j]
            env.checks[f"bracket({a},{b})"] = comp.contains(alg.bracket(x, y) - comm)
            env.checks[f"product({a},{b}')"] = comp.contains(alg.mul(x, alg.gen(j, 1)) - alg.linear(V.circ[i][j]))
    return env


@dataclass
class PdEnvelope:
    """Truncated P_d(V): components U_-1, U_0 and the induced maps.

    ``u0_reps`` are the quotient monomials of U_0 of degree < R; the maps are
    given on those, as exact matrices:

        mult[a][i]    coordinates in U_-1 of  x_a * rep_i
        bracket[a][i] coordinates in U_0  of  {x_a, rep_i}
        d_map[g]      coordinates in U_0  of  d(x_g)
    """

    V: SuperAlgebra
    window: Window
    u_minus1: WeightComponent
    u0: WeightComponent
    u0_reps: list
    overflow_reps: list
    mult: list
    bracket: list
    d_map: list
    dims: dict

    @property
    def alg(self) -> FreeAlgebra:
        return self.window.alg


def build_pd_envelope(V: SuperAlgebra, T: Truncation, window: Window | None = None) -> PdEnvelope:
    if window is None:
        _require(V, "free")
        window = Window(V, T, "free")
    spec = speciality_kernel(V, T, window)
    if spec.exceptional:
        raise AxiomError("speciality kernel is nonzero; V does not embed into P_d(V)")
    alg = window.alg
    um1, u0 = window.component(-1), window.component(0)
    R = T.R
    reps, over = [], []
    for c in u0.quotient_columns:
        m = u0.basis[c]
        (reps if alg.mono_degree(m) < R else over).append(m)
    mult, br = [], []
    for a in range(V.dim):
        xa = alg.gen(a)
        mult.append([um1.coordinates(alg.mul(xa, Elem._raw({m: Fraction(1)}))) for m in reps])
        row = []
        for m in reps:
            try:
                row.append(u0.coordinates(alg.bracket(xa, Elem._raw({m: Fraction(1)}))))
            except TruncationOverflow:
                row.append(None)
        br.append(row)
    d_map = [u0.coordinates(alg.gen(g, 1)) for g in range(V.dim)]
    dims = {-1: um1.dim, 0: u0.dim}
    return PdEnvelope(V, window, um1, u0, reps, over, mult, br, d_map, dims)
