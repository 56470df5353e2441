"""Finite-dimensional superalgebras given by rational structure constants.

Axiom checkers for Novikov, Lie and Gelfand-Dorfman superalgebras, the
commutator GD-structure of a Novikov superalgebra, differential Poisson
superalgebras and their GD-structures ``a o b = a d(b)``, and a brute-force
oracle working in the loop algebra ``V[t, 1/t]``.

Signs follow the Koszul rule: a factor ``-1`` appears exactly when two odd
symbols are transposed.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Any, Iterable, Mapping, Sequence

from .exactpoly import to_fraction

Vector = tuple  # tuple of Fractions, one per basis element
Tensor = tuple  # Tensor[i][j] is the Vector of e_i * e_j


class AxiomError(ValueError):
    """An input structure fails an axiom required by the requested operation."""


@dataclass(frozen=True)
class SuperBasis:
    names: tuple
    parity: tuple

    def __post_init__(self):
        object.__setattr__(self, "names", tuple(self.names))
        object.__setattr__(self, "parity", tuple(int(p) for p in self.parity))
        if len(self.names) != len(self.parity):
            raise ValueError("names and parities differ in length")
        if len(set(self.names)) != len(self.names):
            raise ValueError("generator labels must be distinct")
        if any(p not in (0, 1) for p in self.parity):
            raise ValueError("parity must be 0 (even) or 1 (odd)")
        if list(self.parity) != sorted(self.parity):
            raise ValueError("even generators must precede odd generators")

    def __len__(self) -> int:
        return len(self.names)

    @property
    def dim(self) -> int:
        return len(self.names)

    def index(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise KeyError(f"undeclared generator {name!r}") from None

    def sign(self, i: int, j: int) -> int:
        """Koszul sign for transposing generators i and j."""
        return -1 if self.parity[i] and self.parity[j] else 1

    def vector_parity(self, vec: Sequence) -> int | None:
        """Parity of a homogeneous vector; None for zero or inhomogeneous."""
        ps = {self.parity[k] for k, c in enumerate(vec) if c}
        return ps.pop() if len(ps) == 1 else None

    @classmethod
    def even(cls, names: Iterable[str]) -> "SuperBasis":
        names = tuple(names)
        return cls(names, (0,) * len(names))


def zero_vector(n: int) -> Vector:
    return (Fraction(0),) * n


def unit_vector(n: int, i: int) -> Vector:
    return tuple(Fraction(int(k == i)) for k in range(n))


def make_tensor(n: int, entries: Mapping[tuple, Mapping[int, Any]] | None = None) -> Tensor:
    """Dense tensor from sparse ``{(i, j): {k: coefficient}}``."""
    entries = entries or {}
    rows = []
    for i in range(n):
        row = []
        for j in range(n):
            vec = [Fraction(0)] * n
            for k, c in entries.get((i, j), {}).items():
                vec[k] += to_fraction(c)
            row.append(tuple(vec))
        rows.append(tuple(row))
    return tuple(rows)


def zero_tensor(n: int) -> Tensor:
    return make_tensor(n)


def vadd(u: Vector, v: Vector) -> Vector:
    return tuple(a + b for a, b in zip(u, v))


def vsub(u: Vector, v: Vector) -> Vector:
    return tuple(a - b for a, b in zip(u, v))


def vscale(c, u: Vector) -> Vector:
    return tuple(c * a for a in u)


def is_zero(v: Vector) -> bool:
    return not any(v)


def tmul(t: Tensor, u: Vector, v: Vector) -> Vector:
    """Bilinear product of two vectors through a structure tensor."""
    n = len(u)
    out = [Fraction(0)] * n
    for i, a in enumerate(u):
        if not a:
            continue
        row = t[i]
        for j, b in enumerate(v):
            if not b:
                continue
            ab = a * b
            for k, c in enumerate(row[j]):
                if c:
                    out[k] += ab * c
    return tuple(out)


def _check_tensor(basis: SuperBasis, t: Tensor, what: str) -> None:
    n = basis.dim
    if len(t) != n or any(len(r) != n or any(len(v) != n for v in r) for r in t):
        raise ValueError(f"{what} tensor has wrong shape for dimension {n}")
    for i, j in product(range(n), repeat=2):
        target = (basis.parity[i] + basis.parity[j]) % 2
        for k, c in enumerate(t[i][j]):
            if c and basis.parity[k] != target:
                raise ValueError(
                    f"{what}: {basis.names[i]}*{basis.names[j]} has a component on "
                    f"{basis.names[k]} of the wrong parity"
                )


@dataclass(frozen=True)
class SuperAlgebra:
    """Structure constants of ``a o b`` and optionally ``[a, b]`` on a super basis."""

    basis: SuperBasis
    circ: Tensor | None = None
    bracket: Tensor | None = None
    name: str = ""

    def __post_init__(self):
        for what in ("circ", "bracket"):
            t = getattr(self, what)
            if t is not None:
                _check_tensor(self.basis, t, what)

    @property
    def dim(self) -> int:
        return self.basis.dim

    def e(self, i: int) -> Vector:
        return unit_vector(self.dim, i)

    def o(self, u: Vector, v: Vector) -> Vector:
        if self.circ is None:
            raise AxiomError("algebra has no circ product")
        return tmul(self.circ, u, v)

    def br(self, u: Vector, v: Vector) -> Vector:
        if self.bracket is None:
            raise AxiomError("algebra has no bracket")
        return tmul(self.bracket, u, v)

    def with_bracket(self, bracket: Tensor | None, name: str | None = None) -> "SuperAlgebra":
        return SuperAlgebra(self.basis, self.circ, bracket, self.name if name is None else name)

    def format_vector(self, v: Vector) -> str:
        return format_vector(self.basis.names, v)


def format_vector(names: Sequence[str], v: Sequence) -> str:
    parts = []
    for name, c in zip(names, v):
        if not c:
            continue
        c = Fraction(c)
        mag = abs(c)
        s = name if mag == 1 else f"{mag}*{name}"
        parts.append(("-" if c < 0 else "+", s))
    if not parts:
        return "0"
    out = ("-" if parts[0][0] == "-" else "") + parts[0][1]
    for sign, s in parts[1:]:
        out += f" {sign} {s}"
    return out


# ---------------------------------------------------------------------------
# reports


@dataclass
class Violation:
    axiom: str
    witness: tuple
    residual: Any

    def describe(self, fmt=None) -> str:
        res = fmt(self.residual) if fmt else str(self.residual)
        return f"{self.axiom} at ({', '.join(map(str, self.witness))}): residual {res}"


@dataclass
class AxiomReport:
    violations: list = field(default_factory=list)
    checked: int = 0
    skipped: int = 0
    name: str = ""

    @property
    def passed(self) -> bool:
        return not self.violations

    def add(self, axiom: str, witness: tuple, residual: Any) -> None:
        self.violations.append(Violation(axiom, tuple(witness), residual))

    def merge(self, *others: "AxiomReport") -> "AxiomReport":
        out = AxiomReport(list(self.violations), self.checked, self.skipped, self.name)
        for o in others:
            out.violations.extend(o.violations)
            out.checked += o.checked
            out.skipped += o.skipped
        return out

    def axioms_failed(self) -> list[str]:
        return sorted({v.axiom for v in self.violations})

    def __bool__(self) -> bool:
        return self.passed


# ---------------------------------------------------------------------------
# axiom checkers


def check_novikov(A: SuperAlgebra) -> AxiomReport:
    if A.circ is None:
        raise AxiomError("check_novikov needs a circ product")
    n, names, par = A.dim, A.basis.names, A.basis.parity
    rep = AxiomReport(name="novikov")
    o = A.o
    for i, j, k in product(range(n), repeat=3):
        x1, x2, x3 = A.e(i), A.e(j), A.e(k)
        s12 = A.basis.sign(i, j)
        s23 = A.basis.sign(j, k)
        lhs = vsub(o(o(x1, x2), x3), o(x1, o(x2, x3)))
        rhs = vsub(o(o(x2, x1), x3), o(x2, o(x1, x3)))
        res = vsub(lhs, vscale(s12, rhs))
        if not is_zero(res):
            rep.add("novikov.left_symmetry", (names[i], names[j], names[k]), res)
        res = vsub(o(o(x1, x2), x3), vscale(s23, o(o(x1, x3), x2)))
        if not is_zero(res):
            rep.add("novikov.right_commutativity", (names[i], names[j], names[k]), res)
        rep.checked += 1
    return rep


def check_lie_super(A: SuperAlgebra) -> AxiomReport:
    if A.bracket is None:
        raise AxiomError("check_lie_super needs a bracket")
    n, names = A.dim, A.basis.names
    rep = AxiomReport(name="lie")
    br = A.br
    for i, j in product(range(n), repeat=2):
        res = vadd(br(A.e(i), A.e(j)), vscale(A.basis.sign(i, j), br(A.e(j), A.e(i))))
        if not is_zero(res):
            rep.add("lie.anticommutativity", (names[i], names[j]), res)
    for i, j, k in product(range(n), repeat=3):
        a, b, c = A.e(i), A.e(j), A.e(k)
        res = vsub(
            vsub(br(a, br(b, c)), vscale(A.basis.sign(i, j), br(b, br(a, c)))),
            br(br(a, b), c),
        )
        if not is_zero(res):
            rep.add("lie.jacobi", (names[i], names[j], names[k]), res)
        rep.checked += 1
    return rep


def gd_compatibility(A: SuperAlgebra, i: int, j: int, k: int) -> Vector:
    """Residual of the five-term GD identity on basis elements (a, b, c) = (e_i, e_j, e_k)."""
    a, b, c = A.e(i), A.e(j), A.e(k)
    o, br = A.o, A.br
    res = br(o(a, b), c)
    res = vsub(res, o(a, br(b, c)))
    res = vadd(res, o(br(a, b), c))
    res = vadd(res, vscale(A.basis.sign(i, j), br(b, o(a, c))))
    res = vsub(res, vscale(A.basis.sign(j, k), o(br(a, c), b)))
    return res


def check_gd(A: SuperAlgebra) -> AxiomReport:
    """Novikov + Lie + compatibility; prerequisite failures are reported, not raised."""
    if A.circ is None or A.bracket is None:
        raise AxiomError("check_gd needs both products")
    rep = check_novikov(A).merge(check_lie_super(A))
    rep.name = "gd"
    names = A.basis.names
    for i, j, k in product(range(A.dim), repeat=3):
        res = gd_compatibility(A, i, j, k)
        if not is_zero(res):
            rep.add("gd.compatibility", (names[i], names[j], names[k]), res)
    return rep


def commutator_bracket(A: SuperAlgebra) -> Tensor:
    n = A.dim
    rows = []
    for i in range(n):
        row = []
        for j in range(n):
            s = A.basis.sign(i, j)
            row.append(vsub(A.circ[i][j], vscale(s, A.circ[j][i])))
        rows.append(tuple(row))
    return tuple(rows)


def commutator_gd(A: SuperAlgebra) -> SuperAlgebra:
    """The GD-superalgebra V^(-): bracket [a, b] = a o b - (-1)^{|a||b|} b o a."""
    if A.circ is None:
        raise AxiomError("commutator_gd needs a circ product")
    rep = check_novikov(A)
    if not rep.passed:
        raise AxiomError(f"not a Novikov superalgebra: {rep.violations[0].describe(A.format_vector)}")
    name = f"{A.name}^(-)" if A.name else ""
    return A.with_bracket(commutator_bracket(A), name)


# ---------------------------------------------------------------------------
# loop algebra oracle


def _loop_bracket(A: SuperAlgebra, i: int, n: int, j: int, m: int) -> dict:
    """[e_i t^n, e_j t^m] as {(basis index, t-degree): coefficient}."""
    out: dict = {}
    s = A.basis.sign(i, j)

    def put(vec, deg, c):
        for k, v in enumerate(vec):
            if v:
                key = (k, deg)
                out[key] = out.get(key, 0) + c * v

    put(A.bracket[i][j], n + m, 1)
    if n:
        put(A.circ[i][j], n + m - 1, n)
    if m:
        put(A.circ[j][i], n + m - 1, -s * m)
    return {k: v for k, v in out.items() if v}


def loop_oracle(A: SuperAlgebra, degree_cap: int) -> AxiomReport:
    """Check that V[t, 1/t] is a Lie superalgebra on all elements a t^n with |n| <= cap.

    Uses the loop bracket [a t^n, b t^m] = [a, b] t^(n+m) + n (a o b) t^(n+m-1)
    - (-1)^{|a||b|} m (b o a) t^(n+m-1).  Brackets are computed exactly; no
    output truncation is needed since every product is a finite sum.
    """
    if degree_cap < 1:
        raise ValueError("degree_cap must be at least 1")
    if A.circ is None:
        raise AxiomError("loop_oracle needs a circ product")
    if A.bracket is None:
        A = A.with_bracket(zero_tensor(A.dim))
    names, par = A.basis.names, A.basis.parity
    degs = range(-degree_cap, degree_cap + 1)
    elems = [(i, n) for i in range(A.dim) for n in degs]
    cache: dict = {}

    def bb(x, y):
        key = (x, y)
        r = cache.get(key)
        if r is None:
            r = _loop_bracket(A, x[0], x[1], y[0], y[1])
            cache[key] = r
        return r

    def br_left(x, elem: dict) -> dict:
        out: dict = {}
        for y, c in elem.items():
            for k, v in bb(x, y).items():
                out[k] = out.get(k, 0) + c * v
        return out

    def br_right(elem: dict, z) -> dict:
        out: dict = {}
        for y, c in elem.items():
            for k, v in bb(y, z).items():
                out[k] = out.get(k, 0) + c * v
        return out

    def label(x):
        return f"{names[x[0]]}t^{x[1]}"

    rep = AxiomReport(name="loop")
    for x, y in product(elems, repeat=2):
        s = A.basis.sign(x[0], y[0])
        res = dict(bb(x, y))
        for k, v in bb(y, x).items():
            res[k] = res.get(k, 0) + s * v
        res = {k: v for k, v in res.items() if v}
        if res:
            rep.add("loop.anticommutativity", (label(x), label(y)), res)
    for x, y, z in product(elems, repeat=3):
        s = A.basis.sign(x[0], y[0])
        res = br_left(x, bb(y, z))
        for k, v in br_left(y, bb(x, z)).items():
            res[k] = res.get(k, 0) - s * v
        for k, v in br_right(bb(x, y), z).items():
            res[k] = res.get(k, 0) - v
        res = {k: v for k, v in res.items() if v}
        rep.checked += 1
        if res:
            rep.add("loop.jacobi", (label(x), label(y), label(z)), res)
    return rep


# ---------------------------------------------------------------------------
# Poisson superalgebras with derivation


@dataclass(frozen=True)
class PoissonAlgebra:
    """Supercommutative associative product plus Poisson bracket, by structure constants."""

    basis: SuperBasis
    product: Tensor
    bracket: Tensor
    name: str = ""

    def __post_init__(self):
        _check_tensor(self.basis, self.product, "product")
        _check_tensor(self.basis, self.bracket, "bracket")

    @property
    def dim(self) -> int:
        return self.basis.dim

    def e(self, i: int) -> Vector:
        return unit_vector(self.dim, i)

    def mul(self, u: Vector, v: Vector) -> Vector:
        return tmul(self.product, u, v)

    def br(self, u: Vector, v: Vector) -> Vector:
        return tmul(self.bracket, u, v)


def check_poisson(p: PoissonAlgebra) -> AxiomReport:
    n, names = p.dim, p.basis.names
    lie = check_lie_super(SuperAlgebra(p.basis, None, p.bracket))
    rep = AxiomReport(name="poisson").merge(lie)
    for i, j in product(range(n), repeat=2):
        res = vsub(p.mul(p.e(i), p.e(j)), vscale(p.basis.sign(i, j), p.mul(p.e(j), p.e(i))))
        if not is_zero(res):
            rep.add("poisson.supercommutativity", (names[i], names[j]), res)
    for i, j, k in product(range(n), repeat=3):
        a, b, c = p.e(i), p.e(j), p.e(k)
        res = vsub(p.mul(p.mul(a, b), c), p.mul(a, p.mul(b, c)))
        if not is_zero(res):
            rep.add("poisson.associativity", (names[i], names[j], names[k]), res)
        res = vsub(
            p.br(a, p.mul(b, c)),
            vadd(p.mul(p.br(a, b), c), vscale(p.basis.sign(i, j), p.mul(b, p.br(a, c)))),
        )
        if not is_zero(res):
            rep.add("poisson.leibniz", (names[i], names[j], names[k]), res)
    return rep


def apply_matrix(d: Sequence[Sequence], v: Vector) -> Vector:
    """``d`` acts on column vectors: d[k][i] is the e_k-coefficient of d(e_i)."""
    n = len(v)
    return tuple(sum((Fraction(d[k][i]) * v[i] for i in range(n) if v[i]), Fraction(0)) for k in range(n))


def check_derivation(p: PoissonAlgebra, d: Sequence[Sequence]) -> AxiomReport:
    """Even derivation of both the product and the bracket."""
    n, names = p.dim, p.basis.names
    rep = AxiomReport(name="derivation")
    for k, i in product(range(n), repeat=2):
        if d[k][i] and p.basis.parity[k] != p.basis.parity[i]:
            rep.add("derivation.parity", (names[i],), apply_matrix(d, p.e(i)))
            break
    dd = lambda v: apply_matrix(d, v)
    for i, j in product(range(n), repeat=2):
        a, b = p.e(i), p.e(j)
        res = vsub(dd(p.mul(a, b)), vadd(p.mul(dd(a), b), p.mul(a, dd(b))))
        if not is_zero(res):
            rep.add("derivation.product", (names[i], names[j]), res)
        res = vsub(dd(p.br(a, b)), vadd(p.br(dd(a), b), p.br(a, dd(b))))
        if not is_zero(res):
            rep.add("derivation.bracket", (names[i], names[j]), res)
    rep.checked = n * n
    return rep


def pd_algebra(p: PoissonAlgebra, d: Sequence[Sequence]) -> SuperAlgebra:
    """The GD-superalgebra P^(d): a o b = a d(b), [a, b] = {a, b}."""
    n = p.dim
    rows = []
    for i in range(n):
        rows.append(tuple(p.mul(p.e(i), apply_matrix(d, p.e(j))) for j in range(n)))
    name = f"{p.name}^(d)" if p.name else ""
    return SuperAlgebra(p.basis, tuple(rows), p.bracket, name)
