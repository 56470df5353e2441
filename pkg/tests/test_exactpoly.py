from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gdconformal.exactpoly import (
    CTX2,
    CTX3,
    Poly,
    RowSpace,
    VariableMismatch,
    VecPoly,
    kernel,
    poly_kernel_vector,
    poly_rank,
    rref,
    vecpoly_linsolve,
)

D = Poly.var(CTX2, "D")
LAM = Poly.var(CTX2, "lam")


def small_polys(vars=CTX2, max_terms=4, max_deg=3):
    exps = st.tuples(*[st.integers(0, max_deg) for _ in vars])
    coeffs = st.fractions(min_value=-5, max_value=5, max_denominator=4)
    return st.dictionaries(exps, coeffs, max_size=max_terms).map(lambda t: Poly(vars, t))


def test_basic_arithmetic():
    p = (D + LAM) * (D - LAM)
    assert p == D * D - LAM * LAM
    assert (D + 1) ** 2 == D * D + 2 * D + 1
    assert (D - D).is_zero()
    assert Poly.const(CTX2, 3) == 3


def test_printing_is_deterministic():
    assert str(D + 2 * LAM) == "D + 2*lam"
    assert str(Poly.zero(CTX2)) == "0"


def test_mixed_contexts_rejected():
    with pytest.raises(VariableMismatch):
        D + Poly.var(CTX3, "mu")


def test_compose_is_simultaneous():
    # D -> lam, lam -> D swaps the variables rather than collapsing them
    p = D * D + 3 * LAM
    assert p.compose(CTX2, {"D": LAM, "lam": D}) == LAM * LAM + 3 * D


def test_compose_into_larger_context():
    mu = Poly.var(CTX3, "mu")
    p = (D + 2 * LAM).compose(CTX3, {"D": Poly.var(CTX3, "D"), "lam": mu})
    assert p == Poly.var(CTX3, "D") + 2 * mu


def test_divexact():
    a = (D + LAM) * (D - 2 * LAM + 1)
    assert a.divexact(D + LAM) == D - 2 * LAM + 1
    with pytest.raises(ArithmeticError):
        (D + 1).divexact(LAM)


@given(small_polys(), small_polys(), small_polys())
def test_ring_axioms(p, q, r):
    assert p * (q + r) == p * q + p * r
    assert (p * q) * r == p * (q * r)
    assert p * q == q * p


@given(small_polys(), small_polys())
def test_compose_is_a_homomorphism(p, q):
    m = {"D": D + LAM, "lam": -D}
    assert (p * q).compose(CTX2, m) == p.compose(CTX2, m) * q.compose(CTX2, m)


@given(small_polys(), st.fractions(min_value=-3, max_value=3), st.fractions(min_value=-3, max_value=3))
def test_evaluate_matches_pointwise(p, a, b):
    direct = sum(
        (c * a ** e[0] * b ** e[1] for e, c in p.terms.items()),
        Fraction(0),
    )
    assert p.evaluate({"D": a, "lam": b}) == direct


def test_vecpoly_format():
    v = VecPoly(CTX2, [D + 2 * LAM, Poly.zero(CTX2)])
    assert v.format(["v", "u"]) == "(D + 2*lam)*v"
    assert VecPoly.zero(CTX2, 2).format(["v", "u"]) == "0"


def _rank_oracle(rows, ncols):
    return len(rref(rows, ncols)[1])


@settings(max_examples=60)
@given(
    st.integers(1, 6).flatmap(
        lambda n: st.lists(st.lists(st.integers(-3, 3), min_size=n, max_size=n), min_size=1, max_size=7)
    )
)
def test_rowspace_rank_matches_rref(rows):
    ncols = len(rows[0])
    rs = RowSpace()
    for r in rows:
        rs.add({i: v for i, v in enumerate(r) if v})
    assert rs.rank == _rank_oracle([[Fraction(v) for v in r] for r in rows], ncols)
    for r in rows:
        assert rs.contains({i: v for i, v in enumerate(r) if v})
        assert rs.reduce_full({i: v for i, v in enumerate(r) if v}) == {}


def test_rowspace_normal_form_is_canonical():
    rs = RowSpace()
    rs.add({0: 1, 2: -1})
    rs.add({1: 2, 2: 2})
    # 3 e0 + e1 = 3 e2 - e2 = 2 e2 modulo the span
    assert rs.reduce_full({0: 3, 1: 1}) == {2: Fraction(2)}
    assert rs.free_columns(range(3)) == [2]


def test_kernel():
    rows = [[Fraction(1), Fraction(2), Fraction(3)], [Fraction(2), Fraction(4), Fraction(6)]]
    ker = kernel(rows, 3)
    assert len(ker) == 2
    for v in ker:
        assert all(sum(a * b for a, b in zip(r, v)) == 0 for r in rows)


def test_linsolve_affine_system():
    ctx = ("D", "lam", "a", "b")
    Dv, a, b = (Poly.var(ctx, n) for n in ("D", "a", "b"))
    # (a - 1) D + (a + b) = 0 for all D
    sol = vecpoly_linsolve([(a - 1) * Dv + a + b], ["a", "b"])
    assert sol.particular == [1, -1]
    assert sol.dimension == 0


def test_linsolve_inconsistent():
    ctx = ("D", "a")
    a = Poly.var(ctx, "a")
    sol = vecpoly_linsolve([a, a - 1], ["a"])
    assert sol.particular is None and sol.dimension == -1


def test_poly_rank_and_kernel():
    rows = [[D, LAM], [D * LAM, LAM * LAM], [Poly.const(CTX2, 1), D]]
    assert poly_rank(rows) == 2
    vec = poly_kernel_vector([[D, LAM], [D * LAM, LAM * LAM]])
    assert vec is not None
    comb = [vec[0] * D + vec[1] * D * LAM, vec[0] * LAM + vec[1] * LAM * LAM]
    assert all(c.is_zero() for c in comb)
    assert poly_kernel_vector([[D, Poly.zero(CTX2)], [Poly.zero(CTX2), LAM]]) is None
