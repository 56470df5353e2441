import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gdconformal.confalg import (
    D2,
    LAM2,
    OutsideWindow,
    bracket_eval,
    build_current_poisson,
    build_Lpd,
    check_cocycle,
    check_commutativity,
    check_conformal_jacobi,
    check_lie_conformal,
    check_poisson_conformal,
    check_skew,
    gd_from_quadratic,
    gr_cend_fixture,
    lambda_times,
    quadratic_bracket,
    regular_rep,
    square_table,
    twisted_rep,
)
from gdconformal.confrep import check_module
from gdconformal.exactpoly import CTX2, Poly, VecPoly
from gdconformal.gdcore import AxiomError, SuperBasis, check_gd, commutator_gd
from gdconformal.samples import (
    heisenberg3,
    mutate,
    random_gd_candidate_passing,
    random_novikov,
    random_poisson_with_derivation,
    virasoro_source,
    zero_algebra,
)

ONE = Poly.const(CTX2, 1)


def test_virasoro_bracket():
    T = quadratic_bracket(virasoro_source())
    assert T.entry(0, 0) == VecPoly(CTX2, [D2 + 2 * LAM2])
    assert T.lines() == ["[v _lam v] = (D + 2*lam)*v"]
    assert check_skew(T).passed and check_conformal_jacobi(T).passed


def test_heisenberg_entries_by_hand():
    # [x _lam y] = [x,y] + (D + lam)(y o x) + lam (x o y) = z + (D + lam) y - lam y
    T = quadratic_bracket(heisenberg3())
    assert T.entry(0, 1) == VecPoly(CTX2, [Poly.zero(CTX2), D2, ONE])
    # [x _lam x] = (D + lam)(x - y) + lam (x - y)
    assert T.entry(0, 0) == VecPoly(CTX2, [D2 + 2 * LAM2, -(D2 + 2 * LAM2), Poly.zero(CTX2)])
    assert check_lie_conformal(T).passed


def test_quadratic_requires_gd():
    bad = mutate(random.Random(0), heisenberg3())
    while check_gd(bad).passed:
        bad = mutate(random.Random(1), bad)
    with pytest.raises(AxiomError):
        quadratic_bracket(bad)


def test_sesquilinearity():
    T = quadratic_bracket(virasoro_source())
    # [D v _lam v] = -lam [v _lam v],  [v _lam D v] = (D + lam) [v _lam v]
    assert bracket_eval(T, D2, 0, ONE, 0) == T.entry(0, 0).scale(-LAM2)
    assert bracket_eval(T, ONE, 0, D2, 0) == T.entry(0, 0).scale(D2 + LAM2)


def test_skew_detects_bad_table():
    basis = SuperBasis(("v",), (0,))
    T = square_table(basis, {(0, 0): VecPoly(CTX2, [D2 + LAM2])})
    assert not check_skew(T).passed


def test_odd_generator_skew_sign():
    # one odd generator t with t o t = 0 and [t, t] = 0 except via a partner
    basis = SuperBasis(("e", "t"), (0, 1))
    from gdconformal.gdcore import SuperAlgebra, make_tensor

    A = SuperAlgebra(basis, make_tensor(2, {(0, 1): {1: 1}}), make_tensor(2, {(1, 1): {0: 1}}))
    if check_gd(A).passed:
        assert check_lie_conformal(quadratic_bracket(A)).passed


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10_000))
def test_gd_roundtrip(seed):
    A = random_gd_candidate_passing(random.Random(seed))
    T = quadratic_bracket(A)
    back = gd_from_quadratic(T)
    assert back.circ == A.circ and back.bracket == A.bracket


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10_000))
def test_gd_iff_quadratic_is_lie_conformal(seed):
    rng = random.Random(seed)
    A = random_gd_candidate_passing(rng)
    if rng.random() < 0.6:
        A = mutate(rng, A)
    T = quadratic_bracket(A, check=False)
    assert check_gd(A).passed == check_lie_conformal(T).passed


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 10_000))
def test_regular_module_whenever_jacobi_holds(seed):
    rng = random.Random(seed)
    T = quadratic_bracket(commutator_gd(random_novikov(rng)))
    assert check_conformal_jacobi(T).passed
    assert check_module(T, regular_rep(T)).passed


@settings(max_examples=10, deadline=None)
@given(st.integers(0, 10_000))
def test_lpd_is_poisson_conformal(seed):
    p, d = random_poisson_with_derivation(random.Random(seed))
    P = build_Lpd(p, d)
    assert check_poisson_conformal(P).passed
    assert check_module(P.lie_table, twisted_rep(P)).passed
    assert check_cocycle(P.lie_table, twisted_rep(P), lambda_times(P.assoc_table)).passed


def test_lpd_entries():
    p, d = random_poisson_with_derivation(random.Random(3))
    P = build_Lpd(p, d)
    # the quadratic bracket of the GD-algebra P^(d) is the Lie part of L(P, d)
    from gdconformal.gdcore import pd_algebra

    assert quadratic_bracket(pd_algebra(p, d)).entries == P.lie_table.entries


def test_current_poisson():
    p, _ = random_poisson_with_derivation(random.Random(5))
    P = build_current_poisson(p)
    assert check_poisson_conformal(P).passed


def test_gr_cend_window():
    P = gr_cend_fixture(6)
    rep = check_poisson_conformal(P)
    assert rep.passed
    assert rep.skipped > 0 and rep.checked > 0
    # (x^n _lam x^m) = x^(n+m), [x^n _lam x^m] = (n D + (n+m) lam) x^(n+m-1)
    assert P.assoc_table.entry(0, 1)[2] == ONE
    assert P.lie_table.entry(1, 2)[3] == 2 * D2 + 5 * LAM2
    with pytest.raises(OutsideWindow):
        P.assoc_table.entry(3, 3)


def test_gr_cend_commutative_product():
    assert check_commutativity(gr_cend_fixture(4).assoc_table).passed


def test_zero_algebra_table():
    T = quadratic_bracket(zero_algebra())
    assert T.entry(0, 0).is_zero()
    assert check_lie_conformal(T).passed
