from fractions import Fraction
from itertools import product
from math import factorial, gcd
from functools import reduce

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gdconformal.envelope import (
    Elem,
    FreeAlgebra,
    FreeLieBasis,
    Truncation,
    TruncationOverflow,
    Window,
    build_novikov_envelope,
    build_pd_envelope,
    check_free_bracket_lemmas,
    ideal_component,
    speciality_kernel,
    wt,
)
from gdconformal.gdcore import AxiomError, commutator_gd
from gdconformal.samples import heisenberg3, novikov2, virasoro_source, zero_algebra

T = Truncation(3, 4, 2)


def defined(parities=(0, 0), trunc=T):
    return FreeAlgebra(parities, trunc, "defined")


# -- defined-mode bracket ------------------------------------------------------


def test_letter_bracket_examples():
    A = defined()
    x, y = A.gen(0), A.gen(1)
    assert A.format(A.bracket(x, y)) == "x0*x1' - x0'*x1"
    assert A.bracket(A.gen(0, 1), A.gen(1, 1)).is_zero()
    assert A.d(A.mul(x, x)) == A.mul(x, A.gen(0, 1)).scale(2)
    assert A.format(A.d(A.bracket(x, y))) == "x0*x1'' - x0''*x1"


def test_weights():
    A = defined()
    assert wt(A, (((0, 0),),)) == -1
    assert wt(A, (((0, 1),),)) == 0
    assert A.weight(A.mul(A.gen(0), A.gen(1, 2))) == 0
    assert A.weight(A.bracket(A.gen(0), A.gen(1))) == -1


def test_truncation_overflow():
    A = defined(trunc=Truncation(1, 2, 0))
    with pytest.raises(TruncationOverflow):
        A.gen(0, 2)
    with pytest.raises(TruncationOverflow):
        A.d(A.gen(0, 1))
    with pytest.raises(TruncationOverflow):
        A.mul_many(A.gen(0), A.gen(1), A.gen(0))
    with pytest.raises(ValueError):
        Truncation(0, 3, 1)


def test_odd_square_vanishes():
    A = defined((1, 0))
    t = A.gen(0)
    assert A.mul(t, t).is_zero()
    assert A.mul(t, A.gen(0, 1)) == -A.mul(A.gen(0, 1), t)


letter_st = st.tuples(st.integers(0, 2), st.integers(0, 1))


def elem_st(alg):
    mono = st.lists(letter_st, min_size=1, max_size=2)
    return st.lists(st.tuples(mono, st.integers(-2, 2)), min_size=1, max_size=2).map(
        lambda ts: _build(alg, ts)
    )


def _build(alg, ts):
    acc = Elem()
    for letters, c in ts:
        acc = acc + alg.mul_many(*(alg.gen(*a) for a in letters)).scale(c)
    return acc


PAR = (0, 1, 1)
SUPER = FreeAlgebra(PAR, Truncation(4, 8, 0), "defined")


def homogeneous(u):
    return len({SUPER.mono_parity(m) for m in u.terms}) <= 1


@settings(max_examples=40, deadline=None)
@given(elem_st(SUPER), elem_st(SUPER))
def test_product_supercommutes(u, v):
    if not (u and v and homogeneous(u) and homogeneous(v)):
        return
    s = -1 if SUPER.parity(u) and SUPER.parity(v) else 1
    assert SUPER.mul(u, v) == SUPER.mul(v, u).scale(s)


@settings(max_examples=40, deadline=None)
@given(elem_st(SUPER), elem_st(SUPER))
def test_bracket_is_super_skew_and_d_is_a_derivation(u, v):
    if not (u and v and homogeneous(u) and homogeneous(v)):
        return
    s = -1 if SUPER.parity(u) and SUPER.parity(v) else 1
    assert SUPER.bracket(u, v) == SUPER.bracket(v, u).scale(-s)
    assert SUPER.d(SUPER.mul(u, v)) == SUPER.mul(SUPER.d(u), v) + SUPER.mul(u, SUPER.d(v))


@settings(max_examples=30, deadline=None)
@given(elem_st(SUPER), elem_st(SUPER), elem_st(SUPER))
def test_bracket_leibniz_rule(u, v, w):
    if not all(e and homogeneous(e) for e in (u, v, w)):
        return
    s = -1 if SUPER.parity(u) and SUPER.parity(v) else 1
    lhs = SUPER.bracket(u, SUPER.mul(v, w))
    rhs = SUPER.mul(SUPER.bracket(u, v), w) + SUPER.mul(v, SUPER.bracket(u, w)).scale(s)
    assert lhs == rhs


@settings(max_examples=30, deadline=None)
@given(elem_st(SUPER), elem_st(SUPER))
def test_weight_is_additive(u, v):
    for m1, m2 in product(u.terms, v.terms):
        s, m = SUPER.mono_mul(m1, m2)
        if s:
            assert SUPER.mono_weight(m) == SUPER.mono_weight(m1) + SUPER.mono_weight(m2)


# -- free Lie words ------------------------------------------------------------


def _mobius(n):
    out, p, k = 1, 2, n
    while p * p <= k:
        if k % p == 0:
            k //= p
            if k % p == 0:
                return 0
            out = -out
        p += 1
    return -out if k > 1 else out


def witt_dimension(mults):
    """Dimension of the multidegree piece of a free Lie algebra on even generators."""
    n = sum(mults)
    g = reduce(gcd, mults)
    total = Fraction(0)
    for d in range(1, g + 1):
        if g % d == 0:
            term = factorial(n // d)
            for m in mults:
                term //= factorial(m // d)
            total += _mobius(d) * term
    return total / n


@pytest.mark.parametrize("mults", [(1, 1), (2, 1), (1, 1, 1), (2, 2), (3, 1), (2, 1, 1), (1, 1, 1, 1), (3, 2)])
def test_free_lie_dimensions_match_witt_formula(mults):
    lie = FreeLieBasis(lambda a: 0)
    ms = tuple(sorted((g, 0) for g, k in enumerate(mults) for _ in range(k)))
    assert len(lie.basis_words(ms)) == witt_dimension(mults)


def test_odd_letter_self_bracket():
    lie = FreeLieBasis(lambda a: 1)
    t = ((0, 0),)
    # {t, t} is a nonzero word for odd t; {t, {t, t}} vanishes by Jacobi
    tt = lie.bracket(t, t)
    assert tt
    (w, _), = tt.items()
    assert lie.bracket(t, w) == {}


def test_free_mode_bracket():
    F = FreeAlgebra((0, 0), Truncation(3, 4, 3), "free")
    x, y = F.gen(0), F.gen(1)
    assert F.format(F.bracket(x, y)) == "{x0,x1}"
    assert F.format(F.d(F.bracket(x, y))) == "{x0,x1'} + {x0',x1}"
    assert F.bracket(x, x).is_zero()
    with pytest.raises(TruncationOverflow):
        F.bracket(F.bracket(x, y), F.bracket(x, y))


# -- ideals and speciality -------------------------------------------------------


def test_heisenberg_is_exceptional_with_certificate_z():
    res = speciality_kernel(heisenberg3(), Truncation(2, 4, 2))
    assert res.exceptional
    assert res.kernel == [[0, 0, 1]]
    assert res.component.dim == 2


def test_virasoro_source_is_special():
    res = speciality_kernel(virasoro_source(), Truncation(2, 3, 2))
    assert not res.exceptional
    assert res.component.dim == 1


def test_commutator_of_novikov_is_special():
    res = speciality_kernel(commutator_gd(novikov2()), Truncation(2, 4, 2))
    assert not res.exceptional
    assert res.component.dim == 2


def test_zero_algebra_is_special():
    res = speciality_kernel(zero_algebra(2, (0, 1)), Truncation(2, 3, 2))
    assert not res.exceptional


def test_ideal_component_contains_generator_relation():
    V = virasoro_source()
    comp = ideal_component(V, -1, Truncation(2, 3, 2))
    alg = FreeAlgebra((0,), Truncation(2, 3, 2), "free")
    v = alg.gen(0)
    assert comp.contains(alg.mul(v, alg.gen(0, 1)) - v)
    assert not comp.contains(v)


def test_small_window_drops_rather_than_fails():
    w = Window(virasoro_source(), Truncation(1, 1, 0), "free")
    assert w.dropped > 0
    assert w.component(-1).dim == 1


def test_ideal_requires_gd():
    from gdconformal.gdcore import SuperAlgebra, SuperBasis, make_tensor

    bad = SuperAlgebra(SuperBasis(("a", "b"), (0, 0)), make_tensor(2, {(0, 1): {0: 1}}))
    with pytest.raises(AxiomError):
        ideal_component(bad, -1, T, "defined")


# -- envelopes -------------------------------------------------------------------


@pytest.mark.parametrize("V", [novikov2(), virasoro_source(), zero_algebra(1)], ids=["novikov2", "vir", "zero"])
def test_novikov_envelope_realises_commutator(V):
    env = build_novikov_envelope(V, Truncation(2, 3, 0))
    assert env.passed
    assert env.checks


def test_novikov_envelope_rejects_non_novikov():
    from gdconformal.gdcore import SuperAlgebra, SuperBasis, make_tensor

    bad = SuperAlgebra(SuperBasis(("a", "b"), (0, 0)), make_tensor(2, {(0, 1): {0: 1}}))
    with pytest.raises(AxiomError):
        build_novikov_envelope(bad, Truncation(2, 3, 0))


@pytest.mark.parametrize("R", [3, 4, 5])
def test_pd_envelope_of_virasoro_source(R):
    env = build_pd_envelope(virasoro_source(), Truncation(2, R, 2))
    assert env.dims[-1] == 1
    # x * rep lands in U_-1 for every representative of degree < R
    assert all(len(c) == 1 for row in env.mult for c in row)


def test_pd_envelope_rejects_exceptional():
    with pytest.raises(AxiomError):
        build_pd_envelope(heisenberg3(), Truncation(2, 4, 2))


# -- lemma suite -----------------------------------------------------------------


def test_lemmas_hold():
    rep = check_free_bracket_lemmas(2)
    assert rep.passed and rep.checked > 0


def test_lemmas_hold_with_odd_generators():
    assert check_free_bracket_lemmas(2, (1, 1, 0)).passed
    assert check_free_bracket_lemmas(2, (0, 1, 1)).passed


def test_lemmas_catch_wrong_coefficients():
    assert check_free_bracket_lemmas(2, formula=lambda m, n: (n + 1, -(m - 1))).axioms_failed() == [
        "lemma.ideal",
        "lemma.jacobi",
    ]
    # a symmetric change keeps Jacobi but breaks the ideal property
    assert check_free_bracket_lemmas(2, formula=lambda m, n: (n + 1, -(m + 1))).axioms_failed() == ["lemma.ideal"]


def test_lemmas_cap_validation():
    with pytest.raises(ValueError):
        check_free_bracket_lemmas(0)
