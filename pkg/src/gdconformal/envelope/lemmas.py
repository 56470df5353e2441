"""Symbolic checks of the defined-mode bracket on abstract generators."""

from __future__ import annotations

from itertools import product
from typing import Callable, Sequence

from ..exactpoly import RowSpace
from ..gdcore import AxiomReport
from .freealg import Elem, FreeAlgebra, Truncation, default_formula


def _row(u: Elem, index: dict) -> dict:
    return {index.setdefault(m, len(index)): c for m, c in u.terms.items()}


def check_free_bracket_lemmas(
    order_cap: int,
    parities: Sequence[int] = (0, 0, 0),
    formula: Callable[[int, int], tuple[int, int]] = default_formula,
) -> AxiomReport:
    """Jacobi, the derivation property of d, and bracket invariance of the relation u(x, y).

    (i)   {a,{b,c}} = {{a,b},c} + (-1)^{|a||b|} {b,{a,c}} for letters of order <= cap
    (ii)  d{a,b} = {da,b} + {a,db}
    (iii) {z^(n), x y' - w} lies in span{z^(i) d^j(x y' - w)}, with w = x o y a fourth
          abstract generator of parity |x| + |y|
    """
    if order_cap < 1:
        raise ValueError("order_cap must be at least 1")
    if len(parities) != 3:
        raise ValueError("need the parities of three generators")
    rep = AxiomReport(name="free_bracket_lemmas")
    pw = (parities[0] + parities[1]) % 2
    alg = FreeAlgebra(
        tuple(parities) + (pw,),
        Truncation(order_cap + 3, 6, 0),
        "defined",
        formula,
        names=("x", "y", "z", "w"),
    )
    letters = [(g, n) for g in range(3) for n in range(order_cap + 1)]
    elems = {a: alg.gen(*a) for a in letters}

    def label(a):
        return alg.format_mono((((a),),))

    for a, b, c in product(letters, repeat=3):
        ea, eb, ec = elems[a], elems[b], elems[c]
        s = -1 if parities[a[0]] and parities[b[0]] else 1
        lhs = alg.bracket(ea, alg.bracket(eb, ec))
        rhs = alg.bracket(alg.bracket(ea, eb), ec) + alg.bracket(eb, alg.bracket(ea, ec)).scale(s)
        res = lhs - rhs
        rep.checked += 1
        if res:
            rep.add("lemma.jacobi", (label(a), label(b), label(c)), alg.format(res))

    for a, b in product(letters, repeat=2):
        ea, eb = elems[a], elems[b]
        res = alg.d(alg.bracket(ea, eb)) - alg.bracket(alg.d(ea), eb) - alg.bracket(ea, alg.d(eb))
        rep.checked += 1
        if res:
            rep.add("lemma.derivation", (label(a), label(b)), alg.format(res))

    u = alg.mul(alg.gen(0), alg.gen(1, 1)) - alg.gen(3)
    derivs = [u]
    for _ in range(order_cap + 1):
        derivs.append(alg.d(derivs[-1]))
    for n in range(order_cap + 1):
        target = alg.bracket(alg.gen(2, n), u)
        index: dict = {}
        space = RowSpace()
        for i in range(n + 2):
            for du in derivs[: n + 2]:
                space.add(_row(alg.mul(alg.gen(2, i), du), index))
        rep.checked += 1
        if not space.contains(_row(target, index)):
            rep.add("lemma.ideal", (label((2, n)), "u(x,y)"), alg.format(target))
    return rep
