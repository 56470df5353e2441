"""Truncated free differential supercommutative / Poisson superalgebras.

Letters
    A *word* is a tuple of generator letters ``(g, n)`` standing for the n-th
    derivative ``x_g^(n)``.  Words of length 1 are the plain letters; longer
    words are right-normed Lie brackets ``{a1, {a2, ... ak}}`` chosen as a
    basis of the free Lie superalgebra (free Poisson mode only).

Monomials
    Sorted tuples of words (sort key: length, then the word).  An odd word
    occurs at most once; the Koszul sign of sorting is folded into the
    coefficient.

Modes
    ``defined``: only plain letters; the bracket of letters is
        {x^(m), y^(n)} = (n-1) x^(m+1) y^(n) - (m-1) x^(m) y^(n+1)
    extended by the Leibniz rule.
    ``free``: the bracket of words is a new Lie word (depth <= B).

Truncation overflow (order > D, degree > R, depth > B) raises
:class:`TruncationOverflow`; nothing is silently dropped.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import permutations
from typing import Callable, Iterable, Sequence

from ..exactpoly import RowSpace, rref

Letter = tuple  # (generator index, derivative order)
Word = tuple  # tuple of Letters
Monomial = tuple  # sorted tuple of Words


class TruncationOverflow(ArithmeticError):
    """A result would leave the truncation window."""


@dataclass(frozen=True)
class Truncation:
    max_diff_order: int = 2
    max_degree: int = 4
    max_bracket_depth: int = 2

    def __post_init__(self):
        if self.max_diff_order < 1 or self.max_degree < 1:
            raise ValueError("max_diff_order and max_degree must be at least 1")
        if self.max_bracket_depth < 0:
            raise ValueError("max_bracket_depth must be non-negative")

    @property
    def D(self) -> int:
        return self.max_diff_order

    @property
    def R(self) -> int:
        return self.max_degree

    @property
    def B(self) -> int:
        return self.max_bracket_depth

    def with_degree(self, R: int) -> "Truncation":
        return Truncation(self.D, R, self.B)


def word_key(w: Word):
    return (len(w), w)


def default_formula(m: int, n: int) -> tuple[int, int]:
    """Coefficients (of x^(m+1) y^(n), of x^(m) y^(n+1)) in {x^(m), y^(n)}."""
    return n - 1, -(m - 1)


class Elem:
    """Element of the free algebra: {Monomial: Fraction}, zero coefficients dropped."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        self.terms = {m: Fraction(c) for m, c in (terms or {}).items() if c}

    @classmethod
    def _raw(cls, terms):
        e = object.__new__(cls)
        e.terms = terms
        return e

    def __bool__(self):
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def __add__(self, other: "Elem") -> "Elem":
        out = dict(self.terms)
        for m, c in other.terms.items():
            v = out.get(m, 0) + c
            if v:
                out[m] = v
            else:
                out.pop(m, None)
        return Elem._raw(out)

    def __neg__(self) -> "Elem":
        return Elem._raw({m: -c for m, c in self.terms.items()})

    def __sub__(self, other: "Elem") -> "Elem":
        return self + (-other)

    def scale(self, c) -> "Elem":
        c = Fraction(c)
        if not c:
            return Elem._raw({})
        return Elem._raw({m: v * c for m, v in self.terms.items()})

    def __eq__(self, other) -> bool:
        return isinstance(other, Elem) and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __repr__(self):
        return f"Elem({self.terms!r})"


class FreeLieBasis:
    """Basis of the free Lie superalgebra on letters, realised in the tensor algebra.

    For each multiset of letters the right-normed brackets of its distinct
    arrangements are expanded into the free associative superalgebra and a
    basis is selected greedily in sorted order.  Brackets are computed as
    super-commutators there and re-expressed in the basis.
    """

    def __init__(self, parity: Callable[[Letter], int]):
        self.parity = parity
        self._tensor: dict = {}
        self._blocks: dict = {}

    def word_parity(self, w: Word) -> int:
        return sum(self.parity(a) for a in w) % 2

    def tensor(self, w: Word) -> dict:
        """Expansion of the right-normed bracket w in the tensor algebra."""
        hit = self._tensor.get(w)
        if hit is not None:
            return hit
        if len(w) == 1:
            out = {w: Fraction(1)}
        else:
            head, rest = w[0], w[1:]
            s = -1 if self.parity(head) and self.word_parity(rest) else 1
            out = {}
            for t, c in self.tensor(rest).items():
                k1 = (head,) + t
                out[k1] = out.get(k1, 0) + c
                k2 = t + (head,)
                out[k2] = out.get(k2, 0) - s * c
            out = {k: v for k, v in out.items() if v}
        self._tensor[w] = out
        return out

    def block(self, multiset: tuple):
        """(basis words, coordinate extractor) for one multiset of letters."""
        hit = self._blocks.get(multiset)
        if hit is not None:
            return hit
        cands = sorted(set(permutations(multiset)))
        col_index: dict = {}
        rs = RowSpace()
        chosen = []
        for w in cands:
            t = self.tensor(w)
            row = {}
            for k, c in t.items():
                row[col_index.setdefault(k, len(col_index))] = c
            if row and rs.add(row):
                chosen.append(w)
        # coordinates: solve sum_b c_b T(b) = target using an invertible row subset
        words = sorted(col_index, key=col_index.get)
        mat = [[self.tensor(b).get(tw, Fraction(0)) for b in chosen] for tw in words]
        n = len(chosen)
        if n:
            red, piv_rows = rref([list(r) for r in zip(*mat)], len(words))
            sel = [words[p] for p in piv_rows]
            sq = [[self.tensor(b).get(tw, Fraction(0)) for b in chosen] for tw in sel]
            inv = _invert(sq)
        else:
            sel, inv = [], []
        hit = (tuple(chosen), tuple(sel), inv)
        self._blocks[multiset] = hit
        return hit

    def basis_words(self, multiset: tuple) -> tuple:
        return self.block(multiset)[0]

    def express(self, tensor_elem: dict) -> dict:
        """Coordinates {basis word: coefficient} of a Lie element given in the tensor algebra."""
        groups: dict = {}
        for t, c in tensor_elem.items():
            if c:
                groups.setdefault(tuple(sorted(t)), {})[t] = c
        out = {}
        for ms, part in groups.items():
            chosen, sel, inv = self.block(ms)
            vec = [part.get(tw, Fraction(0)) for tw in sel]
            coords = [sum((r * v for r, v in zip(row, vec)), Fraction(0)) for row in inv]
            check: dict = {}
            for b, c in zip(chosen, coords):
                if c:
                    out[b] = c
                    for tw, v in self.tensor(b).items():
                        check[tw] = check.get(tw, 0) + c * v
            if {k: v for k, v in check.items() if v} != {k: v for k, v in part.items() if v}:
                raise ValueError("element is not a Lie element")
        return out

    def bracket(self, u: Word, v: Word) -> dict:
        tu, tv = self.tensor(u), self.tensor(v)
        s = -1 if self.word_parity(u) and self.word_parity(v) else 1
        out: dict = {}
        for a, ca in tu.items():
            for b, cb in tv.items():
                out[a + b] = out.get(a + b, 0) + ca * cb
                out[b + a] = out.get(b + a, 0) - s * ca * cb
        return self.express(out)

    def derivative(self, w: Word) -> dict:
        """d applied letter-wise (Leibniz) to the Lie word w, re-expressed in the basis."""
        out: dict = {}
        for t, c in self.tensor(w).items():
            for i, (g, n) in enumerate(t):
                k = t[:i] + ((g, n + 1),) + t[i + 1:]
                out[k] = out.get(k, 0) + c
        return self.express(out)


def _invert(m):
    n = len(m)
    aug = [list(r) + [Fraction(int(i == j)) for j in range(n)] for i, r in enumerate(m)]
    red, piv = rref(aug, 2 * n)
    if piv[:n] != list(range(n)):
        raise ValueError("singular block")
    return [row[n:] for row in red]


class FreeAlgebra:
    """Truncated sComDer<X, d> (defined mode) or sPoisDer<X, d> (free mode)."""

    def __init__(
        self,
        parities: Sequence[int],
        trunc: Truncation | None = None,
        mode: str = "defined",
        formula: Callable[[int, int], tuple[int, int]] = default_formula,
        names: Sequence[str] | None = None,
    ):
        if mode not in ("defined", "free"):
            raise ValueError(f"unknown mode {mode!r}")
        self.parities = tuple(parities)
        self.trunc = trunc
        self.mode = mode
        self.formula = formula
        self.names = tuple(names) if names else tuple(f"x{i}" for i in range(len(self.parities)))
        self.lie = FreeLieBasis(lambda a: self.parities[a[0]])
        self._letter_bracket: dict = {}
        self._dword: dict = {}

    # -- bounds ----------------------------------------------------------

    @property
    def D(self):
        return self.trunc.D if self.trunc else None

    @property
    def R(self):
        return self.trunc.R if self.trunc else None

    @property
    def B(self):
        if self.mode == "defined":
            return 1
        return self.trunc.B if self.trunc else None

    def _check_order(self, n: int) -> None:
        if self.D is not None and n > self.D:
            raise TruncationOverflow(f"derivative order {n} > {self.D}")

    # -- letters and monomials -------------------------------------------

    def word_parity(self, w: Word) -> int:
        return sum(self.parities[g] for g, _ in w) % 2

    def word_weight(self, w: Word) -> int:
        return sum(n - 1 for _, n in w) + len(w) - 1

    def mono_parity(self, m: Monomial) -> int:
        return sum(self.word_parity(w) for w in m) % 2

    def mono_weight(self, m: Monomial) -> int:
        return sum(self.word_weight(w) for w in m)

    @staticmethod
    def mono_degree(m: Monomial) -> int:
        return sum(len(w) for w in m)

    def mono_mul(self, m1: Monomial, m2: Monomial) -> tuple[int, Monomial | None]:
        """Product of two sorted monomials: (sign, monomial) or (0, None)."""
        if not m1:
            return 1, m2
        if not m2:
            return 1, m1
        if self.R is not None and self.mono_degree(m1) + self.mono_degree(m2) > self.R:
            raise TruncationOverflow("degree bound exceeded")
        wp = self.word_parity
        odd1 = [word_key(w) for w in m1 if wp(w)]
        odd2 = [word_key(w) for w in m2 if wp(w)]
        sign = 1
        if odd1 and odd2:
            s1 = set(odd1)
            inv = 0
            for k in odd2:
                if k in s1:
                    return 0, None
                inv += sum(1 for a in odd1 if a > k)
            if inv & 1:
                sign = -1
        return sign, tuple(sorted(m1 + m2, key=word_key))

    def sort_factors(self, words: Sequence[Word]) -> tuple[int, Monomial | None]:
        """Ordered product of words as (sign, sorted monomial)."""
        sign, mono = 1, ()
        for w in words:
            s, mono = self.mono_mul(mono, (w,))
            if not s:
                return 0, None
            sign *= s
        return sign, mono

    # -- elements ----------------------------------------------------------

    def one(self) -> Elem:
        return Elem._raw({(): Fraction(1)})

    def gen(self, g: int, n: int = 0) -> Elem:
        self._check_order(n)
        return Elem._raw({(((g, n),),): Fraction(1)})

    def linear(self, vec: Sequence) -> Elem:
        """Linear form sum_g vec[g] x_g."""
        return Elem({(((g, 0),),): c for g, c in enumerate(vec) if c})

    def word_elem(self, w: Word) -> Elem:
        return Elem._raw({(w,): Fraction(1)})

    def mul(self, u: Elem, v: Elem) -> Elem:
        out: dict = {}
        for m1, c1 in u.terms.items():
            for m2, c2 in v.terms.items():
                s, m = self.mono_mul(m1, m2)
                if s:
                    out[m] = out.get(m, 0) + s * c1 * c2
        return Elem._raw({m: c for m, c in out.items() if c})

    def mul_many(self, *parts: Elem) -> Elem:
        acc = self.one()
        for p in parts:
            acc = self.mul(acc, p)
        return acc

    def parity(self, u: Elem) -> int:
        ps = {self.mono_parity(m) for m in u.terms}
        if len(ps) > 1:
            raise ValueError("inhomogeneous element")
        return ps.pop() if ps else 0

    def weight(self, u: Elem) -> int:
        ws = {self.mono_weight(m) for m in u.terms}
        if len(ws) != 1:
            raise ValueError("element is zero or not weight-homogeneous")
        return ws.pop()

    # -- derivation ----------------------------------------------------------

    def d_word(self, w: Word) -> Elem:
        hit = self._dword.get(w)
        if hit is not None:
            return hit
        if len(w) == 1:
            (g, n), = w
            self._check_order(n + 1)
            out = Elem._raw({(((g, n + 1),),): Fraction(1)})
        else:
            for _, n in w:
                self._check_order(n + 1)
            out = Elem({(b,): c for b, c in self.lie.derivative(w).items()})
        self._dword[w] = out
        return out

    def d(self, u: Elem) -> Elem:
        """The even derivation, by the Leibniz rule over the letters of each monomial."""
        acc = Elem()
        for m, c in u.terms.items():
            for i, w in enumerate(m):
                pre = Elem._raw({m[:i]: c})
                post = Elem._raw({m[i + 1:]: Fraction(1)})
                acc = acc + self.mul(self.mul(pre, self.d_word(w)), post)
        return acc

    def d_power(self, u: Elem, k: int) -> Elem:
        for _ in range(k):
            u = self.d(u)
        return u

    # -- bracket -------------------------------------------------------------

    def bracket_words(self, a: Word, b: Word) -> Elem:
        key = (a, b)
        hit = self._letter_bracket.get(key)
        if hit is not None:
            return hit
        if self.mode == "defined":
            (x, m), = a
            (y, n), = b
            c1, c2 = self.formula(m, n)
            out = Elem()
            if c1:
                self._check_order(m + 1)
                s, mono = self.sort_factors([((x, m + 1),), ((y, n),)])
                if s:
                    out = out + Elem._raw({mono: Fraction(s * c1)})
            if c2:
                self._check_order(n + 1)
                s, mono = self.sort_factors([((x, m),), ((y, n + 1),)])
                if s:
                    out = out + Elem._raw({mono: Fraction(s * c2)})
        else:
            if self.B is not None and len(a) + len(b) > self.B:
                raise TruncationOverflow(f"bracket depth {len(a) + len(b)} > {self.B}")
            if self.R is not None and len(a) + len(b) > self.R:
                raise TruncationOverflow("degree bound exceeded")
            out = Elem({(w,): c for w, c in self.lie.bracket(a, b).items()})
        self._letter_bracket[key] = out
        return out

    def _bracket_word_mono(self, a: Word, m: Monomial) -> Elem:
        """{a, b1 ... bs} = sum_j (-1)^{|a|(|b1|+..+|b_{j-1}|)} b1..b_{j-1} {a, b_j} b_{j+1}..bs."""
        pa = self.word_parity(a)
        acc = Elem()
        before = 0
        for j, b in enumerate(m):
            s = -1 if pa and before else 1
            core = self.bracket_words(a, b)
            if core:
                pre = Elem._raw({m[:j]: Fraction(s)})
                post = Elem._raw({m[j + 1:]: Fraction(1)})
                acc = acc + self.mul(self.mul(pre, core), post)
            before ^= self.word_parity(b)
        return acc

    def bracket(self, u: Elem, v: Elem) -> Elem:
        """Super Poisson bracket, extended from letters by the Leibniz rule on both sides."""
        acc = Elem()
        for mu, cu in u.terms.items():
            for mv, cv in v.terms.items():
                pv = self.mono_parity(mv)
                c = cu * cv
                # {a1..ar, v} = sum_i (-1)^{|v||a_{i+1}..a_r|} a1..a_{i-1} {a_i, v} a_{i+1}..a_r
                after = [0] * (len(mu) + 1)
                for i in range(len(mu) - 1, -1, -1):
                    after[i] = after[i + 1] ^ self.word_parity(mu[i])
                for i, a in enumerate(mu):
                    s = -1 if pv and after[i + 1] else 1
                    core = self._bracket_word_mono(a, mv)
                    if core:
                        pre = Elem._raw({mu[:i]: Fraction(s) * c})
                        post = Elem._raw({mu[i + 1:]: Fraction(1)})
                        acc = acc + self.mul(self.mul(pre, core), post)
        return acc

    # -- enumeration -----------------------------------------------------------

    def letters(self) -> list[Word]:
        """All words allowed by the truncation (requires D, and B in free mode)."""
        if self.D is None:
            raise ValueError("letter enumeration needs a finite derivative order")
        gens = [(g, n) for g in range(len(self.parities)) for n in range(self.D + 1)]
        out = [(a,) for a in gens]
        if self.mode == "free":
            B = self.B if self.B is not None else 1
            if self.R is not None:
                B = min(B, self.R)
            for k in range(2, B + 1):
                for ms in _multisets(gens, k):
                    out.extend(self.lie.basis_words(ms))
        return sorted(out, key=word_key)

    def monomials(self, weight: int, max_degree: int | None = None) -> list[Monomial]:
        """All monomials of the given weight with degree <= max_degree (default R)."""
        R = self.R if max_degree is None else max_degree
        if R is None:
            raise ValueError("monomial enumeration needs a degree bound")
        letters = self.letters()
        info = [(w, self.word_weight(w), len(w), self.word_parity(w)) for w in letters]
        min_w_per_deg = min((wt / dg for _, wt, dg, _ in info), default=0)
        max_w_per_deg = max((wt / dg for _, wt, dg, _ in info), default=0)
        out: list = []

        def rec(start, mono, wt, deg):
            if wt == weight:
                out.append(tuple(mono))
            rest = R - deg
            if rest <= 0:
                return
            if weight < wt + min(0, min_w_per_deg * rest) or weight > wt + max(0, max_w_per_deg * rest):
                return
            for idx in range(start, len(info)):
                w, ww, dg, par = info[idx]
                if deg + dg > R:
                    continue
                mono.append(w)
                rec(idx + 1 if par else idx, mono, wt + ww, deg + dg)
                mono.pop()

        rec(0, [], 0, 0)
        return out

    # -- printing ----------------------------------------------------------------

    def format_word(self, w: Word) -> str:
        def letter(a):
            g, n = a
            return self.names[g] + ("'" * n if n <= 2 else f"^({n})")

        if len(w) == 1:
            return letter(w[0])
        s = letter(w[-1])
        for a in reversed(w[:-1]):
            s = "{" + letter(a) + "," + s + "}"
        return s

    def format_mono(self, m: Monomial) -> str:
        return "*".join(self.format_word(w) for w in m) if m else "1"

    def format(self, u: Elem) -> str:
        if not u.terms:
            return "0"
        items = sorted(u.terms.items(), key=lambda t: (-self.mono_degree(t[0]), [word_key(w) for w in t[0]]))
        parts = []
        for m, c in items:
            mag = abs(c)
            body = self.format_mono(m)
            s = body if mag == 1 and m else (f"{mag}" if not m else f"{mag}*{body}")
            parts.append(("-" if c < 0 else "+", s))
        out = ("-" if parts[0][0] == "-" else "") + parts[0][1]
        for sign, s in parts[1:]:
            out += f" {sign} {s}"
        return out


def _multisets(items: Sequence, k: int):
    def rec(start, acc):
        if len(acc) == k:
            yield tuple(acc)
            return
        for i in range(start, len(items)):
            acc.append(items[i])
            yield from rec(i, acc)
            acc.pop()

    yield from rec(0, [])
