"""Sparse multivariate polynomials with exact rational coefficients.

A polynomial lives in a fixed, ordered tuple of variable names (its
context).  Terms are stored as ``{exponent tuple: Fraction}`` with no zero
coefficients.  All objects are treated as immutable.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping, Sequence, Union

Scalar = Union[int, Fraction]

__all__ = [
    "Poly",
    "VecPoly",
    "VariableMismatch",
    "to_fraction",
    "poly_mul",
    "poly_substitute",
]


class VariableMismatch(ValueError):
    """Operands live in different variable contexts, or a name is unknown."""


def to_fraction(c) -> Fraction:
    if isinstance(c, Fraction):
        return c
    if isinstance(c, int):
        return Fraction(c)
    if isinstance(c, str):
        return Fraction(c.strip())
    raise TypeError(f"not an exact rational: {c!r}")


def _fmt_coef(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


class Poly:
    __slots__ = ("vars", "terms", "_hash")

    def __init__(self, vars: Sequence[str], terms: Mapping[tuple, Scalar] | None = None):
        self.vars = tuple(vars)
        clean = {}
        if terms:
            n = len(self.vars)
            for e, c in terms.items():
                if len(e) != n:
                    raise VariableMismatch(f"exponent {e} does not fit context {self.vars}")
                c = to_fraction(c)
                if c:
                    clean[tuple(e)] = c
        self.terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, vars: tuple, terms: dict) -> "Poly":
        # trusted constructor: terms already clean
        p = object.__new__(cls)
        p.vars = vars
        p.terms = terms
        p._hash = None
        return p

    @classmethod
    def const(cls, vars: Sequence[str], c: Scalar = 1) -> "Poly":
        vars = tuple(vars)
        c = to_fraction(c)
        return cls._raw(vars, {(0,) * len(vars): c} if c else {})

    @classmethod
    def zero(cls, vars: Sequence[str]) -> "Poly":
        return cls._raw(tuple(vars), {})

    @classmethod
    def var(cls, vars: Sequence[str], name: str) -> "Poly":
        vars = tuple(vars)
        if name not in vars:
            raise VariableMismatch(f"unknown variable {name!r} in {vars}")
        e = tuple(1 if v == name else 0 for v in vars)
        return cls._raw(vars, {e: Fraction(1)})

    # -- basic queries -------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def degree(self, name: str | None = None) -> int:
        """Total degree, or degree in one variable; -1 for the zero polynomial."""
        if not self.terms:
            return -1
        if name is None:
            return max(sum(e) for e in self.terms)
        i = self._index(name)
        return max(e[i] for e in self.terms)

    def coeff(self, exps: Sequence[int]) -> Fraction:
        return self.terms.get(tuple(exps), Fraction(0))

    def constant_term(self) -> Fraction:
        return self.terms.get((0,) * len(self.vars), Fraction(0))

    def _index(self, name: str) -> int:
        try:
            return self.vars.index(name)
        except ValueError:
            raise VariableMismatch(f"unknown variable {name!r} in {self.vars}") from None

    def _check(self, other: "Poly") -> None:
        if self.vars != other.vars:
            raise VariableMismatch(f"context {self.vars} vs {other.vars}")

    def _coerce(self, other) -> "Poly":
        if isinstance(other, Poly):
            self._check(other)
            return other
        return Poly.const(self.vars, other)

    # -- ring operations -----------------------------------------------

    def __add__(self, other) -> "Poly":
        other = self._coerce(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            s = out.get(e)
            if s is None:
                out[e] = c
            else:
                s += c
                if s:
                    out[e] = s
                else:
                    del out[e]
        return Poly._raw(self.vars, out)

    __radd__ = __add__

    def __neg__(self) -> "Poly":
        return Poly._raw(self.vars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other) -> "Poly":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "Poly":
        return self._coerce(other) - self

    def __mul__(self, other) -> "Poly":
        if not isinstance(other, Poly):
            c = to_fraction(other)
            if not c:
                return Poly._raw(self.vars, {})
            return Poly._raw(self.vars, {e: v * c for e, v in self.terms.items()})
        self._check(other)
        out: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, 0) + c1 * c2
        return Poly._raw(self.vars, {e: c for e, c in out.items() if c})

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "Poly":
        if k < 0:
            raise ValueError("negative power")
        result = Poly.const(self.vars, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def __eq__(self, other) -> bool:
        if isinstance(other, Poly):
            return self.vars == other.vars and self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self == Poly.const(self.vars, other)
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.vars, frozenset(self.terms.items())))
        return self._hash

    # -- substitution --------------------------------------------------

    def compose(self, new_vars: Sequence[str], mapping: Mapping[str, "Poly"]) -> "Poly":
        """Evaluate each variable at a polynomial in ``new_vars``.

        Variables absent from ``mapping`` are carried over by name and must
        exist in ``new_vars``.  The substitution is simultaneous.
        """
        new_vars = tuple(new_vars)
        images = []
        for v in self.vars:
            img = mapping.get(v)
            if img is None:
                img = Poly.var(new_vars, v)
            elif not isinstance(img, Poly):
                img = Poly.const(new_vars, img)
            elif img.vars != new_vars:
                raise VariableMismatch(f"image of {v} lives in {img.vars}, expected {new_vars}")
            images.append(img)
        powers: list[dict[int, Poly]] = [{} for _ in images]

        def power(i: int, k: int) -> Poly:
            cache = powers[i]
            p = cache.get(k)
            if p is None:
                p = images[i] ** k if k < 2 else power(i, k - 1) * images[i]
                cache[k] = p
            return p

        acc: dict = {}
        for e, c in self.terms.items():
            term = None
            for i, k in enumerate(e):
                if k:
                    term = power(i, k) if term is None else term * power(i, k)
            if term is None:
                z = (0,) * len(new_vars)
                acc[z] = acc.get(z, 0) + c
            else:
                for te, tc in term.terms.items():
                    acc[te] = acc.get(te, 0) + tc * c
        return Poly._raw(new_vars, {e: c for e, c in acc.items() if c})

    def substitute(self, name: str, expr: "Poly") -> "Poly":
        self._index(name)
        return self.compose(self.vars, {name: self._coerce(expr)})

    def extend(self, new_vars: Sequence[str]) -> "Poly":
        """Re-home the polynomial in a context containing all its live variables."""
        new_vars = tuple(new_vars)
        if new_vars == self.vars:
            return self
        pos = []
        for i, v in enumerate(self.vars):
            if v in new_vars:
                pos.append(new_vars.index(v))
            else:
                if any(e[i] for e in self.terms):
                    raise VariableMismatch(f"variable {v!r} is used but missing from {new_vars}")
                pos.append(None)
        out = {}
        n = len(new_vars)
        for e, c in self.terms.items():
            ne = [0] * n
            for i, k in enumerate(e):
                if k:
                    ne[pos[i]] = k
            out[tuple(ne)] = c
        return Poly._raw(new_vars, out)

    def evaluate(self, values: Mapping[str, Scalar]) -> "Poly":
        """Partial evaluation at rational points; result stays in this context."""
        mapping = {v: Poly.const(self.vars, values[v]) for v in values}
        for v in mapping:
            self._index(v)
        return self.compose(self.vars, mapping)

    # -- division ------------------------------------------------------

    def leading(self):
        e = max(self.terms)
        return e, self.terms[e]

    def divexact(self, other: "Poly") -> "Poly":
        """Exact quotient; raises ``ArithmeticError`` if ``other`` does not divide."""
        other = self._coerce(other)
        if other.is_zero():
            raise ZeroDivisionError("division by zero polynomial")
        le, lc = other.leading()
        rem = self
        quot: dict = {}
        while rem.terms:
            e, c = rem.leading()
            d = tuple(a - b for a, b in zip(e, le))
            if min(d) < 0:
                raise ArithmeticError("inexact polynomial division")
            q = c / lc
            quot[d] = q
            rem = rem - Poly._raw(self.vars, {d: q}) * other
        return Poly._raw(self.vars, quot)

    # -- printing ------------------------------------------------------

    def sorted_terms(self) -> list:
        return sorted(self.terms.items(), key=lambda t: (sum(t[0]), t[0]), reverse=True)

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for e, c in self.sorted_terms():
            mono = "*".join(
                v if k == 1 else f"{v}^{k}" for v, k in zip(self.vars, e) if k
            )
            if not mono:
                s = _fmt_coef(abs(c))
            elif abs(c) == 1:
                s = mono
            else:
                s = f"{_fmt_coef(abs(c))}*{mono}"
            parts.append(("-" if c < 0 else "+", s))
        out = ("-" if parts[0][0] == "-" else "") + parts[0][1]
        for sign, s in parts[1:]:
            out += f" {sign} {s}"
        return out

    def __repr__(self) -> str:
        return f"Poly({self.vars}, {str(self)!r})"


def poly_mul(p: Poly, q: Poly) -> Poly:
    return p * q


def poly_substitute(p: Poly, var: str, expr: Poly) -> Poly:
    return p.substitute(var, expr)


class VecPoly:
    """Vector of polynomials over a finite basis, all in one context."""

    __slots__ = ("vars", "comps")

    def __init__(self, vars: Sequence[str], comps: Iterable[Poly]):
        self.vars = tuple(vars)
        self.comps = tuple(comps)
        for p in self.comps:
            if p.vars != self.vars:
                raise VariableMismatch(f"component in {p.vars}, vector in {self.vars}")

    @classmethod
    def zero(cls, vars: Sequence[str], dim: int) -> "VecPoly":
        z = Poly.zero(vars)
        return cls(vars, [z] * dim)

    @classmethod
    def from_dict(cls, vars: Sequence[str], dim: int, parts: Mapping[int, Poly]) -> "VecPoly":
        z = Poly.zero(vars)
        return cls(vars, [parts.get(i, z) for i in range(dim)])

    @classmethod
    def from_vector(cls, vars: Sequence[str], vec: Sequence[Scalar], factor: Poly | None = None) -> "VecPoly":
        """``factor * vec`` for a rational vector ``vec``."""
        f = factor if factor is not None else Poly.const(vars, 1)
        return cls(vars, [f * c for c in vec])

    def __len__(self) -> int:
        return len(self.comps)

    def __getitem__(self, i: int) -> Poly:
        return self.comps[i]

    def is_zero(self) -> bool:
        return all(p.is_zero() for p in self.comps)

    def support(self) -> list[int]:
        return [i for i, p in enumerate(self.comps) if p.terms]

    def _check(self, other: "VecPoly") -> None:
        if self.vars != other.vars or len(self) != len(other):
            raise VariableMismatch("vector shape or context mismatch")

    def __add__(self, other: "VecPoly") -> "VecPoly":
        self._check(other)
        return VecPoly(self.vars, [a + b for a, b in zip(self.comps, other.comps)])

    def __sub__(self, other: "VecPoly") -> "VecPoly":
        self._check(other)
        return VecPoly(self.vars, [a - b for a, b in zip(self.comps, other.comps)])

    def __neg__(self) -> "VecPoly":
        return VecPoly(self.vars, [-a for a in self.comps])

    def scale(self, f) -> "VecPoly":
        return VecPoly(self.vars, [a * f for a in self.comps])

    def compose(self, new_vars: Sequence[str], mapping: Mapping[str, Poly]) -> "VecPoly":
        return VecPoly(new_vars, [a.compose(new_vars, mapping) for a in self.comps])

    def substitute(self, name: str, expr: Poly) -> "VecPoly":
        return VecPoly(self.vars, [a.substitute(name, expr) for a in self.comps])

    def extend(self, new_vars: Sequence[str]) -> "VecPoly":
        return VecPoly(new_vars, [a.extend(new_vars) for a in self.comps])

    def __eq__(self, other) -> bool:
        if not isinstance(other, VecPoly):
            return NotImplemented
        return self.vars == other.vars and self.comps == other.comps

    def __hash__(self) -> int:
        return hash((self.vars, self.comps))

    def format(self, labels: Sequence[str]) -> str:
        parts = []
        for p, lab in zip(self.comps, labels):
            if not p.terms:
                continue
            if len(p.terms) == 1:
                (e, c), = p.terms.items()
                s = str(p)
                if not any(e):
                    s = "" if c == 1 else ("-" if c == -1 else s + "*")
                    parts.append(f"{s}{lab}")
                else:
                    parts.append(f"{s}*{lab}")
            else:
                parts.append(f"({p})*{lab}")
        if not parts:
            return "0"
        out = parts[0]
        for s in parts[1:]:
            out += f" - {s[1:]}" if s.startswith("-") else f" + {s}"
        return out

    def __repr__(self) -> str:
        return f"VecPoly({self.vars}, [{', '.join(str(p) for p in self.comps)}])"
