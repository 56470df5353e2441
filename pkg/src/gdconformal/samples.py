"""Named example algebras and seeded random generators of Novikov, Poisson and GD structures.

Random Novikov superalgebras come from a supercommutative associative
algebra A with an even derivation D (found by solving the linear derivation
equations exactly) via a o b = a D(b) + xi ab, followed by a random integer
change of basis.  Every output is re-checked before it is returned.
"""

from __future__ import annotations

import random
from fractions import Fraction
from itertools import product
from typing import Sequence

from .exactpoly import kernel, rref
from .gdcore import (
    PoissonAlgebra,
    SuperAlgebra,
    SuperBasis,
    check_derivation,
    check_gd,
    check_novikov,
    check_poisson,
    commutator_gd,
    make_tensor,
    pd_algebra,
)

# ---------------------------------------------------------------------------
# named examples


def heisenberg3() -> SuperAlgebra:
    """Heisenberg Lie algebra [x,y]=z with x o x = x - y, y o x = -x o y = y."""
    basis = SuperBasis(("x", "y", "z"), (0, 0, 0))
    circ = make_tensor(3, {(0, 0): {0: 1, 1: -1}, (1, 0): {1: 1}, (0, 1): {1: -1}})
    bracket = make_tensor(3, {(0, 1): {2: 1}, (1, 0): {2: -1}})
    return SuperAlgebra(basis, circ, bracket, "heisenberg3")


def virasoro_source() -> SuperAlgebra:
    """One even generator with v o v = v and zero bracket."""
    basis = SuperBasis(("v",), (0,))
    return SuperAlgebra(basis, make_tensor(1, {(0, 0): {0: 1}}), make_tensor(1), "virasoro-source")


def novikov2() -> SuperAlgebra:
    """v o v = v + u, u o v = u, other products zero; no bracket."""
    basis = SuperBasis(("v", "u"), (0, 0))
    return SuperAlgebra(basis, make_tensor(2, {(0, 0): {0: 1, 1: 1}, (1, 0): {1: 1}}), None, "novikov2")


def zero_algebra(n: int = 1, parities: Sequence[int] | None = None) -> SuperAlgebra:
    parities = tuple(parities) if parities is not None else (0,) * n
    names = tuple(f"a{i}" for i in range(len(parities))) if len(parities) > 1 else ("a",)
    basis = SuperBasis(names, parities)
    return SuperAlgebra(basis, make_tensor(len(parities)), make_tensor(len(parities)), f"zero{len(parities)}")


FIXTURES = {
    "heisenberg3": heisenberg3,
    "virasoro-source": virasoro_source,
    "novikov2": novikov2,
    "zero1": zero_algebra,
}


# ---------------------------------------------------------------------------
# small supercommutative associative algebras: (parities, nonzero products)

COMMUTATIVE = [
    ((0,), {(0, 0): {0: 1}}),  # k
    ((0,), {}),  # square-zero line
    ((1,), {}),  # odd line
    ((0, 0), {(0, 0): {1: 1}}),  # t, t^2 in k[t]/(t^3), no unit
    ((0, 0), {(0, 0): {0: 1}, (0, 1): {1: 1}, (1, 0): {1: 1}}),  # k[t]/(t^2)
    ((0, 0), {(0, 0): {0: 1}, (1, 1): {1: 1}}),  # k x k
    ((0, 0), {}),
    ((0, 1), {(0, 0): {0: 1}, (0, 1): {1: 1}, (1, 0): {1: 1}}),  # exterior algebra on one odd generator
    ((0, 1), {(0, 0): {0: 1}}),  # k x odd line, unit acting trivially
    ((0, 1, 1), {(1, 2): {0: 1}, (2, 1): {0: -1}}),  # theta1 theta2, theta1, theta2
    ((0, 0, 0), {(0, 0): {0: 1}, (0, 1): {1: 1}, (1, 0): {1: 1}, (0, 2): {2: 1}, (2, 0): {2: 1}, (1, 1): {2: 1}}),
    ((0, 0, 0), {(0, 0): {0: 1}, (0, 1): {1: 1}, (1, 0): {1: 1}, (0, 2): {2: 1}, (2, 0): {2: 1}}),
    ((0, 0, 0), {(0, 0): {0: 1}, (1, 1): {1: 1}, (2, 2): {2: 1}}),  # k^3
    ((0, 0, 0), {(0, 0): {1: 1}, (0, 1): {2: 1}, (1, 0): {2: 1}}),  # k[t]/(t^4), no unit
    ((0, 0, 1), {(0, 0): {0: 1}, (0, 1): {1: 1}, (1, 0): {1: 1}, (0, 2): {2: 1}, (2, 0): {2: 1}}),
    ((0, 1, 1), {(0, 0): {0: 1}, (0, 1): {1: 1}, (1, 0): {1: 1}, (0, 2): {2: 1}, (2, 0): {2: 1}}),
    ((0, 0, 0), {}),
    ((0, 1, 1), {}),
]

# Lie superalgebras: (parities, brackets listed for i < j or i == j)
LIE = [
    ((0, 0), {(0, 1): {1: 1}}),  # [a, b] = b
    ((0, 0, 0), {(0, 1): {2: 1}}),  # Heisenberg
    ((0, 0, 0), {(0, 1): {1: 2}, (0, 2): {2: -2}, (1, 2): {0: 1}}),  # sl2 (h, e, f)
    ((0, 1), {(1, 1): {0: 1}}),  # {theta, theta} = e
    ((0, 1), {(0, 1): {1: 1}}),  # [e, theta] = theta
    ((0, 0, 1), {(0, 1): {1: 1}, (0, 2): {2: 1}}),
]


def _lie_tensor(parities, entries) -> list:
    n = len(parities)
    full = {}
    for (i, j), v in entries.items():
        full[(i, j)] = dict(v)
        if i != j:
            s = -1 if parities[i] and parities[j] else 1
            full[(j, i)] = {k: -s * c for k, c in v.items()}
    return make_tensor(n, full)


def _derivations(parities: Sequence[int], tensors: Sequence) -> list[list[list[Fraction]]]:
    """Basis of even linear maps D with D(e_i * e_j) = D(e_i) e_j + e_i D(e_j) for each tensor."""
    n = len(parities)
    slots = [(k, i) for k in range(n) for i in range(n) if parities[k] == parities[i]]
    col = {s: c for c, s in enumerate(slots)}
    rows = []
    for t in tensors:
        for i, j, k in product(range(n), repeat=3):
            row = [Fraction(0)] * len(slots)
            for l in range(n):
                if t[i][j][l] and (k, l) in col:
                    row[col[(k, l)]] += t[i][j][l]
                if t[l][j][k] and (l, i) in col:
                    row[col[(l, i)]] -= t[l][j][k]
                if t[i][l][k] and (l, j) in col:
                    row[col[(l, j)]] -= t[i][l][k]
            if any(row):
                rows.append(row)
    basis = kernel(rows, len(slots)) if rows else [
        [Fraction(int(a == b)) for a in range(len(slots))] for b in range(len(slots))
    ]
    out = []
    for vec in basis:
        m = [[Fraction(0)] * n for _ in range(n)]
        for (k, i), c in zip(slots, vec):
            m[k][i] = c
        out.append(m)
    return out


def _random_derivation(rng: random.Random, parities, tensors):
    n = len(parities)
    basis = _derivations(parities, tensors)
    d = [[Fraction(0)] * n for _ in range(n)]
    for b in basis:
        c = rng.randint(-2, 2)
        for k in range(n):
            for i in range(n):
                d[k][i] += c * b[k][i]
    return d


def _random_change(rng: random.Random, parities) -> list[list[Fraction]]:
    """Random invertible integer matrix preserving parity (columns = new basis vectors)."""
    n = len(parities)
    while True:
        m = [[Fraction(rng.randint(-1, 1) if parities[r] == parities[c] else 0) for c in range(n)] for r in range(n)]
        for i in range(n):
            m[i][i] += rng.choice([1, 1, 2])
        if len(rref(m, n)[1]) == n:
            return m


def _blank(n: int) -> list:
    return [[[Fraction(0)] * n for _ in range(n)] for _ in range(n)]


def freeze(t) -> tuple:
    return tuple(tuple(tuple(Fraction(c) for c in v) for v in row) for row in t)


def _inverse(m):
    n = len(m)
    aug = [list(r) + [Fraction(int(i == j)) for j in range(n)] for i, r in enumerate(m)]
    red, _ = rref(aug, 2 * n)
    return [row[n:] for row in red]


def transform_tensor(t, P) -> list:
    """Structure constants of the same product in the basis f_i = sum_k P[k][i] e_k."""
    n = len(P)
    Q = _inverse(P)
    out = _blank(n)
    for i, j in product(range(n), repeat=2):
        vec = [Fraction(0)] * n
        for a, b in product(range(n), repeat=2):
            c = P[a][i] * P[b][j]
            if c:
                for k in range(n):
                    vec[k] += c * t[a][b][k]
        out[i][j] = [sum((Q[r][k] * vec[k] for k in range(n)), Fraction(0)) for r in range(n)]
    return freeze(out)


def _names(parities):
    return tuple("abc"[i] for i in range(len(parities)))


def random_novikov(rng: random.Random, max_dim: int = 3) -> SuperAlgebra:
    """A Novikov superalgebra a o b = a D(b) + xi ab from a random commutative source."""
    pool = [c for c in COMMUTATIVE if len(c[0]) <= max_dim]
    while True:
        parities, entries = rng.choice(pool)
        n = len(parities)
        prod = make_tensor(n, entries)
        d = _random_derivation(rng, parities, [prod])
        xi = rng.choice([-1, 0, 0, 1, 2])
        circ = _blank(n)
        for i, j in product(range(n), repeat=2):
            dj = [d[k][j] for k in range(n)]
            vec = [Fraction(0)] * n
            for l, c in enumerate(dj):
                if c:
                    for k in range(n):
                        vec[k] += c * prod[i][l][k]
            circ[i][j] = [vec[k] + xi * prod[i][j][k] for k in range(n)]
        P = _random_change(rng, parities)
        A = SuperAlgebra(SuperBasis(_names(parities), parities), transform_tensor(circ, P), None, "random-novikov")
        if check_novikov(A).passed:
            return A


def random_poisson_with_derivation(rng: random.Random, max_dim: int = 3):
    """(Poisson superalgebra, even derivation): a commutative algebra with zero bracket,
    a Lie superalgebra with zero product, or a commutative algebra with a compatible
    bracket found by solving the Leibniz equations."""
    while True:
        kind = rng.choice(["commutative", "lie", "solved"])
        if kind == "lie":
            parities, entries = rng.choice([l for l in LIE if len(l[0]) <= max_dim])
            n = len(parities)
            prod, br = make_tensor(n), _lie_tensor(parities, entries)
        else:
            parities, entries = rng.choice([c for c in COMMUTATIVE if len(c[0]) <= max_dim])
            n = len(parities)
            prod = make_tensor(n, entries)
            br = make_tensor(n) if kind == "commutative" else _random_compatible_bracket(rng, parities, prod)
            if br is None:
                continue
        d = _random_derivation(rng, parities, [prod, br])
        P = _random_change(rng, parities)
        p = PoissonAlgebra(
            SuperBasis(_names(parities), parities), transform_tensor(prod, P), transform_tensor(br, P), f"random-{kind}"
        )
        Q = _inverse(P)
        # d in the new basis: Q d P
        dn = [[sum((Q[r][a] * d[a][b] * P[b][c] for a in range(n) for b in range(n)), Fraction(0)) for c in range(n)] for r in range(n)]
        if check_poisson(p).passed and check_derivation(p, dn).passed:
            return p, dn


def _random_compatible_bracket(rng: random.Random, parities, prod):
    """A random solution of super skew-symmetry and Leibniz for the given product, if Jacobi holds."""
    n = len(parities)
    slots = [
        (i, j, k)
        for i in range(n)
        for j in range(i, n)
        for k in range(n)
        if parities[k] == (parities[i] + parities[j]) % 2 and not (i == j and parities[i] == 0)
    ]
    if not slots:
        return None
    col = {s: c for c, s in enumerate(slots)}

    def coeff(i, j, k):
        # [e_i, e_j]_k as a linear form in the slot unknowns
        if i <= j:
            return {col[(i, j, k)]: Fraction(1)} if (i, j, k) in col else {}
        s = -1 if parities[i] and parities[j] else 1
        return {col[(j, i, k)]: Fraction(-s)} if (j, i, k) in col else {}

    rows = []
    for a, b, c in product(range(n), repeat=3):
        # [a, bc] = [a, b] c + (-1)^{|a||b|} b [a, c]
        s = -1 if parities[a] and parities[b] else 1
        for k in range(n):
            row = [Fraction(0)] * len(slots)
            for l in range(n):
                if prod[b][c][l]:
                    for idx, v in coeff(a, l, k).items():
                        row[idx] += prod[b][c][l] * v
            for l in range(n):
                if prod[l][c][k]:
                    for idx, v in coeff(a, b, l).items():
                        row[idx] -= prod[l][c][k] * v
                if prod[b][l][k]:
                    for idx, v in coeff(a, c, l).items():
                        row[idx] -= s * prod[b][l][k] * v
            if any(row):
                rows.append(row)
    basis = kernel(rows, len(slots)) if rows else [
        [Fraction(int(a == b)) for a in range(len(slots))] for b in range(len(slots))
    ]
    if not basis:
        return None
    vec = [Fraction(0)] * len(slots)
    for b in basis:
        c = rng.randint(-1, 1)
        vec = [x + c * y for x, y in zip(vec, b)]
    entries: dict = {}
    for (i, j, k), c in zip(slots, vec):
        if c:
            entries.setdefault((i, j), {})[k] = c
    br = _lie_tensor(parities, entries)
    p = PoissonAlgebra(SuperBasis(_names(parities), parities), prod, br)
    return br if check_poisson(p).passed else None


def random_gd_candidate(rng: random.Random, min_dim: int = 2, max_dim: int = 3) -> SuperAlgebra:
    """A 2- or 3-dimensional two-product structure; some are GD-algebras, some are not."""
    while True:
        kind = rng.choice(["commutator", "pd", "novikov", "lie", "mutation", "mutation", "dense"])
        if kind == "commutator":
            A = commutator_gd(random_novikov(rng, max_dim))
        elif kind == "pd":
            A = pd_algebra(*random_poisson_with_derivation(rng, max_dim))
        elif kind == "novikov":
            N = random_novikov(rng, max_dim)
            A = N.with_bracket(make_tensor(N.dim))
        elif kind == "lie":
            parities, entries = rng.choice(LIE)
            A = SuperAlgebra(
                SuperBasis(_names(parities), parities), make_tensor(len(parities)), _lie_tensor(parities, entries)
            )
        elif kind == "mutation":
            A = mutate(rng, random_gd_candidate_passing(rng, min_dim, max_dim))
        else:
            A = random_dense(rng, rng.randint(min_dim, max_dim))
        if min_dim <= A.dim <= max_dim:
            return SuperAlgebra(A.basis, A.circ, A.bracket, f"candidate-{kind}")


def random_gd_candidate_passing(rng: random.Random, min_dim: int = 2, max_dim: int = 3) -> SuperAlgebra:
    while True:
        A = commutator_gd(random_novikov(rng, max_dim)) if rng.random() < 0.5 else pd_algebra(
            *random_poisson_with_derivation(rng, max_dim)
        )
        if min_dim <= A.dim <= max_dim and check_gd(A).passed:
            return A


def mutate(rng: random.Random, A: SuperAlgebra) -> SuperAlgebra:
    """Change one parity-allowed structure constant of circ or bracket by a nonzero amount."""
    n, par = A.dim, A.basis.parity
    allowed = [(i, j, k) for i, j, k in product(range(n), repeat=3) if par[k] == (par[i] + par[j]) % 2]
    if not allowed:
        return A
    which = rng.choice(["circ", "bracket"])
    i, j, k = rng.choice(allowed)
    t = [[list(v) for v in row] for row in getattr(A, which)]
    delta = Fraction(rng.choice([-2, -1, 1, 2]))
    t[i][j][k] += delta
    if which == "bracket":
        if i == j and not par[i]:
            t[i][j][k] -= delta
            which = "circ"
            t = [[list(v) for v in row] for row in A.circ]
            t[i][j][k] += delta
        elif i != j:
            s = -1 if par[i] and par[j] else 1
            t[j][i][k] -= s * delta
    circ = freeze(t) if which == "circ" else A.circ
    br = freeze(t) if which == "bracket" else A.bracket
    return SuperAlgebra(A.basis, circ, br, A.name)


def random_dense(rng: random.Random, n: int) -> SuperAlgebra:
    parities = tuple(sorted(rng.choice([0, 0, 1]) for _ in range(n)))
    circ = _blank(n)
    br = _blank(n)
    for i, j, k in product(range(n), repeat=3):
        if parities[k] == (parities[i] + parities[j]) % 2:
            circ[i][j][k] = Fraction(rng.randint(-1, 1))
    for i in range(n):
        for j in range(i, n):
            s = -1 if parities[i] and parities[j] else 1
            for k in range(n):
                if parities[k] != (parities[i] + parities[j]) % 2 or (i == j and s == 1):
                    continue
                c = Fraction(rng.randint(-1, 1))
                br[i][j][k] = c
                br[j][i][k] = -s * c
    return SuperAlgebra(SuperBasis(_names(parities), parities), freeze(circ), freeze(br))
