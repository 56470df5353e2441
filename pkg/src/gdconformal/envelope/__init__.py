"""Truncated free differential Poisson algebras and the enveloping quotients of GD-algebras."""

from .freealg import (
    Elem,
    FreeAlgebra,
    FreeLieBasis,
    Truncation,
    TruncationOverflow,
    default_formula,
)
from .ideal import (
    NovikovEnvelope,
    PdEnvelope,
    SpecialityResult,
    WeightComponent,
    Window,
    build_novikov_envelope,
    build_pd_envelope,
    generator_relations,
    ideal_component,
    speciality_kernel,
)
from .lemmas import check_free_bracket_lemmas


def wt(alg: FreeAlgebra, m) -> int:
    """Weight of a monomial: x -> -1, d -> +1, bracket -> +1."""
    return alg.mono_weight(m)


def d_apply(alg: FreeAlgebra, e: Elem) -> Elem:
    return alg.d(e)


def poisson_bracket_free(alg: FreeAlgebra, u: Elem, v: Elem) -> Elem:
    return alg.bracket(u, v)


__all__ = [
    "Elem",
    "FreeAlgebra",
    "FreeLieBasis",
    "Truncation",
    "TruncationOverflow",
    "default_formula",
    "NovikovEnvelope",
    "PdEnvelope",
    "SpecialityResult",
    "WeightComponent",
    "Window",
    "build_novikov_envelope",
    "build_pd_envelope",
    "generator_relations",
    "ideal_component",
    "speciality_kernel",
    "check_free_bracket_lemmas",
    "wt",
    "d_apply",
    "poisson_bracket_free",
]
