"""Gelfand-Dorfman superalgebras, quadratic Lie conformal superalgebras,
differential Poisson envelopes and finite faithful conformal representations,
all in exact rational arithmetic."""

__version__ = "0.1.0"
