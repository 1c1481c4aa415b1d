"""Exact-arithmetic engine for the hypergeometric series A and B, the
closed/open intersection-number potentials, and tautological relations on
moduli of curves."""

__version__ = "0.1.0"
