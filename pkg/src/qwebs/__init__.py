"""Symbolic U_q(sl_n) web calculus: polygon webs, branching, relations, and a
representation-theoretic oracle."""

__version__ = "0.1.0"
