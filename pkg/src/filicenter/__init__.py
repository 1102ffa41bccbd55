"""Invariants of the down derivation on Q[y_0..y_n] (centers of filiform enveloping algebras)."""

__version__ = "0.1.0"
