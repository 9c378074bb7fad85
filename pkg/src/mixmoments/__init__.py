"""Numerics for Eisenstein series, Maass forms and mixed-moment identities on SL2(Z)."""

__version__ = "0.1.0"
