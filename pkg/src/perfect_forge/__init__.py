"""Construction and verification of q-ary 1-perfect codes."""

__version__ = "0.1.0"
