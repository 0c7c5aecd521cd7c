"""Exact invariants of finitely determined plane-to-space map germs."""

__version__ = "0.1.0"
