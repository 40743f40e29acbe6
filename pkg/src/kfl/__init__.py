"""Kripke frames, filtrations and finite-model constructions for pretransitive modal logics."""

__version__ = "0.1.0"
