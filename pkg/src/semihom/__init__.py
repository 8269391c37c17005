"""semihom: exact-arithmetic homological algebra on truncated graded algebras."""

__version__ = "0.1.0"
