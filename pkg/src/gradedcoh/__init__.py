"""Graded cohomology workbench: F_p linear algebra, presented graded-commutative
algebras, Bockstein bookkeeping and Bass-Serre assembly."""

__version__ = "0.1.0"
