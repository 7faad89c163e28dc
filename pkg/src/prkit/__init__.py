"""Poincare-Reeb V-digraphs of refined algebraic domains"""

__version__ = "0.1.0"
