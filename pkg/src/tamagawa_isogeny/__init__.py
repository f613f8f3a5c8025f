"""Tamagawa numbers of rational elliptic curves with an l-torsion point and of
their l-isogenous quotients, l = 3, 5, 7."""

__version__ = "0.1.0"
