"""Sphere-twist-free lifts of the Nielsen generators of Out(F_n) to Mod(#^n S^2 x S^1),
checked numerically: action on π1 by crossing words, twisting by loop classes in SO(3)."""

__version__ = "0.1.0"
