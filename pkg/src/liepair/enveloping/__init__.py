"""Enveloping algebras: U(g), U_{L/A}, the symmetric algebra and the pullback enveloping algebra."""

from .sym import SymAlgebra
from .ug import UG, ULA, ug_multiply
from .uenv import EnvelopingData, Nabla, PBWMap, UEnv

__all__ = ["SymAlgebra", "UG", "ULA", "ug_multiply", "EnvelopingData", "Nabla", "PBWMap", "UEnv"]
