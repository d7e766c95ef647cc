"""Exact characters for Steinberg quotients of simple root systems.

Modules: ``rootdata`` (roots, weights, Weyl orbits), ``order`` (dot action,
linkage down-sets), ``charring`` (the character ring), ``kl`` (affine Weyl
group, KL polynomials, simple characters), ``steinberg`` (M_p and t_zeta)
and ``cli``.
"""

from .charring import FullCharacter, NotDivisible, OrbitCharacter, WeylCombo, freudenthal
from .kl import AffineElement, KLTable, lcf_simple_d_coefficients, weight_to_affine
from .order import AffineContext, up_down_set
from .rootdata import RootSystem, build_root_system
from .steinberg import SteinbergReport, compare, has_good_steinberg_multiplication, minimal_character, t_zeta

__version__ = "0.1.0"

__all__ = [
    "AffineContext",
    "AffineElement",
    "FullCharacter",
    "KLTable",
    "NotDivisible",
    "OrbitCharacter",
    "RootSystem",
    "SteinbergReport",
    "WeylCombo",
    "build_root_system",
    "compare",
    "freudenthal",
    "has_good_steinberg_multiplication",
    "lcf_simple_d_coefficients",
    "minimal_character",
    "t_zeta",
    "up_down_set",
    "weight_to_affine",
]
