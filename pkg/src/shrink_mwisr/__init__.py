"""Independent sets of rectangles under shrinking: approximation, FPT and kernels."""

from .boxdp import BoxDP, SolveResult, eptas, fpt
from .errors import (ContractError, InputError, InvariantError, MWISRError, ParameterError,
                     ResourceError)
from .geom import Rect, ShrunkRect, is_independent, overlaps, shrink, shrink_all
from .oracle import opt_exact, opt_exhaustive, opt_k_exact
from .sparsify import normalize_params, sparsify

__version__ = "0.1.0"

__all__ = [
    "BoxDP", "SolveResult", "eptas", "fpt",
    "MWISRError", "ParameterError", "InputError", "ContractError", "ResourceError",
    "InvariantError",
    "Rect", "ShrunkRect", "shrink", "shrink_all", "overlaps", "is_independent",
    "opt_exact", "opt_k_exact", "opt_exhaustive", "normalize_params", "sparsify",
]
