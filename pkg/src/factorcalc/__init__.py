"""Exact symbolic calculus for tracial von Neumann algebra expressions.

Free dimension, class-F normal forms, free scaled product words, rescaling,
free trade and certified isomorphism verdicts.
"""
from .certify import Certificate, Step, replay
from .engine import normalize, rescale, to_word, trade, trade_all
from .errors import (EngineError, IllFormed, MalformedCertificate, NotAFactor,
                     NotLicensed, ParseError, PreconditionViolated, UndefinedFdim,
                     UnrealizableScale, UnsupportedCase)
from .expr import (COLLAPSED, DISTINCT, FGF, AssumptionSet, C, DirectSum,
                   FreeProduct, GeometricFamily, H, Hyperfinite, Matrix, Opaque,
                   R, Rescale, ScaledProduct, well_formed)
from .fclass import FNormalForm, free_product_fclass, normalize_fclass, rescale_fclass
from .fdim import fdim, sum_squares
from .iso import Isomorphic, NotProvable, ProvablyDistinct, iso_verdict
from .lang import parse, print_expr, print_form
from .repl import Session, repl_eval
from .scalars import INF
from .words import Letter, Word, canonicalize_word, rho

__version__ = "0.1.0"

__all__ = [
    "Certificate", "Step", "replay", "normalize", "rescale", "to_word", "trade",
    "trade_all", "EngineError", "IllFormed", "MalformedCertificate", "NotAFactor",
    "NotLicensed", "ParseError", "PreconditionViolated", "UndefinedFdim",
    "UnrealizableScale", "UnsupportedCase", "COLLAPSED", "DISTINCT", "FGF",
    "AssumptionSet", "C", "DirectSum", "FreeProduct", "GeometricFamily", "H",
    "Hyperfinite", "Matrix", "Opaque", "R", "Rescale", "ScaledProduct", "well_formed",
    "FNormalForm", "free_product_fclass", "normalize_fclass", "rescale_fclass", "fdim",
    "sum_squares", "Isomorphic", "NotProvable", "ProvablyDistinct", "iso_verdict",
    "parse", "print_expr", "print_form", "Session", "repl_eval", "INF", "Letter",
    "Word", "canonicalize_word", "rho",
]
