"""Exact polynomial arithmetic: sparse multivariate over Q / F_p, dense univariate over Q(t)."""

from .poly import (
    ExponentOverflowError,
    FieldMismatchError,
    Polynomial,
    add,
    leading_term,
    mul,
    partial_derivative,
    y,
)
from .ratfunc import RationalFunction, ZPoly, format_tpoly, series_expand, tpoly, xgcd_z
from .text import PolynomialSyntaxError, format_poly, from_json, parse_poly, to_json

ZPolyOverRat = ZPoly

__all__ = [
    "ExponentOverflowError",
    "FieldMismatchError",
    "Polynomial",
    "PolynomialSyntaxError",
    "RationalFunction",
    "ZPoly",
    "ZPolyOverRat",
    "add",
    "format_poly",
    "format_tpoly",
    "from_json",
    "leading_term",
    "mul",
    "parse_poly",
    "partial_derivative",
    "series_expand",
    "to_json",
    "tpoly",
    "xgcd_z",
    "y",
]
