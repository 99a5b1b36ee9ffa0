"""Weighted braces, gauge groups and Maurer-Cartan calculus over arbitrary coefficient rings."""

from ._gpl import (
    Algebra,
    Element,
    GplError,
    circ,
    gauge_act,
    gauge_inverse,
    gauge_product,
    is_mc,
    run,
)

__all__ = [
    "Algebra",
    "Element",
    "GplError",
    "circ",
    "gauge_act",
    "gauge_inverse",
    "gauge_product",
    "is_mc",
    "run",
]
