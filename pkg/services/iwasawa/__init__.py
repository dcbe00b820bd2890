"""Iwasawa algebra: finite levels Λ_n, truncated series approximants and their invariants"""
from .lambda_element import LambdaElement, ord_at_origin, ord_at_zeta
from .series import SeriesApprox, fraction_ord
from .quad_lambda import QuadLambdaElement
from .invariants import (
    IwasawaInvariants,
    agreement_digits,
    iwasawa_invariants,
    ord_at_point,
    stabilize_levels,
)

__all__ = [
    'LambdaElement',
    'ord_at_origin',
    'ord_at_zeta',
    'SeriesApprox',
    'fraction_ord',
    'QuadLambdaElement',
    'IwasawaInvariants',
    'agreement_digits',
    'iwasawa_invariants',
    'ord_at_point',
    'stabilize_levels',
]
