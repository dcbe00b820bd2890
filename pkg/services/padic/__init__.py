"""p-adic core: scalars, the Hecke quadratic extension, cyclotomic scalars and tame characters"""
from .scalar import INFINITY, PadicScalar, ValQ, is_prime
from .quadratic import HeckeField, QuadExtScalar
from .cyclotomic import CycloScalar, ramification_degree
from .characters import discrete_log_gamma, gamma_generator, level_exponent, teichmuller

__all__ = [
    'INFINITY',
    'PadicScalar',
    'ValQ',
    'is_prime',
    'HeckeField',
    'QuadExtScalar',
    'CycloScalar',
    'ramification_degree',
    'discrete_log_gamma',
    'gamma_generator',
    'level_exponent',
    'teichmuller',
]
