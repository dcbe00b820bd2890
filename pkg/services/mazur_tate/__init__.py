"""Mazur–Tate elements: modular-symbol tables, tame components, queue sequences and Riemann sums"""
from .table import ModularSymbolTable, hecke_consistent_table, load_table, parse_table, units_mod
from .theta import (
    MazurTateElement,
    QueueSequence,
    bottom_element,
    build_theta,
    character_sign,
    level_one_reconstruction,
    queue_from_table,
    symmetry_check,
    tame_order,
    validate_queue,
)
from .riemann import interpolation_at_zero, riemann_pair, riemann_routes_check, riemann_sum_L

__all__ = [
    'ModularSymbolTable',
    'hecke_consistent_table',
    'load_table',
    'parse_table',
    'units_mod',
    'MazurTateElement',
    'QueueSequence',
    'bottom_element',
    'build_theta',
    'character_sign',
    'level_one_reconstruction',
    'queue_from_table',
    'symmetry_check',
    'tame_order',
    'validate_queue',
    'interpolation_at_zero',
    'riemann_pair',
    'riemann_routes_check',
    'riemann_sum_L',
]
