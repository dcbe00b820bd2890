"""Sharp/flat pairs: extraction from queue sequences, identities, zeros and stabilization"""
from .pair import ExtractionTrace, SharpFlatPair, TraceStep
from .tower import TowerPolynomial
from .extraction import (
    extract,
    extract_from_table,
    extract_tower,
    extract_vector,
    forward_compose,
    reconstruction_check,
)
from .identities import (
    functional_equation_check,
    hat_to_plain,
    hat_to_plain_check,
    involution_check,
    main_theorem_check,
    special_value_coefficients,
    special_value_table_check,
)
from .analysis import (
    GcdStructure,
    GreenbergReport,
    OrdersAtZero,
    VanishingRow,
    conjugation_order_check,
    gcd_structure,
    greenberg_report,
    orders_at_zero,
    vanishing_orders,
)
from .stabilization import QueueInvariants, queue_invariants_pm, queue_level_invariants, stabilize_pairs
from .synthetic import queue_thetas, synthetic_table_from_pair

__all__ = [
    'ExtractionTrace',
    'SharpFlatPair',
    'TraceStep',
    'TowerPolynomial',
    'extract',
    'extract_from_table',
    'extract_tower',
    'extract_vector',
    'forward_compose',
    'reconstruction_check',
    'functional_equation_check',
    'hat_to_plain',
    'hat_to_plain_check',
    'involution_check',
    'main_theorem_check',
    'special_value_coefficients',
    'special_value_table_check',
    'GcdStructure',
    'GreenbergReport',
    'OrdersAtZero',
    'VanishingRow',
    'conjugation_order_check',
    'gcd_structure',
    'greenberg_report',
    'orders_at_zero',
    'vanishing_orders',
    'QueueInvariants',
    'queue_invariants_pm',
    'queue_level_invariants',
    'stabilize_pairs',
    'queue_thetas',
    'synthetic_table_from_pair',
]
