"""
Toolkit Configuration
Centralized defaults for precision, truncation, stabilization, file formats and exit codes
"""

TOOLKIT_CONFIG = {
    # p-adic working precision
    "precision": {
        "default_digits": 40,  # absolute precision M when nothing else is given
        "env_var": "SHARPFLAT_PRECISION",  # overrides the default, not an explicit flag
        "oracle_digits": 10,  # cyclotomic valuation oracle (valuations stay small)
    },

    # Truncated power series
    "series": {
        "default_truncation": 30,  # T-adic order d
        "max_log_factors": 64,  # hard cap on Φ-factors in half-log / Log products
        "extra_levels": 4,  # levels past the stabilization estimate before giving up
    },

    # Stabilization detection for limits over n
    "stabilization": {
        "window_margin": 1,  # digits withheld below the measured agreement
        "min_agreement": 1,  # a coefficient counts as stabilized at >= this many digits
    },

    # Growth formulas
    "growth": {
        "default_n_floor": 2,  # caller-supplied "n >> 0" threshold
        "default_n_max": 8,
    },

    # Sharp/flat extraction
    "sharp_flat": {
        "completed": True,  # divide by the completed factors Φ̂ by default
        "p2_completed": False,  # completion breaks divisibility on genuine p = 2 queue data
        "parity_window": 2,  # levels per parity that must agree before μ±/λ± count as stable
    },

    # Line-based file formats
    "io": {
        "table_suffix": ".mst",
        "sharp_suffix": ".sharp.coef",
        "flat_suffix": ".flat.coef",
        "trace_suffix": ".trace",
        "hash_algorithm": "sha256",
        "table_keys": ["p", "nmax", "sign", "ap", "eps", "levelNf", "period", "denbound", "origin"],
    },

    # Process exit codes by error family
    "exit_codes": {
        "ok": 0,
        "parse": 2,
        "precision": 3,
        "relation": 4,
        "mismatch": 5,
        "branch": 6,
    },
}
