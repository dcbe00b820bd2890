"""Line-based file formats: coefficient files, traces and atomic writes"""
from .coefficient_files import (
    PairFileStore,
    component_from_rows,
    component_rows,
    content_hash,
    parse_coefficients,
    render_component,
    write_atomic,
)

__all__ = [
    'PairFileStore',
    'component_from_rows',
    'component_rows',
    'content_hash',
    'parse_coefficients',
    'render_component',
    'write_atomic',
]
