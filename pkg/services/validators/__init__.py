"""Validators Package"""
from .check_result import CheckResult, combine

__all__ = ['CheckResult', 'combine']
