"""Configuration package"""
from .toolkit_config import TOOLKIT_CONFIG

__all__ = ['TOOLKIT_CONFIG']
