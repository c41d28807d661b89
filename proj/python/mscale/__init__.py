"""Generalized Hurst exponents, seasonal filtering and trend forecasts for hourly price panels."""

from ._core import *  # noqa: F401,F403
from ._core import MscaleError, ValidationError  # noqa: F401

__version__ = "0.1.0"
