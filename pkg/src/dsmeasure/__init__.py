"""dsmeasure: deviation-from-stochasticity analysis of univariate time
series plus a small from-scratch classification harness."""

from .kernels import BACKEND, NUMBA_ENABLED

__version__ = "0.1.0"
FORMAT_VERSION = "1"

__all__ = ["BACKEND", "NUMBA_ENABLED", "FORMAT_VERSION", "__version__"]
