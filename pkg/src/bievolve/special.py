"""Log-domain combinatorics."""

from __future__ import annotations

import math

import numpy as np
from scipy.special import gammaln


def log_binomial(n, k):
    """Natural log of ``C(n, k)`` via log-gamma; valid far beyond float overflow."""
    n = np.asarray(n, dtype=float)
    k = np.asarray(k, dtype=float)
    out = gammaln(n + 1.0) - gammaln(k + 1.0) - gammaln(n - k + 1.0)
    return float(out) if out.ndim == 0 else out


def log_factorial(n) -> float:
    return math.lgamma(n + 1.0)
