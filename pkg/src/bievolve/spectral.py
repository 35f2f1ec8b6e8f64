"""Eigenvalue statistics of ``i[H_F, H_B]`` for an ensemble of T-violating particles.

For ``M`` non-interacting particles, each contributing ``+-|lambda1|``, the
eigenvalue ``k |lambda1|`` has degeneracy ``M! / ((M/2 - k)! (M/2 + k)!)``.
Comparing the spread of that distribution with the width of the central
interference peak separates the regime in which paths interfere destructively
from the one in which they do not.

Cosmological magnitudes (``tau ~ 5e-44 s``, ``M ~ 1e80``) are combined in
log10 space and reported as :class:`Sci` mantissa/exponent pairs.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np
from scipy.special import logsumexp

from .exceptions import InvalidInputError
from .special import log_binomial

PLANCK_TIME = 5e-44
TOTAL_PARTICLES = 1e80
LAMBDA1 = 1e17
BROAD_FACTOR = 100.0
NARROW_FACTOR = 0.01

_LOG10_24 = math.log10(24.0)


@dataclass(frozen=True)
class Sci:
    """A positive real number stored as ``mantissa * 10**exp10``."""

    mantissa: float
    exp10: int

    @classmethod
    def from_log10(cls, value: float) -> "Sci":
        exp10 = math.floor(value)
        mantissa = 10.0 ** (value - exp10)
        if mantissa >= 10.0:
            mantissa /= 10.0
            exp10 += 1
        return cls(mantissa, int(exp10))

    @property
    def log10(self) -> float:
        return math.log10(self.mantissa) + self.exp10

    def __float__(self) -> float:
        return self.mantissa * 10.0**self.exp10

    def to_dict(self) -> dict:
        return {"mantissa": self.mantissa, "exp10": self.exp10}


def _log10(value) -> float:
    # math.log10 accepts arbitrarily large Python ints exactly
    if isinstance(value, (int, np.integer)):
        return math.log10(int(value))
    return math.log10(float(value))


@dataclass(frozen=True)
class EnsembleModel:
    """Ensemble of ``M = f * total_particles`` T-violating particles."""

    f: float
    total_particles: float = TOTAL_PARTICLES
    lambda1: float = LAMBDA1
    tau: float = PLANCK_TIME

    def __post_init__(self):
        for name in ("f", "total_particles", "lambda1", "tau"):
            value = float(getattr(self, name))
            if not math.isfinite(value) or value <= 0.0:
                raise InvalidInputError(f"{name} must be positive and finite, got {value}")
        if self.f > 1.0:
            raise InvalidInputError(f"f must lie in (0, 1], got {self.f}")
        if self.log10_particles < 0.0:
            raise InvalidInputError("f * total_particles must be at least 1")

    @property
    def log10_particles(self) -> float:
        return math.log10(self.f) + _log10(self.total_particles)


class Regime(str, enum.Enum):
    BROAD = "Broad"
    NARROW = "Narrow"
    INTERMEDIATE = "Intermediate"


@dataclass(frozen=True)
class RegimeReport:
    width: Sci
    lambda_sd: Sci
    ratio: Sci
    classification: Regime
    threshold_t23: Sci
    threshold_t13: Sci
    inputs: dict

    def to_dict(self) -> dict:
        return {
            "W": self.width.to_dict(),
            "lambda_sd": self.lambda_sd.to_dict(),
            "ratio": self.ratio.to_dict(),
            "classification": self.classification.value,
            "t23_seconds": self.threshold_t23.to_dict(),
            "t13_seconds": self.threshold_t13.to_dict(),
            "inputs": dict(self.inputs),
        }


def _check_even_support(big_m, k):
    if int(big_m) != big_m or big_m < 0 or big_m % 2:
        raise InvalidInputError(f"M must be a nonnegative even integer, got {big_m}")
    if int(k) != k or abs(k) > big_m // 2:
        raise InvalidInputError(f"k must be an integer with |k| <= M/2, got k={k}, M={big_m}")
    return int(big_m), int(k)


def degeneracy_density(big_m: int, k: int) -> float:
    """``ln rho(k |lambda1|) = ln[M! / ((M/2 - k)! (M/2 + k)!)]``."""
    big_m, k = _check_even_support(big_m, k)
    return log_binomial(big_m, big_m // 2 + k)


def degeneracy_distribution(big_m: int) -> tuple[np.ndarray, np.ndarray]:
    """All ``k`` in ``-M/2..M/2`` with ``ln(2^-M rho(k))``."""
    big_m, _ = _check_even_support(big_m, 0)
    k = np.arange(-(big_m // 2), big_m // 2 + 1)
    return k, log_binomial(big_m, big_m // 2 + k) - big_m * math.log(2.0)


def log_normalization(big_m: int) -> float:
    """``ln sum_k 2^-M rho(k)``; zero by the binomial theorem."""
    _, logp = degeneracy_distribution(big_m)
    return float(logsumexp(logp))


def gaussian_density_approx(big_m: int, k: int) -> float:
    """de Moivre-Laplace approximation ``sqrt(2/(pi M)) exp(-2 k^2 / M)`` to ``2^-M rho``."""
    big_m, k = _check_even_support(big_m, k)
    if big_m == 0:
        raise InvalidInputError("M must be positive for the Gaussian approximation")
    return math.sqrt(2.0 / (math.pi * big_m)) * math.exp(-2.0 * k * k / big_m)


def lambda_sd_log10(model: EnsembleModel) -> float:
    return math.log10(0.5) + 0.5 * model.log10_particles + math.log10(model.lambda1)


def lambda_sd(model: EnsembleModel) -> float:
    """Standard deviation ``sqrt(M) |lambda1| / 2`` of the ensemble eigenvalues (s^-2)."""
    return 10.0 ** lambda_sd_log10(model)


def width_log10(tau: float, big_n, n) -> float:
    """``log10 W_{N-n,n}`` with ``W = sqrt(24 / (tau^4 n (N-n) (N+1)))`` in s^-2."""
    m = big_n - n
    return 0.5 * (_LOG10_24 - 4.0 * math.log10(tau) - _log10(n) - _log10(m) - _log10(big_n + 1))


def threshold_times(model: EnsembleModel) -> tuple[Sci, Sci]:
    """``(t23, t13)`` in seconds.

    ``t23 = 1 / (tau^(1/3) lambda_SD^(2/3))`` bounds the total time beyond
    which paths with ``t_F ~ t_B`` cancel; ``t13 = sqrt(24) / (tau lambda_SD)``
    is the time beyond which only the all-forward and all-backward paths
    survive.
    """
    log_tau = math.log10(model.tau)
    log_sd = lambda_sd_log10(model)
    t23 = -(log_tau / 3.0 + 2.0 * log_sd / 3.0)
    t13 = 0.5 * _LOG10_24 - log_tau - log_sd
    return Sci.from_log10(t23), Sci.from_log10(t13)


def regime_classify(
    model: EnsembleModel,
    big_n,
    n,
    broad_factor: float = BROAD_FACTOR,
    narrow_factor: float = NARROW_FACTOR,
    sigma_multiplier: float = 1.0,
) -> RegimeReport:
    """Compare the interference width ``W_{N-n,n}`` with the eigenvalue spread.

    ``sigma_multiplier`` scales ``lambda_SD`` to set the typical eigenvalue
    range (1 means ``-lambda_SD..lambda_SD``).
    """
    if not (1 <= n <= big_n - 1):
        raise InvalidInputError(f"n must satisfy 1 <= n <= N-1, got n={n}, N={big_n}")
    if not (0.0 < narrow_factor < broad_factor) or sigma_multiplier <= 0.0:
        raise InvalidInputError("need 0 < narrow_factor < broad_factor and sigma_multiplier > 0")

    log_w = width_log10(model.tau, big_n, n)
    log_sd = lambda_sd_log10(model) + math.log10(sigma_multiplier)
    log_ratio = log_w - log_sd
    if log_ratio >= math.log10(broad_factor):
        label = Regime.BROAD
    elif log_ratio <= math.log10(narrow_factor):
        label = Regime.NARROW
    else:
        label = Regime.INTERMEDIATE
    t23, t13 = threshold_times(model)
    inputs = {
        "f": model.f,
        "total_particles": float(model.total_particles),
        "lambda1": model.lambda1,
        "tau": model.tau,
        "N": float(big_n),
        "n": float(n),
        "broad_factor": broad_factor,
        "narrow_factor": narrow_factor,
        "sigma_multiplier": sigma_multiplier,
    }
    return RegimeReport(
        width=Sci.from_log10(log_w),
        lambda_sd=Sci.from_log10(log_sd),
        ratio=Sci.from_log10(log_ratio),
        classification=label,
        threshold_t23=t23,
        threshold_t13=t13,
        inputs=inputs,
    )
