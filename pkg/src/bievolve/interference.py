"""The path-interference function ``I_{m,n}(x)`` and its approximations.

``I_{m,n}(x)`` weights the eigenspace of ``i[H_F, H_B]`` with eigenvalue
``lambda`` when all orderings of ``m`` backward and ``n`` forward steps are
summed; the dimensionless argument is ``x = tau**2 * lambda``. It is the
Gaussian binomial coefficient ``[m+n choose n]_q`` at ``q = exp(-i x)``.

Using ``1 - exp(-i a x) = 2i exp(-i a x / 2) sin(a x / 2)`` the closed form
splits into an exact phase ``exp(-i m n x / 2)`` and a real product of sine
ratios. Every modulus is accumulated in log space, so ``C(8000, 400)``-sized
peaks are handled without overflow, and zeros of the denominator are resolved
analytically by expanding all factors around the nearest rational singular
point ``2 pi p / r``.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import mpmath
import numpy as np

from .exceptions import CapExceededError, InvalidInputError, UndefinedWidthError
from .special import log_binomial

TWO_PI = 2.0 * math.pi
ORACLE_TERM_CAP = 10**7


def _check_mn(m, n):
    if int(m) != m or int(n) != n or m < 0 or n < 0:
        raise InvalidInputError(f"m and n must be nonnegative integers, got m={m}, n={n}")
    return int(m), int(n)


def _check_x(x):
    x = float(x)
    if not math.isfinite(x):
        raise InvalidInputError("x must be finite")
    return x


def reduce_phase(x: float) -> float:
    """Map ``x`` to the representative in ``[-pi, pi]``."""
    return x - TWO_PI * round(x / TWO_PI)


def phase_argument(tau: float, lam: float) -> float:
    """Convert a physical step ``tau`` (s) and eigenvalue ``lam`` (s^-2) to ``x``."""
    return tau * tau * lam


def _nearest_singularity(den: np.ndarray, x: float) -> tuple[int, int, float]:
    # candidates 2*pi*p/r for every denominator index r, plus r=1 (x0 = 0)
    r = np.concatenate(([1], den)).astype(np.int64)
    p = np.rint(x * r / TWO_PI).astype(np.int64)
    h = x - TWO_PI * p / r
    i = int(np.argmin(np.abs(h)))
    pi_, ri = int(p[i]), int(r[i])
    g = math.gcd(pi_, ri)
    pi_, ri = pi_ // g, ri // g
    return pi_, ri, x - TWO_PI * pi_ / ri


def sine_ratio_log(num, den, x: float) -> tuple[float, int]:
    """Evaluate ``prod sin(a x/2) / prod sin(b x/2)`` as ``(log|R|, sign)``.

    ``num`` and ``den`` are sequences of distinct positive integers. The ratio
    must be a trigonometric polynomial (every zero of the denominator is
    matched by numerator zeros of at least equal order); at an exact
    singular point the analytic limit is returned.
    """
    num = np.asarray(num, dtype=np.int64)
    den = np.asarray(den, dtype=np.int64)
    common = np.intersect1d(num, den)
    num = np.setdiff1d(num, common)
    den = np.setdiff1d(den, common)
    if num.size == 0 and den.size == 0:
        return 0.0, 1

    p, r, h = _nearest_singularity(den, x)

    logs = []
    sign = 1
    n_zero_num = n_zero_den = 0
    for ints, is_num in ((num, True), (den, False)):
        k = (ints * p) % (2 * r)
        divisible = k % r == 0
        # factors vanishing at x0: sin(a x/2) = (-1)^(k/r) * sin(a h/2)
        a = ints[divisible]
        sinc = np.sinc(a * h / TWO_PI)
        part_log = np.log(a / 2.0) + np.log(np.abs(sinc))
        part_sign = np.prod(np.where((k[divisible] // r) % 2 == 1, -1, 1)) * np.prod(np.sign(sinc))
        # remaining factors, with the large argument reduced exactly in integers
        s = np.sin(math.pi * k[~divisible] / r + ints[~divisible] * h / 2.0)
        with np.errstate(divide="ignore"):
            rest_log = np.log(np.abs(s))
        rest_sign = np.prod(np.sign(s))

        factor = 1.0 if is_num else -1.0
        logs.extend(factor * part_log)
        logs.extend(factor * rest_log)
        sign *= int(part_sign * rest_sign)
        if is_num:
            n_zero_num = int(divisible.sum())
        else:
            n_zero_den = int(divisible.sum())

    excess = n_zero_num - n_zero_den
    if excess < 0:
        raise InvalidInputError("ratio is singular: denominator zeros exceed numerator zeros")
    if h == 0.0:
        if excess > 0:
            return -math.inf, 0
    else:
        logs.append(excess * math.log(abs(h)))
        if (n_zero_num + n_zero_den) % 2 and h < 0:
            sign = -sign

    if sign == 0 or any(np.isneginf(logs)):
        return -math.inf, 0
    return math.fsum(logs), sign


def closed_form_log(m: int, n: int, x: float) -> tuple[float, float]:
    """Return ``(log|I_{m,n}(x)|, arg I_{m,n}(x))`` from the closed form."""
    m, n = _check_mn(m, n)
    xr = reduce_phase(_check_x(x))
    num = np.arange(m + 1, m + n + 1)
    den = np.arange(1, n + 1)
    log_abs, sign = sine_ratio_log(num, den, xr)
    phase = -0.5 * m * n * xr
    if sign < 0:
        phase += math.pi
    return log_abs, phase


def eval_closed_form(m: int, n: int, x: float) -> complex:
    """``I_{m,n}(x)`` from the product formula, finite at every real ``x``."""
    log_abs, phase = closed_form_log(m, n, x)
    if log_abs == -math.inf:
        return 0j
    return complex(math.exp(log_abs) * math.cos(phase), math.exp(log_abs) * math.sin(phase))


def eval_nested_sum_oracle(m: int, n: int, x: float, cap: int = ORACLE_TERM_CAP) -> complex:
    """Brute-force ``I_{m,n}(x)`` by walking all ``n`` nested summations.

    The outer index runs over ``0..m`` and every inner index over ``0..``
    its parent, so there are ``C(m+n, n)`` terms. Slow on purpose. The
    enumeration tallies how often each exponent occurs; the tally is then
    summed in 30-digit arithmetic because the terms cancel heavily away from
    ``x = 0``.
    """
    m, n = _check_mn(m, n)
    x = _check_x(x)
    if n == 0:
        return 1.0 + 0j
    terms = math.comb(m + n, n)
    if terms > cap:
        raise CapExceededError(f"oracle needs {terms} terms, cap is {cap}")

    counts = [0] * (m * n + 1)

    def walk(depth, upper, total):
        if depth == n:
            counts[total] += 1
            return
        for i in range(upper + 1):
            walk(depth + 1, i, total + i)

    walk(0, m, 0)
    with mpmath.workdps(30):
        xm = mpmath.mpf(x)
        total = mpmath.fsum(c * mpmath.expj(-k * xm) for k, c in enumerate(counts) if c)
        return complex(total)


def eval_modulus_product(m: int, n: int, x: float) -> float:
    """``log|I|`` from the diffraction-grating product.

    ``|I_{N-n,n}| = |prod_q sin(alpha_q beta_q x) / sin(beta_q x)|`` with
    ``alpha_q = (N+1-q)/q`` and ``beta_q = q/2``. Returns ``-inf`` at zeros.
    """
    m, n = _check_mn(m, n)
    xr = reduce_phase(_check_x(x))
    big_n = m + n
    q = np.arange(1, n + 1)
    # alpha_q * beta_q * x = (N+1-q) x / 2 and beta_q * x = q x / 2
    log_abs, _ = sine_ratio_log(big_n + 1 - q, q, xr)
    return log_abs


def peak_width(m: int, n: int) -> float:
    """Half-width of the central peak in ``x`` units: the zero of the quadratic."""
    m, n = _check_mn(m, n)
    if m == 0 or n == 0:
        raise UndefinedWidthError("width is undefined for a single path (m=0 or n=0)")
    return math.sqrt(24.0 / (n * m * (n + m + 1.0)))


def quadratic_approx_normalized(m: int, n: int, x: float) -> float:
    """``max(0, 1 - n m (N+1) x^2 / 24)``: the quadratic approximation over ``C(N, n)``."""
    m, n = _check_mn(m, n)
    big_n = m + n
    return max(0.0, 1.0 - n * m * (big_n + 1.0) * x * x / 24.0)


def quadratic_approx(m: int, n: int, x: float) -> float:
    """``C(N,n) [1 - n (N-n)(N+1) x^2 / 24]`` clamped at 0; ``inf`` if ``C`` overflows."""
    m, n = _check_mn(m, n)
    if m < 1 or n < 1:
        raise InvalidInputError("quadratic approximation requires m, n >= 1")
    bracket = quadratic_approx_normalized(m, n, x)
    if bracket == 0.0:
        return 0.0
    return _exp_or_inf(log_binomial(m + n, n) + math.log(bracket))


def _exp_or_inf(value: float) -> float:
    try:
        return math.exp(value)
    except OverflowError:
        return math.inf


@dataclass
class InterferenceProfile:
    """Samples of ``I_{m,n}`` on an ``x`` grid.

    ``norm_abs`` is always ``|I| / C(m+n, n)``. When ``normalized`` is true
    the ``value`` and ``quad_approx`` columns are scaled the same way;
    otherwise they are raw (and may overflow to ``inf`` for large ``m+n``).
    """

    m: int
    n: int
    x: np.ndarray
    value: np.ndarray
    log_abs: np.ndarray
    norm_abs: np.ndarray
    quad_approx: np.ndarray
    width: float | None
    peak_log_magnitude: float
    normalized: bool = False
    density: np.ndarray | None = field(default=None)


def _sample(args):
    m, n, x, log_peak, normalize = args
    log_abs, phase = closed_form_log(m, n, x)
    scale = log_abs - log_peak if normalize else log_abs
    mag = 0.0 if log_abs == -math.inf else _exp_or_inf(scale)
    value = complex(mag * math.cos(phase), mag * math.sin(phase))
    norm = 0.0 if log_abs == -math.inf else math.exp(log_abs - log_peak)
    if m >= 1 and n >= 1:
        quad = quadratic_approx_normalized(m, n, x)
        if not normalize:
            quad = _quad_raw(log_peak, quad)
    else:
        quad = math.nan
    return value, log_abs, norm, quad


def _quad_raw(log_peak: float, bracket: float) -> float:
    if bracket == 0.0:
        return 0.0
    return _exp_or_inf(log_peak + math.log(bracket))


def interference_profile(m: int, n: int, xs, normalize: bool = False, n_jobs: int = 1) -> InterferenceProfile:
    """Sample ``I_{m,n}`` at each point of ``xs``.

    Grid points may be evaluated by ``n_jobs`` threads; results are placed by
    grid index, so the output does not depend on scheduling.
    """
    m, n = _check_mn(m, n)
    xs = np.asarray(xs, dtype=float)
    if xs.ndim != 1 or not np.all(np.isfinite(xs)):
        raise InvalidInputError("xs must be a finite 1-d grid")
    log_peak = log_binomial(m + n, n)
    jobs = [(m, n, float(x), log_peak, normalize) for x in xs]
    if n_jobs > 1:
        with ThreadPoolExecutor(max_workers=n_jobs) as pool:
            rows = list(pool.map(_sample, jobs))
    else:
        rows = [_sample(j) for j in jobs]

    value = np.array([r[0] for r in rows], dtype=complex)
    log_abs = np.array([r[1] for r in rows])
    norm_abs = np.array([r[2] for r in rows])
    quad = np.array([r[3] for r in rows])
    width = peak_width(m, n) if m >= 1 and n >= 1 else None
    return InterferenceProfile(
        m=m,
        n=n,
        x=xs,
        value=value,
        log_abs=log_abs,
        norm_abs=norm_abs,
        quad_approx=quad,
        width=width,
        peak_log_magnitude=log_peak,
        normalized=normalize,
    )
