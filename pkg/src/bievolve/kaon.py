"""Neutral-kaon estimate of the eigenvalue of ``i[H_F, H_B]`` for one particle.

In the ``(K0, K0bar)`` basis the backward Hamiltonian is the CP conjugate of
the forward one, ``H_B = (CP)^-1 H_F (CP)``, which swaps both the diagonal and
the off-diagonal entries. The commutator then has the form
``[[A, B], [-B, -A]]``. The forward Hamiltonian is taken to be the mass
matrix ``M`` of the Lee-Wolfenstein ``Gamma + iM`` model, which has
``M11 = M22`` and hence ``B = 0``.

Units: energies in s^-1 (hbar = 1), so commutator entries are in s^-2.
``delta_m = m2 - m1`` and ``delta_gamma = gamma1 - gamma2``.
"""

from __future__ import annotations

import cmath
import math
import warnings
from dataclasses import dataclass

import numpy as np

from .exceptions import DimensionMismatchError, InvalidInputError
from .linops import as_matrix, commutator

DELTA_M = 0.56e10
DELTA_GAMMA = 1.1e10
EPS_ABS = 2.3e-3
EPS_ARG = math.pi / 4
PAPER_ORDER_OF_MAGNITUDE = 1e17

SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)


@dataclass(frozen=True)
class KaonParams:
    delta_m: float = DELTA_M
    delta_gamma: float = DELTA_GAMMA
    eps_abs: float = EPS_ABS
    eps_arg: float = EPS_ARG
    theta: float = 0.0
    m_sum: float = 0.0
    gamma_sum: float = 0.0

    def __post_init__(self):
        for name in ("delta_m", "delta_gamma", "eps_abs", "eps_arg", "theta", "m_sum", "gamma_sum"):
            if not math.isfinite(getattr(self, name)):
                raise InvalidInputError(f"{name} must be finite")
        if self.eps_abs < 0:
            raise InvalidInputError("eps_abs must be nonnegative")
        if self.eps_abs > 0.1:
            warnings.warn("eps_abs > 0.1: first-order expansions in epsilon lose validity", stacklevel=3)

    @property
    def epsilon(self) -> complex:
        return cmath.rect(self.eps_abs, self.eps_arg)


@dataclass(frozen=True)
class KaonCommutatorResult:
    """``[H_F, H_B] = [[A, B], [-B, -A]]`` and its spectrum.

    ``eigenvalues`` are those of the commutator, ``+-sqrt(A^2 - B^2)``;
    ``lambda1`` is the magnitude of the (real) eigenvalues of ``i[H_F, H_B]``.
    """

    a_value: complex
    b_value: complex
    eigenvalues: tuple
    lambda1: float

    @property
    def matrix(self) -> np.ndarray:
        a, b = self.a_value, self.b_value
        return np.array([[a, b], [-b, -a]], dtype=complex)


def cp_operator(theta: float = 0.0) -> np.ndarray:
    """``exp(i theta) [[0, 1], [1, 0]]``."""
    return cmath.exp(1j * theta) * SIGMA_X


def epsilon_phase(eps_abs: float, eps_arg: float) -> complex:
    """``exp(i phi) = (1 - eps) / (1 + eps)``, exact."""
    if eps_abs >= 1.0:
        raise InvalidInputError("|eps| must be < 1")
    eps = cmath.rect(eps_abs, eps_arg)
    return (1 - eps) / (1 + eps)


def epsilon_phase_first_order(eps_abs: float, eps_arg: float) -> complex:
    """``1 - 2 eps``; at ``arg eps = 45 deg`` this is ``1 - sqrt(2)|eps|(1 + i)``."""
    return 1 - 2 * cmath.rect(eps_abs, eps_arg)


def lee_wolfenstein_m(params: KaonParams, order: str = "first") -> np.ndarray:
    """The Hermitian mass matrix ``M`` of the ``Gamma + iM`` model.

    ``order="first"`` keeps terms to first order in ``eps``:
    ``M12 = (m1 - m2)/2 - 2i Re(K eps)`` with ``K = delta_gamma/4 + i(m1 - m2)/2``
    and ``M21 = conj(M12)``; at ``arg eps = 45 deg`` this is
    ``-i sqrt(2)|eps| delta_gamma/4 + (m1 - m2)/2 (1 + i sqrt(2)|eps|)``.
    ``order="exact"`` extracts ``M = [(Gamma + iM) - (Gamma + iM)^H] / 2i``
    using the exact ``exp(i phi)``.
    """
    dm12 = -params.delta_m  # m1 - m2
    diag = 0.5 * params.m_sum
    if order == "first":
        k = 0.25 * params.delta_gamma + 0.5j * dm12
        m12 = 0.5 * dm12 - 2j * (k * params.epsilon).real
        return np.array([[diag, m12], [m12.conjugate(), diag]], dtype=complex)
    if order == "exact":
        g = gamma_plus_i_m(params)
        return (g - g.conj().T) / 2j
    raise InvalidInputError(f"order must be 'first' or 'exact', got {order!r}")


def gamma_plus_i_m(params: KaonParams) -> np.ndarray:
    """The non-Hermitian generator ``Gamma + iM`` with the exact ``exp(+-i phi)``."""
    e_iphi = epsilon_phase(params.eps_abs, params.eps_arg)
    d = 0.25 * params.gamma_sum + 0.5j * params.m_sum
    ie = 0.25 * params.delta_gamma + 0.5j * (-params.delta_m)
    return np.array([[d, ie / e_iphi], [ie * e_iphi, d]], dtype=complex)


def lee_wolfenstein_gamma(params: KaonParams) -> np.ndarray:
    """The Hermitian decay matrix ``Gamma``; not used in the eigenvalue estimate."""
    g = gamma_plus_i_m(params)
    return 0.5 * (g + g.conj().T)


def hb_from_hf(hf, theta: float = 0.0) -> np.ndarray:
    """``(CP)^-1 H_F (CP) = [[M22, M21], [M12, M11]]``; independent of ``theta``."""
    hf = as_matrix(hf, name="hf")
    if hf.shape != (2, 2):
        raise DimensionMismatchError(f"kaon Hamiltonian must be 2x2, got {hf.shape}")
    cp = cp_operator(theta)
    return np.linalg.inv(cp) @ hf @ cp


def commutator_2x2(hf) -> KaonCommutatorResult:
    """Closed-form ``[H_F, H_B]`` for ``H_B`` the CP conjugate of ``hf``."""
    hf = as_matrix(hf, name="hf")
    if hf.shape != (2, 2):
        raise DimensionMismatchError(f"kaon Hamiltonian must be 2x2, got {hf.shape}")
    m11, m12 = hf[0, 0], hf[0, 1]
    m21, m22 = hf[1, 0], hf[1, 1]
    a = complex(m12 * m12 - m21 * m21)
    b = complex((m11 - m22) * (m21 + m12))
    root = cmath.sqrt(a * a - b * b)
    return KaonCommutatorResult(a_value=a, b_value=b, eigenvalues=(root, -root), lambda1=abs(root))


def commutator_generic(hf, theta: float = 0.0) -> np.ndarray:
    """``[H_F, H_B]`` through the general matrix commutator."""
    return commutator(hf, hb_from_hf(hf, theta))


def eigenvalue_closed_form(params: KaonParams) -> complex:
    """``A = i sqrt(2) |eps| (delta_gamma delta_m / 2 + delta_m^2)`` in s^-2.

    Valid to first order in ``eps`` at ``arg eps = 45 deg``.
    """
    return 1j * math.sqrt(2.0) * params.eps_abs * (
        0.5 * params.delta_gamma * params.delta_m + params.delta_m**2
    )


def kaon_report(params: KaonParams) -> dict:
    """The CLI JSON report: closed-form ``A`` and the commutator spectrum."""
    a = eigenvalue_closed_form(params)
    result = commutator_2x2(lee_wolfenstein_m(params))
    return {
        "A_im": a.imag,
        "lambda1": abs(a),
        "eigenvalues": [[z.real, z.imag] for z in result.eigenvalues],
        "inputs": {
            "delta_m": params.delta_m,
            "delta_gamma": params.delta_gamma,
            "eps_abs": params.eps_abs,
            "eps_arg": params.eps_arg,
            "theta": params.theta,
        },
        "paper_order_of_magnitude": PAPER_ORDER_OF_MAGNITUDE,
    }
