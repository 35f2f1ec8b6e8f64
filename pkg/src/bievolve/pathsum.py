"""Exact path sums for symmetric (forward + backward) time evolution.

One symmetric step applies ``U_F(tau) + U_B(tau)`` with
``U_F(t) = exp(-i t H_F)`` and ``U_B(t) = exp(+i t H_B)``. After ``N`` steps
the state splits into ``S_{N-n,n} psi0`` for ``n = 0..N``, where ``S_{m,n}``
sums the ``C(m+n, n)`` orderings of ``m`` backward and ``n`` forward steps.
This module evaluates ``S_{m,n}`` exactly (memoized recursion and brute-force
ordering enumeration), through the interference-function shortcut that
reorders every path to ``U_B(m tau) U_F(n tau)``, and also provides the
continuous-time bievolution, the zero-eigenvalue relaxation and the
``cos^N`` attractor.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from .exceptions import CapExceededError, DimensionMismatchError, InvalidInputError
from .interference import eval_closed_form
from .linops import (
    ZERO_RTOL,
    as_matrix,
    as_state,
    commutator,
    hermitian_eigendecomposition,
    kernel_projector,
    mat_exp,
)
from .special import log_binomial

RECURSION_CAP = 64
ENUMERATION_CAP = 16
COMMUTE_RTOL = 1e-12


@dataclass(frozen=True)
class BiHamiltonian:
    """Forward and backward Hamiltonians with step size ``tau`` (hbar = 1).

    ``theta`` is an optional relative phase ``exp(i theta)`` attached to every
    backward step; it does not change any per-``n`` norm.
    """

    hf: np.ndarray
    hb: np.ndarray
    tau: float
    theta: float = 0.0
    commutator_norm: float = field(init=False, repr=False)

    def __post_init__(self):
        hf = as_matrix(self.hf, hermitian=True, name="hf")
        hb = as_matrix(self.hb, hermitian=True, name="hb")
        if hf.shape != hb.shape:
            raise DimensionMismatchError(f"hf is {hf.shape} but hb is {hb.shape}")
        tau = float(self.tau)
        if not math.isfinite(tau) or tau <= 0.0:
            raise InvalidInputError(f"tau must be positive and finite, got {self.tau}")
        if not math.isfinite(self.theta):
            raise InvalidInputError("theta must be finite")
        object.__setattr__(self, "hf", hf)
        object.__setattr__(self, "hb", hb)
        object.__setattr__(self, "tau", tau)
        object.__setattr__(self, "commutator_norm", float(np.linalg.norm(commutator(hf, hb))))

    @property
    def dim(self) -> int:
        return self.hf.shape[0]

    @property
    def commutator_scale(self) -> float:
        return float(np.linalg.norm(self.hf) * np.linalg.norm(self.hb))

    @property
    def t_invariant(self) -> bool:
        return self.commutator_norm <= COMMUTE_RTOL * self.commutator_scale

    def uf(self, t: float) -> np.ndarray:
        return mat_exp(self.hf, -1j * t)

    def ub(self, t: float) -> np.ndarray:
        return mat_exp(self.hb, 1j * t)

    def i_commutator(self) -> np.ndarray:
        """The Hermitian operator ``i[H_F, H_B]``."""
        c = 1j * commutator(self.hf, self.hb)
        return 0.5 * (c + c.conj().T)

    def zero_tol(self) -> float:
        """Eigenvalues of ``i[H_F, H_B]`` below this count as zero."""
        decomp = hermitian_eigendecomposition(self.i_commutator())
        return max(ZERO_RTOL * float(np.max(np.abs(decomp.eigenvalues))), COMMUTE_RTOL * self.commutator_scale)


def _check_state(bh: BiHamiltonian, psi) -> np.ndarray:
    return as_state(psi, dim=bh.dim, name="psi")


def _check_counts(m, n, cap):
    if int(m) != m or int(n) != n or m < 0 or n < 0:
        raise InvalidInputError(f"m and n must be nonnegative integers, got m={m}, n={n}")
    if m + n > cap:
        raise CapExceededError(f"m + n = {m + n} exceeds cap {cap}")
    return int(m), int(n)


class SmnTable:
    """Memo table for ``S_{m,n}`` built from ``S_{m,n} = sum_k S_{m-k,n-1} U_F(tau) U_B(k tau)``.

    One table belongs to one evaluation context; it is not shared across
    threads.
    """

    def __init__(self, bh: BiHamiltonian, cap: int = RECURSION_CAP):
        self.bh = bh
        self.cap = cap
        self._uf1 = bh.uf(bh.tau)
        self._back = []  # exp(i k theta) U_B(k tau)
        self._step = []  # U_F(tau) exp(i k theta) U_B(k tau)
        self._memo: dict[tuple[int, int], np.ndarray] = {}

    def backward(self, k: int) -> np.ndarray:
        while len(self._back) <= k:
            j = len(self._back)
            op = np.exp(1j * j * self.bh.theta) * self.bh.ub(j * self.bh.tau)
            self._back.append(op)
            self._step.append(self._uf1 @ op)
        return self._back[k]

    def get(self, m: int, n: int) -> np.ndarray:
        m, n = _check_counts(m, n, self.cap)
        key = (m, n)
        if key in self._memo:
            return self._memo[key]
        self.backward(m)
        # fill column by column so no Python recursion is needed
        for j in range(n + 1):
            for i in range(m + 1):
                if (i, j) in self._memo:
                    continue
                if j == 0:
                    self._memo[(i, 0)] = self._back[i]
                else:
                    acc = np.zeros_like(self._uf1)
                    for k in range(i + 1):
                        acc += self._memo[(i - k, j - 1)] @ self._step[k]
                    self._memo[(i, j)] = acc
        return self._memo[key]


def s_mn_exact(bh: BiHamiltonian, m: int, n: int, table: SmnTable | None = None) -> np.ndarray:
    """The exact path-sum operator ``S_{m,n}`` via memoized recursion."""
    if table is None:
        table = SmnTable(bh)
    return table.get(m, n)


def s_mn_enumerate(bh: BiHamiltonian, m: int, n: int) -> np.ndarray:
    """``S_{m,n}`` as an explicit sum over all ``C(m+n, n)`` step orderings.

    Brute-force reference for :func:`s_mn_exact`.
    """
    m, n = _check_counts(m, n, ENUMERATION_CAP)
    uf = bh.uf(bh.tau)
    ub = np.exp(1j * bh.theta) * bh.ub(bh.tau)
    total = np.zeros((bh.dim, bh.dim), dtype=complex)
    for forward_slots in itertools.combinations(range(m + n), n):
        op = np.eye(bh.dim, dtype=complex)
        chosen = set(forward_slots)
        for slot in range(m + n):
            op = op @ (uf if slot in chosen else ub)
        total += op
    return total


def s_mn_spectral(bh: BiHamiltonian, m: int, n: int) -> np.ndarray:
    """``U_B(m tau) U_F(n tau) sum_j I_{m,n}(tau^2 lambda_j) P_j``.

    ``lambda_j`` and ``P_j`` are the eigenvalues and eigenprojectors of
    ``i[H_F, H_B]``. Agrees with :func:`s_mn_exact` up to ``O(tau^3)``
    reordering corrections per step.
    """
    m, n = _check_counts(m, n, RECURSION_CAP)
    decomp = hermitian_eigendecomposition(bh.i_commutator())
    tau2 = bh.tau * bh.tau
    weights = [eval_closed_form(m, n, tau2 * lam) for lam in decomp.eigenvalues]
    phase = np.exp(1j * m * bh.theta)
    return phase * bh.ub(m * bh.tau) @ bh.uf(n * bh.tau) @ decomp.apply_function(weights)


def symmetric_step(bh: BiHamiltonian, psi) -> np.ndarray:
    """One step ``[U_F(tau) + exp(i theta) U_B(tau)] psi``."""
    psi = _check_state(bh, psi)
    return bh.uf(bh.tau) @ psi + np.exp(1j * bh.theta) * (bh.ub(bh.tau) @ psi)


@dataclass
class PathSumResult:
    """Outcome of ``N`` symmetric steps.

    Attributes
    ----------
    n_steps : int
    per_n : list of ndarray or None
        ``S_{N-n,n} psi0`` for ``n = 0..N``; ``None`` when not decomposed.
    norms : ndarray or None
        Euclidean norm of each ``per_n`` entry.
    total : ndarray
        ``[U_F + U_B]^N psi0`` by repeated application.
    """

    n_steps: int
    per_n: list | None
    norms: np.ndarray | None
    total: np.ndarray

    def log_norms(self) -> np.ndarray:
        with np.errstate(divide="ignore"):
            return np.log(self.norms)

    def binomial_logs(self) -> np.ndarray:
        n = np.arange(self.n_steps + 1)
        return log_binomial(self.n_steps, n) * np.ones(self.n_steps + 1)

    def normalized_norms(self, psi0_norm: float = 1.0) -> np.ndarray:
        """``norm(n) / (C(N, n) |psi0|)``."""
        return np.exp(self.log_norms() - self.binomial_logs()) / psi0_norm


def symmetric_evolve(bh: BiHamiltonian, psi0, n_steps: int, decompose: bool = True) -> PathSumResult:
    """Apply ``N`` symmetric steps and, optionally, split the result by ``n``.

    The total is computed by repeated application of the step operator and
    is available for any ``N``; the per-``n`` split needs ``N <= 64``.
    """
    psi0 = _check_state(bh, psi0)
    if int(n_steps) != n_steps or n_steps < 0:
        raise InvalidInputError(f"N must be a nonnegative integer, got {n_steps}")
    n_steps = int(n_steps)
    if decompose and n_steps > RECURSION_CAP:
        raise CapExceededError(f"per-n decomposition needs N <= {RECURSION_CAP}; pass decompose=False")

    step = bh.uf(bh.tau) + np.exp(1j * bh.theta) * bh.ub(bh.tau)
    total = psi0.copy()
    for _ in range(n_steps):
        total = step @ total

    if not decompose:
        return PathSumResult(n_steps, None, None, total)
    table = SmnTable(bh)
    per_n = [table.get(n_steps - n, n) @ psi0 for n in range(n_steps + 1)]
    norms = np.array([np.linalg.norm(v) for v in per_n])
    return PathSumResult(n_steps, per_n, norms, total)


def bievolution_state(bh: BiHamiltonian, psi0, t: float) -> tuple[np.ndarray, np.ndarray]:
    """``(U_F(t) psi0, U_B(t) psi0)``; their sum is the bievolved state."""
    psi0 = _check_state(bh, psi0)
    if t < 0:
        raise InvalidInputError("t must be nonnegative")
    return bh.uf(t) @ psi0, bh.ub(t) @ psi0


def bievolution_derivative(bh: BiHamiltonian, psi0, t: float) -> np.ndarray:
    """``d/dt [U_F(t) + U_B(t)] psi0 = -i H_F U_F(t) psi0 + i H_B U_B(t) psi0``."""
    fwd, bwd = bievolution_state(bh, psi0, t)
    return -1j * (bh.hf @ fwd) + 1j * (bh.hb @ bwd)


def kernel_split(bh: BiHamiltonian, psi0) -> tuple[np.ndarray, np.ndarray]:
    """Split ``psi0`` into parts orthogonal to and inside ``ker i[H_F, H_B]``."""
    psi0 = _check_state(bh, psi0)
    decomp = hermitian_eigendecomposition(bh.i_commutator())
    p0 = kernel_projector(decomp, bh.zero_tol())
    parallel = p0 @ psi0
    return psi0 - parallel, parallel


def check_nonzero_condition(bh: BiHamiltonian, psi0) -> float:
    """``|Pi(0) psi0| / |psi0|``: the fraction of ``psi0`` in the commutator kernel.

    Zero means the nonzero-eigenvalue condition holds.
    """
    psi0 = _check_state(bh, psi0)
    norm = np.linalg.norm(psi0)
    if norm == 0.0:
        raise InvalidInputError("psi0 must be nonzero")
    _, parallel = kernel_split(bh, psi0)
    return float(np.linalg.norm(parallel) / norm)


def general_origin_evolve(bh: BiHamiltonian, psi0, n_steps: int) -> tuple[np.ndarray, np.ndarray]:
    """Evolve an origin state with a component in the commutator kernel.

    Returns ``([U_B(t) + U_F(t)] psi_perp, sum_n C(N,n) U_B((N-n) tau) U_F(n tau) psi_par)``
    with ``t = N tau``.
    """
    if int(n_steps) != n_steps or n_steps < 0:
        raise InvalidInputError(f"N must be a nonnegative integer, got {n_steps}")
    n_steps = int(n_steps)
    if n_steps > RECURSION_CAP:
        raise CapExceededError(f"N = {n_steps} exceeds cap {RECURSION_CAP}")
    perp, parallel = kernel_split(bh, psi0)
    t = n_steps * bh.tau
    perp_out = bh.ub(t) @ perp + bh.uf(t) @ perp
    par_out = np.zeros(bh.dim, dtype=complex)
    for n in range(n_steps + 1):
        par_out += math.comb(n_steps, n) * (bh.ub((n_steps - n) * bh.tau) @ (bh.uf(n * bh.tau) @ parallel))
    return perp_out, par_out


@dataclass
class AttractorResult:
    """``cos^N(H tau) psi0``, normalized unless requested otherwise.

    ``log_norm`` is ``ln |2^N cos^N(H tau) psi0|``. ``zero_energy_weight`` is
    ``|P_0 psi0| / |psi0|`` for the ``E = 0`` eigenspace; when it vanishes the
    iteration is drawn to the eigenspaces in ``dominant_energies`` instead.
    """

    state: np.ndarray
    log_norm: float
    zero_energy_weight: float
    converges_to_zero_energy: bool
    spectral_condition_ok: bool
    dominant_energies: tuple


def attractor_evolve(h, psi0, tau: float, n_steps: int, normalize: bool = True) -> AttractorResult:
    """Symmetric evolution under a T-invariant ``H``: ``2^N cos^N(H tau) psi0``.

    Amplitudes are combined in log space so large ``N`` neither under- nor
    overflows. Eigencomponents with ``|E| tau >= pi/2`` break the clean
    convergence to ``H psi = 0`` and set ``spectral_condition_ok`` to False.
    """
    h = as_matrix(h, hermitian=True, name="h")
    psi0 = as_state(psi0, dim=h.shape[0], name="psi0")
    if int(n_steps) != n_steps or n_steps < 0:
        raise InvalidInputError(f"N must be a nonnegative integer, got {n_steps}")
    if not math.isfinite(tau) or tau <= 0:
        raise InvalidInputError("tau must be positive and finite")
    n_steps = int(n_steps)
    psi_norm = np.linalg.norm(psi0)
    if psi_norm == 0.0:
        raise InvalidInputError("psi0 must be nonzero")

    decomp = hermitian_eigendecomposition(h)
    zero_tol = ZERO_RTOL * float(np.max(np.abs(decomp.eigenvalues)))
    parts = [p @ psi0 for p in decomp.projectors]
    present = [np.linalg.norm(v) > 1e-14 * psi_norm for v in parts]
    cosines = np.cos(decomp.eigenvalues * tau)

    with np.errstate(divide="ignore"):
        log_amp = n_steps * np.log(np.abs(cosines))
    log_amp = np.where(present, log_amp, -np.inf)
    top = float(np.max(log_amp))
    signs = np.sign(cosines) ** n_steps

    if math.isfinite(top):
        relative = sum(w * v for w, v in zip(signs * np.exp(log_amp - top), parts))
        scaled = float(np.linalg.norm(relative))
    else:
        relative, scaled = np.zeros_like(psi0), 0.0
    log_norm = n_steps * math.log(2.0) + top + math.log(scaled) if scaled > 0 else -math.inf
    if normalize:
        state = relative / scaled if scaled > 0 else relative
    else:
        state = sum(w * v for w, v in zip(signs * np.exp(log_amp), parts))

    zero_weight = sum(
        np.linalg.norm(v) for lam, v in zip(decomp.eigenvalues, parts) if abs(lam) <= zero_tol
    ) / psi_norm
    spectral_ok = all(abs(lam) * tau < math.pi / 2 for lam, ok in zip(decomp.eigenvalues, present) if ok)
    dominant = tuple(
        float(lam)
        for lam, la in zip(decomp.eigenvalues, log_amp)
        if math.isfinite(top) and la == top
    )
    if n_steps == 0:
        dominant = tuple(float(lam) for lam, ok in zip(decomp.eigenvalues, present) if ok)
    return AttractorResult(
        state=state,
        log_norm=log_norm,
        zero_energy_weight=float(zero_weight),
        converges_to_zero_energy=bool(zero_weight > 0.0),
        spectral_condition_ok=bool(spectral_ok),
        dominant_energies=dominant,
    )


def half_difference_limit(bh: BiHamiltonian, t_tot: float, n_steps: int, psi0) -> np.ndarray:
    """``2^-N [U_F(tau) + U_B(tau)]^N psi0`` with ``tau = t_tot / N``.

    Tends to ``exp(-i (H_F - H_B) t_tot / 2) psi0`` with error ``O(1/N)``.
    ``bh.tau`` and ``bh.theta`` are not used.
    """
    psi0 = _check_state(bh, psi0)
    if int(n_steps) != n_steps or n_steps < 1:
        raise InvalidInputError("N must be a positive integer")
    tau = t_tot / n_steps
    step = 0.5 * (bh.uf(tau) + bh.ub(tau))
    out = psi0.copy()
    for _ in range(int(n_steps)):
        out = step @ out
    return out


def half_difference_target(bh: BiHamiltonian, t_tot: float, psi0) -> np.ndarray:
    """``exp(-i (H_F - H_B) t_tot / 2) psi0``, the small-step limit."""
    psi0 = _check_state(bh, psi0)
    return mat_exp(bh.hf - bh.hb, -0.5j * t_tot) @ psi0
