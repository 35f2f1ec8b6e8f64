"""Randomized property suites with brute-force oracles.

Each check returns a :class:`Check` with the number of samples, the largest
error seen and the tolerance it was held to. Everything is driven by one
``numpy.random.Generator`` seeded by the caller, so a given seed always
produces the same report.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np

from . import interference as itf
from . import kaon, linops, pathsum, spectral

SUITES = ("interference", "pathsum", "kaon", "spectral")

SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)


@dataclass
class Check:
    suite: str
    property: str
    samples: int
    max_error: float
    tolerance: float
    passed: bool


def random_hermitian(rng: np.random.Generator, d: int, scale: float = 1.0) -> np.ndarray:
    a = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    return scale * 0.5 * (a + a.conj().T)


def random_unitary(rng: np.random.Generator, d: int) -> np.ndarray:
    q, r = np.linalg.qr(rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d)))
    return q * (np.diag(r) / np.abs(np.diag(r)))


def random_state(rng: np.random.Generator, d: int) -> np.ndarray:
    v = rng.normal(size=d) + 1j * rng.normal(size=d)
    return v / np.linalg.norm(v)


def _check(suite, name, errors, tol, ok=None):
    errors = [float(e) for e in errors]
    worst = max(errors) if errors else 0.0
    passed = all(e <= tol for e in errors) if ok is None else bool(ok)
    return Check(suite, name, len(errors), worst, tol, passed)


def _rel(a, b):
    return abs(a - b) / abs(b)


# -- interference ---------------------------------------------------------------


def oracle_equivalence_errors(rng, max_mn=6, per_pair=25):
    """Relative closed-form vs nested-sum error, plus the pass flag for each sample."""
    rel, ok = [], []
    for m in range(max_mn + 1):
        for n in range(max_mn + 1):
            for x in rng.uniform(-math.pi, math.pi, per_pair):
                o = itf.eval_nested_sum_oracle(m, n, x)
                c = itf.eval_closed_form(m, n, x)
                rel.append(abs(c - o) / abs(o) if o != 0 else abs(c - o))
                ok.append(abs(c - o) <= 1e-11 * abs(o) + 1e-13)
    return rel, ok


def near_singular_points(max_q=12, offsets=(1e-6, -1e-6, 1e-9, -1e-9, 0.0)):
    xs = []
    for q in range(1, max_q + 1):
        for p in range(1, q):
            if math.gcd(p, q) == 1:
                xs.extend(2 * math.pi * p / q + d for d in offsets)
    return xs


def symmetry_errors(rng, max_mn=12, random_x=4):
    xs = near_singular_points() + list(rng.uniform(-math.pi, math.pi, random_x))
    errs = []
    for m in range(max_mn + 1):
        for n in range(m + 1, max_mn + 1):
            for x in xs:
                a = itf.eval_closed_form(m, n, x)
                b = itf.eval_closed_form(n, m, x)
                scale = max(abs(a), abs(b))
                errs.append(abs(a - b) / scale if scale > 0 else 0.0)
    return errs


def interference_suite(rng) -> list:
    out = []
    rel, ok = oracle_equivalence_errors(rng)
    out.append(_check("interference", "closed form equals nested-sum oracle", rel, 1e-11, ok=all(ok)))

    out.append(_check("interference", "I_{m,n} = I_{n,m} incl. near-singular x", symmetry_errors(rng), 1e-11))

    errs = []
    for _ in range(200):
        m, n = (int(v) for v in rng.integers(0, 13, 2))
        x = rng.uniform(-10.0, 10.0)
        a = itf.eval_closed_form(m, n, x)
        errs.append(abs(itf.eval_closed_form(m, n, x + 2 * math.pi) - a) / abs(a) if a != 0 else 0.0)
    out.append(_check("interference", "periodicity I(x + 2 pi) = I(x)", errs, 1e-11))

    errs = []
    pairs = [(400, 100), (1800, 200), (7600, 400)]
    pairs += [tuple(int(v) for v in rng.integers(1, 1000, 2)) for _ in range(10)]
    for m, n in pairs:
        errs.append(abs(itf.eval_modulus_product(m, n, 0.0) - math.log(math.comb(m + n, n))))
        errs.append(abs(itf.closed_form_log(m, n, 0.0)[0] - math.log(math.comb(m + n, n))))
    out.append(_check("interference", "peak log-modulus equals ln C(m+n, n)", errs, 1e-10))

    errs = []
    for q in range(2, 13):
        x0 = 2 * math.pi / q
        for _ in range(3):
            m, n = (int(v) for v in rng.integers(1, 13, 2))
            limit = itf.eval_closed_form(m, n, x0)
            if abs(limit) < 1e-6:
                continue
            for d in (1e-9, -1e-9):
                errs.append(_rel(itf.eval_closed_form(m, n, x0 + d), limit))
    out.append(_check("interference", "continuity at singular x = 2 pi / q", errs, 1e-5))
    return out


# -- spectral ---------------------------------------------------------------------


def spectral_suite(rng) -> list:
    out = []
    errs = [abs(spectral.log_normalization(m)) for m in (2, 10, 100, 500, 1000)]
    out.append(_check("spectral", "sum_k 2^-M rho(k) = 1", errs, 1e-10))

    errs, ok = [], []
    for big_m in (100, 200, 500, 1000):
        k, logp = spectral.degeneracy_distribution(big_m)
        gauss = np.array([spectral.gaussian_density_approx(big_m, int(j)) for j in k])
        e = float(np.max(np.abs(np.exp(logp) - gauss)))
        errs.append(e * big_m)
    out.append(_check("spectral", "Gaussian approximation error <= 1/M (reported as error*M)", errs, 1.0))

    errs = []
    for big_m in range(2, 21, 2):
        for k in range(-(big_m // 2), big_m // 2 + 1):
            direct = math.factorial(big_m) / (math.factorial(big_m // 2 - k) * math.factorial(big_m // 2 + k))
            errs.append(_rel(math.exp(spectral.degeneracy_density(big_m, k)), direct))
    out.append(_check("spectral", "log-gamma density matches factorials for M <= 20", errs, 1e-12))

    fs = np.sort(rng.uniform(1e-6, 1.0, 20))
    times = [spectral.threshold_times(spectral.EnsembleModel(f=float(f))) for f in fs]
    t23 = [t[0].log10 for t in times]
    t13 = [t[1].log10 for t in times]
    ok = all(np.diff(t23) < 0) and all(np.diff(t13) < 0)
    out.append(_check("spectral", "t23 and t13 strictly decrease in f", [0.0] * len(fs), 0.0, ok=ok))

    frac = float(rng.uniform(0.05, 0.95))
    big_ns = np.logspace(2, 40, 30)
    widths = [spectral.width_log10(spectral.PLANCK_TIME, float(N), max(1.0, frac * N)) for N in big_ns]
    out.append(_check("spectral", "W decreases in N at fixed n/N", [0.0] * len(big_ns), 0.0, ok=all(np.diff(widths) < 0)))
    return out


# -- pathsum (and the linear algebra it rests on) ----------------------------------


def _random_bh(rng, d, tau):
    return pathsum.BiHamiltonian(random_hermitian(rng, d), random_hermitian(rng, d), tau)


def linops_checks(rng) -> list:
    out = []
    errs_u, errs_g, errs_e = [], [], []
    for _ in range(40):
        d = int(rng.integers(1, 17))
        h = random_hermitian(rng, d)
        t = rng.uniform(-1, 1) * 50.0 / np.linalg.norm(h, 2)
        u = linops.mat_exp(h, -1j * t)
        errs_u.append(np.linalg.norm(u.conj().T @ u - np.eye(d)))
        t1, t2 = rng.uniform(-3, 3, 2)
        lhs = linops.mat_exp(h, -1j * t1) @ linops.mat_exp(h, -1j * t2)
        errs_g.append(np.linalg.norm(lhs - linops.mat_exp(h, -1j * (t1 + t2))))
        errs_e.append(np.max(np.abs(u - linops.mat_exp_eigh(h, -1j * t))))
    out.append(_check("pathsum", "mat_exp unitary for Hermitian H, |t| |H| <= 50", errs_u, 1e-10))
    out.append(_check("pathsum", "mat_exp group law", errs_g, 1e-10))
    out.append(_check("pathsum", "mat_exp agrees with eigendecomposition route", errs_e, 1e-10))

    errs = []
    for _ in range(100):
        d = int(rng.integers(2, 9))
        h = random_hermitian(rng, d)
        dec = linops.hermitian_eigendecomposition(h)
        errs.append(np.linalg.norm(dec.reconstruct() - h) / np.linalg.norm(h))
    out.append(_check("pathsum", "spectral reconstruction", errs, 1e-10))
    return out


def decomposition_errors(rng, max_n=12):
    errs = []
    for d in (2, 3):
        for big_n in range(max_n + 1):
            bh = _random_bh(rng, d, float(rng.uniform(0.05, 0.5)))
            psi = random_state(rng, d)
            res = pathsum.symmetric_evolve(bh, psi, big_n)
            errs.append(np.linalg.norm(sum(res.per_n) - res.total) / np.linalg.norm(res.total))
    return errs


def enumeration_errors(rng, max_total=8):
    errs = []
    for d in (2, 3):
        bh = _random_bh(rng, d, float(rng.uniform(0.05, 0.5)))
        table = pathsum.SmnTable(bh)
        for total in range(max_total + 1):
            for n in range(total + 1):
                a = table.get(total - n, n)
                b = pathsum.s_mn_enumerate(bh, total - n, n)
                errs.append(np.linalg.norm(a - b) / np.linalg.norm(b))
    return errs


def zassenhaus_slope(hf, hb, m=3, n=3, taus=(0.1, 0.05, 0.025)):
    errs = []
    for tau in taus:
        bh = pathsum.BiHamiltonian(hf, hb, tau)
        errs.append(np.linalg.norm(pathsum.s_mn_exact(bh, m, n) - pathsum.s_mn_spectral(bh, m, n)))
    return float(np.polyfit(np.log(taus), np.log(errs), 1)[0]), errs


def t_invariant_errors(rng, max_n=12):
    errs = []
    for d in (2, 3):
        h = random_hermitian(rng, d)
        bh = pathsum.BiHamiltonian(h, h, float(rng.uniform(0.05, 0.5)))
        table = pathsum.SmnTable(bh)
        for big_n in range(max_n + 1):
            for n in range(big_n + 1):
                c = math.comb(big_n, n)
                expected = c * linops.mat_exp(h, 1j * (big_n - 2 * n) * bh.tau)
                errs.append(np.linalg.norm(table.get(big_n - n, n) - expected) / c)
    return errs


def destructive_interference(tau=0.5, big_n=40):
    """Central-path suppression on the sigma_x / sigma_y fixture.

    Returns ``(normalized central norm, end-path norm errors, predicted |I|/C)``.
    """
    bh = pathsum.BiHamiltonian(SIGMA_X, SIGMA_Y, tau)
    psi = np.array([1.0, 0.0], dtype=complex)
    res = pathsum.symmetric_evolve(bh, psi, big_n)
    central = float(res.normalized_norms()[big_n // 2])
    ends = [abs(res.norms[0] - 1.0), abs(res.norms[-1] - 1.0)]
    half = big_n // 2
    predicted = math.exp(itf.closed_form_log(half, half, 2 * tau * tau)[0] - math.log(math.comb(big_n, half)))
    return central, ends, predicted


def pathsum_suite(rng) -> list:
    out = linops_checks(rng)
    out.append(_check("pathsum", "sum_n S_{N-n,n} psi0 equals [U_F+U_B]^N psi0", decomposition_errors(rng), 1e-9))
    out.append(_check("pathsum", "S_{m,n} equals explicit ordering enumeration", enumeration_errors(rng), 1e-11))

    slopes = []
    for _ in range(3):
        slope, _ = zassenhaus_slope(random_hermitian(rng, 2), random_hermitian(rng, 2))
        slopes.append(abs(slope - 3.0))
    out.append(_check("pathsum", "|log-log slope of exact - spectral S_{3,3}| - 3", slopes, 0.3))

    out.append(_check("pathsum", "T-invariant S_{N-n,n} = C(N,n) exp(i(N-2n) tau H)", t_invariant_errors(rng), 1e-10))

    errs = []
    for _ in range(10):
        d = int(rng.integers(2, 6))
        bh = _random_bh(rng, d, 0.1)
        psi = random_state(rng, d)
        for t in rng.uniform(0, 20, 3):
            fwd, bwd = pathsum.bievolution_state(bh, psi, float(t))
            errs += [abs(np.linalg.norm(fwd) - 1.0), abs(np.linalg.norm(bwd) - 1.0)]
    out.append(_check("pathsum", "each bievolution branch preserves the norm", errs, 1e-10))

    errs = []
    for _ in range(6):
        u = random_unitary(rng, 2)
        bh = pathsum.BiHamiltonian(u @ SIGMA_X @ u.conj().T, u @ SIGMA_Y @ u.conj().T, float(rng.uniform(0.1, 0.6)))
        res = pathsum.symmetric_evolve(bh, random_state(rng, 2), 12)
        errs.append(float(np.max(np.abs(res.norms - res.norms[::-1])) / np.max(res.norms)))
    out.append(_check("pathsum", "norm(n) = norm(N-n) for a symmetric commutator spectrum", errs, 1e-9))

    central, ends, predicted = destructive_interference()
    out.append(_check("pathsum", "sigma_x/sigma_y, tau=0.5, N=40: central norm / C(40,20) <= 1e-2", [central], 1e-2))
    out.append(_check("pathsum", "sigma_x/sigma_y, tau=0.5, N=40: end-path norms equal |psi0|", ends, 1e-12))
    out.append(_check("pathsum", "sigma_x/sigma_y: |I_{20,20}(2 tau^2)| / C(40,20) <= 1e-2", [predicted], 1e-2))
    return out


# -- kaon ---------------------------------------------------------------------------


def kaon_suite(rng) -> list:
    out = []
    errs, tols_ok = [], []
    for eps in (1e-4, 2.3e-3, 1e-2):
        params = kaon.KaonParams(eps_abs=eps)
        a = kaon.eigenvalue_closed_form(params)
        for order in ("first", "exact"):
            res = kaon.commutator_2x2(kaon.lee_wolfenstein_m(params, order))
            e = abs(res.lambda1 - abs(a)) / abs(a)
            errs.append(e / eps)
            tols_ok.append(e <= 10 * eps)
    out.append(_check("kaon", "closed-form A vs commutator route (error / |eps|)", errs, 10.0, ok=all(tols_ok)))

    errs = []
    hfs = [kaon.lee_wolfenstein_m(kaon.KaonParams())]
    hfs += [random_hermitian(rng, 2) for _ in range(10)]
    hfs += [rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2)) for _ in range(5)]
    for hf in hfs:
        res = kaon.commutator_2x2(hf)
        generic = kaon.commutator_generic(hf, float(rng.uniform(0, 2 * math.pi)))
        errs.append(np.max(np.abs(generic - res.matrix)) / max(np.max(np.abs(generic)), 1e-300))
    out.append(_check("kaon", "generic commutator has form [[A, B], [-B, -A]]", errs, 1e-10))

    errs = []
    for hf in hfs[:11]:
        c = 1j * kaon.commutator_generic(hf)
        lam = np.linalg.eigvals(c)
        scale = np.max(np.abs(lam))
        if scale > 0:
            errs.append(abs(lam[0] + lam[1]) / scale)
            errs.append(float(np.max(np.abs(lam.imag))) / scale)
    out.append(_check("kaon", "eigenvalues of i[H_F, H_B] are real and opposite", errs, 1e-10))

    errs = []
    for hf in hfs:
        base = kaon.hb_from_hf(hf, 0.0)
        for theta in rng.uniform(-math.pi, math.pi, 4):
            errs.append(np.max(np.abs(kaon.hb_from_hf(hf, float(theta)) - base)) / np.max(np.abs(base)))
    out.append(_check("kaon", "H_B independent of the CP phase theta", errs, 1e-12))
    return out


_RUNNERS = {
    "interference": interference_suite,
    "pathsum": pathsum_suite,
    "kaon": kaon_suite,
    "spectral": spectral_suite,
}


def run(seed: int, suite: str = "all") -> dict:
    """Run one suite (or all) and return a JSON-ready summary."""
    names = SUITES if suite == "all" else (suite,)
    if any(name not in _RUNNERS for name in names):
        raise ValueError(f"unknown suite {suite!r}")
    rng = np.random.default_rng(seed)
    checks = []
    for name in names:
        checks.extend(_RUNNERS[name](rng))
    return {
        "seed": seed,
        "suite": suite,
        "passed": all(c.passed for c in checks),
        "properties": [asdict(c) for c in checks],
    }
