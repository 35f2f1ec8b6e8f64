"""Acceptance criteria, one test per criterion.

Each test prints a ``PASS``/``FAIL`` line with the measured quantity before
asserting, so ``pytest -s tests/test_acceptance.py`` gives a compact report.
"""

import math
import time

import numpy as np
import pytest

from bievolve import cli, kaon, pathsum, spectral, verify
from bievolve import interference as itf

SIGMA_X = verify.SIGMA_X
SIGMA_Y = verify.SIGMA_Y


@pytest.fixture
def report(capsys):
    def emit(number, ok, detail):
        with capsys.disabled():
            print(f"\n[criterion {number:2d}] {'PASS' if ok else 'FAIL'}: {detail}")
        return ok

    return emit


def test_01_closed_form_matches_oracle(report):
    rng = np.random.default_rng(1)
    start = time.perf_counter()
    rel, ok = verify.oracle_equivalence_errors(rng, max_mn=6, per_pair=25)
    elapsed = time.perf_counter() - start
    passed = all(ok) and max(rel) <= 1e-11 and elapsed <= 60.0
    report(1, passed, f"max relative error {max(rel):.2e} over {len(rel)} samples in {elapsed:.1f} s")
    assert passed


def test_02_symmetry(report):
    errs = verify.symmetry_errors(np.random.default_rng(2), max_mn=12, random_x=8)
    worst = max(errs)
    report(2, worst <= 1e-9, f"max relative |I_mn - I_nm| {worst:.2e} over {len(errs)} samples")
    assert worst <= 1e-9


def test_03_peak_value(report):
    pairs = [(400, 100), (1800, 200), (7600, 400)]
    pairs += [(total - n, n) for total in (10, 100, 500, 1000, 2000) for n in (1, total // 3, total // 2)]
    errs = [abs(itf.closed_form_log(m, n, 0.0)[0] - math.log(math.comb(m + n, n))) for m, n in pairs]
    report(3, max(errs) <= 1e-10, f"max |log|I(0)| - ln C| {max(errs):.2e} over {len(pairs)} pairs")
    assert max(errs) <= 1e-10


def test_04_peak_profile_reproduction(report, capsys):
    m, n = 400, 100
    w = itf.peak_width(m, n)
    prof = itf.interference_profile(m, n, np.linspace(-0.25 * w, 0.25 * w, 201), normalize=True)
    close = float(np.max(np.abs(prof.norm_abs - prof.quad_approx)))

    code = cli.main(["interference", "--m", str(m), "--n", str(n), "--x-min", "0", "--x-max", repr(w),
                     "--steps", "401", "--normalize"])
    lines = capsys.readouterr().out.splitlines()
    norm_abs = np.array([float(line.split(",")[4]) for line in lines[1:]])
    monotone = bool(np.all(np.diff(norm_abs) <= 0))
    passed = code == 0 and close <= 0.02 and monotone
    report(4, passed, f"max |normalized |I| - quadratic| {close:.2e} within W/4; monotone to W: {monotone}")
    assert passed


def test_05_path_sum_consistency(report):
    rng = np.random.default_rng(5)
    dec = max(verify.decomposition_errors(rng, max_n=12))
    enum = max(verify.enumeration_errors(rng, max_total=8))
    passed = dec <= 1e-9 and enum <= 1e-11
    report(5, passed, f"decomposition {dec:.2e}, enumeration {enum:.2e}")
    assert passed


def test_06_zassenhaus_scaling(report):
    rng = np.random.default_rng(6)
    slope, errs = verify.zassenhaus_slope(verify.random_hermitian(rng, 2), verify.random_hermitian(rng, 2))
    passed = abs(slope - 3.0) <= 0.3
    report(6, passed, f"log-log slope {slope:.3f} (errors {', '.join(f'{e:.2e}' for e in errs)})")
    assert passed


def test_07_t_invariant_closed_form(report):
    worst = max(verify.t_invariant_errors(np.random.default_rng(7), max_n=12))
    report(7, worst <= 1e-10, f"max |S - C e^{{i(N-2n)tau H}}| / C = {worst:.2e}")
    assert worst <= 1e-10


def test_08_destructive_interference(report):
    central, ends, predicted = verify.destructive_interference(tau=0.5, big_n=40)
    passed = central <= 1e-2 and max(ends) <= 1e-12 and predicted <= 1e-2
    report(
        8,
        passed,
        f"central norm / C(40,20) = {central:.3e} (need <= 1e-2); end-path error {max(ends):.1e}; "
        f"|I_20,20(2 tau^2)| / C(40,20) = {predicted:.2e}",
    )
    assert max(ends) <= 1e-12
    assert predicted <= 1e-2
    assert central <= 1e-2


def test_09_kaon_numbers(report):
    worst = 0.0
    for eps in (1e-4, 2.3e-3, 1e-2):
        p = kaon.KaonParams(eps_abs=eps)
        closed = abs(kaon.eigenvalue_closed_form(p))
        for order in ("first", "exact"):
            route = kaon.commutator_2x2(kaon.lee_wolfenstein_m(p, order)).lambda1
            worst = max(worst, abs(route - closed) / closed / eps)
    lam = abs(kaon.eigenvalue_closed_form(kaon.KaonParams()))
    passed = 1.5e17 <= lam <= 2.5e17 and worst <= 10.0
    report(9, passed, f"|lambda1| = {lam:.4e} s^-2; max route difference {worst:.2e} |eps|")
    assert passed


def test_10_regime_thresholds(report):
    model = spectral.EnsembleModel(f=1.0)
    t23, t13 = (float(t) for t in spectral.threshold_times(model))
    sd = spectral.lambda_sd(model)
    passed = 1e-24 <= t23 <= 1e-23 and 1e-13 <= t13 <= 1e-12 and abs(sd / 0.5e57 - 1) <= 0.01
    report(10, passed, f"t23 = {t23:.3e} s, t13 = {t13:.3e} s, lambda_SD = {sd:.4e} s^-2")
    assert passed


def test_11_attractor(report):
    h = np.diag([0.0, 1.0]).astype(complex)
    psi = np.array([1, 1]) / math.sqrt(2)
    big = pathsum.attractor_evolve(h, psi, math.pi / 3, 200)
    residual = np.linalg.norm(h @ big.state) / np.linalg.norm(big.state)
    small = pathsum.attractor_evolve(h, psi, math.pi / 3, 4, normalize=False)
    amp = abs(small.state[1] / small.state[0])
    passed = residual <= 1e-10 and abs(amp - 0.0625) <= 1e-12
    report(11, passed, f"N=200 residual {residual:.2e}; N=4 amplitude {amp:.15f}")
    assert passed


def test_12_half_difference_limit(report):
    bh = pathsum.BiHamiltonian(SIGMA_X, SIGMA_Y, 0.1)
    psi = np.array([1.0, 0.0], dtype=complex)
    target = pathsum.half_difference_target(bh, 1.0, psi)
    e64 = np.linalg.norm(pathsum.half_difference_limit(bh, 1.0, 64, psi) - target)
    e128 = np.linalg.norm(pathsum.half_difference_limit(bh, 1.0, 128, psi) - target)
    ratio = e64 / e128
    report(12, abs(ratio - 2.0) <= 0.3, f"errors {e64:.3e} -> {e128:.3e}, ratio {ratio:.3f}")
    assert abs(ratio - 2.0) <= 0.3


def test_13_bievolution_derivative(report):
    rng = np.random.default_rng(13)
    bh = pathsum.BiHamiltonian(verify.random_hermitian(rng, 3), verify.random_hermitian(rng, 3), 0.1)
    psi = verify.random_state(rng, 3)
    t = 0.8
    exact = pathsum.bievolution_derivative(bh, psi, t)

    def total(s):
        return sum(pathsum.bievolution_state(bh, psi, s))

    errs = [np.linalg.norm((total(t + d) - total(t)) / d - exact) for d in (1e-3, 1e-4)]
    ratio = errs[0] / errs[1]
    # forward differences converge linearly: a tenfold smaller step gives a tenfold smaller error
    passed = 8.0 <= ratio <= 12.0
    report(13, passed, f"finite-difference errors {errs[0]:.2e}, {errs[1]:.2e}, ratio {ratio:.2f}")
    assert passed


def test_14_verify_deterministic(report, tmp_path, capsys):
    outputs = [tmp_path / "first.json", tmp_path / "second.json"]
    codes = [cli.main(["verify", "--seed", "42", "--suite", "all", "--output", str(p)]) for p in outputs]
    capsys.readouterr()
    same = outputs[0].read_bytes() == outputs[1].read_bytes()
    report(14, same and codes[0] == codes[1], f"byte-identical JSON: {same} (exit codes {codes})")
    assert same and codes[0] == codes[1]
