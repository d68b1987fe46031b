"""Acceptance criteria, one test per criterion.

Each test prints a single ``PASS``/``FAIL`` line (also collected into the
terminal summary) before asserting.
"""

import time

import numpy as np
import pytest

from conftest import ACCEPTANCE_LINES
from oracles import grid_classical_correlation
from qcorr import cli
from qcorr.correlations import OptimizerConfig, classical_correlation, correlation_report
from qcorr.measurement import VonNeumannMeasurement
from qcorr.qmat import BipartiteState, bell_state, random_mixed, random_pure, random_separable, random_unitary
from qcorr.verify import (
    check_erase_channel,
    check_example_family,
    check_two_qubit_purity_remark,
    gen_example_family,
    random_state,
    run_trial,
    trial_rng,
)

SEED = 2024


def report(num, ok, detail):
    line = f"criterion {num:>2}: {'PASS' if ok else 'FAIL'}  {detail}"
    print(line)
    ACCEPTANCE_LINES.append(line)
    assert ok, line


def _cfg(k):
    return OptimizerConfig(seed=int(np.random.SeedSequence([SEED, k, 1]).generate_state(1)[0]))


@pytest.fixture(scope="module")
def random_reports():
    t0 = time.perf_counter()
    out = []
    for k in range(1000):
        rng = trial_rng(SEED, k)
        d_a, d_b = int(rng.choice([2, 3])), int(rng.choice([2, 3]))
        out.append(correlation_report(random_state(d_a, d_b, rng), _cfg(k)))
    return out, time.perf_counter() - t0


def test_criterion_01_classical_bound(random_reports):
    reps, elapsed = random_reports
    worst = min(min(r.bound_checks["C<=S_A"], r.bound_checks["C<=S_B"]) for r in reps)
    report(1, worst >= -1e-6 and elapsed < 600, f"1000 states, min(min(S_A,S_B)-C) = {worst:.3e}, {elapsed:.0f} s")


def test_criterion_02_discord_bound(random_reports):
    reps, _ = random_reports
    worst = min(r.bound_checks["Q<=S_B"] for r in reps)
    anomalies = sum(r.anomaly for r in reps)
    worst_sep = np.inf
    for k in range(500):
        rng = trial_rng(SEED + 1, k)
        d_a, d_b = int(rng.choice([2, 3])), int(rng.choice([2, 3]))
        s = random_separable(d_a, d_b, int(rng.integers(1, 2 * d_a * d_b + 1)), rng)
        rep = correlation_report(s, _cfg(k))
        anomalies += rep.anomaly
        worst_sep = min(worst_sep, min(rep.s_a, rep.s_b) - rep.discord)
    ok = worst >= -1e-3 and worst_sep >= -1e-3 and anomalies == 0
    detail = f"min(S_B-Q) = {worst:.3e} over 1000, min(min(S_A,S_B)-Q) = {worst_sep:.3e} over 500 separable"
    report(2, ok, f"{detail}, anomalies = {anomalies}")


def test_criterion_03_channel_inequalities():
    worst = {}
    for suite in ("lindblad", "holevo", "eq3"):
        for k in range(1000):
            for r in run_trial(suite, SEED, k)[2]:
                worst[suite] = min(worst.get(suite, np.inf), r.residual)
    ok = all(v >= -1e-9 for v in worst.values())
    report(3, ok, "1000 each, worst residuals " + ", ".join(f"{k}={v:.2e}" for k, v in worst.items()))


def test_criterion_04_measurement_identities():
    dev = 0.0
    for k in range(500):
        for r in run_trial("ineq4", SEED, k)[2]:
            # equalities store -|diff|; the gain bound stores its slack
            dev = max(dev, -r.residual)
    report(4, dev <= 1e-8, f"500 pairs, max deviation = {dev:.2e}")


def test_criterion_05_erase_channel_spectrum():
    gap = 0.0
    for k in range(200):
        rng = trial_rng(SEED, k)
        d_a, d_b = int(rng.integers(2, 4)), int(rng.integers(2, 4))
        s = random_state(d_a, d_b, rng)
        recs = check_erase_channel(s, VonNeumannMeasurement(random_unitary(d_b, rng)), random_pure(d_b, rng))
        gap = max(gap, -min(r.residual for r in recs[:2]))
    report(5, gap <= 1e-9, f"200 states, max spectrum/entropy gap = {gap:.2e}")


def test_criterion_06_example_family():
    q_dev = sat_dev = 0.0
    for k in range(100):
        rng = trial_rng(SEED, k)
        s = gen_example_family(2, int(rng.choice([2, 3])), rng)
        recs = {r.name: r.residual for r in check_example_family(s, _cfg(k))}
        q_dev = max(q_dev, -recs["example:Q=S_A"])
        sat_dev = max(sat_dev, -recs["example:S_AB=S_B-S_A"])
    report(6, q_dev <= 1e-3 and sat_dev <= 1e-9, f"100 draws, max|Q-S_A| = {q_dev:.2e}, max|S_AB-(S_B-S_A)| = {sat_dev:.2e}")


def test_criterion_07_saturating_family():
    sat = prod = 0.0
    fails = 0
    for k in range(100):
        recs = run_trial("thm2", SEED, k)[2]
        fails += not all(r.passed for r in recs)
        sat = max(sat, -recs[0].residual)
        prod = max(prod, -recs[1].residual)
    report(7, fails == 0 and sat <= 1e-9 and prod <= 1e-7, f"100 draws, saturation {sat:.2e}, product {prod:.2e}")


def test_criterion_08_two_qubit_strict():
    recs = check_two_qubit_purity_remark(1000, trial_rng(SEED, 0))
    low = min(r.residual for r in recs)
    report(8, low > 0 and all(r.passed for r in recs), f"1000 states, min residual = {low:.3e}")


def test_criterion_09_grid_oracle():
    dev = 0.0
    for k in range(50):
        rng = trial_rng(SEED + 9, k)
        s = random_state(2, 2, rng)
        dev = max(dev, abs(classical_correlation(s, _cfg(k)).value - grid_classical_correlation(s.rho)))
    report(9, dev <= 1e-4, f"50 states with d_B=2, max |C - grid| = {dev:.2e}")


def test_criterion_10_spot_values():
    cfg = OptimizerConfig()
    cc = BipartiteState(np.diag([0.5, 0, 0, 0.5]).astype(complex), 2, 2)
    rng = np.random.default_rng(SEED)
    prod = BipartiteState.product(random_mixed(2, rng=rng), random_mixed(3, rng=rng))
    cases = [(bell_state(), (2, 1, 1)), (cc, (1, 1, 0)), (prod, (0, 0, 0))]
    dev = 0.0
    for s, want in cases:
        rep = correlation_report(s, cfg)
        dev = max(dev, *(abs(a - b) for a, b in zip((rep.mutual_info, rep.classical_corr, rep.discord), want)))
    report(10, dev <= 1e-4, f"Bell, classical, product: max deviation = {dev:.2e}")


def test_criterion_11_determinism(tmp_path):
    paths = [tmp_path / f"run{i}.csv" for i in range(3)]
    base = ["verify", "--suite", "all", "--trials", "10", "--seed", "7"]
    codes = [
        cli.main(base + ["--csv", str(paths[0])]),
        cli.main(base + ["--csv", str(paths[1])]),
        cli.main(base + ["--csv", str(paths[2]), "--jobs", "4"]),
    ]
    blobs = [p.read_bytes() for p in paths]
    same = blobs[0] == blobs[1] == blobs[2]
    n = len(blobs[0].splitlines())
    report(11, same and codes == [0, 0, 0], f"3 runs (jobs 1, 1, 4): identical={same}, exit codes {codes}, {n} lines")
