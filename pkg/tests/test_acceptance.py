"""Acceptance gate: one test per promised behavior, at the stated tolerance.

Run with `pytest tests/test_acceptance.py -v -s` to see one [PASS]/[FAIL]
line per criterion.
"""

import time

import numpy as np

from dwitness import linalg
from dwitness.inequality import (constrained_scan, g_poly, lagrange_residual,
                                 quartic_expanded, quartic_factor_check,
                                 stationary_multiplier)
from dwitness.maps import DTypeMap, choi_matrix, subtracted_map
from dwitness.optimality import (NotAWitness, c0_certificate, case2_split,
                                 certificate_sweep, detect_value, optimality_verdict,
                                 subtraction_probe, zero_locus_span)
from dwitness.perm import Permutation, all_permutations, loop_decomposition
from dwitness.positivity import (SearchConfig, Status, closed_form_positive, is_ppt,
                                 numeric_block_positivity)

CYCLIC = Permutation((2, 3, 1))
GRID31 = np.linspace(0.0, 3.0, 31)


def check(name, condition, detail=""):
    stamp = "PASS" if condition else "FAIL"
    print(f"[{stamp}] {name}" + (f"  ({detail})" if detail else ""))
    assert condition, f"{name}: {detail}"


def test_criterion_1_positivity_threshold_cross_validation():
    started = time.time()
    mismatches = []
    for pi in all_permutations(3):
        threshold = 3.0 / loop_decomposition(pi).length
        points = [float(t) for t in GRID31 if t <= threshold]
        above = 1.05 * threshold
        if above <= 3.0:
            points.append(above)
        for t in points:
            expected_positive = closed_form_positive(3, t, pi)
            verdict = numeric_block_positivity(
                choi_matrix(DTypeMap(n=3, t=t, pi=pi)),
                SearchConfig(restarts=100, max_iters=200))
            violated = verdict.status is Status.VIOLATION_FOUND
            if violated != (not expected_positive):
                mismatches.append((pi.images, t, verdict.min_value))
    check("criterion 1: numeric search agrees with the closed-form threshold "
          "on the 31-point grid plus 5%-above points (tol 1e-8)",
          not mismatches,
          f"mismatches={mismatches or 'none'}, elapsed={time.time() - started:.1f}s")


def test_criterion_2_optimality_verdict_table():
    hits = []
    for pi in all_permutations(3):
        threshold = 3.0 / loop_decomposition(pi).length
        for t in GRID31:
            if t > threshold:
                continue
            try:
                verdict = optimality_verdict(float(t), pi)
            except NotAWitness:
                continue
            if verdict.optimal:
                hits.append((float(t), pi.images))
    expected = [(1.0, (2, 3, 1)), (1.0, (3, 1, 2))]
    check("criterion 2: optimal exactly for the two 3-cycles at t = 1",
          sorted(hits) == expected, f"hits={sorted(hits)}")


def test_criterion_3_transposition_decompositions():
    started = time.time()
    failures = []
    transpositions = [p for p in all_permutations(3) if loop_decomposition(p).length == 2]
    for pi in transpositions:
        for t in (0.25, 0.5, 0.75, 1.0, 1.2, 1.5):
            split = case2_split(t, pi)
            w = choi_matrix(DTypeMap(n=3, t=t, pi=pi)).choi
            sum_residual = float(np.max(np.abs(split.positive_part + split.ppt_part - w)))
            pos_min = float(linalg.hermitian_eig(split.positive_part).eigenvalues[0])
            ok = (sum_residual <= 1e-14
                  and pos_min >= -1e-10
                  and is_ppt(split.ppt_part, 3, 3)
                  and np.linalg.norm(split.positive_part) > 1e-6)
            if not ok:
                failures.append((pi.images, t, sum_residual, pos_min))
    check("criterion 3: every transposition split is PSD + PPT with exact sum "
          "(entrywise 1e-14)", not failures,
          f"failures={failures or 'none'}, elapsed={time.time() - started:.1f}s")


def test_criterion_4_certificate_sweep():
    started = time.time()
    worst_eig = 0.0
    worst_residual = 0.0
    for k, t in enumerate(np.arange(0.1, 0.95, 0.1)):
        t = float(t)
        report = certificate_sweep(t, float(np.sqrt(1.0 - t)), samples=10000, seed=100 + k)
        worst_eig = max(worst_eig, report.max_gram_eig)
        worst_residual = max(worst_residual, report.max_residual)
    check("criterion 4: 10^4 random x plus all degenerate patterns give "
          "contractive coefficients (Gram <= 1 + 1e-9) and reconstruction "
          "residuals <= 1e-12 for every t",
          worst_eig <= 1.0 + 1e-9 and worst_residual <= 1e-12,
          f"max_gram_eig={worst_eig:.12f}, max_residual={worst_residual:.2e}, "
          f"elapsed={time.time() - started:.1f}s")


def test_criterion_5_subtracted_map_positivity():
    started = time.time()
    values = {}
    for t in (0.3, 0.6, 0.9):
        c = float(np.sqrt(1.0 - t))
        m = subtracted_map(DTypeMap(n=3, t=t, pi=CYCLIC), c0_certificate(t, c))
        verdict = numeric_block_positivity(choi_matrix(m),
                                           SearchConfig(restarts=100, max_iters=200))
        values[t] = (verdict.status.value, verdict.min_value)
    ok = all(status == "NoViolationFound" and lo >= -1e-8 for status, lo in values.values())
    check("criterion 5: the boundary-scale subtraction keeps the cyclic map "
          "positive (min >= -1e-8 over 100 restarts)", ok,
          f"values={values}, elapsed={time.time() - started:.1f}s")


def test_criterion_6_constraint_inequality():
    started = time.time()
    center_ok = all(abs(g_poly(float(t), 1.0, 1.0, 1.0)) <= 1e-12
                    for t in np.arange(0.1, 0.95, 0.1))
    scan_ok = True
    scan_detail = []
    for k, t in enumerate(np.arange(0.1, 0.95, 0.1)):
        result = constrained_scan(float(t), samples=100000, seed=200 + k)
        scan_detail.append((round(float(t), 2), result.min_g, result.min_f_gap))
        scan_ok = scan_ok and result.min_g >= -1e-9 and result.min_f_gap >= -1e-9
    lagrange_ok = True
    for t in np.arange(0.1, 0.95, 0.1):
        residuals = lagrange_residual(float(t), (1.0, 1.0, 1.0), stationary_multiplier(float(t)))
        lagrange_ok = lagrange_ok and max(abs(r) for r in residuals) <= 1e-12
    rng = np.random.default_rng(300)
    quartic_ok = True
    for _ in range(1000):
        t = float(rng.uniform(0.01, 0.99))
        x1 = float(np.exp(rng.uniform(-3, 3)))
        lhs, _ = quartic_factor_check(t, x1)
        rhs = quartic_expanded(t, x1)
        quartic_ok = quartic_ok and abs(lhs - rhs) <= 1e-10 * max(1.0, abs(rhs))
    check("criterion 6: center value 0 (1e-12), scans of 10^5 samples stay "
          ">= -1e-9, stationarity residuals <= 1e-12, quartic identity to 1e-10",
          center_ok and scan_ok and lagrange_ok and quartic_ok,
          f"scans={scan_detail}, elapsed={time.time() - started:.1f}s")


def test_criterion_7_witness_behavior():
    started = time.time()
    w = choi_matrix(DTypeMap(n=3, t=1.0, pi=CYCLIC))
    eig = linalg.hermitian_eig(w.choi)
    has_negative = eig.eigenvalues[0] < 0.0
    vec = eig.eigenvectors[:, 0]
    detected = detect_value(w, np.outer(vec, vec.conj()))
    mixed = detect_value(w, np.eye(9) / 9.0)
    dimension, _ = zero_locus_span(w, SearchConfig(restarts=100000, seed=400))
    ok = (has_negative and detected < 0.0 and abs(mixed - 2.0 / 3.0) <= 1e-10
          and dimension < 9)
    check("criterion 7: negative eigenvalue, its eigenstate is detected, "
          "Tr(W I/9) = 2/3 (1e-10), zero locus spans < 9 dimensions",
          ok,
          f"min_eig={eig.eigenvalues[0]:.6f}, detected={detected:.6f}, "
          f"mixed={mixed:.12f}, locus_dim={dimension}, "
          f"elapsed={time.time() - started:.1f}s")


def test_criterion_8_subtraction_probe_consistency():
    started = time.time()
    found_below = subtraction_probe(DTypeMap(n=3, t=0.5, pi=CYCLIC), trials=200, seed=500)
    found_at_one = subtraction_probe(DTypeMap(n=3, t=1.0, pi=CYCLIC), trials=200, seed=500)
    check("criterion 8: the probe finds a subtraction at t = 0.5 and none at "
          "t = 1 within 200 trials (consistency evidence, not proof)",
          found_below.found and not found_at_one.found,
          f"below: found={found_below.found} scale={found_below.best_scale:.3f}; "
          f"at one: found={found_at_one.found}, elapsed={time.time() - started:.1f}s")
