"""Acceptance gate: one test per shipping criterion, each printing a verdict
line.  Run with `pytest -v -s tests/test_acceptance.py` to see the lines."""
import json
import math
import time

import numpy as np
import pytest

from spherearc import (LpNorm, PolygonNorm, arc_length, check_euclidean_sphere,
                       check_lemma_angles, check_lemma_tangent_lines,
                       check_estimate_segment, check_main_theorem,
                       check_norm_decreasing, check_theorem_k_bound,
                       distance_ratio, inner_john_ellipse, intrinsic_distance,
                       normalize_norm, random_ellipse_norm, random_norm,
                       random_polygon_norm, verify_john)
from spherearc.cli import main as cli_main

TWO_PI = 2.0 * math.pi
L2 = LpNorm(2.0)
L1 = LpNorm(1.0)
LINF = LpNorm(math.inf)
SQUARE = PolygonNorm(vertices=np.array(
    [[1.0, 1.0], [-1.0, 1.0], [-1.0, -1.0], [1.0, -1.0]]))


def _verdict(num, ok, detail):
    print(f"criterion {num:2d}: {'PASS' if ok else 'FAIL'} ({detail})")
    assert ok, f"criterion {num}: {detail}"


def test_criterion_01_euclidean_oracle():
    t0 = time.time()
    report = check_euclidean_sphere(trials=10_000, seed=0)
    elapsed = time.time() - t0
    ok = report.passed and report.worst_margin >= -1e-6 and elapsed < 10.0
    _verdict(1, ok, f"10^4 pairs, worst |d - oracle| margin {report.worst_margin:.2e}, "
                    f"{elapsed:.1f} s")


def test_criterion_02_antipodal_euclidean_ratio():
    ratio = distance_ratio(L2, (1.0, 0.0), (-1.0, 0.0))
    ok = abs(ratio - math.pi / 2) <= 1e-6
    _verdict(2, ok, f"antipodal ratio {ratio!r} vs pi/2")


def test_criterion_03_linf_worst_case_family():
    d = intrinsic_distance(LINF, (1.0, 0.01), (-1.0, 0.01)).value
    ratio = distance_ratio(LINF, (1.0, 0.01), (-1.0, 0.01))
    ok = abs(d - 3.98) <= 1e-6 and abs(ratio - 1.99) <= 1e-6
    ratios = []
    for eps in (0.2, 0.1, 0.05, 0.01):
        r = distance_ratio(LINF, (1.0, eps), (-1.0, eps))
        ok = ok and abs(r - (2.0 - eps)) <= 1e-9
        ratios.append(r)
    ok = ok and all(b > a for a, b in zip(ratios, ratios[1:]))
    ok = ok and all(r < 2.0 for r in ratios)
    _verdict(3, ok, f"d={d}, ratio={ratio}, sweep={['%.3f' % r for r in ratios]}")


def test_criterion_04_main_theorem_over_random_norms():
    t0 = time.time()
    rng = np.random.default_rng(2024)
    worst_main = worst_two = math.inf
    n_norms = 1000
    for i in range(n_norms):
        spec = random_norm("mixed", rng)
        report = check_main_theorem(spec, trials=100, seed=i, arc_tol=1e-4)
        worst_main = min(worst_main, report.worst_margin)
        worst_two = min(worst_two, report.witness["constant2_margin"])
    elapsed = time.time() - t0
    ok = worst_main >= -1e-6 and worst_two >= -1e-6 and elapsed < 300.0
    _verdict(4, ok, f"{n_norms} norms x 100 pairs, sqrt(2)pi margin "
                    f"{worst_main:.2e}, constant-2 margin {worst_two:.2e}, "
                    f"{elapsed:.0f} s")


def test_criterion_05_k_cubed_bound():
    rng = np.random.default_rng(11)
    specs = [LINF, normalize_norm(L1)[0]]
    specs += [normalize_norm(random_polygon_norm(rng))[0] for _ in range(5)]
    specs += [normalize_norm(random_ellipse_norm(rng))[0] for _ in range(5)]
    worst = math.inf
    for i, spec in enumerate(specs):
        report = check_theorem_k_bound(spec, trials=100, seed=i)
        worst = min(worst, report.worst_margin)
    ok = worst >= -1e-6
    _verdict(5, ok, f"{len(specs)} normalized norms, worst K^3 pi/2 margin {worst:.2e}")


def test_criterion_06_lemma_suites():
    rng = np.random.default_rng(77)
    specs = [LINF, normalize_norm(L1)[0], L2]
    specs += [normalize_norm(random_polygon_norm(rng))[0] for _ in range(50)]
    checks = (check_lemma_tangent_lines, check_lemma_angles,
              check_estimate_segment, check_norm_decreasing)
    worst = math.inf
    for spec in specs:
        for check in checks:
            report = check(spec, 10_000, 0)
            worst = min(worst, report.worst_margin)
            assert report.passed, (check.__name__, report.witness)
    ok = worst >= -1e-9
    _verdict(6, ok, f"4 checks x {len(specs)} norms x 10^4 trials, "
                    f"worst margin {worst:.2e}")


def test_criterion_07_john_ellipse():
    ok = True
    e = inner_john_ellipse(LINF)
    ok = ok and np.max(np.abs(e.m - np.eye(2))) <= 1e-6
    cert = verify_john(LINF, e, tol=1e-6)
    ok = ok and cert.inner_ok and cert.outer_ok
    corner = np.asarray(cert.witnesses["outer"])
    ok = ok and np.max(np.abs(np.abs(corner) - 1.0)) < 1e-3

    rect = PolygonNorm(vertices=np.array(
        [[2.0, 1.0], [-2.0, 1.0], [-2.0, -1.0], [2.0, -1.0]]))
    e_rect = inner_john_ellipse(rect)
    rect_err = np.max(np.abs(e_rect.m - np.diag([0.25, 1.0])))
    ok = ok and rect_err <= 1e-6

    rng = np.random.default_rng(123)
    worst_affine = 0.0
    done = 0
    while done < 100:
        t_map = rng.uniform(-2.0, 2.0, (2, 2))
        if abs(np.linalg.det(t_map)) < 0.2:
            continue
        verts = SQUARE.vertices @ t_map.T
        if np.linalg.det(t_map) < 0:
            verts = verts[::-1]
        e_img = inner_john_ellipse(PolygonNorm(vertices=verts))
        expected = np.linalg.inv(t_map @ t_map.T)
        err = np.max(np.abs(e_img.m - expected)) / np.max(np.abs(expected))
        worst_affine = max(worst_affine, err)
        done += 1
    ok = ok and worst_affine <= 1e-5
    _verdict(7, ok, f"square -> identity, rectangle err {rect_err:.1e}, "
                    f"100 affine images worst rel err {worst_affine:.1e}")


def test_criterion_08_arc_convergence():
    ok = True
    for spec in (L2, LpNorm(3.0), LpNorm(1.5)):
        for a, span in ((0.0, 1.0), (0.3, 2.5), (1.0, math.pi)):
            lowers = [arc_length(spec, a, a + span, tol=t, method="refine").lower
                      for t in (1e-3, 5e-4, 2.5e-4, 1.25e-4, 6.25e-5)]
            ok = ok and all(b >= a2 - 1e-15 for a2, b in zip(lowers, lowers[1:]))
    refined = arc_length(LINF, 0.0, math.pi / 2, tol=1e-10, method="refine").value
    exact = arc_length(LINF, 0.0, math.pi / 2, method="exact").value
    gap = abs(refined - exact)
    ok = ok and abs(exact - 2.0) <= 1e-12 and gap <= 1e-9
    _verdict(8, ok, f"monotone brackets, linf quarter arc refine-exact gap {gap:.1e}")


def test_criterion_09_circumference():
    rng = np.random.default_rng(5)
    ok = True
    for _ in range(30):
        spec = random_norm("mixed", rng)
        circ = arc_length(spec, 0.0, TWO_PI, tol=1e-7).value
        ok = ok and 6.0 - 1e-6 <= circ <= 8.0 + 1e-6
    c2 = arc_length(L2, 0.0, TWO_PI, tol=1e-8).value
    c1 = arc_length(L1, 0.0, TWO_PI).value
    cinf = arc_length(LINF, 0.0, TWO_PI).value
    ok = (ok and abs(c2 - TWO_PI) <= 1e-6
          and abs(c1 - 8.0) <= 1e-6 and abs(cinf - 8.0) <= 1e-6)
    _verdict(9, ok, f"30 random norms in [6, 8]; l2 {c2:.8f}, l1 {c1}, linf {cinf}")


def test_criterion_10_determinism(tmp_path, capsys):
    argv_sets = [
        ["verify", "--norm", '{"type": "lp", "p": "inf"}',
         "--suite", "all", "--trials", "300", "--seed", "3"],
        ["search", "--family", "mixed", "--budget", "5", "--seed", "3"],
    ]
    ok = True
    for argv in argv_sets:
        outs = []
        for run in range(2):
            target = tmp_path / f"{argv[0]}-{run}.json"
            code = cli_main(argv + ["--out", str(target)])
            ok = ok and code == 0
            outs.append(target.read_bytes())
        ok = ok and outs[0] == outs[1]
    capsys.readouterr()
    _verdict(10, ok, "verify and search byte-identical across repeated runs")
