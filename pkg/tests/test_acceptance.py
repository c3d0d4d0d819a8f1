"""Acceptance gate: one test per criterion, each printing a PASS/FAIL line.

Run ``pytest tests/test_acceptance.py -v`` or ``python tests/test_acceptance.py``.
The lines are repeated in the pytest terminal summary.
"""

import math
import subprocess
import sys
import time

import numpy as np

from bohrkit import functionals as fn
from bohrkit import multidim as md
from bohrkit import radii
from bohrkit import sharpness as sh
from bohrkit.series import moebius_series

LINES: list[str] = []


def report(number: int, ok: bool, detail: str) -> None:
    line = f"AC{number:<2} {'PASS' if ok else 'FAIL'}  {detail}"
    LINES.append(line)
    print(line)
    assert ok, line


def test_ac01_radius_cross_checks():
    t0 = time.perf_counter()
    e11 = abs(radii.radius_R_Np(1, 1).value - (math.sqrt(5) - 2))
    e12 = abs(radii.radius_R_Np(1, 2).value - 1 / 3)
    ps = [2 * k / 50 for k in range(1, 51)]
    e_p = max(abs(radii.radius_R_p(p).value - radii.radius_R_Np(1, p).value) for p in ps)
    dt = time.perf_counter() - t0
    ok = max(e11, e12, e_p) <= 1e-10 and dt < 1
    report(1, ok, f"radius cross-checks: R11 err {e11:.1e}, R12 err {e12:.1e}, R_p vs R_1p {e_p:.1e}, {dt:.2f}s")


def test_ac02_closed_form_identities():
    t0 = time.perf_counter()
    a_vals = np.linspace(0, 0.99, 100)
    e_a1 = max(abs(radii.radius_r_ap(a, 1).value - 2 / (3 + a + math.sqrt(5) * (1 + a))) for a in a_vals)
    e_p1 = max(abs(radii.radius_r_p(a, 1).value - 1 / (2 + a)) for a in a_vals)
    e_p2 = max(abs(radii.radius_r_p(a, 2).value - 0.5) for a in a_vals)
    dt = time.perf_counter() - t0
    ok = e_a1 <= 1e-10 and max(e_p1, e_p2) <= 1e-14 and dt < 1
    report(2, ok, f"closed forms: r_a1 err {e_a1:.1e}, r_p|p=1 err {e_p1:.1e}, r_p|p=2 err {e_p2:.1e}, {dt:.2f}s")


def test_ac03_infimum_limits():
    t0 = time.perf_counter()
    grid = [i / 1000 for i in range(1000)]
    e_rp = abs(radii.radius_r_p(0.999, 1).value - 1 / 3)
    inf_a1 = min(radii.radius_r_ap(a, 1).value for a in grid)
    inf_a2 = min(radii.radius_r_a2(a).value for a in grid)
    e_a1, e_a2 = abs(inf_a1 - (math.sqrt(5) - 2)), abs(inf_a2 - 1 / 3)
    dt = time.perf_counter() - t0
    ok = max(e_rp, e_a1, e_a2) <= 2e-3 and dt < 1
    report(3, ok, f"infima: r_p(0.999) err {e_rp:.1e}, inf r_a1 err {e_a1:.1e}, inf r_a2 err {e_a2:.1e}, {dt:.2f}s")


def test_ac04_moebius_equality():
    t0 = time.perf_counter()
    worst = 0.0
    for a in np.linspace(0, 0.99, 100):
        f = moebius_series(a, 512)
        for r in np.arange(1, 10) / 10:
            rep = fn.refined_a_report(f, r)
            worst = max(worst, abs(rep.margin) / (2 * rep.truncation_error))
    dt = time.perf_counter() - t0
    ok = worst <= 1 and dt < 10
    report(4, ok, f"Moebius equality on 100x9 grid: max |margin|/(2 err) = {worst:.3f}, {dt:.2f}s")


def test_ac05_psi_monotone():
    t0 = time.perf_counter()
    rise, end = 0.0, 0.0
    a_grid = np.linspace(0, 1, 201)
    for N in (1, 2, 3):
        for p in (0.5, 1, 1.5, 2):
            r = radii.radius_R_Np(N, p).value
            vals = np.array([radii.psi(N, p, a, r) for a in a_grid])
            rise = max(rise, float(np.max(np.diff(vals))))
            end = max(end, abs(float(vals[-1])))
    dt = time.perf_counter() - t0
    ok = rise <= 1e-10 and end <= 1e-10 and dt < 1
    report(5, ok, f"Psi nonincreasing: max rise {rise:.1e}, |Psi(1)| {end:.1e}, {dt:.2f}s")


def test_ac06_sharpness_bracketing():
    t0 = time.perf_counter()
    cases = [
        ("classical", {}), ("bombieri", {}), ("refined_b", {"p": 1}),
        ("improved", {"N": 1, "p": 1}), ("improved", {"N": 1, "p": 2}), ("refined_improved", {"p": 1}),
    ]
    failures = []
    for kind, kw in cases:
        radius = sh.kind_radius(kind, **kw)
        w = sh.find_witness(kind, radius + 0.01, **kw)
        if not (w.found and w.excess > w.truncation_error):
            failures.append(f"{kind}{kw} above")
        try:
            sh.find_witness(kind, radius - 0.01, **kw)
            failures.append(f"{kind}{kw} below")
        except sh.PreconditionError:
            pass
    dt = time.perf_counter() - t0
    ok = not failures and dt < 30
    report(6, ok, f"sharpness bracketing on {len(cases)} kinds: failures {failures or 'none'}, {dt:.2f}s")


def test_ac07_falsification_campaigns():
    t0 = time.perf_counter()
    bad = []
    for kind in sh.ONE_VARIABLE_KINDS:
        rep = sh.falsify_campaign(kind, trials=10_000, seed=2024)
        if rep.violations:
            bad.append((kind, rep.violations))
    for n in (2, 3, 4):
        for q in (2, 3, 4):
            rep = sh.falsify_campaign("dr", trials=1000, seed=2024, n=n, q=q)
            if rep.violations:
                bad.append((f"dr n={n} q={q}", rep.violations))
        rep = sh.falsify_campaign("kn0", trials=1000, seed=2024, n=n)
        if rep.violations:
            bad.append((f"kn0 n={n}", rep.violations))
    dt = time.perf_counter() - t0
    ok = not bad and dt < 300
    report(7, ok, f"campaigns: 6 kinds x 1e4 + 12 polydisk x 1e3 samples, violations {bad or 0}, {dt:.1f}s")


def test_ac08_two_variable_extremal():
    t0 = time.perf_counter()
    F = md.two_variable_extremal(1 / math.sqrt(2), 200)
    s = md.homogeneous_majorants(F, [0.75, 0.75])
    above = s.full_sum > 1 and abs(s.full_sum + s.tail_bound - 1.1291) <= 1e-3
    rho = 1 / math.sqrt(2) - 1e-6
    grid = np.linspace(0, rho, 41)
    inside = max(
        m.full_sum + m.tail_bound
        for m in (md.homogeneous_majorants(F, [x, y]) for x in grid for y in grid)
    )
    dt = time.perf_counter() - t0
    ok = above and inside <= 1 + 1e-10 and dt < 5
    report(8, ok, f"extremal: full_sum(0.75,0.75) = {s.full_sum:.6f}, max inside = {inside:.12f}, {dt:.2f}s")


def test_ac09_bound_tables():
    t0 = time.perf_counter()
    ns = range(2, 1025)
    kn = [md.kn_bounds(n) for n in ns]
    kn0 = [md.kn0_bounds(n) for n in ns]
    monotone = all(x.lower > y.lower for t in (kn, kn0) for x, y in zip(t, t[1:]))
    flagged = all(b.vacuous == (b.raw_upper >= 1) and b.upper <= 1 for b in kn + kn0)
    spot = md.kn_bounds(100).upper
    dt = time.perf_counter() - t0
    ok = monotone and flagged and abs(spot - 0.42918) <= 1e-5 and dt < 1
    report(
        9, ok,
        f"bound tables n=2..1024: monotone {monotone}, flags {flagged}, "
        f"n=100 upper {spot:.7f} vs 0.42918 (diff {abs(spot - 0.42918):.1e}), {dt:.2f}s",
    )


def test_ac10_selfcheck_determinism():
    cmd = [sys.executable, "-m", "bohrkit", "selfcheck", "--seed", "11"]
    first = subprocess.run(cmd, capture_output=True, check=False)
    second = subprocess.run(cmd, capture_output=True, check=False)
    same = first.stdout == second.stdout and len(first.stdout) > 0
    report(10, same, f"selfcheck byte-identical across runs: {same} ({len(first.stdout)} bytes, exit {first.returncode})")


if __name__ == "__main__":
    failed = 0
    for name, func in sorted(globals().items()):
        if name.startswith("test_ac"):
            try:
                func()
            except AssertionError:
                failed += 1
    sys.exit(1 if failed else 0)
