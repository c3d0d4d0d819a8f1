"""Invariant suite behind ``bohrkit selfcheck``.

Each check returns a plain dict ``{"name", "passed", "details"}`` whose
contents depend only on the arguments, so two runs with the same seed
serialise to identical bytes.
"""

from __future__ import annotations

import math

import numpy as np

from . import functionals as fn
from . import multidim as md
from . import radii
from . import sharpness as sh
from .series import moebius_series


def _result(name: str, passed: bool, **details) -> dict:
    return {"name": name, "passed": bool(passed), "details": details}


def check_radius_cross(n_p: int = 50) -> dict:
    e11 = abs(radii.radius_R_Np(1, 1).value - (math.sqrt(5.0) - 2.0))
    e12 = abs(radii.radius_R_Np(1, 2).value - 1.0 / 3.0)
    ps = [2.0 * k / n_p for k in range(1, n_p + 1)]
    worst = max(abs(radii.radius_R_p(p).value - radii.radius_R_Np(1, p).value) for p in ps)
    ok = e11 <= 1e-10 and e12 <= 1e-10 and worst <= 1e-10
    return _result("radius_cross_checks", ok, R11_error=e11, R12_error=e12, Rp_vs_R1p_max=worst)


def check_closed_forms(n_a: int = 100) -> dict:
    a_vals = [i / n_a for i in range(n_a)]
    worst_ra1 = max(abs(radii.radius_r_ap(a, 1.0).value - radii.radius_r_a1(a).value) for a in a_vals)
    worst_rp1 = max(abs(radii.radius_r_p(a, 1.0).value - 1.0 / (2.0 + a)) for a in a_vals)
    worst_rp2 = max(abs(radii.radius_r_p(a, 2.0).value - 0.5) for a in a_vals)
    worst_ra2 = max(abs(radii.radius_r_a2(a).value - radii.radius_r_ap(a, 2.0).value) for a in a_vals)
    ok = worst_ra1 <= 1e-10 and worst_rp1 <= 1e-14 and worst_rp2 <= 1e-14 and worst_ra2 <= 1e-10
    return _result(
        "closed_form_identities", ok,
        r_a1_max_error=worst_ra1, r_p1_max_error=worst_rp1,
        r_p2_max_error=worst_rp2, r_a2_vs_r_ap2_max_error=worst_ra2,
    )


def check_infima(grid_size: int = 1000) -> dict:
    targets = {
        ("r_p", 1.0): 1.0 / 3.0,
        ("r_ap", 1.0): math.sqrt(5.0) - 2.0,
        ("r_ap", 2.0): 1.0 / 3.0,
    }
    details = {}
    ok = True
    for (kind, p), target in targets.items():
        scan = radii.infimum_scan(kind, p, grid_size)
        last = radii.radius_of(kind, (grid_size - 1) / grid_size, p)
        err = abs(last - target)
        ok = ok and err <= 2e-3 and scan.inf_value >= target - 1e-9
        details[f"{kind}_p{p:g}"] = {"value_at_last_grid_point": last, "error": err,
                                     "inf_value": scan.inf_value}
    return _result("infimum_limits", ok, **details)


def check_moebius_identity(n_a: int = 100, M: int = 512) -> dict:
    worst_ratio = 0.0
    for i in range(n_a):
        a = 0.99 * i / (n_a - 1)
        f = moebius_series(a, M)
        for j in range(1, 10):
            rep = fn.refined_a_report(f, j / 10)
            worst_ratio = max(worst_ratio, abs(rep.margin) / (2.0 * rep.truncation_error))
    return _result("moebius_equality_identity", worst_ratio <= 1.0, worst_margin_over_bound=worst_ratio)


def check_psi_monotone(grid: int = 201) -> dict:
    worst_rise = 0.0
    worst_end = 0.0
    for N in (1, 2, 3):
        for p in (0.5, 1.0, 1.5, 2.0):
            r = radii.radius_R_Np(N, p).value
            vals = np.array([radii.psi(N, p, i / (grid - 1), r) for i in range(grid)])
            worst_rise = max(worst_rise, float(np.max(np.diff(vals))))
            worst_end = max(worst_end, abs(float(vals[-1])))
    ok = worst_rise <= 1e-10 and worst_end <= 1e-10
    return _result("psi_monotonicity", ok, max_increase=worst_rise, psi_at_one=worst_end)


SHARPNESS_CASES = (
    ("classical", {}),
    ("bombieri", {}),
    ("refined_b", {"p": 1.0}),
    ("improved", {"N": 1, "p": 1.0}),
    ("improved", {"N": 1, "p": 2.0}),
    ("refined_improved", {"p": 1.0}),
)


def check_sharpness_bracketing(delta: float = 0.01) -> dict:
    rows = []
    ok = True
    for kind, kw in SHARPNESS_CASES:
        radius = sh.kind_radius(kind, **kw)
        above = sh.find_witness(kind, radius + delta, **kw)
        try:
            sh.find_witness(kind, radius - delta, **kw)
            below_errors = False
        except sh.PreconditionError:
            below_errors = True
        case_ok = above.certified and below_errors
        ok = ok and case_ok
        rows.append({"kind": kind, "params": kw, "radius": radius, "excess": above.excess,
                     "truncation_error": above.truncation_error, "below_errors": below_errors})
    return _result("sharpness_bracketing", ok, cases=rows)


CAMPAIGN_CASES = (
    ("classical", {}),
    ("bombieri", {}),
    ("refined_a", {}),
    ("refined_b", {"p": 1.0}),
    ("refined_b", {"p": 2.0}),
    ("improved", {"N": 1, "p": 1.0}),
    ("improved", {"N": 1, "p": 2.0}),
    ("improved", {"N": 2, "p": 1.0}),
    ("refined_improved", {"p": 1.0}),
    ("refined_improved", {"p": 2.0}),
)


def check_campaigns(trials: int = 10_000, seed: int = 0, multidim_trials: int = 1000) -> dict:
    rows = []
    ok = True
    for kind, kw in CAMPAIGN_CASES:
        rep = sh.falsify_campaign(kind, trials=trials, seed=seed, **kw)
        ok = ok and rep.violations == 0
        rows.append({"kind": kind, "params": kw, "r": rep.r, "violations": rep.violations,
                     "worst_margin": rep.worst_margin})
    for n in (2, 3, 4):
        for q in (2.0, 3.0, 4.0):
            rep = sh.falsify_campaign("dr", trials=multidim_trials, seed=seed, n=n, q=q)
            ok = ok and rep.violations == 0
            rows.append({"kind": "dr", "params": {"n": n, "q": q}, "r": None,
                         "violations": rep.violations, "worst_margin": rep.worst_margin})
        rep = sh.falsify_campaign("kn0", trials=multidim_trials, seed=seed, n=n)
        ok = ok and rep.violations == 0
        rows.append({"kind": "kn0", "params": {"n": n}, "r": rep.r,
                     "violations": rep.violations, "worst_margin": rep.worst_margin})
    return _result("falsification_campaigns", ok, campaigns=rows)


def check_two_variable_extremal(D: int = 200, grid: int = 41) -> dict:
    F = md.two_variable_extremal(1.0 / math.sqrt(2.0), D)
    at = md.homogeneous_majorants(F, [0.75, 0.75])
    exceeds = at.full_sum > 1.0 and abs(at.full_sum - 1.1291549021077018) <= 1e-3
    rho = 1.0 / math.sqrt(2.0) - 1e-6
    worst = 0.0
    for i in range(grid):
        for j in range(grid):
            s = md.homogeneous_majorants(F, [rho * i / (grid - 1), rho * j / (grid - 1)])
            worst = max(worst, s.full_sum + s.tail_bound)
    inside = worst <= 1.0 + 1e-10
    return _result("two_variable_extremal", exceeds and inside,
                   full_sum_at_075=at.full_sum, tail_bound_at_075=at.tail_bound,
                   max_inside=worst)


KN_UPPER_100 = 0.42919320525786945


def check_bound_tables(n_max: int = 1024) -> dict:
    ns = range(2, n_max + 1)
    kn = [md.kn_bounds(n) for n in ns]
    kn0 = [md.kn0_bounds(n) for n in ns]
    mono = all(x.lower > y.lower for x, y in zip(kn, kn[1:])) and all(
        x.lower > y.lower for x, y in zip(kn0, kn0[1:])
    )
    flags = all(b.vacuous == (b.raw_upper >= 1.0) and b.upper <= 1.0 for b in kn + kn0)
    # 2 sqrt(ln 100) / 10 evaluated at 30 digits
    spot = abs(md.kn_bounds(100).upper - KN_UPPER_100) <= 1e-12
    return _result("bound_tables", mono and flags and spot,
                   kn_upper_n100=md.kn_bounds(100).upper,
                   vacuous_kn=sum(b.vacuous for b in kn), vacuous_kn0=sum(b.vacuous for b in kn0))


def run_selfcheck(seed: int = 0, trials: int = 1000, multidim_trials: int = 200) -> dict:
    """Run every invariant check; campaign sizes are reduced by default for speed."""
    results = [
        check_radius_cross(),
        check_closed_forms(),
        check_infima(),
        check_moebius_identity(),
        check_psi_monotone(),
        check_sharpness_bracketing(),
        check_campaigns(trials=trials, seed=seed, multidim_trials=multidim_trials),
        check_two_variable_extremal(),
        check_bound_tables(),
    ]
    return {
        "seed": seed,
        "trials": trials,
        "multidim_trials": multidim_trials,
        "passed": all(r["passed"] for r in results),
        "checks": results,
    }
