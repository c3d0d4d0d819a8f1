"""Sharpness certificates and randomized no-violation campaigns.

Above a radius, :func:`find_witness` exhibits a member of the extremal
family whose functional exceeds the bound.  Below it,
:func:`falsify_campaign` samples the Schur class (or the polydisk) and counts
certified violations, of which there should be none.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from typing import Callable

import numpy as np

from . import functionals as fn
from . import radii
from ._validation import (
    ArgumentError,
    DomainError,
    NoRootError,
    PreconditionError,
    check_exponent,
    check_initial_modulus,
    check_int,
    check_radius,
    check_real,
)
from .multidim import SamplerSpec, dr_check, homogeneous_majorants, majorant_envelope, sample_polydisk_bounded
from .series import (
    DEFAULT_TRUNCATION,
    max_modulus_on_circle,
    moebius_series,
    sample_schur_class,
    shifted_moebius_series,
)

WITNESS_KINDS = ("classical", "bombieri", "refined_b", "improved", "refined_improved")
ONE_VARIABLE_KINDS = ("classical", "bombieri", "refined_a", "refined_b", "improved", "refined_improved")
MULTIDIM_KINDS = ("dr", "kn0")
CAMPAIGN_KINDS = ONE_VARIABLE_KINDS + MULTIDIM_KINDS

A_MAX = 1.0 - 1e-8
GOLDEN_TOL = 1e-10
MIN_OFFSET = 1e-3
CIRCLE_POINTS = 64
KN0_SLACK = 1e-10

_INVPHI = (math.sqrt(5.0) - 1.0) / 2.0


def normalize_kind(kind: str) -> str:
    return kind.replace("-", "_")


def kind_radius(kind: str, p: float = 1.0, N: int = 1, a: float | None = None) -> float:
    """Largest radius at which the inequality of ``kind`` is guaranteed.

    Without ``a`` the radius is uniform over the Schur class; with ``a`` it
    is the radius for functions with ``|f(0)| = a`` where the theorem has one.
    """
    kind = normalize_kind(kind)
    if kind == "classical":
        return 1.0 / 3.0
    if kind == "bombieri":
        return 1.0 / math.sqrt(2.0)
    if kind == "refined_a":
        return 1.0
    p = check_exponent(p)
    if kind == "refined_b":
        if a is not None:
            return radii.radius_r_p(a, p).value
        _require_p_le_2(p, kind)
        return p / (2.0 + p)
    if kind == "improved":
        _require_p_le_2(p, kind)
        return radii.radius_R_Np(N, p).value
    if kind == "refined_improved":
        if a is not None:
            return radii.radius_r_ap(a, p).value
        _require_p_le_2(p, kind)
        return radii.radius_R_p(p).value
    raise ArgumentError(f"unknown inequality kind {kind!r}")


def _require_p_le_2(p: float, kind: str) -> None:
    if p > 2.0:
        raise PreconditionError(f"{kind}: no a-independent radius is known for p > 2")


def witness_value(kind: str, a: float, r: float, p: float = 1.0, N: int = 1) -> float:
    """Closed-form functional of the Moebius witness ``phi_a`` at ``z = -r``."""
    if kind == "classical":
        return a + (1.0 - a * a) * r / (1.0 - a * r)
    if kind == "refined_b":
        return a**p + (1.0 - a * a) * r / (1.0 - r)
    if kind == "improved":
        return ((r + a) / (1.0 + r * a)) ** p + (1.0 - a * a) * a ** (N - 1) * r**N / (1.0 - a * r)
    if kind == "refined_improved":
        return ((r + a) / (1.0 + r * a)) ** p + (1.0 - a * a) * r / (1.0 - r)
    if kind == "bombieri":
        # z (a - z)/(1 - a z): a r + (1 - a^2) r^2 / (1 - a r)
        return a * r + (1.0 - a * a) * r * r / (1.0 - a * r)
    raise ArgumentError(f"no witness family for {kind!r}")


def golden_section_max(func: Callable[[float], float], lo: float, hi: float, tol: float = GOLDEN_TOL):
    """Maximise a unimodal ``func`` on ``[lo, hi]``; returns ``(x, func(x))``."""
    c = hi - _INVPHI * (hi - lo)
    d = lo + _INVPHI * (hi - lo)
    fc, fd = func(c), func(d)
    while hi - lo > tol:
        if fc > fd:
            hi, d, fd = d, c, fc
            c = hi - _INVPHI * (hi - lo)
            fc = func(c)
        else:
            lo, c, fc = c, d, fd
            d = lo + _INVPHI * (hi - lo)
            fd = func(d)
    x = 0.5 * (lo + hi)
    return x, func(x)


def _maximize_over_a(func, lo: float, hi: float = A_MAX) -> tuple[float, float]:
    grid = np.linspace(lo, hi, 401)
    near_one = 1.0 - np.logspace(-1, -8, 36)
    grid = np.unique(np.concatenate([grid, near_one[(near_one > lo) & (near_one <= hi)]]))
    vals = np.array([func(float(x)) for x in grid])
    i = int(np.argmax(vals))
    best_a, best = float(grid[i]), float(vals[i])
    left, right = float(grid[max(i - 1, 0)]), float(grid[min(i + 1, grid.size - 1)])
    if right > left:
        x, fx = golden_section_max(func, left, right)
        if fx > best:
            best_a, best = x, fx
    return best_a, best


@dataclass(frozen=True)
class WitnessReport:
    inequality_kind: str
    r: float
    radius: float
    witness: dict
    functional_value: float
    rhs: float
    excess: float
    truncation_error: float
    found: bool
    params: dict = field(default_factory=dict)
    series_value: float | None = None
    message: str = ""

    @property
    def certified(self) -> bool:
        return self.found and self.excess > self.truncation_error

    def to_dict(self) -> dict:
        return asdict(self)


def _lower_a(kind: str, r: float, p: float) -> float:
    if kind == "classical":
        return min(max(0.0, (1.0 / r - 1.0) / 2.0), A_MAX)
    if kind == "refined_b":
        g = lambda a: radii.radius_r_p(a, p).value - r  # noqa: E731
        if g(0.0) <= 0.0:
            return 0.0
        try:
            a_star, _, _ = radii.bisect(g, 0.0, A_MAX)
        except NoRootError:
            return 0.0
        return a_star
    if kind == "improved":
        return 0.5
    return 0.0


def find_witness(
    kind: str,
    r: float,
    p: float = 1.0,
    N: int = 1,
    a: float | None = None,
    M: int = DEFAULT_TRUNCATION,
) -> WitnessReport:
    """Exhibit an extremal function whose functional exceeds the bound at radius ``r``.

    Raises :class:`PreconditionError` when ``r`` does not exceed the theorem's
    radius.  A search that cannot certify a witness returns a report with
    ``found=False`` rather than an uncertified one.
    """
    kind = normalize_kind(kind)
    if kind == "refined_a":
        raise PreconditionError("refined_a holds for every r < 1; no witness exists by the theorem")
    if kind not in WITNESS_KINDS:
        raise ArgumentError(f"unknown inequality kind {kind!r}")
    r = check_radius(r)
    p = check_exponent(p)
    N = check_int(N, "N", minimum=1)
    if a is not None:
        a = check_initial_modulus(a)
        if kind not in ("refined_b", "refined_improved"):
            raise ArgumentError(f"{kind} has no a-dependent radius; omit a")
    radius = kind_radius(kind, p, N, a)
    if r <= radius:
        raise PreconditionError(
            f"r={r} does not exceed the radius {radius:.17g}; no witness exists by the theorem"
        )
    params = {"p": p, "N": N} if kind != "classical" and kind != "bombieri" else {}
    if kind == "bombieri":
        best_a = 1.0 / math.sqrt(2.0)
        value = (r / math.sqrt(2.0)) / (1.0 - r / math.sqrt(2.0))
        f = shifted_moebius_series(best_a, M)
        witness = {"family": "shifted_moebius", "a": best_a}
    else:
        func = lambda s: witness_value(kind, s, r, p, N)  # noqa: E731
        if a is not None:
            best_a, value = a, func(a)
        else:
            best_a, value = _maximize_over_a(func, _lower_a(kind, r, p))
        f = moebius_series(best_a, M)
        witness = {"family": "moebius", "a": best_a}
    report = fn.evaluate(kind, f, r=r, p=p, N=N)
    err = report.truncation_error + abs(value - report.lhs_value)
    excess = value - 1.0
    found = excess > err
    message = "" if found else "no certified witness within a in [0.5, 1 - 1e-8]"
    return WitnessReport(
        inequality_kind=kind,
        r=r,
        radius=radius,
        witness=witness,
        functional_value=value,
        rhs=1.0,
        excess=excess,
        truncation_error=err,
        found=found,
        params=params,
        series_value=report.lhs_value,
        message=message,
    )


@dataclass(frozen=True)
class CampaignReport:
    inequality_kind: str
    r: float | None
    offset: float | None
    radius: float | None
    trials: int
    seed: int
    violations: int
    worst_margin: float
    worst_trial: int
    params: dict = field(default_factory=dict)
    families: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return asdict(self)


def campaign_degree(n: int, budget: int = 5000) -> int:
    """Largest total degree ``D <= 64`` with at most ``budget`` monomials in ``n`` variables."""
    D = 1
    while D < 64 and math.comb(D + 1 + n, n) <= budget:
        D += 1
    return D


def _trial_rng(seed: int, t: int) -> np.random.Generator:
    return np.random.default_rng([seed, t])


def falsify_campaign(
    kind: str,
    r: float | None = None,
    trials: int = 1000,
    seed: int = 0,
    p: float = 1.0,
    N: int = 1,
    q: float = 2.0,
    n: int = 2,
    offset: float | None = None,
    M: int = DEFAULT_TRUNCATION,
    degree: int | None = None,
) -> CampaignReport:
    """Evaluate ``trials`` random functions below the radius and count certified violations.

    One-variable kinds sample Schur-parameter and Blaschke-product functions
    (half each on average).  With ``r=None`` the kinds with an ``a``-dependent
    radius (``refined_b``, ``refined_improved``) test every sample at its own
    radius minus ``offset``; the others use the uniform radius minus ``offset``.
    The improved kinds evaluate ``|f|`` at the worst of 64 nodes on ``|z| = r``.

    ``"dr"`` checks both coefficient clauses for polydisk samples in ``n``
    variables; ``"kn0"`` checks that samples with ``f(0) = 0`` have majorant
    at most 1 (and at most the Cauchy-Schwarz envelope) at radius ``r``,
    default ``1/sqrt(2n)``.
    """
    kind = normalize_kind(kind)
    if kind not in CAMPAIGN_KINDS:
        raise ArgumentError(f"unknown campaign kind {kind!r}")
    trials = check_int(trials, "trials", minimum=1)
    seed = check_int(seed, "seed", minimum=0)
    if kind in MULTIDIM_KINDS:
        return _multidim_campaign(kind, r, trials, seed, q, n, degree)

    p = check_exponent(p)
    N = check_int(N, "N", minimum=1)
    per_sample = r is None and kind in ("refined_b", "refined_improved")
    if offset is None:
        offset = MIN_OFFSET
    offset = check_real(offset, "offset")
    if offset < MIN_OFFSET - 1e-15:
        raise PreconditionError(f"offset must be >= {MIN_OFFSET}")
    radius = None if per_sample else kind_radius(kind, p, N)
    if not per_sample:
        if r is None:
            r = radius - offset
        r = check_radius(r)
        if r > radius - MIN_OFFSET + 1e-15:
            raise PreconditionError(
                f"r={r} is not below the radius {radius:.17g} by at least {MIN_OFFSET}"
            )
        offset = None
    vanish = kind == "bombieri"

    violations = 0
    worst, worst_t = math.inf, -1
    families: dict = {}
    for t in range(trials):
        rng = _trial_rng(seed, t)
        f = sample_schur_class(rng, M=M, vanish_at_origin=vanish)
        families[f.provenance.kind] = families.get(f.provenance.kind, 0) + 1
        if per_sample:
            rt = kind_radius(kind, p, N, f.initial_modulus) - offset
        else:
            rt = r
        if kind in ("improved", "refined_improved"):
            if rt == 0.0:
                z = 0j
            else:
                _, z = max_modulus_on_circle(f, rt, CIRCLE_POINTS)
            report = fn.evaluate(kind, f, z=z, p=p, N=N)
        else:
            report = fn.evaluate(kind, f, r=rt, p=p, N=N)
        if report.violated:
            violations += 1
        if report.margin < worst:
            worst, worst_t = report.margin, t
    return CampaignReport(
        inequality_kind=kind,
        r=r,
        offset=offset,
        radius=radius,
        trials=trials,
        seed=seed,
        violations=violations,
        worst_margin=worst,
        worst_trial=worst_t,
        params={"p": p, "N": N, "M": M},
        families=dict(sorted(families.items())),
    )


def _multidim_campaign(kind, r, trials, seed, q, n, degree) -> CampaignReport:
    n = check_int(n, "n", minimum=1)
    D = campaign_degree(n) if degree is None else check_int(degree, "degree", minimum=1)
    params: dict = {"n": n, "degree": D}
    radius = None
    if kind == "dr":
        q = check_real(q, "q")
        if q < 2.0:
            raise ArgumentError("q must be >= 2")
        params["q"] = q
    else:
        radius = 1.0 / math.sqrt(2.0 * n)
        if r is None:
            r = radius
        r = check_real(r, "r")
        if not 0.0 <= r <= radius:
            raise PreconditionError(f"r={r} must lie in [0, 1/sqrt(2n)] = [0, {radius:.17g}]")
        params["envelope"] = majorant_envelope(n, r)

    violations = 0
    worst, worst_t = math.inf, -1
    families: dict = {}
    for t in range(trials):
        rng = _trial_rng(seed, t)
        construction = "line" if rng.random() < 0.5 else "product"
        families[construction] = families.get(construction, 0) + 1
        spec = SamplerSpec(construction=construction, degree=D, vanish_at_origin=kind == "kn0")
        F = sample_polydisk_bounded(n, rng, spec)
        if kind == "dr":
            rep = dr_check(F, q)
            margin, bad = rep.margin, not rep.ok
        else:
            full = homogeneous_majorants(F, np.full(n, r)).full_sum
            margin = min(1.0 - full, params["envelope"] - full)
            bad = margin < -KN0_SLACK
        if bad:
            violations += 1
        if margin < worst:
            worst, worst_t = margin, t
    return CampaignReport(
        inequality_kind=kind,
        r=r,
        offset=None,
        radius=radius,
        trials=trials,
        seed=seed,
        violations=violations,
        worst_margin=worst,
        worst_trial=worst_t,
        params=params,
        families=dict(sorted(families.items())),
    )
