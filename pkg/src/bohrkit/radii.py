"""Bohr-type radii: closed forms, bracketed bisection, and infima over ``a = |f(0)|``."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from ._validation import (
    ArgumentError,
    DomainError,
    NoRootError,
    check_exponent,
    check_initial_modulus,
    check_int,
    check_radius,
    check_real,
)

KINDS = ("classical_third", "r_p", "R_Np", "R_p", "r_ap", "r_a1", "r_a2", "bombieri_sqrt2")

CSV_FIELDS = ("kind", "a", "p", "N", "value", "method", "residual")

SCAN_STEP = 1e-3
BISECT_XTOL = 1e-14
BISECT_RTOL = 1e-13
BISECT_MAXITER = 200
# residual accepted after the bracket has collapsed to adjacent floats
RESIDUAL_LIMIT = 1e-12

LIMIT_EXPONENTS = (4, 5, 6, 7, 8)


@dataclass(frozen=True)
class RadiusResult:
    kind: str
    value: float
    method: str
    residual: float = 0.0
    bracket: tuple | None = None
    params: dict = field(default_factory=dict)
    out_of_theorem_range: bool = False
    sign_changes: int | None = None

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "value": self.value,
            "method": self.method,
            "residual": self.residual,
            "bracket": None if self.bracket is None else list(self.bracket),
            "params": dict(self.params),
            "out_of_theorem_range": self.out_of_theorem_range,
            "sign_changes": self.sign_changes,
        }

    def csv_row(self) -> list:
        return [
            self.kind,
            self.params.get("a"),
            self.params.get("p"),
            self.params.get("N"),
            self.value,
            self.method,
            self.residual,
        ]


def bisect(func: Callable[[float], float], lo: float, hi: float) -> tuple[float, float, tuple]:
    """Bisection on a bracket with ``func(lo)`` and ``func(hi)`` of opposite sign.

    Stops once the bracket is narrower than ``BISECT_XTOL`` and the midpoint
    residual is below ``BISECT_RTOL``, or when the bracket cannot shrink any
    further in floating point.  Returns ``(root, |func(root)|, (lo, hi))``.
    """
    flo, fhi = func(lo), func(hi)
    if flo == 0.0:
        return lo, 0.0, (lo, lo)
    if fhi == 0.0:
        return hi, 0.0, (hi, hi)
    if (flo > 0) == (fhi > 0):
        raise NoRootError(f"no sign change on [{lo}, {hi}]")
    for _ in range(BISECT_MAXITER):
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        fmid = func(mid)
        if fmid == 0.0:
            return mid, 0.0, (mid, mid)
        if (fmid > 0) == (flo > 0):
            lo, flo = mid, fmid
        else:
            hi, fhi = mid, fmid
        if hi - lo <= BISECT_XTOL and min(abs(flo), abs(fhi)) <= BISECT_RTOL:
            break
    root, res = (lo, abs(flo)) if abs(flo) <= abs(fhi) else (hi, abs(fhi))
    if res > RESIDUAL_LIMIT:
        raise NoRootError(f"bisection stalled with residual {res:.3g}")
    return root, res, (lo, hi)


def scan_sign_changes(values: np.ndarray) -> np.ndarray:
    """Indices ``i`` with a sign change (or an exact zero) between ``values[i]`` and ``values[i+1]``."""
    s = np.sign(values)
    return np.nonzero(s[:-1] * s[1:] <= 0)[0]


def _first_root(func, vfunc, lo: float = 0.0, hi: float = 1.0, step: float = SCAN_STEP):
    grid = np.linspace(lo, hi, int(round((hi - lo) / step)) + 1)
    vals = vfunc(grid)
    changes = scan_sign_changes(vals)
    if changes.size == 0:
        raise NoRootError("no sign change found on the scan grid")
    i = int(changes[0])
    if vals[i] == 0.0:
        return float(grid[i]), 0.0, (float(grid[i]), float(grid[i])), int(changes.size)
    root, res, bracket = bisect(func, float(grid[i]), float(grid[i + 1]))
    return root, res, bracket, int(changes.size)


def classical_radius() -> RadiusResult:
    return RadiusResult("classical_third", 1.0 / 3.0, "closed_form")


def bombieri_radius() -> RadiusResult:
    return RadiusResult("bombieri_sqrt2", 1.0 / math.sqrt(2.0), "closed_form")


def radius_r_p(a: float, p: float) -> RadiusResult:
    """``r_p(a) = (1 - a^p) / (2 - a^2 - a^p)``."""
    a = check_initial_modulus(a)
    p = check_exponent(p)
    ap = a**p
    value = (1.0 - ap) / (2.0 - a * a - ap)
    return RadiusResult(
        "r_p", value, "closed_form", params={"a": a, "p": p}, out_of_theorem_range=p > 2.0
    )


def equation_A(a: float, p: float, r):
    """``A_{a,p}(r) = [1 - (2 - a^2) r] (1 + a r)^p - (1 - r)(r + a)^p`` (vectorised in ``r``)."""
    return (1.0 - (2.0 - a * a) * r) * (1.0 + a * r) ** p - (1.0 - r) * (r + a) ** p


def _g_Np(N: int, p: float, r):
    return 2.0 * (1.0 + r) * r**N - p * (1.0 - r) ** 2


def radius_R_Np(N: int, p: float) -> RadiusResult:
    """Root in (0, 1) of ``2 (1 + r) r^N - p (1 - r)^2``."""
    N = check_int(N, "N", minimum=1)
    p = check_exponent(p)
    root, res, bracket, changes = _first_root(
        lambda r: _g_Np(N, p, r), lambda r: _g_Np(N, p, r)
    )
    return RadiusResult(
        "R_Np",
        root,
        "bisection",
        residual=res,
        bracket=bracket,
        params={"N": N, "p": p},
        out_of_theorem_range=p > 2.0,
        sign_changes=changes,
    )


def radius_R_p(p: float) -> RadiusResult:
    """Closed form ``p / (sqrt(4p + 1) + p + 1)`` of ``R_{1,p}``."""
    p = check_exponent(p)
    value = p / (math.sqrt(4.0 * p + 1.0) + p + 1.0)
    return RadiusResult(
        "R_p", value, "closed_form", params={"p": p}, out_of_theorem_range=p > 2.0
    )


def radius_r_ap(a: float, p: float) -> RadiusResult:
    """Smallest root of ``A_{a,p}`` in (0, 1): scan with step 1e-3, then bisect."""
    a = check_initial_modulus(a)
    p = check_exponent(p)
    root, res, bracket, changes = _first_root(
        lambda r: equation_A(a, p, r), lambda r: equation_A(a, p, r)
    )
    return RadiusResult(
        "r_ap",
        root,
        "bisection",
        residual=res,
        bracket=bracket,
        params={"a": a, "p": p},
        sign_changes=changes,
    )


def radius_r_a1(a: float) -> RadiusResult:
    """``r_{a,1} = 2 / (3 + a + sqrt(5) (1 + a))``."""
    a = check_initial_modulus(a)
    value = 2.0 / (3.0 + a + math.sqrt(5.0) * (1.0 + a))
    return RadiusResult("r_a1", value, "closed_form", params={"a": a, "p": 1.0})


def cubic_r_a2(a: float, r):
    """``(1 - a^2) r^3 - (1 + 2a) r^2 - 2r + 1``; equals ``A_{a,2}(r) / (1 - a^2)``."""
    return (1.0 - a * a) * r**3 - (1.0 + 2.0 * a) * r**2 - 2.0 * r + 1.0


def radius_r_a2(a: float) -> RadiusResult:
    a = check_initial_modulus(a)
    root, res, bracket, changes = _first_root(
        lambda r: cubic_r_a2(a, r), lambda r: cubic_r_a2(a, r)
    )
    return RadiusResult(
        "r_a2",
        root,
        "bisection",
        residual=res,
        bracket=bracket,
        params={"a": a, "p": 2.0},
        sign_changes=changes,
    )


def psi(N: int, p: float, a: float, r: float) -> float:
    """``[1 - r - (1 - a^2) r^N] / (1 - r) - ((r + a)/(1 + r a))^p``.

    Nonnegative for all ``a`` in [0, 1] exactly when the improved inequality
    holds at radius ``r``; vanishes at ``a = 1``.
    """
    N = check_int(N, "N", minimum=1)
    p = check_exponent(p)
    a = check_real(a, "a")
    if not 0.0 <= a <= 1.0:
        raise DomainError("a must lie in [0, 1]")
    r = check_radius(r)
    if a == 1.0:
        return 0.0
    return (1.0 - r - (1.0 - a * a) * r**N) / (1.0 - r) - ((r + a) / (1.0 + r * a)) ** p


def q_sharpness(N: int, p: float, a: float, r: float) -> float:
    """The sharpness quantity whose sign decides whether the Moebius witness breaks the bound.

    ``|phi_a(-r)|^p + B_N(phi_a, r) - 1 = (1 - a) Q / ((1 + a r)^p (1 - a r))``.
    """
    N = check_int(N, "N", minimum=1)
    p = check_exponent(p)
    a = check_initial_modulus(a)
    r = check_radius(r)
    if r == 0.0:
        raise DomainError("r must be > 0")
    m = ((r + a) / (1.0 + r * a)) ** p
    inner = (1.0 + a) / (1.0 - a * r) * a ** (N - 1) * r**N - (1.0 - m) / (1.0 - a)
    return (1.0 - a * r) * (1.0 + a * r) ** p * inner


def q_sharpness_limit(N: int, p: float, r: float) -> float:
    """Limit of :func:`q_sharpness` as ``a -> 1-``."""
    N = check_int(N, "N", minimum=1)
    p = check_exponent(p)
    r = check_radius(r)
    return (1.0 - r) * (1.0 + r) ** p * (2.0 * r**N / (1.0 - r) - p * (1.0 - r) / (1.0 + r))


@dataclass(frozen=True)
class InfimumScan:
    kind: str
    p: float
    grid_size: int
    inf_value: float
    argmin_a: float
    limit_sequence: tuple  # ((a, value), ...) at a = 1 - 10**-k

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "p": self.p,
            "grid_size": self.grid_size,
            "inf_value": self.inf_value,
            "argmin_a": self.argmin_a,
            "limit_sequence": [list(t) for t in self.limit_sequence],
        }


def radius_of(kind: str, a: float, p: float = 1.0) -> float:
    """Value of an ``a``-dependent radius."""
    if kind == "r_p":
        return radius_r_p(a, p).value
    if kind == "r_ap":
        return radius_r_ap(a, p).value
    if kind == "r_a1":
        return radius_r_a1(a).value
    if kind == "r_a2":
        return radius_r_a2(a).value
    raise ArgumentError(f"{kind!r} is not an a-dependent radius")


def infimum_scan(kind: str, p: float = 1.0, grid_size: int = 1000) -> InfimumScan:
    """Minimum over ``a = i / G`` (``i < G``) plus the raw sequence at ``a = 1 - 10^-k``, k = 4..8.

    The minimum reported covers both the grid and the near-one sequence; no
    extrapolation is applied to the latter.
    """
    grid_size = check_int(grid_size, "grid_size", minimum=100)
    p = check_exponent(p)
    best_a, best = 0.0, math.inf
    for i in range(grid_size):
        a = i / grid_size
        v = radius_of(kind, a, p)
        if v < best:
            best, best_a = v, a
    limits = []
    for k in LIMIT_EXPONENTS:
        a = 1.0 - 10.0**-k
        v = radius_of(kind, a, p)
        limits.append((a, v))
        if v < best:
            best, best_a = v, a
    return InfimumScan(kind, p, grid_size, best, best_a, tuple(limits))
