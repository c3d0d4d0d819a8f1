"""Left- and right-hand sides of the Bohr-type inequalities, with truncation error.

Every addend of a left-hand side is a sum of nonnegative terms, so the
truncated value never exceeds the true one.  ``truncation_error`` bounds
``|true lhs - reported lhs|``: it adds the discarded-tail bounds of the
Bohr and quadratic sums, the width of the modulus enclosure (the modulus
term itself is taken at the upper end of that enclosure), and a
floating-point allowance of ``64 eps`` times the magnitudes involved.  A
report is a certified violation only when ``margin < -truncation_error``.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field

import numpy as np

from ._validation import (
    DomainError,
    check_exponent,
    check_int,
    check_point,
    check_radius,
)
from .series import CoefficientSeries, eval_modulus

ROUNDING_ULPS = 64

KINDS = ("classical", "bombieri", "refined_a", "refined_b", "improved", "refined_improved")

_EPS = float(np.finfo(float).eps)

CSV_FIELDS = ("kind", "r", "p", "N", "a", "lhs", "rhs", "margin", "trunc_error")


@dataclass(frozen=True)
class FunctionalReport:
    kind: str
    lhs_value: float
    lhs_components: dict
    rhs_value: float
    truncation_error: float
    margin: float
    r: float
    a: float
    p: float | None = None
    N: int | None = None
    evaluation_point: complex | None = None
    out_of_theorem_range: bool = False
    notes: tuple = field(default_factory=tuple)

    @property
    def violated(self) -> bool:
        """True when the inequality fails even after allowing for truncation."""
        return self.margin < -self.truncation_error

    def to_dict(self) -> dict:
        d = asdict(self)
        z = self.evaluation_point
        d["evaluation_point"] = None if z is None else [z.real, z.imag]
        d["notes"] = list(self.notes)
        return d

    def csv_row(self) -> list:
        return [
            self.kind, self.r, self.p, self.N, self.a,
            self.lhs_value, self.rhs_value, self.margin, self.truncation_error,
        ]


def bohr_tail(f: CoefficientSeries, r: float, N: int = 0) -> tuple[float, float]:
    """``sum_{n>=N} |c_n| r^n`` over the stored coefficients, and the bound on what was dropped."""
    r = check_radius(r)
    N = check_int(N, "N", minimum=0)
    M = f.truncation_order
    if r == 0.0:
        value = float(abs(f.coeffs[0])) if N == 0 else 0.0
        return value, 0.0
    if N <= M:
        n = np.arange(N, M + 1)
        value = float(np.sum(np.abs(f.coeffs[N:]) * r**n))
    else:
        value = 0.0
    error = f.tail_coeff_bound * r ** max(N, M + 1) / (1.0 - r)
    return value, float(error)


def quadratic_term(f: CoefficientSeries, r: float) -> tuple[float, float]:
    """``||f_0||_r^2 = sum_{n>=1} |c_n|^2 r^(2n)`` and its tail bound."""
    r = check_radius(r)
    M = f.truncation_order
    if r == 0.0 or M == 0:
        value = 0.0
    else:
        n = np.arange(1, M + 1)
        value = float(np.sum(np.abs(f.coeffs[1:]) ** 2 * r ** (2 * n)))
    error = f.tail_coeff_bound**2 * r ** (2 * (M + 1)) / (1.0 - r * r)
    return value, float(error)


def coupling_factor(a: float, r: float) -> float:
    """``1/(1+a) + r/(1-r)``, the weight of the quadratic term."""
    return 1.0 / (1.0 + a) + r / (1.0 - r)


def _report(kind, components, rhs, error, r, a, **extra) -> FunctionalReport:
    lhs = math.fsum(components.values())
    rounding = ROUNDING_ULPS * _EPS * (lhs + abs(rhs))
    return FunctionalReport(
        kind=kind,
        lhs_value=lhs,
        lhs_components=dict(components),
        rhs_value=rhs,
        truncation_error=float(error) + rounding,
        margin=rhs - lhs,
        r=r,
        a=a,
        **extra,
    )


def classical_report(f: CoefficientSeries, r: float) -> FunctionalReport:
    """``B_0(f, r) <= 1``; holds for every Schur-class ``f`` when ``r <= 1/3``."""
    r = check_radius(r)
    a = f.initial_modulus
    tail, err = bohr_tail(f, r, 1)
    return _report("classical", {"modulus_term": a, "bohr_tail": tail}, 1.0, err, r, a)


def bombieri_report(f: CoefficientSeries, r: float) -> FunctionalReport:
    """``B_1(f, r) <= 1`` for ``f(0) = 0``; reports are flagged when ``c_0 != 0``."""
    r = check_radius(r)
    a = f.initial_modulus
    tail, err = bohr_tail(f, r, 1)
    return _report(
        "bombieri", {"bohr_tail": tail}, 1.0, err, r, a, out_of_theorem_range=a > 1e-15
    )


def refined_a_report(f: CoefficientSeries, r: float) -> FunctionalReport:
    r = check_radius(r)
    a = f.initial_modulus
    b1, e1 = bohr_tail(f, r, 1)
    q, eq = quadratic_term(f, r)
    w = coupling_factor(a, r)
    rhs = r * (1.0 - a * a) / (1.0 - r)
    return _report(
        "refined_a", {"bohr_tail": b1, "quadratic_term": w * q}, rhs, e1 + w * eq, r, a
    )


def refined_b_report(f: CoefficientSeries, r: float, p: float = 1.0) -> FunctionalReport:
    """``a^p + B_1 + (1/(1+a) + r/(1-r)) ||f_0||_r^2 <= 1``.

    Exponents above 2 are computed but flagged as out of theorem range.
    """
    r = check_radius(r)
    p = check_exponent(p)
    a = f.initial_modulus
    b1, e1 = bohr_tail(f, r, 1)
    q, eq = quadratic_term(f, r)
    w = coupling_factor(a, r)
    comps = {"modulus_term": a**p, "bohr_tail": b1, "quadratic_term": w * q}
    return _report(
        "refined_b", comps, 1.0, e1 + w * eq, r, a, p=p, out_of_theorem_range=p > 2.0
    )


def _modulus_power(f: CoefficientSeries, z: complex, p: float) -> tuple[float, float]:
    enclosure = eval_modulus(f, z)
    return enclosure.upper**p, enclosure.upper**p - enclosure.lower**p


def improved_report(
    f: CoefficientSeries, z: complex, p: float = 1.0, N: int = 1
) -> FunctionalReport:
    """``|f(z)|^p + B_N(f, |z|) <= 1`` with ``|f(z)|`` taken at its upper enclosure."""
    z = check_point(z)
    p = check_exponent(p)
    N = check_int(N, "N", minimum=1)
    r = abs(z)
    a = f.initial_modulus
    mod, mod_width = _modulus_power(f, z, p)
    tail, err = bohr_tail(f, r, N)
    return _report(
        "improved",
        {"modulus_term": mod, "bohr_tail": tail},
        1.0,
        err + mod_width,
        r,
        a,
        p=p,
        N=N,
        evaluation_point=z,
        out_of_theorem_range=p > 2.0,
    )


def refined_improved_report(f: CoefficientSeries, z: complex, p: float = 1.0) -> FunctionalReport:
    z = check_point(z)
    p = check_exponent(p)
    r = abs(z)
    a = f.initial_modulus
    mod, mod_width = _modulus_power(f, z, p)
    b1, e1 = bohr_tail(f, r, 1)
    q, eq = quadratic_term(f, r)
    w = coupling_factor(a, r)
    return _report(
        "refined_improved",
        {"modulus_term": mod, "bohr_tail": b1, "quadratic_term": w * q},
        1.0,
        e1 + w * eq + mod_width,
        r,
        a,
        p=p,
        evaluation_point=z,
    )


def evaluate(kind: str, f: CoefficientSeries, r: float | None = None, z: complex | None = None,
             p: float = 1.0, N: int = 1) -> FunctionalReport:
    """Dispatch on ``kind``; point-free kinds take ``r``, the others ``z`` (default ``-r``)."""
    if kind in ("improved", "refined_improved"):
        if z is None:
            if r is None:
                raise DomainError("either r or z is required")
            z = complex(-check_radius(r))
        if kind == "improved":
            return improved_report(f, z, p, N)
        return refined_improved_report(f, z, p)
    if r is None:
        raise DomainError("r is required")
    if kind == "classical":
        return classical_report(f, r)
    if kind == "bombieri":
        return bombieri_report(f, r)
    if kind == "refined_a":
        return refined_a_report(f, r)
    if kind == "refined_b":
        return refined_b_report(f, r, p)
    raise DomainError(f"unknown functional kind {kind!r}")
