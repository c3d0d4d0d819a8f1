"""Truncated Taylor series of functions in the closed unit ball of H-infinity.

Every generator returns a :class:`CoefficientSeries` carrying the first
``M + 1`` coefficients and a bound ``T`` with ``|c_n| <= T`` for all
``n > M``.  For members of the Schur class the bound ``1 - |c_0|**2`` is
always available; the Moebius families use the sharper geometric bound.
"""

from __future__ import annotations

import cmath
import math
import os
from dataclasses import dataclass, field
from typing import Any, Mapping, Sequence

import numpy as np
from scipy.signal import lfilter

from ._validation import (
    ArgumentError,
    DomainError,
    check_initial_modulus,
    check_int,
    check_point,
    check_real,
)

DEFAULT_TRUNCATION = 512
MAX_BLASCHKE_FACTORS = 16

# sampling conventions for falsification campaigns
SCHUR_PARAM_RADIUS = 0.95
BLASCHKE_ZERO_RADIUS = 0.9
MAX_RANDOM_FACTORS = 8

PROVENANCE_KINDS = ("moebius", "shifted_moebius", "blaschke", "schur", "manual")

_UNIMODULAR_TOL = 1e-14


def default_truncation() -> int:
    """Truncation order, honouring the ``BOHR_TRUNCATION`` environment variable."""
    raw = os.environ.get("BOHR_TRUNCATION")
    if raw is None or raw.strip() == "":
        return DEFAULT_TRUNCATION
    try:
        value = int(raw)
    except ValueError:
        raise ArgumentError(f"BOHR_TRUNCATION must be an integer, got {raw!r}") from None
    return check_int(value, "BOHR_TRUNCATION", minimum=1)


# provenance parameters stored as lists of complex numbers ([re, im] in JSON)
_COMPLEX_LIST_PARAMS = ("zeros", "params")


@dataclass(frozen=True)
class Provenance:
    kind: str = "manual"
    params: Mapping[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        if self.kind not in PROVENANCE_KINDS:
            raise ArgumentError(f"unknown provenance {self.kind!r}")

    def to_dict(self) -> dict:
        return {"kind": self.kind, "params": _jsonable(dict(self.params))}

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> "Provenance":
        params = dict(data.get("params", {}))
        for key in _COMPLEX_LIST_PARAMS:
            if key in params:
                params[key] = [complex(*v) if isinstance(v, list) else complex(v) for v in params[key]]
        return cls(kind=data["kind"], params=params)

    def __str__(self) -> str:
        if not self.params:
            return self.kind
        inner = ", ".join(f"{k}={v}" for k, v in self.params.items())
        return f"{self.kind}({inner})"


def _jsonable(value):
    if isinstance(value, complex):
        return [value.real, value.imag]
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if isinstance(value, dict):
        return {k: _jsonable(v) for k, v in value.items()}
    if isinstance(value, np.generic):
        return value.item()
    return value


@dataclass(frozen=True, eq=False)
class CoefficientSeries:
    """Coefficients ``c_0 .. c_M`` plus a bound on every later coefficient.

    The coefficient array is copied on construction and made read-only.
    """

    coeffs: np.ndarray
    tail_coeff_bound: float
    provenance: Provenance = field(default_factory=Provenance)

    def __post_init__(self):
        c = np.array(self.coeffs, dtype=complex).reshape(-1)
        if c.size == 0:
            raise ArgumentError("a series needs at least one coefficient")
        if not np.all(np.isfinite(c)):
            raise DomainError("coefficients must be finite")
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)
        tail = check_real(self.tail_coeff_bound, "tail_coeff_bound")
        if tail < 0:
            raise DomainError("tail_coeff_bound must be >= 0")
        object.__setattr__(self, "tail_coeff_bound", tail)

    @property
    def truncation_order(self) -> int:
        return self.coeffs.size - 1

    @property
    def initial_modulus(self) -> float:
        """``a = |c_0|``."""
        return float(abs(self.coeffs[0]))

    @property
    def certified(self) -> bool:
        """True when the series is known to belong to the Schur class."""
        return self.provenance.kind != "manual"

    def partial_sum(self, z):
        """Evaluate ``sum_{n<=M} c_n z**n`` (Horner; accepts arrays)."""
        return np.polynomial.polynomial.polyval(z, self.coeffs)

    def schwarz_pick_excess(self) -> float:
        """``max_n |c_n| - (1 - |c_0|^2)`` over ``1 <= n <= M`` (<= 0 for Schur-class members)."""
        if self.truncation_order == 0:
            return -(1.0 - self.initial_modulus**2)
        bound = 1.0 - self.initial_modulus**2
        return float(np.max(np.abs(self.coeffs[1:])) - bound)

    def to_dict(self) -> dict:
        return {
            "coeffs": [[float(c.real), float(c.imag)] for c in self.coeffs],
            "truncation_order": self.truncation_order,
            "tail_coeff_bound": self.tail_coeff_bound,
            "provenance": self.provenance.to_dict(),
        }

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> "CoefficientSeries":
        coeffs = [complex(re, im) for re, im in data["coeffs"]]
        if "truncation_order" in data and data["truncation_order"] != len(coeffs) - 1:
            raise ArgumentError("truncation_order does not match the number of coefficients")
        return cls(
            coeffs=np.array(coeffs, dtype=complex),
            tail_coeff_bound=data["tail_coeff_bound"],
            provenance=Provenance.from_dict(data.get("provenance", {"kind": "manual"})),
        )

    def __repr__(self) -> str:
        return (
            f"CoefficientSeries(M={self.truncation_order}, c0={self.coeffs[0]:.6g}, "
            f"tail={self.tail_coeff_bound:.3g}, provenance={self.provenance})"
        )


@dataclass(frozen=True)
class ModulusInterval:
    lower: float
    upper: float

    def __post_init__(self):
        if not (math.isfinite(self.lower) and math.isfinite(self.upper)):
            raise DomainError("interval endpoints must be finite")
        if self.lower < 0 or self.lower > self.upper:
            raise DomainError(f"invalid interval [{self.lower}, {self.upper}]")

    @property
    def width(self) -> float:
        return self.upper - self.lower

    def __contains__(self, x) -> bool:
        return self.lower <= x <= self.upper


def manual_series(coeffs: Sequence[complex], tail_coeff_bound: float = 0.0) -> CoefficientSeries:
    """Wrap user-supplied coefficients; nothing is assumed about membership in the Schur class."""
    return CoefficientSeries(np.asarray(coeffs, dtype=complex), tail_coeff_bound)


def moebius_series(a: float, M: int = DEFAULT_TRUNCATION) -> CoefficientSeries:
    """Coefficients of ``(a - z) / (1 - a z)``: ``c_0 = a``, ``c_k = (a^2 - 1) a^(k-1)``."""
    a = check_initial_modulus(a)
    M = check_int(M, "M", minimum=1)
    c = np.empty(M + 1, dtype=complex)
    c[0] = a
    c[1:] = (a * a - 1.0) * a ** np.arange(M)
    return CoefficientSeries(c, (1.0 - a * a) * a ** (M - 1), Provenance("moebius", {"a": a}))


def shifted_moebius_series(a: float, M: int = DEFAULT_TRUNCATION) -> CoefficientSeries:
    """Coefficients of ``z (a - z) / (1 - a z)``, the extremal family for ``f(0) = 0``."""
    a = check_initial_modulus(a)
    M = check_int(M, "M", minimum=2)
    c = np.zeros(M + 1, dtype=complex)
    c[1] = a
    c[2:] = (a * a - 1.0) * a ** np.arange(M - 1)
    return CoefficientSeries(
        c, (1.0 - a * a) * a ** (M - 1), Provenance("shifted_moebius", {"a": a})
    )


def _factor_series(w: complex, M: int) -> np.ndarray:
    # (w - z)/(1 - conj(w) z) = w + sum_{k>=1} conj(w)^(k-1) (|w|^2 - 1) z^k
    s = np.empty(M + 1, dtype=complex)
    s[0] = w
    s[1:] = (abs(w) ** 2 - 1.0) * np.conj(w) ** np.arange(M)
    return s


def blaschke_series(
    zeros: Sequence[complex], rotation: float = 0.0, M: int = DEFAULT_TRUNCATION
) -> CoefficientSeries:
    """Taylor coefficients of ``exp(i*rotation) * prod_j (z_j - z) / (1 - conj(z_j) z)``."""
    zeros = [complex(w) for w in zeros]
    rotation = check_real(rotation, "rotation")
    M = check_int(M, "M", minimum=1)
    if len(zeros) > MAX_BLASCHKE_FACTORS:
        raise ArgumentError(f"at most {MAX_BLASCHKE_FACTORS} Blaschke factors are supported")
    for w in zeros:
        if not abs(w) < 1.0:
            raise DomainError(f"Blaschke zero {w} must lie in the open unit disk")
    c = np.zeros(M + 1, dtype=complex)
    c[0] = cmath.exp(1j * rotation)
    for w in zeros:
        c = np.convolve(c, _factor_series(w, M))[: M + 1]
    if all(w == 0 for w in zeros) and len(zeros) <= M:
        tail = 0.0  # a monomial, no tail at all
    else:
        tail = max(0.0, 1.0 - abs(c[0]) ** 2)
    prov = Provenance("blaschke", {"zeros": list(zeros), "rotation": rotation})
    return CoefficientSeries(c, tail, prov)


def _trim(poly: np.ndarray) -> np.ndarray:
    nz = np.nonzero(poly)[0]
    if nz.size == 0:
        return poly[:1]
    return poly[: nz[-1] + 1]


def schur_rational(params: Sequence[complex]) -> tuple[np.ndarray, np.ndarray]:
    """Numerator and denominator (ascending powers) of the Schur-algorithm function.

    Runs ``f_k = (g_k + z f_{k+1}) / (1 + conj(g_k) z f_{k+1})`` backwards from
    ``f_{K+1} = 0``.  A unimodular parameter ends the recursion there.
    """
    gammas = [complex(g) for g in params]
    if not gammas:
        raise ArgumentError("at least one Schur parameter is required")
    depth = len(gammas)
    for k, g in enumerate(gammas):
        if abs(g) > 1.0 + _UNIMODULAR_TOL:
            raise DomainError(f"Schur parameter {k} has modulus {abs(g)} > 1")
        if abs(g) >= 1.0 - _UNIMODULAR_TOL:
            gammas[k] = g / abs(g)
            depth = k + 1
            break
    num = np.zeros(1, dtype=complex)
    den = np.ones(1, dtype=complex)
    for g in reversed(gammas[:depth]):
        shifted = np.concatenate([[0.0], num])
        size = max(den.size, shifted.size)
        new_num = np.zeros(size, dtype=complex)
        new_den = np.zeros(size, dtype=complex)
        new_num[: den.size] += g * den
        new_num[: shifted.size] += shifted
        new_den[: den.size] += den
        new_den[: shifted.size] += np.conj(g) * shifted
        num, den = _trim(new_num), _trim(new_den)
    return num, den


def schur_series(params: Sequence[complex], M: int = DEFAULT_TRUNCATION) -> CoefficientSeries:
    """Series of the Schur-class function with the given Schur parameters."""
    M = check_int(M, "M", minimum=0)
    num, den = schur_rational(params)
    impulse = np.zeros(M + 1, dtype=complex)
    impulse[0] = 1.0
    # den[0] == 1, so the impulse response of num/den is exactly its Taylor series
    c = lfilter(num, den, impulse)
    if den.size == 1 and num.size - 1 <= M:
        tail = 0.0
    else:
        tail = max(0.0, 1.0 - abs(complex(params[0])) ** 2)
    prov = Provenance("schur", {"params": [complex(g) for g in params]})
    return CoefficientSeries(c, tail, prov)


def eval_modulus(f: CoefficientSeries, z: complex) -> ModulusInterval:
    """Rigorous enclosure of ``|f(z)|`` from the partial sum and the tail bound."""
    z = check_point(z)
    s = abs(complex(f.partial_sum(z)))
    rho = abs(z)
    err = f.tail_coeff_bound * rho ** (f.truncation_order + 1) / (1.0 - rho)
    lower = max(0.0, s - err)
    upper = s + err
    if f.certified:
        upper = min(1.0, upper)
        lower = min(lower, upper)
    return ModulusInterval(lower, upper)


def max_modulus_on_circle(f: CoefficientSeries, r: float, points: int = 64) -> tuple[float, complex]:
    """Largest upper enclosure of ``|f|`` over the nodes ``z_j = -r exp(2 pi i j / points)``.

    The partial sums at all nodes come from one inverse FFT of the folded
    coefficients ``c_n (-r)^n``.  Returns ``(upper, z_at_max)``.
    """
    points = check_int(points, "points", minimum=1)
    r = float(r)
    b = f.coeffs * (-r) ** np.arange(f.coeffs.size)
    pad = (-b.size) % points
    folded = np.concatenate([b, np.zeros(pad, dtype=complex)]).reshape(-1, points).sum(axis=0)
    vals = np.abs(np.fft.ifft(folded) * points)
    j = int(np.argmax(vals))
    z = complex(-r * cmath.exp(2j * math.pi * j / points))
    if abs(z) >= 1.0:
        raise DomainError("r must be < 1")
    return eval_modulus(f, z).upper, z


def _uniform_disk(rng: np.random.Generator, radius: float, size: int) -> np.ndarray:
    rho = radius * np.sqrt(rng.random(size))
    theta = 2.0 * math.pi * rng.random(size)
    return rho * np.exp(1j * theta)


def random_schur_params(
    rng: np.random.Generator, vanish_at_origin: bool = False
) -> list[complex]:
    count = int(rng.integers(1, MAX_RANDOM_FACTORS + 1))
    params = [complex(g) for g in _uniform_disk(rng, SCHUR_PARAM_RADIUS, count)]
    if vanish_at_origin:
        params = [0j] + params
    return params


def random_blaschke_zeros(
    rng: np.random.Generator, vanish_at_origin: bool = False
) -> tuple[list[complex], float]:
    count = int(rng.integers(1, MAX_RANDOM_FACTORS + 1))
    zeros = [complex(w) for w in _uniform_disk(rng, BLASCHKE_ZERO_RADIUS, count)]
    if vanish_at_origin:
        zeros[0] = 0j
    rotation = float(2.0 * math.pi * rng.random())
    return zeros, rotation


def sample_schur_class(
    rng: np.random.Generator,
    M: int = DEFAULT_TRUNCATION,
    family: str | None = None,
    vanish_at_origin: bool = False,
) -> CoefficientSeries:
    """Draw one Schur-class function (Schur-parameter or Blaschke-product family).

    ``family=None`` picks either family with probability 1/2.
    """
    if family is None:
        family = "schur" if rng.random() < 0.5 else "blaschke"
    if family == "schur":
        return schur_series(random_schur_params(rng, vanish_at_origin), M)
    if family == "blaschke":
        zeros, rotation = random_blaschke_zeros(rng, vanish_at_origin)
        return blaschke_series(zeros, rotation, M)
    raise ArgumentError(f"unknown sampling family {family!r}")
