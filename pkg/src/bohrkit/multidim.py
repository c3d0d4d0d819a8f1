"""Power series on the unit polydisk, organised by homogeneous degree.

A :class:`MultiSeries` stores the nonzero coefficients ``c_alpha`` with
``|alpha| <= D`` as parallel arrays (exponent rows and complex values).  The
two sampler constructions and the two-variable extremal carry enough
information to bound the majorant of the discarded degrees in closed form.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from typing import Any, Mapping, Sequence

import numpy as np

from ._validation import ArgumentError, DomainError, check_int, check_real
from .series import CoefficientSeries, Provenance, sample_schur_class

DEFAULT_DEGREE = 64

# closed-form tail families understood by majorant_tail_bound
TAIL_FAMILIES = ("polynomial", "truncated", "line", "product", "two_var_extremal")


@lru_cache(maxsize=64)
def multi_indices(n: int, D: int) -> np.ndarray:
    """All exponent rows of length ``n`` with total degree ``<= D``, ordered by degree.

    The returned array is read-only and shared between calls.
    """

    def compositions(k: int, parts: int):
        if parts == 1:
            yield (k,)
            return
        for first in range(k, -1, -1):
            for rest in compositions(k - first, parts - 1):
                yield (first,) + rest

    rows = [alpha for k in range(D + 1) for alpha in compositions(k, n)]
    out = np.array(rows, dtype=np.int64).reshape(-1, n)
    out.setflags(write=False)
    return out


@lru_cache(maxsize=64)
def multinomials(n: int, D: int) -> np.ndarray:
    """``|alpha|! / alpha!`` for every row of :func:`multi_indices` (as floats)."""
    fact = [math.factorial(k) for k in range(D + 1)]
    vals = np.array(
        [fact[int(sum(row))] // math.prod(fact[int(x)] for x in row) for row in multi_indices(n, D)],
        dtype=float,
    )
    vals.setflags(write=False)
    return vals


@dataclass(frozen=True, eq=False)
class MultiSeries:
    dimension: int
    exponents: np.ndarray
    values: np.ndarray
    max_degree: int
    tail_note: str = "polynomial"
    tail_params: Mapping[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        n = check_int(self.dimension, "dimension", minimum=1)
        D = check_int(self.max_degree, "max_degree", minimum=0)
        exps = np.array(self.exponents, dtype=np.int64).reshape(-1, n)
        vals = np.array(self.values, dtype=complex).reshape(-1)
        if exps.shape[0] != vals.size:
            raise ArgumentError("exponents and values have different lengths")
        if np.any(exps < 0):
            raise ArgumentError("exponents must be nonnegative")
        if not np.all(np.isfinite(vals)):
            raise DomainError("coefficients must be finite")
        deg = exps.sum(axis=1)
        if deg.size and deg.max() > D:
            raise ArgumentError(f"stored degree {int(deg.max())} exceeds max_degree {D}")
        if self.tail_note not in TAIL_FAMILIES:
            raise ArgumentError(f"unknown tail family {self.tail_note!r}")
        keep = vals != 0
        exps, vals = exps[keep], vals[keep]
        if len({tuple(row) for row in exps.tolist()}) != exps.shape[0]:
            raise ArgumentError("duplicate multi-index")
        exps.setflags(write=False)
        vals.setflags(write=False)
        object.__setattr__(self, "dimension", n)
        object.__setattr__(self, "max_degree", D)
        object.__setattr__(self, "exponents", exps)
        object.__setattr__(self, "values", vals)

    @classmethod
    def from_dict_coeffs(
        cls, n: int, coeffs: Mapping[Sequence[int], complex], max_degree: int | None = None, **kw
    ) -> "MultiSeries":
        items = list(coeffs.items())
        exps = np.array([tuple(k) for k, _ in items], dtype=np.int64).reshape(-1, n)
        vals = np.array([v for _, v in items], dtype=complex)
        if any(len(tuple(k)) != n for k, _ in items):
            raise ArgumentError(f"all multi-indices must have length {n}")
        if max_degree is None:
            max_degree = int(exps.sum(axis=1).max()) if items else 0
        return cls(n, exps, vals, max_degree, **kw)

    @cached_property
    def degrees(self) -> np.ndarray:
        return self.exponents.sum(axis=1)

    @property
    def coeffs(self) -> dict:
        return {tuple(int(x) for x in row): complex(v) for row, v in zip(self.exponents, self.values)}

    @property
    def constant(self) -> complex:
        hit = self.degrees == 0
        return complex(self.values[hit][0]) if hit.any() else 0j

    def homogeneous_slice(self, k: int) -> dict:
        """Coefficients ``c_alpha`` with ``|alpha| = k``."""
        mask = self.degrees == k
        return {
            tuple(int(x) for x in row): complex(v)
            for row, v in zip(self.exponents[mask], self.values[mask])
        }

    def monomials(self, z) -> np.ndarray:
        """``c_alpha z^alpha`` for every stored coefficient."""
        z = _as_point(z, self.dimension)
        return self.values * np.prod(z[None, :] ** self.exponents, axis=1)

    def homogeneous_values(self, z) -> np.ndarray:
        """``P_k(z)`` for ``k = 0..D``."""
        terms = self.monomials(z)
        size = self.max_degree + 1
        return np.bincount(self.degrees, weights=terms.real, minlength=size) + 1j * np.bincount(
            self.degrees, weights=terms.imag, minlength=size
        )

    def __call__(self, z) -> complex:
        return complex(np.sum(self.monomials(z)))

    def to_dict(self) -> dict:
        return {
            "n": self.dimension,
            "D": self.max_degree,
            "entries": [
                [[int(x) for x in row], float(v.real), float(v.imag)]
                for row, v in zip(self.exponents, self.values)
            ],
            "tail_note": self.tail_note,
            "tail_params": _jsonable(dict(self.tail_params)),
        }

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> "MultiSeries":
        n = data["n"]
        entries = data["entries"]
        exps = np.array([e[0] for e in entries], dtype=np.int64).reshape(-1, n)
        vals = np.array([complex(e[1], e[2]) for e in entries], dtype=complex)
        return cls(
            n, exps, vals, data["D"],
            tail_note=data.get("tail_note", "polynomial"),
            tail_params=_unjson(dict(data.get("tail_params", {}))),
        )

    def __repr__(self) -> str:
        return (
            f"MultiSeries(n={self.dimension}, D={self.max_degree}, "
            f"terms={self.values.size}, tail={self.tail_note})"
        )


def _jsonable(value):
    if isinstance(value, (complex, np.complexfloating)):
        return [float(value.real), float(value.imag)]
    if isinstance(value, np.ndarray):
        return [_jsonable(v) for v in value.tolist()]
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if isinstance(value, dict):
        return {k: _jsonable(v) for k, v in value.items()}
    if isinstance(value, np.generic):
        return value.item()
    return value


def _unjson(params: dict) -> dict:
    out = dict(params)
    if "lam" in out:
        out["lam"] = [complex(*v) if isinstance(v, list) else complex(v) for v in out["lam"]]
    if "factors" in out:
        out["factors"] = [
            {"coeffs": [complex(*c) for c in fac["coeffs"]], "tail": fac["tail"]}
            for fac in out["factors"]
        ]
    return out


def _as_point(z, n: int) -> np.ndarray:
    z = np.asarray(z, dtype=complex).reshape(-1)
    if z.size != n:
        raise ArgumentError(f"point has {z.size} coordinates, expected {n}")
    if not np.all(np.isfinite(z)):
        raise DomainError("point must be finite")
    return z


def restrict_to_line(
    F: MultiSeries, direction, tail_coeff_bound: float | None = None
) -> CoefficientSeries:
    """One-variable series ``t -> F(direction * t)`` with coefficients ``P_k(direction)``.

    ``tail_coeff_bound`` defaults to the closed-form bound of ``F``'s family
    when one is known (zero for polynomials).
    """
    a = _as_point(direction, F.dimension)
    if np.max(np.abs(a)) > 1.0 + 1e-15:
        raise DomainError("direction must lie in the closed unit polydisk")
    coeffs = F.homogeneous_values(a)
    if tail_coeff_bound is None:
        tail_coeff_bound = _line_tail_coeff_bound(F, a)
    prov = Provenance("manual", {"restricted_from": F.tail_note})
    return CoefficientSeries(coeffs, tail_coeff_bound, prov)


def _line_tail_coeff_bound(F: MultiSeries, a: np.ndarray) -> float:
    note, prm = F.tail_note, F.tail_params
    if note == "polynomial":
        return 0.0
    if note == "line":
        # P_k(a) = g_k (lam . a)^k with |lam . a| <= 1
        return float(prm["g_tail"]) * abs(complex(np.dot(prm["lam"], a))) ** (F.max_degree + 1)
    if note == "two_var_extremal":
        # P_k(a) = -(1 - s^2) s^(k-2) a_1 a_2^(k-1) for k >= 2
        s = float(prm["a"])
        return (1.0 - s * s) * s ** (F.max_degree - 1)
    if note in ("product", "truncated"):
        # |P_k(a)| <= sup_{polydisk} |F| <= 1 for a certified bounded F
        return 1.0
    raise ArgumentError(f"no tail bound for family {note!r}")


@dataclass(frozen=True)
class MajorantSums:
    slice_sum: float
    full_sum: float
    quad_sum: float
    tail_bound: float = 0.0

    def to_dict(self) -> dict:
        return {
            "slice_sum": self.slice_sum,
            "full_sum": self.full_sum,
            "quad_sum": self.quad_sum,
            "tail_bound": self.tail_bound,
        }


def homogeneous_majorants(F: MultiSeries, z) -> MajorantSums:
    """``sum_k |P_k(z)|``, ``sum_alpha |c_alpha z^alpha|`` and ``sum_{k>=1} |P_k(z)|^2``.

    The first two sums start at ``k = 0``; the quadratic sum skips ``P_0``
    because it only ever appears with ``f - f(0)``.  ``tail_bound`` bounds
    the part of ``full_sum`` (hence of ``slice_sum``) beyond degree ``D``.
    """
    zz = _as_point(z, F.dimension)
    terms = F.monomials(zz)
    size = F.max_degree + 1
    P = np.bincount(F.degrees, weights=terms.real, minlength=size) + 1j * np.bincount(
        F.degrees, weights=terms.imag, minlength=size
    )
    absP = np.abs(P)
    return MajorantSums(
        slice_sum=float(math.fsum(absP)),
        full_sum=float(math.fsum(np.abs(terms))),
        quad_sum=float(math.fsum(absP[1:] ** 2)),
        tail_bound=float(majorant_tail_bound(F, zz)),
    )


def majorant_tail_bound(F: MultiSeries, z) -> float:
    """Bound on ``sum_{|alpha| > D} |c_alpha z^alpha|`` (``inf`` when nothing is known)."""
    z = _as_point(z, F.dimension)
    rho = np.abs(z)
    D = F.max_degree
    note, prm = F.tail_note, F.tail_params
    if note == "polynomial":
        return 0.0
    if note == "line":
        s = float(np.dot(np.abs(prm["lam"]), rho))
        if s >= 1.0:
            return math.inf
        return float(prm["g_tail"]) * s ** (D + 1) / (1.0 - s)
    if note == "two_var_extremal":
        a = float(prm["a"])
        if a * rho[1] >= 1.0:
            return math.inf
        return (1.0 - a * a) * rho[0] * a ** (D - 1) * rho[1] ** D / (1.0 - a * rho[1])
    if note == "product":
        if np.any(rho >= 1.0):
            return math.inf
        full = 1.0
        for fac, r in zip(prm["factors"], rho):
            c = np.abs(np.asarray(fac["coeffs"], dtype=complex))
            k = np.arange(c.size)
            full *= float(np.sum(c * r**k)) + fac["tail"] * r ** c.size / (1.0 - r)
        partial = float(np.sum(np.abs(F.monomials(z))))
        return max(0.0, full - partial)
    return math.inf


@dataclass(frozen=True)
class DRReport:
    b: tuple
    q: float
    c0_modulus: float
    lhs_sum: float
    rhs: float
    per_k_ok: tuple
    slack: float = 1e-12

    @property
    def coefficient_bound(self) -> float:
        return 1.0 - self.c0_modulus**2

    @property
    def sum_ok(self) -> bool:
        return self.lhs_sum <= self.rhs + self.slack

    @property
    def ok(self) -> bool:
        return self.sum_ok and all(self.per_k_ok)

    @property
    def margin(self) -> float:
        """Smallest slack over both clauses (negative means violated)."""
        worst_b = max(self.b) if self.b else 0.0
        return min(self.rhs - self.lhs_sum, self.coefficient_bound - worst_b)

    def to_dict(self) -> dict:
        return {
            "b": list(self.b),
            "q": self.q,
            "c0_modulus": self.c0_modulus,
            "lhs_sum": self.lhs_sum,
            "rhs": self.rhs,
            "per_k_ok": list(self.per_k_ok),
            "sum_ok": self.sum_ok,
            "ok": self.ok,
        }


def dr_check(F: MultiSeries, q: float = 2.0) -> DRReport:
    """Check ``b_k <= 1 - |c_0|^2`` and ``sum_k b_k^q <= (1 - |c_0|^2)^(q-1)``.

    ``b_k`` is the Euclidean norm of the degree-``k`` coefficients.  Only the
    stored degrees enter; dropping degrees can only decrease the left sides.
    """
    q = check_real(q, "q")
    if q < 2.0:
        raise ArgumentError("q must be >= 2")
    sq = np.bincount(F.degrees, weights=np.abs(F.values) ** 2, minlength=F.max_degree + 1)
    b = np.sqrt(sq[1:])
    c0 = abs(F.constant)
    bound = 1.0 - c0 * c0
    slack = 1e-12
    return DRReport(
        b=tuple(float(x) for x in b),
        q=q,
        c0_modulus=c0,
        lhs_sum=float(math.fsum(b**q)),
        rhs=bound ** (q - 1.0),
        per_k_ok=tuple(bool(x <= bound + slack) for x in b),
        slack=slack,
    )


@dataclass(frozen=True)
class BoundPair:
    lower: float
    upper: float
    vacuous: bool
    raw_upper: float

    def __iter__(self):
        return iter((self.lower, self.upper))


def _log_bound(n: int) -> float:
    return 2.0 * math.sqrt(math.log(n)) / math.sqrt(n)


def kn_bounds(n: int) -> BoundPair:
    """Bounds ``1/(3 sqrt n) < K_n < 2 sqrt(log n) / sqrt n``; upper clipped to 1 and flagged."""
    n = check_int(n, "n")
    if n <= 1:
        raise ArgumentError("n must be > 1")
    raw = _log_bound(n)
    return BoundPair(1.0 / (3.0 * math.sqrt(n)), min(raw, 1.0), raw >= 1.0, raw)


def kn0_bounds(n: int) -> BoundPair:
    """Bounds on the Bohr radius of the polydisk for ``f(0) = 0``."""
    n = check_int(n, "n")
    if n <= 1:
        raise ArgumentError("n must be > 1")
    raw = 1.0 / math.sqrt(2.0) if n == 2 else _log_bound(n)
    return BoundPair(1.0 / math.sqrt(2.0 * n), min(raw, 1.0), raw >= 1.0, raw)


def majorant_envelope(n: int, r: float) -> float:
    """``sqrt(n r^2 / (1 - n r^2))``, the Cauchy-Schwarz bound on the majorant when ``f(0) = 0``."""
    n = check_int(n, "n", minimum=1)
    r = check_real(r, "r")
    if r < 0:
        raise DomainError("r must be >= 0")
    t = n * r * r
    if t >= 1.0:
        raise DomainError("n r^2 must be < 1")
    return math.sqrt(t / (1.0 - t))


def two_variable_extremal(a: float = 1.0 / math.sqrt(2.0), D: int = DEFAULT_DEGREE) -> MultiSeries:
    """``z_1 (a - z_2) / (1 - a z_2)`` truncated at total degree ``D``."""
    a = check_real(a, "a")
    if not 0.0 <= a < 1.0:
        raise DomainError("a must lie in [0, 1)")
    D = check_int(D, "D", minimum=1)
    k = np.arange(D)  # power of z_2; total degree k + 1 <= D
    exps = np.stack([np.ones_like(k), k], axis=1)
    vals = np.empty(D, dtype=complex)
    vals[0] = a
    vals[1:] = -(1.0 - a * a) * a ** np.arange(D - 1)
    return MultiSeries(2, exps, vals, D, tail_note="two_var_extremal", tail_params={"a": a})


@dataclass(frozen=True)
class SamplerSpec:
    """How to build a bounded function on the polydisk.

    ``construction="line"`` composes a Schur-class ``g`` with a linear form
    ``lam . z`` where ``sum |lam_j| <= 1``; ``"product"`` multiplies
    one-variable Schur-class factors ``g_j(z_j)``.  Missing ingredients are
    drawn from the seed.
    """

    construction: str = "line"
    degree: int = 16
    g: CoefficientSeries | None = None
    lam: tuple | None = None
    factors: tuple | None = None
    vanish_at_origin: bool = False


def _random_direction(rng: np.random.Generator, n: int) -> np.ndarray:
    weights = rng.dirichlet(np.ones(n)) * rng.uniform(0.8, 1.0)
    return weights * np.exp(2j * math.pi * rng.random(n))


def compose_line(g: CoefficientSeries, lam, D: int) -> MultiSeries:
    """Expand ``g(lam_1 z_1 + ... + lam_n z_n)`` up to total degree ``D`` by multinomials."""
    lam = np.asarray(lam, dtype=complex).reshape(-1)
    n = lam.size
    if float(np.sum(np.abs(lam))) > 1.0 + 1e-12:
        raise ArgumentError("sum |lam_j| must be <= 1")
    D = check_int(D, "D", minimum=0)
    if g.truncation_order < D:
        raise ArgumentError("g must be known through degree D")
    exps = multi_indices(n, D)
    deg = exps.sum(axis=1)
    vals = g.coeffs[deg] * multinomials(n, D) * np.prod(lam[None, :] ** exps, axis=1)
    tail = "line" if g.certified else "truncated"
    return MultiSeries(
        n, exps, vals, D, tail_note=tail,
        tail_params={
            "lam": [complex(x) for x in lam],
            "g_tail": max(g.tail_coeff_bound, _max_abs(g.coeffs[D + 1:])),
        },
    )


def compose_product(factors: Sequence[CoefficientSeries], D: int) -> MultiSeries:
    """Expand ``prod_j g_j(z_j)`` up to total degree ``D``."""
    n = len(factors)
    if n == 0:
        raise ArgumentError("at least one factor is required")
    D = check_int(D, "D", minimum=0)
    if any(g.truncation_order < D for g in factors):
        raise ArgumentError("every factor must be known through degree D")
    exps = multi_indices(n, D)
    vals = np.ones(exps.shape[0], dtype=complex)
    for j, g in enumerate(factors):
        vals = vals * g.coeffs[exps[:, j]]
    params = {
        "factors": [
            {
                "coeffs": [complex(c) for c in g.coeffs[: D + 1]],
                "tail": max(g.tail_coeff_bound, _max_abs(g.coeffs[D + 1:])),
            }
            for g in factors
        ]
    }
    return MultiSeries(n, exps, vals, D, tail_note="product", tail_params=params)


def _max_abs(c: np.ndarray) -> float:
    return float(np.max(np.abs(c))) if c.size else 0.0


def sample_polydisk_bounded(n: int, seed, spec: SamplerSpec | None = None) -> MultiSeries:
    """Draw a function bounded by 1 on the polydisk, expanded through degree ``spec.degree``."""
    n = check_int(n, "n", minimum=1)
    spec = spec or SamplerSpec()
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    D = check_int(spec.degree, "degree", minimum=1)
    if spec.construction == "line":
        lam = _random_direction(rng, n) if spec.lam is None else np.asarray(spec.lam, dtype=complex)
        if lam.size != n:
            raise ArgumentError(f"lam must have {n} entries")
        if float(np.sum(np.abs(lam))) > 1.0 + 1e-12:
            raise ArgumentError("sum |lam_j| must be <= 1")
        g = spec.g or sample_schur_class(rng, M=D, vanish_at_origin=spec.vanish_at_origin)
        return compose_line(g, lam, D)
    if spec.construction == "product":
        if spec.factors is not None:
            factors = list(spec.factors)
            if len(factors) != n:
                raise ArgumentError(f"need {n} factors")
        else:
            factors = [
                sample_schur_class(rng, M=D, vanish_at_origin=spec.vanish_at_origin and j == 0)
                for j in range(n)
            ]
        return compose_product(factors, D)
    raise ArgumentError(f"unknown construction {spec.construction!r}")
