"""Exceptions and argument checks shared by every module."""

from __future__ import annotations

import math
import numbers


class BohrError(Exception):
    """Base class for all errors raised by bohrkit."""


class DomainError(BohrError, ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class ArgumentError(BohrError, ValueError):
    """An argument has the wrong type, size or shape."""


class PreconditionError(BohrError, ValueError):
    """The request is meaningless for the given radius (e.g. no witness can exist)."""


class NoRootError(BohrError, RuntimeError):
    """A root search found no sign change or failed to reach its residual target."""


def check_real(value, name: str) -> float:
    if isinstance(value, bool) or not isinstance(value, numbers.Real):
        raise ArgumentError(f"{name} must be a real number, got {value!r}")
    value = float(value)
    if not math.isfinite(value):
        raise DomainError(f"{name} must be finite")
    return value


def check_int(value, name: str, minimum: int | None = None) -> int:
    if isinstance(value, bool) or not isinstance(value, numbers.Integral):
        raise ArgumentError(f"{name} must be an integer, got {value!r}")
    value = int(value)
    if minimum is not None and value < minimum:
        raise ArgumentError(f"{name} must be >= {minimum}, got {value}")
    return value


def check_initial_modulus(a, name: str = "a") -> float:
    """Validate ``0 <= a < 1``."""
    a = check_real(a, name)
    if a < 0.0:
        raise DomainError(f"{name} must be >= 0")
    if a >= 1.0:
        raise DomainError(f"{name} must be < 1")
    return a


def check_radius(r, name: str = "r") -> float:
    """Validate ``0 <= r < 1``."""
    r = check_real(r, name)
    if r < 0.0:
        raise DomainError(f"{name} must be >= 0")
    if r >= 1.0:
        raise DomainError(f"{name} must be < 1")
    return r


def check_exponent(p, name: str = "p") -> float:
    p = check_real(p, name)
    if p <= 0.0:
        raise DomainError(f"{name} must be > 0")
    return p


def check_point(z, name: str = "z") -> complex:
    if isinstance(z, bool) or not isinstance(z, numbers.Complex):
        raise ArgumentError(f"{name} must be a complex number, got {z!r}")
    z = complex(z)
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise DomainError(f"{name} must be finite")
    if abs(z) >= 1.0:
        raise DomainError(f"|{name}| must be < 1")
    return z
