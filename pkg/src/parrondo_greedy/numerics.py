"""Arbitrary-precision reals and certified sign decisions.

Every real in the package is a :class:`gmpy2.mpfr`.  Parameters are kept as
exact rationals so any derived quantity can be recomputed at a higher
precision whenever a sign decision is too close to call.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Callable, Union

import gmpy2
from gmpy2 import mpfr

Real = type(mpfr(0))
Rational = Union[Fraction, int, str]

DEFAULT_BITS = 256
MAX_BITS = 4096


class Sign(enum.Enum):
    NEGATIVE = -1
    ZERO_AMBIGUOUS = 0
    POSITIVE = 1


def parse_rational(value: Rational) -> Fraction:
    """Parse ``"1/3"``, ``"0.688"``, ``"1e-3"``, an int or a Fraction exactly."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, float):
        # floats are exact dyadic rationals; accepted for convenience
        return Fraction(value)
    text = str(value).strip()
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"not a rational number: {value!r}") from exc


def _default_cycle_eps(bits: int) -> Fraction:
    # 1e-30 at 256 bits, scaled with the mantissa width
    return Fraction(1, 10 ** max(3, round(30 * bits / 256)))


def _default_compare_eps(bits: int) -> Fraction:
    return Fraction(1, 2 ** (bits // 2))


@dataclass(frozen=True)
class PrecisionConfig:
    """Binary precision plus the two tolerances used by geometric tests.

    ``compare_eps`` is the half-width of the band used for membership on
    measure-zero sets (lines); ``cycle_eps`` is the recurrence tolerance used
    when detecting equilibria and cycles.  Both default to values scaled with
    ``mantissa_bits``.
    """

    mantissa_bits: int = DEFAULT_BITS
    compare_eps: Fraction = field(default=None)  # type: ignore[assignment]
    cycle_eps: Fraction = field(default=None)  # type: ignore[assignment]

    def __post_init__(self):
        if self.compare_eps is None:
            object.__setattr__(self, "compare_eps", _default_compare_eps(self.mantissa_bits))
        if self.cycle_eps is None:
            object.__setattr__(self, "cycle_eps", _default_cycle_eps(self.mantissa_bits))
        object.__setattr__(self, "compare_eps", parse_rational(self.compare_eps))
        object.__setattr__(self, "cycle_eps", parse_rational(self.cycle_eps))
        if self.mantissa_bits < 53:
            raise ValueError("mantissa_bits must be at least 53")
        for name in ("compare_eps", "cycle_eps"):
            eps = getattr(self, name)
            if not 0 < eps < 1:
                raise ValueError(f"{name} must lie in (0, 1), got {eps}")

    def with_bits(self, bits: int) -> "PrecisionConfig":
        """Same tolerances at a different mantissa width."""
        return replace(self, mantissa_bits=bits)

    @classmethod
    def scaled(cls, bits: int) -> "PrecisionConfig":
        """Config whose tolerances are the defaults for ``bits``."""
        return cls(mantissa_bits=bits)


def working_precision(bits: int):
    """Context manager that makes all mpfr arithmetic round to ``bits``.

    Invalid operations and division by zero raise instead of producing NaN
    or infinities.
    """
    return gmpy2.context(
        precision=bits,
        trap_invalid=True,
        trap_divzero=True,
        trap_overflow=True,
    )


def to_real(value, bits: int) -> Real:
    """Round an exact value (rational, int, decimal string) once to ``bits``."""
    if not isinstance(value, Real):
        value = gmpy2.mpq(parse_rational(value))
    with working_precision(bits):
        return mpfr(value)


def certified_sign(value, err_bound) -> Sign:
    """Sign of ``value`` if it clears the error band ``[-err, err]``.

    Exact zero is always ambiguous.  Callers that get ``ZERO_AMBIGUOUS``
    are expected to retry at a higher precision (see :func:`decide_sign`).
    """
    if err_bound < 0:
        raise ValueError("err_bound must be non-negative")
    if value > err_bound:
        return Sign.POSITIVE
    if value < -err_bound:
        return Sign.NEGATIVE
    return Sign.ZERO_AMBIGUOUS


def decide_sign(evaluate: Callable[[int], Real], bits: int, cap: int = MAX_BITS) -> Sign:
    """Certify the sign of a quantity computable at any precision.

    ``evaluate(b)`` must return the quantity computed from exact inputs at
    ``b`` bits.  The discrepancy between evaluations at ``b`` and ``2b`` bits
    bounds the error of the latter; the precision is doubled until the sign
    clears that bound or ``cap`` is reached.
    """
    low = evaluate(bits)
    while True:
        hi_bits = min(2 * bits, cap)
        high = evaluate(hi_bits)
        with working_precision(hi_bits):
            err = abs(high - low)
        sign = certified_sign(high, err)
        if sign is not Sign.ZERO_AMBIGUOUS or hi_bits >= cap:
            return sign
        bits, low = hi_bits, high


def real_to_fraction(value: Real) -> Fraction:
    """Exact rational value of a finite mpfr."""
    q = gmpy2.mpq(value)
    return Fraction(int(q.numerator), int(q.denominator))


def format_real(value: Real, digits: int = 30) -> str:
    """Fixed-point decimal rendering with ``digits`` significant digits."""
    if value == 0:
        return "0"
    return f"{value:.{digits}g}"


def truncate_decimal(value: Fraction, digits: int) -> str:
    """Decimal expansion of ``value`` truncated (not rounded) after ``digits`` places."""
    scale = 10 ** digits
    sign = "-" if value < 0 else ""
    scaled = abs(value.numerator) * scale // value.denominator
    whole, frac = divmod(scaled, scale)
    return f"{sign}{whole}.{frac:0{digits}d}" if digits else f"{sign}{whole}"


def round_decimal(value: Fraction, digits: int) -> str:
    """Decimal expansion of ``value`` rounded half-up after ``digits`` places."""
    scale = 10 ** digits
    sign = "-" if value < 0 else ""
    num = abs(value) * scale
    scaled = int(num + Fraction(1, 2))
    whole, frac = divmod(scaled, scale)
    return f"{sign}{whole}.{frac:0{digits}d}" if digits else f"{sign}{whole}"
