"""Game parameters, transition matrices and the spectral data of game B.

States are row vectors ``(x0, x1, x2)`` of capital fractions modulo 3 and
matrices act on the right, so one play of game B maps ``x`` to ``x @ P_B``.
Matrices are plain 3-tuples of 3-tuples of mpfr values.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import NamedTuple, Tuple

import gmpy2
from gmpy2 import mpfr

from .errors import DegenerateSpectrum
from .numerics import PrecisionConfig, Rational, Real, parse_rational, to_real, working_precision

Matrix = Tuple[Tuple[Real, Real, Real], Tuple[Real, Real, Real], Tuple[Real, Real, Real]]


class SimplexPoint(NamedTuple):
    x0: Real
    x1: Real
    x2: Real

    @classmethod
    def from_values(cls, x0, x1, bits: int, x2=None) -> "SimplexPoint":
        """Build a state from exact inputs; ``x2`` defaults to ``1 - x0 - x1``."""
        a = to_real(x0, bits)
        b = to_real(x1, bits)
        with working_precision(bits):
            c = 1 - a - b if x2 is None else to_real(x2, bits)
        if min(a, b, c) < 0:
            raise ValueError(f"({x0}, {x1}) is not in the simplex")
        return cls(a, b, c)

    def normalized(self) -> "SimplexPoint":
        total = self.x0 + self.x1 + self.x2
        return SimplexPoint(self.x0 / total, self.x1 / total, self.x2 / total)

    def distance(self, other) -> Real:
        """Sup-norm distance."""
        return max(abs(self.x0 - other[0]), abs(self.x1 - other[1]), abs(self.x2 - other[2]))


# -- small exact-size linear algebra ---------------------------------------

def identity() -> Matrix:
    one, zero = mpfr(1), mpfr(0)
    return ((one, zero, zero), (zero, one, zero), (zero, zero, one))


def mat_mul(a: Matrix, b: Matrix) -> Matrix:
    return tuple(
        tuple(a[i][0] * b[0][j] + a[i][1] * b[1][j] + a[i][2] * b[2][j] for j in range(3))
        for i in range(3)
    )


def vec_mat(x, m: Matrix) -> SimplexPoint:
    return SimplexPoint(
        x[0] * m[0][0] + x[1] * m[1][0] + x[2] * m[2][0],
        x[0] * m[0][1] + x[1] * m[1][1] + x[2] * m[2][1],
        x[0] * m[0][2] + x[1] * m[1][2] + x[2] * m[2][2],
    )


def mat_vec(m: Matrix, v) -> tuple:
    return tuple(m[i][0] * v[0] + m[i][1] * v[1] + m[i][2] * v[2] for i in range(3))


def mat_add(a: Matrix, b: Matrix) -> Matrix:
    return tuple(tuple(a[i][j] + b[i][j] for j in range(3)) for i in range(3))


def mat_pow_naive(m: Matrix, n: int) -> Matrix:
    """``m**n`` by repeated multiplication (reference path for tests)."""
    out = identity()
    for _ in range(n):
        out = mat_mul(out, m)
    return out


def inverse3(m: Matrix) -> Matrix:
    (a, b, c), (d, e, f), (g, h, i) = m
    cof = (
        (e * i - f * h, -(d * i - f * g), d * h - e * g),
        (-(b * i - c * h), a * i - c * g, -(a * h - b * g)),
        (b * f - c * e, -(a * f - c * d), a * e - b * d),
    )
    det = a * cof[0][0] + b * cof[0][1] + c * cof[0][2]
    # adjugate is the transposed cofactor matrix
    return tuple(tuple(cof[j][i] / det for j in range(3)) for i in range(3))


def stationary_row(m: Matrix) -> SimplexPoint:
    """Stationary row vector of an irreducible 3x3 stochastic matrix.

    Solves ``x (M - I) = 0`` with ``x0 + x1 + x2 = 1`` by eliminating ``x2``.
    """
    # equations for columns 0 and 1 of x (M - I) = 0 with x2 = 1 - x0 - x1
    a11 = m[0][0] - 1 - m[2][0]
    a12 = m[1][0] - m[2][0]
    b1 = -m[2][0]
    a21 = m[0][1] - m[2][1]
    a22 = m[1][1] - 1 - m[2][1]
    b2 = -m[2][1]
    det = a11 * a22 - a12 * a21
    x0 = (b1 * a22 - a12 * b2) / det
    x1 = (a11 * b2 - b1 * a21) / det
    return SimplexPoint(x0, x1, 1 - x0 - x1)


def _game_matrix(p0, p1, phi) -> Matrix:
    keep = 1 - phi
    zero = mpfr(0)
    base = (
        (zero, p0, 1 - p0),
        (1 - p1, zero, p1),
        (p1, 1 - p1, zero),
    )
    return tuple(
        tuple((keep if i == j else 0) + phi * base[i][j] for j in range(3)) for i in range(3)
    )


# -- parameters ------------------------------------------------------------

@dataclass(frozen=True)
class Params:
    """Game parameters ``(rho, phi)`` held exactly, plus a precision config.

    ``rho`` and ``phi`` accept fractions, ints, or strings such as ``"1/3"``
    or ``"0.688"``; they are converted to reals once, at the working
    precision.  Derived quantities are cached on the instance.
    """

    rho: Fraction
    phi: Fraction
    precision: PrecisionConfig = field(default_factory=PrecisionConfig)

    def __post_init__(self):
        rho = parse_rational(self.rho)
        phi = parse_rational(self.phi)
        if not 0 < rho < 1:
            raise ValueError(f"rho must lie in (0, 1), got {rho}")
        if not 0 < phi <= 1:
            raise ValueError(f"phi must lie in (0, 1], got {phi}")
        object.__setattr__(self, "rho", rho)
        object.__setattr__(self, "phi", phi)

    @classmethod
    def of(cls, rho: Rational, phi: Rational, bits: int = None) -> "Params":
        precision = PrecisionConfig() if bits is None else PrecisionConfig.scaled(bits)
        return cls(rho, phi, precision)

    @property
    def bits(self) -> int:
        return self.precision.mantissa_bits

    def with_bits(self, bits: int) -> "Params":
        return Params(self.rho, self.phi, self.precision.with_bits(bits))

    def with_phi(self, phi: Rational) -> "Params":
        return Params(self.rho, phi, self.precision)

    def working(self):
        """Context manager for arithmetic at this instance's precision."""
        return working_precision(self.bits)

    @cached_property
    def rho_r(self) -> Real:
        return to_real(self.rho, self.bits)

    @cached_property
    def phi_r(self) -> Real:
        return to_real(self.phi, self.bits)

    @cached_property
    def spectral(self) -> "SpectralData":
        return spectral(self)

    @cached_property
    def matrices(self) -> Tuple[Matrix, Matrix]:
        return build_matrices(self)

    @property
    def P_A(self) -> Matrix:
        return self.matrices[0]

    @property
    def P_B(self) -> Matrix:
        return self.matrices[1]

    @property
    def pi(self) -> SimplexPoint:
        return self.spectral.pi

    def __repr__(self):
        return f"Params(rho={self.rho}, phi={self.phi}, bits={self.bits})"


@dataclass(frozen=True)
class SpectralData:
    S: Real
    e1_circ: Real
    e2_circ: Real
    e1: Real
    e2: Real
    phi1: Real
    phi2: Real
    phi3: Real
    pi: SimplexPoint
    R: Matrix
    L: Matrix
    p0: Real
    p1: Real


def win_probabilities(params: Params) -> Tuple[Real, Real]:
    r = params.rho_r
    with params.working():
        return r * r / (1 + r * r), 1 / (1 + r)


def build_matrices(params: Params) -> Tuple[Matrix, Matrix]:
    """``(P_A, P_B)``: the one-step matrices mixed with the identity by ``phi``."""
    p0, p1 = win_probabilities(params)
    with params.working():
        half = mpfr(1) / 2
        return _game_matrix(half, half, params.phi_r), _game_matrix(p0, p1, params.phi_r)


def stationary_exact(rho: Rational) -> Tuple[Fraction, Fraction, Fraction]:
    """Stationary distribution of game B as exact rationals."""
    r = parse_rational(rho)
    den = 2 * (1 + r + r * r)
    return (1 + r * r) / den, r * (1 + r) / den, (1 + r) / den


def stationary(params: Params) -> SimplexPoint:
    """Stationary distribution of ``P_B``; it does not depend on ``phi``."""
    return SimplexPoint(*(to_real(v, params.bits) for v in stationary_exact(params.rho)))


def spectral(params: Params) -> SpectralData:
    """Closed-form eigen-decomposition ``P_B = R diag(1, e1, e2) L``."""
    if not 0 < params.rho < 1:
        raise DegenerateSpectrum(f"rho={params.rho} is outside (0, 1)")
    r, phi = params.rho_r, params.phi_r
    p0, p1 = win_probabilities(params)
    pi = stationary(params)
    with params.working():
        r2, r3 = r * r, r * r * r
        S = gmpy2.sqrt((1 + r2) * (1 + 4 * r + r2))
        spread = (1 - r) * S / (2 * (1 + r) * (1 + r2))
        e1c = -mpfr(1) / 2 + spread
        e2c = -mpfr(1) / 2 - spread
        e1 = 1 - phi + phi * e1c
        e2 = 1 - phi + phi * e2c
        base = 2 * (1 + r) * (1 + r2)
        phi1 = base / (3 * (1 + r) * (1 + r2) + (1 - r) * S)
        phi2 = base / (3 * (1 + r) * (1 + r2) - (1 - r) * S)
        phi3 = (1 + r) * ((1 - r) * (1 + r2) + (1 + r) * S) / (2 * (1 + r + r2) * S)
        one = mpfr(1)
        r1 = ((1 + r) * (1 - r2 - S), 2 + r + 2 * r2 + r3 + r * S, -(1 + 2 * r + r2 + 2 * r3 - S))
        r2v = ((1 + r) * (1 - r2 + S), 2 + r + 2 * r2 + r3 - r * S, -(1 + 2 * r + r2 + 2 * r3 + S))
        R = tuple((one, r1[i], r2v[i]) for i in range(3))
        L = inverse3(R)
    return SpectralData(S, e1c, e2c, e1, e2, phi1, phi2, phi3, pi, R, L, p0, p1)


def power_B(params: Params, n: int) -> Matrix:
    """``P_B**n`` through the spectral representation."""
    if n < 0:
        raise ValueError("n must be non-negative")
    sd = params.spectral
    with params.working():
        d = (mpfr(1), sd.e1 ** n, sd.e2 ** n)
        RD = tuple(tuple(sd.R[i][k] * d[k] for k in range(3)) for i in range(3))
        return mat_mul(RD, sd.L)


def power_A(params: Params, n: int) -> Matrix:
    """Closed form of ``P_A**n``: diagonal ``1 - 2 d_n``, off-diagonal ``d_n``."""
    if n < 0:
        raise ValueError("n must be non-negative")
    with params.working():
        d = (1 - (1 - 3 * params.phi_r / 2) ** n) / 3
        diag = 1 - 2 * d
        return tuple(tuple(diag if i == j else d for j in range(3)) for i in range(3))
