"""Closed-form region functions and analytic prediction of the asymptotic behaviour.

The cycle functions ``E``, ``G``, ``H`` measure how far the cycle-stationary
states sit from the switching line ``x0 = pi0``; their signs decide which
limit cycles exist.  Boundary curves in the ``(rho, phi)`` plane are located
by bisection in ``phi`` on certified signs.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Tuple

import gmpy2
from gmpy2 import mpfr

from .dynamics import GamePattern, phi_case
from .errors import (BadIndex, BoundaryAmbiguous, NoSignChange, NotInPartition,
                     PredicateAmbiguous, SNotFound, WrongRegion)
from .model import (Params, SimplexPoint, mat_mul, power_B, stationary_row, vec_mat)
from .numerics import (Real, Sign, certified_sign, decide_sign, parse_rational, real_to_fraction,
                       round_decimal, truncate_decimal)

TWO_THIRDS = Fraction(2, 3)


# -- the cycle functions ---------------------------------------------------

def _shared(params: Params):
    sd = params.spectral
    r, phi = params.rho_r, params.phi_r
    q = (1 + r) * (1 + r * r)
    k_minus = 3 * q - (1 - r) * sd.S
    k_plus = 3 * q + (1 - r) * sd.S
    return sd, r, phi, 3 * phi - 2, k_minus, k_plus


def _check_index(which: str, n: int, m: Optional[int]):
    if which in ("D_n", "I_n"):
        low = 2 if which == "I_n" else 1
        if n < low:
            raise BadIndex(f"{which} needs n >= {low}, got {n}")
        return
    if n % 2 or n < 2:
        raise BadIndex(f"{which} needs even n >= 2, got n={n}")
    if which in ("G_nm", "H_nm") and n < 4:
        raise BadIndex(f"{which} needs even n >= 4, got n={n}")
    if which in ("E_nm", "G_nm", "H_nm"):
        if m is None or not 0 <= m <= n:
            raise BadIndex(f"{which} needs 0 <= m <= n, got m={m}")


def eval_cycle_fn(which: str, n: int, m: Optional[int], params: Params) -> Real:
    """Evaluate one of ``E_n, E_nm, G_nm, H_nm, D_n, I_n, F_n`` at ``params``."""
    _check_index(which, n, m)
    with params.working():
        sd, r, phi, t, k_minus, k_plus = _shared(params)
        e1, e2 = sd.e1, sd.e2
        if which == "E_n":
            m = n
            which = "E_nm"
        if which == "E_nm":
            return phi * (1 - r) * (
                e2 ** m * (2 + e1 ** n * t) * k_minus - e1 ** m * (2 + e2 ** n * t) * k_plus
            ) / 2
        if which == "G_nm":
            return phi * (1 - r) * (
                e2 ** m * (4 - e1 ** (2 * (n - 1)) * t * t) * (2 - e2 ** (n - 2) * t) * k_minus
                - e1 ** m * (4 - e2 ** (2 * (n - 1)) * t * t) * (2 - e1 ** (n - 2) * t) * k_plus
            )
        if which == "H_nm":
            return phi * (1 - r) * (
                e2 ** m * (4 - e1 ** (2 * (n - 1)) * t * t) * (2 - e2 ** n * t) * k_minus
                - e1 ** m * (4 - e2 ** (2 * (n - 1)) * t * t) * (2 - e1 ** n * t) * k_plus
            )
        if which == "D_n":
            return _D(n, params)
        if which == "I_n":
            return 2 * (2 - e1 ** (n - 1) * t) * (2 - e2 ** (n - 1) * t) * _D(n - 1, params)
        if which == "F_n":
            return (e1 / e2) ** n * (2 + e2 ** n * t) / (2 + e1 ** n * t)
    raise ValueError(f"unknown cycle function {which!r}")


def _D(n: int, params: Params) -> Real:
    sd = params.spectral
    r, t = params.rho_r, 3 * params.phi_r - 2
    return 2 * (2 + sd.e1 ** n * t) * (2 + sd.e2 ** n * t) * (1 + r + r * r) * sd.S


def E(n, params, m=None):
    return eval_cycle_fn("E_n" if m is None else "E_nm", n, m, params)


def G(n, m, params):
    return eval_cycle_fn("G_nm", n, m, params)


def H(n, m, params):
    return eval_cycle_fn("H_nm", n, m, params)


def D(n, params):
    return eval_cycle_fn("D_n", n, None, params)


def I(n, params):  # noqa: E743 - name matches the quantity
    return eval_cycle_fn("I_n", n, None, params)


@dataclass(frozen=True)
class CycleFunctions:
    """All cycle functions for one ``(params, n)``; ``E_nm[m]`` etc. index by ``m``."""

    n: int
    E_n: Real
    E_nm: Tuple[Real, ...]
    G_nm: Tuple[Real, ...]
    H_nm: Tuple[Real, ...]
    D_n: Real
    I_n: Real
    F_n: Real

    @classmethod
    def evaluate(cls, n: int, params: Params) -> "CycleFunctions":
        ms = range(n + 1)
        g = tuple(G(n, m, params) for m in ms) if n >= 4 else ()
        h = tuple(H(n, m, params) for m in ms) if n >= 4 else ()
        return cls(
            n, E(n, params), tuple(E(n, params, m) for m in ms), g, h,
            D(n, params), I(n, params), eval_cycle_fn("F_n", n, None, params),
        )


# -- cycle-stationary states ------------------------------------------------

def cycle_matrix(pattern: GamePattern, params: Params):
    """Product of one period's matrices, e.g. ``P_A P_B**n`` for ``[1,n]``."""
    P_A = params.P_A
    with params.working():
        m = mat_mul(P_A, power_B(params, pattern.n))
        if pattern.kind == "1n1n-2":
            m = mat_mul(m, mat_mul(P_A, power_B(params, pattern.n - 2)))
        elif pattern.kind != "1n":
            raise ValueError(f"no cycle matrix for {pattern}")
    return m


def cycle_stationary(pattern: GamePattern, params: Params) -> SimplexPoint:
    """Stationary row vector of the period map of ``pattern``."""
    m = cycle_matrix(pattern, params)
    with params.working():
        return stationary_row(m)


# -- certified signs -------------------------------------------------------

def sign_of(func: Callable[[Params], Real], params: Params, cap: int = 4096) -> Sign:
    """Certified sign of ``func(params)`` using precision doubling."""
    return decide_sign(lambda bits: func(params.with_bits(bits)), params.bits, cap)


@dataclass(frozen=True)
class Curve:
    """A boundary curve ``kind(n, m) = 0``; kinds ``G``, ``E``, ``H``, ``b``.

    ``E`` with ``m=None`` is ``E_n``; ``b`` is ``b_n - pi0``.
    """

    kind: str
    n: int
    m: Optional[int] = None

    @classmethod
    def parse(cls, text: str) -> "Curve":
        """Parse ``G:4:2``, ``E:2``, ``E:4:2``, ``H:6:4`` or ``b:2`` (``_`` also accepted)."""
        parts = re.split(r"[:_]", text.strip())
        kind = parts[0]
        try:
            nums = [int(v) for v in parts[1:]]
        except ValueError:
            raise ValueError(f"bad curve {text!r}") from None
        if kind not in ("G", "E", "H", "b") or not 1 <= len(nums) <= 2:
            raise ValueError(f"bad curve {text!r}")
        if kind in ("G", "H") and len(nums) != 2 or kind == "b" and len(nums) != 1:
            raise ValueError(f"bad curve {text!r}")
        curve = cls(kind, nums[0], nums[1] if len(nums) == 2 else None)
        if kind == "b":
            if curve.n < 1:
                raise BadIndex(f"line index must be >= 1 in {text!r}")
        else:
            which = {"G": "G_nm", "H": "H_nm", "E": "E_n" if curve.m is None else "E_nm"}[kind]
            _check_index(which, curve.n, curve.m)
        return curve

    @property
    def label(self) -> str:
        return "_".join([self.kind, str(self.n)] + ([str(self.m)] if self.m is not None else []))

    def __call__(self, params: Params) -> Real:
        if self.kind == "E":
            return E(self.n, params, self.m)
        if self.kind == "G":
            return G(self.n, self.m, params)
        if self.kind == "H":
            return H(self.n, self.m, params)
        fam = line_family(self.n, params)
        with params.working():
            return fam.b - params.pi.x0


def _decisive(curve_label: str, sign: Sign) -> Sign:
    if sign is Sign.ZERO_AMBIGUOUS:
        raise BoundaryAmbiguous(curve_label)
    return sign


# -- s and classification --------------------------------------------------

def find_s(params: Params, n_max: int = 2000) -> int:
    """Smallest even ``n`` with ``E_n >= 0`` (requires ``phi > 2/3``)."""
    if params.phi <= TWO_THIRDS:
        raise ValueError("s is only defined for phi > 2/3")
    for n in range(2, n_max + 1, 2):
        if sign_of(lambda p: E(n, p), params) is not Sign.NEGATIVE:
            return n
    raise SNotFound(f"no even n <= {n_max} with E_n >= 0 at {params}")


@dataclass
class Classification:
    regime: str  # "GAS-equilibrium" or "cycles"
    cycles: Tuple[GamePattern, ...]
    unstable_equilibrium: bool
    region12: Optional[int] = None
    band: str = ""
    s: Optional[int] = None
    params: Optional[Params] = field(default=None, repr=False)

    def cycle_labels(self) -> str:
        return ";".join(str(c) for c in self.cycles)


def cycle_exists(pattern: GamePattern, params: Params) -> bool:
    """Existence of ``pattern`` started from its own stationary state.

    ``[1,n]`` exists iff ``E_{n,n-2} < 0 <= E_n``; ``[1,n,1,n-2]`` iff
    ``G_{n,n-2} < 0 <= H_{n,n-2}``.  Only meaningful for ``phi > 2/3``.
    """
    n = pattern.n
    if pattern.kind == "1n":
        below = Curve("E", n, n - 2)
        above = Curve("E", n)
    elif pattern.kind == "1n1n-2":
        below = Curve("G", n, n - 2)
        above = Curve("H", n, n - 2)
    else:
        raise ValueError(f"no existence test for {pattern}")
    if n == 2 and pattern.kind == "1n":
        neg = True  # E_{2,0} < 0 always
    else:
        neg = _decisive(below.label, sign_of(below, params)) is Sign.NEGATIVE
    if not neg:
        return False
    return _decisive(above.label, sign_of(above, params)) is not Sign.NEGATIVE


def classify(params: Params, with_region: bool = True) -> Classification:
    """Predict the asymptotic behaviour at ``params`` from the closed forms."""
    if params.phi <= TWO_THIRDS:
        return Classification("GAS-equilibrium", (), False, band="phi<=2/3", params=params)
    case = phi_case(params)
    if case == 6:
        raise BoundaryAmbiguous("phi-phi2")
    if case == 7:
        region = _region_or_none(params) if with_region else None
        return Classification("cycles", (GamePattern.one_n(2),), False, region,
                              band="phi>phi2", s=2, params=params)
    s = find_s(params)
    candidates = [GamePattern.one_n(s), GamePattern.one_n(s + 2),
                  GamePattern.one_n_one_nm2(s + 2)]
    if s >= 4:
        candidates.insert(1, GamePattern.one_n_one_nm2(s))
    cycles = tuple(c for c in candidates if cycle_exists(c, params))
    band = _band_description(s, cycles)
    region = _region_or_none(params) if with_region and s == 2 else None
    return Classification("cycles", cycles, True, region, band=band, s=s, params=params)


def _band_description(s: int, cycles) -> str:
    names = {str(c) for c in cycles}
    n = s
    if names == {f"[1,{n}]"}:
        if n == 2:
            return "G_4_2>=0"
        return f"H_{n}_{n - 2}<0, G_{n + 2}_{n}>=0"
    if names == {f"[1,{n + 2},1,{n}]", f"[1,{n}]"}:
        return f"G_{n + 2}_{n}<0<=E_{n}"
    if names == {f"[1,{n},1,{n - 2}]"}:
        return f"E_{n - 2}<0<=E_{n}_{n - 2}"
    if names == {f"[1,{n},1,{n - 2}]", f"[1,{n}]"}:
        return f"E_{n}_{n - 2}<0<=H_{n}_{n - 2}"
    return "s=%d cycles=%s" % (s, ";".join(sorted(names)))


def _region_or_none(params: Params) -> Optional[int]:
    try:
        return region12(params)
    except NotInPartition:
        return None


# -- boundary roots --------------------------------------------------------

@dataclass(frozen=True)
class BoundaryRoot:
    """Root of a curve in ``phi`` at fixed ``rho``, bracketed by exact rationals."""

    curve: Curve
    rho: Fraction
    lo: Fraction
    hi: Fraction
    digits: int

    def truncated(self) -> str:
        return truncate_decimal(self.lo, self.digits)

    def rounded(self) -> str:
        return round_decimal(self.lo, self.digits)

    @property
    def value(self) -> Fraction:
        return (self.lo + self.hi) / 2


def boundary_root(curve, rho, digits: int = 18, bits: int = 256,
                  bracket: Tuple[Fraction, Fraction] = None) -> BoundaryRoot:
    """Locate the ``phi`` root of ``curve`` at ``rho`` by certified bisection.

    Bisection stops once the bracket determines ``digits`` decimals under
    both truncation and rounding.  The curve must be negative at the lower
    end and positive at the upper end of the bracket, which defaults to
    ``(2/3, phi2)``.
    """
    if isinstance(curve, str):
        curve = Curve.parse(curve)
    rho = parse_rational(rho)
    base = Params.of(rho, 1, bits)
    if bracket is None:
        phi2 = real_to_fraction(base.spectral.phi2)
        lo = TWO_THIRDS if curve.kind != "b" else TWO_THIRDS + Fraction(1, 10 ** 9)
        bracket = (lo, phi2 - Fraction(1, 10 ** 30))
    lo, hi = (parse_rational(v) for v in bracket)

    def sign_at(phi):
        return sign_of(curve, base.with_phi(phi))

    s_lo, s_hi = sign_at(lo), sign_at(hi)
    if s_lo is s_hi or Sign.ZERO_AMBIGUOUS in (s_lo, s_hi):
        raise NoSignChange(curve.label, lo, hi)
    flip = s_lo is Sign.POSITIVE
    scale = 10 ** digits
    while True:
        if (lo * scale).__floor__() == (hi * scale).__floor__() and \
                (lo * scale + Fraction(1, 2)).__floor__() == (hi * scale + Fraction(1, 2)).__floor__():
            break
        mid = (lo + hi) / 2
        s = sign_at(mid)
        if s is Sign.ZERO_AMBIGUOUS:
            lo = hi = mid
            break
        if (s is Sign.NEGATIVE) != flip:
            lo = mid
        else:
            hi = mid
    return BoundaryRoot(curve, rho, lo, hi, digits)


TABLE2_CURVES = ("G:4:2", "E:2", "E:4:2", "H:4:2", "G:6:4", "E:4", "E:6:4", "H:6:4", "G:8:6")
TABLE2_FORMS = ("[1,2]", "[1,4,1,2], [1,2]", "[1,4,1,2]", "[1,4,1,2], [1,4]", "[1,4]",
                "[1,6,1,4], [1,4]", "[1,6,1,4]", "[1,6,1,4], [1,6]", "[1,6]")


def table2(digits: int = 18, bits: int = 256, rho="1/3") -> List[Tuple[str, BoundaryRoot, str]]:
    """The nine critical ``phi`` values at ``rho`` separating the cycle bands."""
    rows = []
    for spec, form in zip(TABLE2_CURVES, TABLE2_FORMS):
        root = boundary_root(spec, rho, digits, bits)
        rows.append((root.curve.label, root, form))
    return rows


# -- the line family alpha_n x0 + beta_n x1 = gamma_n -----------------------

@dataclass(frozen=True)
class LineFamily:
    n: int
    alpha: Real
    beta: Real
    gamma: Real
    a: Real  # x1-intercept with x0 = pi0
    b: Real  # x0-intercept with x1 = 0
    c: Real  # x0-intercept with x0 + x1 = 1

    def value(self, x) -> Real:
        """``alpha x0 + beta x1 - gamma``."""
        return self.alpha * x[0] + self.beta * x[1] - self.gamma


def _div(num, den):
    # an intercept at infinity when the line is parallel to the axis it meets
    if den == 0:
        return mpfr("inf") if num >= 0 else mpfr("-inf")
    return num / den


def line_family(n: int, params: Params) -> LineFamily:
    """Coefficients from the spectral forms, and the three intercepts."""
    if n < 1:
        raise BadIndex("line family index must be >= 1")
    sd = params.spectral
    r, phi = params.rho_r, params.phi_r
    with params.working():
        sign = 1 if n % 2 == 0 else -1
        t = 3 * phi - 2
        q = 1 + r * r
        w = 1 + r + r * r
        e1n, e2n = sd.e1 ** n, sd.e2 ** n
        alpha = sign * t * (e2n * (q + sd.S) - e1n * (q - sd.S)) / (4 * sd.S)
        beta = sign * t * (e2n - e1n) * q / (2 * sd.S)
        gamma = sign * (
            e2n * (phi * w * (3 + 3 * r * r + sd.S) - q * (1 + 2 * r + 3 * r * r + sd.S))
            - e1n * (phi * w * (3 + 3 * r * r - sd.S) - q * (1 + 2 * r + 3 * r * r - sd.S))
        ) / (4 * w * sd.S)
        pi0 = sd.pi.x0
        return LineFamily(n, alpha, beta, gamma, _div(gamma - alpha * pi0, beta),
                          _div(gamma, alpha), _div(gamma - beta, alpha - beta))


def line_coefficients_matrix(n: int, params: Params) -> Tuple[Real, Real, Real]:
    """``(alpha_n, beta_n, gamma_n)`` from the matrix definitions (reference path)."""
    with params.working():
        M = mat_mul(params.P_A, power_B(params, n))
        sign = -1 if n % 2 == 0 else 1
        alpha = sign * (M[0][0] - M[2][0])
        beta = sign * (M[1][0] - M[2][0])
        gamma = sign * (params.pi.x0 - M[2][0])
    return alpha, beta, gamma


def explicit_line_coefficients(n: int, params: Params) -> Tuple[Real, Real, Real]:
    """The expanded polynomial forms of ``(alpha_n, beta_n, gamma_n)`` for ``n`` in 1, 2."""
    r, phi = params.rho_r, params.phi_r
    with params.working():
        t = 3 * phi - 2
        q = 1 + r * r
        w = 1 + r + r * r
        if n == 1:
            alpha = t * (-(1 + r) + phi * (2 + r)) / (2 * (1 + r))
            beta = phi * t * (1 - r) / (2 * (1 + r))
            gamma = ((1 + r) * q - phi * (3 + r) * w + 3 * phi ** 2 * w) / (2 * (1 + r) * w)
            return alpha, beta, gamma
        if n == 2:
            alpha = t * ((1 + r) ** 2 * q - 2 * phi * (1 + r) * (2 + r) * q
                         + phi ** 2 * (4 + 5 * r + 3 * r ** 2 + 5 * r ** 3 + r ** 4)) / (2 * (1 + r) ** 2 * q)
            beta = t ** 2 * phi * (1 - r) / (2 * (1 + r))
            gamma = (-(1 + r) ** 2 * q ** 2 + phi * (1 + r) * (5 + r) * q * w
                     - 2 * phi ** 2 * q * (5 + 5 * r - r ** 2) * w
                     + phi ** 3 * w * (7 + 5 * r + 3 * r ** 2 + 5 * r ** 3 - 2 * r ** 4)) \
                / (2 * (1 + r) ** 2 * q * w)
            return alpha, beta, gamma
    raise BadIndex("explicit forms exist only for n = 1, 2")


def line_pivot(params: Params) -> Tuple[Real, Real]:
    """Common point ``((phi - 2 pi0)/(3 phi - 2), (phi - 2 pi1)/(3 phi - 2))`` of all lines."""
    pi = params.pi
    phi = params.phi_r
    with params.working():
        t = 3 * phi - 2
        return (phi - 2 * pi.x0) / t, (phi - 2 * pi.x1) / t


# -- lines along which game B is played forever -----------------------------

@dataclass(frozen=True)
class BForeverLine:
    """Segment ``x1 = slope * x0 + intercept`` restricted to its domain."""

    name: str  # "A(B)", "BA(B)", "BBA(B)"
    slope: Real
    intercept: Real
    x_min: Real
    x_max: Real
    nonempty: bool

    def at(self, x0) -> Real:
        return self.slope * x0 + self.intercept


def b_forever_lines(params: Params) -> List[BForeverLine]:
    """The f, g, h lines of initial states reaching the unstable equilibrium.

    Requires ``2/3 < phi < phi2``.  ``f`` lives in ``Delta_A`` (``x0 >= pi0``);
    ``g`` and ``h`` in ``Delta_B``.
    """
    if params.phi <= TWO_THIRDS or phi_case(params) != 5:
        raise ValueError("b_forever_lines needs 2/3 < phi < phi2")
    sd = params.spectral
    r, phi = params.rho_r, params.phi_r
    pi0, pi1 = sd.pi.x0, sd.pi.x1
    with params.working():
        q = 1 + r * r
        S = sd.S
        t = 3 * phi - 2
        slope = -(1 + S / q) / 2
        common = 2 * (phi - 2 * pi1) * q + (phi - 2 * pi0) * (q + S)
        f0 = common / (2 * t * q)
        g1 = phi * t * ((1 + 2 * r) * q + S) - (1 + r) * common
        g2 = t * (1 + r) * q + phi * (1 - r) * S
        h1 = phi * t * (2 * (1 + r) * ((1 + 2 * r) * q + S)
                        - phi * (2 + 6 * r + 3 * r ** 2 + 4 * r ** 3 + 3 * r ** 4
                                 + (2 + 2 * r - r ** 2) * S)) - (1 + r) ** 2 * common
        h2 = (-2 * (1 + r) ** 2 * q + 6 * phi * (1 + r) ** 2 * q
              - phi ** 2 * (5 + 10 * r + 6 * r ** 2 + 10 * r ** 3 + 5 * r ** 4)
              - phi * t * (1 - r ** 2) * S)
        lines = []
        for name, c, lo, hi, closed in (
            ("A(B)", f0, pi0, mpfr(1), True),
            ("BA(B)", g1 / (t * g2), mpfr(0), pi0, False),
            ("BBA(B)", h1 / (t * h2), mpfr(0), pi0, False),
        ):
            x_zero = -c / slope             # x1 >= 0 left of here
            x_top = (1 - c) / (slope + 1)   # x0 + x1 <= 1 right of here
            left, right = max(lo, x_top), min(hi, x_zero)
            nonempty = left <= right if closed else (left <= right and left < hi)
            lines.append(BForeverLine(name, slope, c, left, right, nonempty))
    return lines


# -- the twelve-region partition of the [1,2] territory ---------------------

@dataclass(frozen=True)
class RegionQuantities:
    """Everything the twelve region predicates depend on."""

    G42: Real
    a1: Real
    a2: Real
    b1: Real
    b2: Real
    one_minus_pi0: Real
    phi3: Real
    f_test: Real  # alpha_1 f0 + beta_1 f1 - gamma_1 with (f0,f1,f2) = (1,0,0) P_A P_B

    def differences(self, phi) -> Dict[str, Real]:
        """Signed quantities whose signs decide the irrational predicates."""
        return {
            "G42": self.G42,
            "a2-(1-pi0)": self.a2 - self.one_minus_pi0,
            "b2-1": self.b2 - 1,
            "b1-1": self.b1 - 1,
            "b2-b1": self.b2 - self.b1,
            "phi-phi3": phi - self.phi3,
            "f-test": self.f_test,
        }


def region_quantities(params: Params) -> RegionQuantities:
    l1, l2 = line_family(1, params), line_family(2, params)
    with params.working():
        f = vec_mat((mpfr(1), mpfr(0), mpfr(0)), mat_mul(params.P_A, params.P_B))
        sd = params.spectral
        return RegionQuantities(G(4, 2, params), l1.a, l2.a, l1.b, l2.b,
                                1 - sd.pi.x0, sd.phi3, l1.value(f))


def _region_signs(params: Params, cap: int = 1024) -> Dict[str, Sign]:
    """Certified sign of each region difference, doubling precision while needed."""
    def at(bits):
        q = params.with_bits(bits)
        with q.working():
            return region_quantities(q).differences(q.phi_r)

    bits = params.bits
    low = at(bits)
    signs: Dict[str, Sign] = {}
    while True:
        hi_bits = min(2 * bits, cap)
        high = at(hi_bits)
        with gmpy2.context(precision=hi_bits):
            for name, value in high.items():
                if signs.get(name, Sign.ZERO_AMBIGUOUS) is not Sign.ZERO_AMBIGUOUS:
                    continue
                if gmpy2.is_infinite(value):
                    signs[name] = Sign.POSITIVE if value > 0 else Sign.NEGATIVE
                    continue
                err = abs(value - low[name])
                signs[name] = (Sign.POSITIVE if value > err else
                               Sign.NEGATIVE if value < -err else Sign.ZERO_AMBIGUOUS)
        if Sign.ZERO_AMBIGUOUS not in signs.values() or hi_bits >= cap:
            return signs
        bits, low = hi_bits, high


def _matching_regions(ge: Dict[str, bool], below_mid: bool, above_mid: bool,
                      below_rho3: bool) -> List[int]:
    a2_hi, b2_hi, b1_hi = ge["a2-(1-pi0)"], ge["b2-1"], ge["b1-1"]
    b2_over_b1, past_phi3, f_hi = ge["b2-b1"], ge["phi-phi3"], ge["f-test"]
    preds = {
        1: ge["G42"] and not a2_hi and below_mid,
        2: a2_hi and not b2_hi and below_mid,
        3: b2_hi,
        4: not b2_hi and not past_phi3 and above_mid,
        5: past_phi3 and b1_hi,
        6: not b1_hi and a2_hi and not b2_over_b1,
        # region 7 lies above the mid line; without that conjunct it would swallow region 1
        7: not a2_hi and below_rho3 and not below_mid,
        8: not below_rho3 and not b2_over_b1,
        9: b2_over_b1 and below_rho3,
        10: not below_rho3 and a2_hi,
        11: b2_over_b1 and not a2_hi and not f_hi,
        12: f_hi,
    }
    return [k for k, v in preds.items() if v]


def region12(params: Params) -> int:
    """Index 1..12 of the region of the ``G_{4,2} >= 0`` territory containing ``params``.

    Rational thresholds (``(3/4)(1-rho) + (2/3)rho`` and ``1 - rho/3``) are
    compared exactly.  Irrational ones use certified signs; a sign that stays
    ambiguous only raises :class:`PredicateAmbiguous` if resolving it either
    way would change the answer.
    """
    if params.phi <= TWO_THIRDS:
        raise NotInPartition("the partition covers phi > 2/3 only")
    rho, phi = params.rho, params.phi
    mid = Fraction(3, 4) * (1 - rho) + Fraction(2, 3) * rho
    signs = _region_signs(params)
    if signs["G42"] is Sign.NEGATIVE:
        raise NotInPartition(f"G_4_2 < 0 at {params}")
    ambiguous = [k for k, s in signs.items() if s is Sign.ZERO_AMBIGUOUS]
    outcomes = set()
    for mask in range(2 ** len(ambiguous)):
        ge = {k: s is Sign.POSITIVE for k, s in signs.items()}
        for i, k in enumerate(ambiguous):
            ge[k] = bool(mask >> i & 1)
        if not ge["G42"]:
            outcomes.add(None)
            continue
        found = _matching_regions(ge, phi < mid, phi > mid, phi < 1 - rho / 3)
        outcomes.add(tuple(found))
    if len(outcomes) != 1:
        raise PredicateAmbiguous(f"region undecided at {params}: {sorted(map(str, outcomes))}")
    (found,) = outcomes
    if found is None:
        raise NotInPartition(f"G_4_2 = 0 at {params}")
    if len(found) != 1:
        raise PredicateAmbiguous(f"regions {list(found)} all match at {params}")
    return found[0]


# -- vertex mapping checks for the proved regions ----------------------------

@dataclass
class VertexReport:
    region: int
    checks: Dict[str, bool]

    @property
    def passed(self) -> bool:
        return all(self.checks.values())


def _vertex_points(params: Params, region: int) -> Dict[str, tuple]:
    """Named points whose images must land in ``Delta_ABBA`` (the images themselves)."""
    l1 = line_family(1, params)
    pi0 = params.pi.x0
    with params.working():
        P_AB = mat_mul(params.P_A, params.P_B)
        P_ABB = mat_mul(P_AB, params.P_B)
        one, zero = mpfr(1), mpfr(0)
        corner_pi0 = (pi0, zero, 1 - pi0)
        top = (pi0, 1 - pi0, zero)
        if region == 3:
            pts = {}
            for name, v in (("(pi0,0)", corner_pi0), ("(1,0)", (one, zero, zero)),
                            ("(pi0,1-pi0)", top)):
                pts[name] = v
                pts[f"{name}.PAPB^2"] = vec_mat(v, P_ABB)
            return pts
        b1v = (l1.b, zero, 1 - l1.b)
        if region == 9:
            c1v = (l1.c, 1 - l1.c, zero)
            return {
                "f": vec_mat((one, zero, zero), P_AB),
                "g": vec_mat(b1v, P_AB),
                "h": vec_mat(c1v, P_AB),
                "r": vec_mat(corner_pi0, P_ABB),
                "s": vec_mat(b1v, P_ABB),
                "t": vec_mat(c1v, P_ABB),
                "u": vec_mat(top, P_ABB),
            }
        a1v = (pi0, l1.a, 1 - pi0 - l1.a)
        return {
            "f": vec_mat((one, zero, zero), P_AB),
            "g": vec_mat(b1v, P_AB),
            "h": vec_mat(a1v, P_AB),
            "i": vec_mat(top, P_AB),
            "s": vec_mat(b1v, P_ABB),
            "t": vec_mat(a1v, P_ABB),
            "u": vec_mat(corner_pi0, P_ABB),
        }


def _vertex_margins(params: Params, region: int) -> Dict[str, Tuple[Real, Real, Real]]:
    # (x0 - pi0, l1 value, l2 value) for every point
    l1, l2 = line_family(1, params), line_family(2, params)
    pi0 = params.pi.x0
    with params.working():
        return {name: (v[0] - pi0, l1.value(v), l2.value(v))
                for name, v in _vertex_points(params, region).items()}


def check_theorem6_vertices(params: Params, region: int = None) -> VertexReport:
    """Check that the polygon vertices map into ``Delta_ABBA`` in regions 3, 9, 10, 11.

    Membership means ``x0 >= pi0`` and ``l1 < 0`` (and ``l2 <= 0`` in region
    3).  Several images sit exactly on ``x0 = pi0`` by construction, so each
    margin is evaluated at two precisions: a closed inequality passes unless
    it is certifiably violated, a strict one must be certified.
    """
    if region is None:
        region = region12(params)
    if region not in (3, 9, 10, 11):
        raise WrongRegion(f"vertex checks apply to regions 3, 9, 10, 11, not {region}")
    hi_params = params.with_bits(2 * params.bits)
    low = _vertex_margins(params, region)
    high = _vertex_margins(hi_params, region)
    checks = {}
    with hi_params.working():
        for name, (d0, v1, v2) in high.items():
            e0, e1, e2 = (abs(h - l) for h, l in zip((d0, v1, v2), low[name]))
            ok = certified_sign(d0, e0) is not Sign.NEGATIVE and \
                certified_sign(v1, e1) is Sign.NEGATIVE
            if region == 3:
                ok = ok and certified_sign(v2, e2) is not Sign.POSITIVE
            checks[name if region != 3 else f"{name} in ABBA"] = ok
    return VertexReport(region, checks)
