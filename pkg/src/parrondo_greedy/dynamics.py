"""The greedy map, trajectories, and detection of equilibria and limit cycles."""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, NamedTuple, Optional, Tuple

from .errors import NotInDeltaB, Undetected
from .model import Params, SimplexPoint, vec_mat
from .numerics import Sign, certified_sign, decide_sign, to_real

A, B = "A", "B"


@dataclass(frozen=True)
class GamePattern:
    """Eventual game pattern.

    ``kind`` is ``"B-forever"``, ``"1n"`` (one A then ``n`` B's) or
    ``"1n1n-2"`` (A, ``n`` B's, A, ``n-2`` B's).  Blocks of any other shape
    are kept as ``"other"`` with the raw letters in ``block`` so that they
    can be reported rather than silently dropped.
    """

    kind: str
    n: int = 0
    block: str = ""

    def __post_init__(self):
        if self.kind == "1n" and (self.n < 2 or self.n % 2):
            raise ValueError(f"[1,n] needs even n >= 2, got {self.n}")
        if self.kind == "1n1n-2" and (self.n < 4 or self.n % 2):
            raise ValueError(f"[1,n,1,n-2] needs even n >= 4, got {self.n}")
        if self.kind not in ("B-forever", "1n", "1n1n-2", "other"):
            raise ValueError(f"unknown pattern kind {self.kind!r}")

    @classmethod
    def one_n(cls, n: int) -> "GamePattern":
        return cls("1n", n)

    @classmethod
    def one_n_one_nm2(cls, n: int) -> "GamePattern":
        return cls("1n1n-2", n)

    @classmethod
    def b_forever(cls) -> "GamePattern":
        return cls("B-forever")

    @classmethod
    def parse(cls, text: str) -> "GamePattern":
        """Inverse of ``str()``: ``"[1,4]"``, ``"[1,6,1,4]"``, ``"B-forever"``."""
        text = text.strip()
        if text == "B-forever":
            return cls.b_forever()
        nums = [int(v) for v in re.findall(r"\d+", text)]
        if len(nums) == 2 and nums[0] == 1:
            return cls.one_n(nums[1])
        if len(nums) == 4 and nums[0] == nums[2] == 1 and nums[3] == nums[1] - 2:
            return cls.one_n_one_nm2(nums[1])
        raise ValueError(f"cannot parse game pattern {text!r}")

    @classmethod
    def from_block(cls, block: str) -> "GamePattern":
        """Recognise one period of letters that starts with ``A``."""
        runs = [len(r) for r in block.split(A)[1:]]
        if block.startswith(A):
            if len(runs) == 1 and runs[0] >= 2 and runs[0] % 2 == 0:
                return cls.one_n(runs[0])
            if len(runs) == 2 and runs[0] >= 4 and runs[0] % 2 == 0 and runs[1] == runs[0] - 2:
                return cls.one_n_one_nm2(runs[0])
        return cls("other", block=block)

    @property
    def period(self) -> int:
        if self.kind == "1n":
            return self.n + 1
        if self.kind == "1n1n-2":
            return 2 * self.n
        if self.kind == "other":
            return len(self.block)
        return 1

    @property
    def letters(self) -> str:
        """One period of letters, starting with A."""
        if self.kind == "1n":
            return A + B * self.n
        if self.kind == "1n1n-2":
            return A + B * self.n + A + B * (self.n - 2)
        if self.kind == "other":
            return self.block
        return B

    def __str__(self):
        if self.kind == "1n":
            return f"[1,{self.n}]"
        if self.kind == "1n1n-2":
            return f"[1,{self.n},1,{self.n - 2}]"
        if self.kind == "other":
            return f"other({self.block})"
        return "B-forever"


@dataclass
class Trajectory:
    states: List[SimplexPoint]
    games: List[str]
    params: Params

    def __len__(self):
        return len(self.games)

    @property
    def letters(self) -> str:
        return "".join(self.games)


@dataclass
class DetectedBehavior:
    kind: str  # "B-forever" or "cycle"
    pattern: GamePattern
    transient_length: int
    cycle_states: List[SimplexPoint] = field(default_factory=list)
    trajectory: Optional[Trajectory] = None

    def describe(self) -> str:
        if self.kind == "B-forever":
            return "B-forever equilibrium"
        return f"cycle {self.pattern}"


def _rotate_to_canonical(block: str) -> int:
    """Offset of the rotation of a periodic block that reads as a known pattern.

    For ``[1,n,1,n-2]`` the canonical start is the A before the longer run.
    """
    best = None
    for offset in range(len(block)):
        if block[offset] != A:
            continue
        rotated = block[offset:] + block[:offset]
        kind = GamePattern.from_block(rotated).kind
        if kind != "other":
            return offset
        if best is None:
            best = offset
    return best if best is not None else 0


def step(x: SimplexPoint, params: Params, tie_band=0) -> Tuple[SimplexPoint, str]:
    """One play of the greedy strategy: A if ``x0 >= pi0`` (ties go to A), else B.

    ``tie_band`` widens the tie; with the default 0 only exact equality at
    the working precision counts as a tie.
    """
    pi0 = params.pi.x0
    P_A, P_B = params.matrices
    with params.working():
        letter = A if certified_sign(x[0] - pi0, tie_band) is not Sign.NEGATIVE else B
        y = vec_mat(x, P_A if letter == A else P_B).normalized()
    return y, letter


def iterate(x0: SimplexPoint, params: Params, max_steps: int) -> Trajectory:
    """Apply :func:`step` ``max_steps`` times, recording states and letters."""
    if max_steps < 1:
        raise ValueError("max_steps must be at least 1")
    pi0 = params.pi.x0
    P_A, P_B = params.matrices
    states = [SimplexPoint(*x0)]
    games = []
    x = states[0]
    with params.working():
        for _ in range(max_steps):
            if x[0] >= pi0:
                games.append(A)
                x = vec_mat(x, P_A).normalized()
            else:
                games.append(B)
                x = vec_mat(x, P_B).normalized()
            states.append(x)
    return Trajectory(states, games, params)


def detect(
    x0: SimplexPoint,
    params: Params,
    budget: int = 10_000,
    run_length: int = 64,
    keep_trajectory: bool = False,
) -> DetectedBehavior:
    """Iterate the greedy map until an equilibrium or a limit cycle is recognised.

    B-forever: the last ``run_length`` letters are B and the state is within
    ``cycle_eps`` of pi.  Cycle: a letter period ``p <= budget // 4`` repeats
    twice in a row with every state matching its counterpart one period
    later within ``cycle_eps``.  Raises :class:`Undetected` otherwise.
    """
    if budget < 1:
        raise ValueError("budget must be at least 1")
    pi = params.pi
    pi0 = pi.x0
    P_A, P_B = params.matrices
    max_period = max(1, budget // 4)
    with params.working():
        eps = to_real(params.precision.cycle_eps, params.bits)
        x = SimplexPoint(*x0)
        states = [x]
        games: List[str] = []
        a_positions: List[int] = []
        last_a = -1
        for t in range(budget):
            if x[0] >= pi0:
                letter = A
            else:
                letter = B
            if letter == A:
                hit = _cycle_ending_at(t, states, games, a_positions, eps, max_period)
                if hit is not None:
                    traj = Trajectory(states, games, params) if keep_trajectory else None
                    return _cycle_behavior(t, hit, states, games, eps, traj)
                a_positions.append(t)
                last_a = t
                x = vec_mat(x, P_A).normalized()
            else:
                if t - last_a >= run_length and x.distance(pi) < eps:
                    traj = Trajectory(states, games, params) if keep_trajectory else None
                    return DetectedBehavior("B-forever", GamePattern.b_forever(), last_a + 1, [], traj)
                x = vec_mat(x, P_B).normalized()
            games.append(letter)
            states.append(x)
    raise Undetected(
        f"no equilibrium or cycle within {budget} steps at {params}",
        Trajectory(states, games, params),
    )


def _cycle_ending_at(t, states, games, a_positions, eps, max_period) -> Optional[int]:
    """Smallest period p such that the two periods ending at step t coincide."""
    xt = states[t]
    for prev in reversed(a_positions):
        p = t - prev
        if p > max_period or t - 2 * p < 0:
            break
        if states[prev].distance(xt) >= eps:
            continue
        if games[t - 2 * p:t - p] != games[t - p:t]:
            continue
        if all(states[s].distance(states[s + p]) < eps for s in range(t - 2 * p, t - p + 1)):
            return p
    return None


def _cycle_behavior(t, p, states, games, eps, traj) -> DetectedBehavior:
    start = t - 2 * p
    while start > 0 and games[start - 1] == games[start - 1 + p] and \
            states[start - 1].distance(states[start - 1 + p]) < eps:
        start -= 1
    block = "".join(games[start:start + p])
    offset = _rotate_to_canonical(block)
    pattern = GamePattern.from_block(block[offset:] + block[:offset])
    first = start + offset
    return DetectedBehavior("cycle", pattern, start, list(states[first:first + p]), traj)


# -- the set of states from which B is played forever ----------------------

class BForeverMembership(NamedTuple):
    member: bool
    case: int


def _sign_vs(params: Params, which: str) -> Sign:
    def value(bits):
        q = params.with_bits(bits)
        with q.working():
            return q.phi_r - getattr(q.spectral, which)
    return decide_sign(value, params.bits)


def phi_case(params: Params) -> int:
    """Which of the seven bands of ``phi`` (eigenvalue sign patterns) applies.

    1: phi < phi1, 2: phi = phi1, 3: phi1 < phi < 2/3, 4: phi = 2/3,
    5: 2/3 < phi < phi2, 6: phi = phi2, 7: phi > phi2.  Equality with the
    irrational thresholds means "undecidable at the precision cap".
    """
    two_thirds = Fraction(2, 3)
    if params.phi == two_thirds:
        return 4
    if params.phi < two_thirds:
        s = _sign_vs(params, "phi1")
        return {Sign.NEGATIVE: 1, Sign.ZERO_AMBIGUOUS: 2, Sign.POSITIVE: 3}[s]
    s = _sign_vs(params, "phi2")
    return {Sign.NEGATIVE: 5, Sign.ZERO_AMBIGUOUS: 6, Sign.POSITIVE: 7}[s]


def eq4_coefficients(x: SimplexPoint, params: Params) -> Tuple:
    """``(c1, c2)`` with ``pi0 - x0(n) = c1 e1**n - c2 e2**n`` under game B."""
    sd = params.spectral
    r = params.rho_r
    with params.working():
        q = 1 + r * r
        d0, d1 = x[0] - sd.pi.x0, x[1] - sd.pi.x1
        c1 = q / (2 * sd.S) * ((1 - sd.S / q) * d0 + 2 * d1)
        c2 = q / (2 * sd.S) * ((1 + sd.S / q) * d0 + 2 * d1)
    return c1, c2


def in_b_forever(x: SimplexPoint, params: Params) -> BForeverMembership:
    """Whether game B is played forever from ``x`` (which must be in Delta_B)."""
    sd = params.spectral
    if x[0] >= sd.pi.x0:
        raise NotInDeltaB(f"x0={x[0]} is not below pi0={sd.pi.x0}")
    case = phi_case(params)
    r, phi = params.rho_r, params.phi_r
    with params.working():
        q = 1 + r * r
        d0, d1 = x[0] - sd.pi.x0, x[1] - sd.pi.x1
        if case == 1:
            return BForeverMembership((1 - sd.S / q) * d0 + 2 * d1 >= 0, 1)
        if case == 2:
            return BForeverMembership((1 - sd.S / q) * d0 + 2 * d1 > 0, 2)
        if case == 3:
            k = 1 + (3 * phi - 2) * (1 + r) / (phi * (1 - r))
            return BForeverMembership(k * d0 + 2 * d1 > 0, 3)
        if case == 4:
            return BForeverMembership(d0 + 2 * d1 > 0, 4)
        if case == 5:
            value = (1 + sd.S / q) * d0 + 2 * d1
            band = to_real(params.precision.compare_eps, params.bits)
            return BForeverMembership(certified_sign(value, band) is Sign.ZERO_AMBIGUOUS, 5)
    return BForeverMembership(False, case)
