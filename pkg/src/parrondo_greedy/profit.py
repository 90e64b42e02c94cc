"""Long-run average profit per turn of greedy play.

Every turn counts, A-turns included (they contribute zero), and the
per-turn profit of game B is scaled by ``phi``, the fraction of players
who actually play.
"""
from __future__ import annotations

from typing import Tuple

from gmpy2 import mpfr

from .classifier import D, E, G, H, I, cycle_exists, cycle_stationary
from .dynamics import A, GamePattern, Trajectory
from .errors import NotACycle
from .model import Params, vec_mat
from .numerics import Real


def zeta(params: Params) -> Tuple[Real, Real, Real]:
    """Expected one-play profit of game B from capital 0, 1, 2 (mod 3)."""
    sd = params.spectral
    with params.working():
        return 2 * sd.p0 - 1, 2 * sd.p1 - 1, 2 * sd.p1 - 1


def _dot(x, z) -> Real:
    return x[0] * z[0] + x[1] * z[1] + x[2] * z[2]


def pi_zeta(params: Params) -> Real:
    """``phi * pi . zeta`` as computed; zero up to rounding since game B is fair at pi."""
    with params.working():
        return params.phi_r * _dot(params.pi, zeta(params))


def mu_b_forever(params: Params) -> Real:
    """Average profit when B is played forever: exactly 0.

    The identity ``pi . zeta = 0`` is checked at working precision first.
    """
    residual = pi_zeta(params)
    if abs(residual) > mpfr(2) ** (16 - params.bits):
        raise ArithmeticError(f"pi.zeta = {residual} does not vanish at {params}")
    return mpfr(0)


def _require(pattern: GamePattern, params: Params):
    if not cycle_exists(pattern, params):
        raise NotACycle(f"{pattern} is not a cycle at {params}")


def mu_cycle_1n(n: int, params: Params, check: bool = True) -> Real:
    """Average profit along the ``[1,n]`` cycle, via ``E_{n,m} / D_n``."""
    if check:
        _require(GamePattern.one_n(n), params)
    sd = params.spectral
    terms = [E(n, params, m) for m in range(n)]
    d = D(n, params)
    with params.working():
        total = sum(terms, mpfr(0)) / d
        return 2 * params.phi_r / (n + 1) * (sd.p0 - sd.p1) * total


def mu_cycle_1n_matrix(n: int, params: Params) -> Real:
    """Same quantity summed directly: ``phi/(n+1) pi_c P_A (I + ... + P_B^(n-1)) zeta``."""
    x = cycle_stationary(GamePattern.one_n(n), params)
    z = zeta(params)
    with params.working():
        y = vec_mat(x, params.P_A)
        total = mpfr(0)
        for _ in range(n):
            total += _dot(y, z)
            y = vec_mat(y, params.P_B)
        return params.phi_r / (n + 1) * total


def mu_cycle_1n1nm2(n: int, params: Params, check: bool = True) -> Real:
    """Average profit along the ``[1,n,1,n-2]`` cycle, via the G and H sums over ``I_n``."""
    if check:
        _require(GamePattern.one_n_one_nm2(n), params)
    sd = params.spectral
    g_terms = [G(n, m, params) for m in range(n)]
    h_terms = [H(n, m, params) for m in range(n - 2)]
    i_n = I(n, params)
    with params.working():
        scale = params.phi_r / n * (sd.p0 - sd.p1)
        return scale * sum(g_terms, mpfr(0)) / i_n + scale * sum(h_terms, mpfr(0)) / i_n


def mu_cycle_1n1nm2_matrix(n: int, params: Params) -> Real:
    """Direct sum of the per-turn profits over one period, divided by ``2n``."""
    x = cycle_stationary(GamePattern.one_n_one_nm2(n), params)
    z = zeta(params)
    with params.working():
        total = mpfr(0)
        y = vec_mat(x, params.P_A)
        for _ in range(n):
            total += _dot(y, z)
            y = vec_mat(y, params.P_B)
        y = vec_mat(y, params.P_A)
        for _ in range(n - 2):
            total += _dot(y, z)
            y = vec_mat(y, params.P_B)
        return params.phi_r / (2 * n) * total


def mu_for(pattern: GamePattern, params: Params, check: bool = True) -> Real:
    if pattern.kind == "B-forever":
        return mu_b_forever(params)
    if pattern.kind == "1n":
        return mu_cycle_1n(pattern.n, params, check)
    if pattern.kind == "1n1n-2":
        return mu_cycle_1n1nm2(pattern.n, params, check)
    raise NotACycle(f"no closed form for {pattern}")


def empirical_profit(traj: Trajectory) -> Real:
    """Average over the played turns of the expected per-turn profit.

    ``traj.states[t]`` is the state before turn ``t``; A-turns add zero.
    """
    if not traj.games:
        raise ValueError("empty trajectory")
    params = traj.params
    z = zeta(params)
    with params.working():
        total = mpfr(0)
        for x, letter in zip(traj.states, traj.games):
            if letter != A:
                total += _dot(x, z)
        return params.phi_r * total / len(traj.games)
