from fractions import Fraction

import pytest
from gmpy2 import mpfr
from hypothesis import given

from parrondo_greedy.classifier import classify, cycle_stationary
from parrondo_greedy.dynamics import A, GamePattern, Trajectory, iterate
from parrondo_greedy.errors import NotACycle
from parrondo_greedy.model import Params, SimplexPoint
from parrondo_greedy.profit import (empirical_profit, mu_b_forever, mu_cycle_1n,
                                    mu_cycle_1n1nm2, mu_cycle_1n1nm2_matrix,
                                    mu_cycle_1n_matrix, mu_for, pi_zeta, zeta)

from .strategies import fractions_in, low_phis, rhos

TWO_FORMS = mpfr(2) ** -200

# measured once and cross-checked by the matrix form and by simulation
KNOWN = [
    ("1", GamePattern.one_n(2), "0.0678632622679"),
    ("0.7", GamePattern.one_n(2), "0.0326393"),
    ("0.68804", GamePattern.one_n_one_nm2(4), "0.0240365"),
    ("0.675", GamePattern.one_n(6), "0.0136927"),
]


def test_b_forever_profit_is_zero():
    p = Params.of("1/3", 1)
    assert mu_b_forever(p) == 0
    with p.working():
        assert abs(pi_zeta(p)) < mpfr(2) ** -240
    assert mu_b_forever(Params.of("0.9", "0.1")) == 0


@given(rhos, low_phis)
def test_game_b_is_fair_at_its_equilibrium(rho, phi):
    p = Params.of(rho, phi)
    with p.working():
        assert abs(pi_zeta(p)) < mpfr(2) ** -240


def test_zeta_signs():
    z = zeta(Params.of("1/3", "0.9"))
    # capital divisible by three uses the unfavourable coin
    assert z[0] < 0 < z[1] and z[1] == z[2]


@pytest.mark.parametrize("phi,pattern,value", KNOWN)
def test_known_profits(phi, pattern, value):
    p = Params.of("1/3", phi)
    mu = mu_for(pattern, p)
    assert mu > 0
    assert abs(float(mu) - float(value)) < 10 ** -(len(value) - 2)


@pytest.mark.parametrize("phi,pattern,value", KNOWN)
def test_closed_form_matches_direct_sum(phi, pattern, value):
    p = Params.of("1/3", phi)
    if pattern.kind == "1n":
        a, b = mu_cycle_1n(pattern.n, p), mu_cycle_1n_matrix(pattern.n, p)
    else:
        a, b = mu_cycle_1n1nm2(pattern.n, p), mu_cycle_1n1nm2_matrix(pattern.n, p)
    with p.working():
        assert abs(a - b) < TWO_FORMS


@given(rhos, fractions_in("0.7", 1, 10**4))
def test_predicted_cycles_have_positive_profit(rho, phi):
    # each game alone earns nothing; the greedy mixture earns on every predicted cycle
    p = Params.of(rho, phi)
    c = classify(p, with_region=False)
    for pattern in c.cycles:
        mu = mu_for(pattern, p)
        assert mu > 0
        if pattern.kind == "1n":
            with p.working():
                assert abs(mu - mu_cycle_1n_matrix(pattern.n, p)) < TWO_FORMS


def test_parrondo_effect_on_grid():
    for i in range(1, 10):
        for j in range(1, 10):
            rho, phi = Fraction(i, 10), Fraction(2, 3) + Fraction(j, 30)
            p = Params.of(rho, phi)
            c = classify(p, with_region=False)
            assert c.regime == "cycles"
            assert all(mu_for(pat, p) > 0 for pat in c.cycles)
            # B alone is fair, A alone moves no money
            assert mu_b_forever(p) == 0


def test_empirical_profit_on_the_short_cycle():
    p = Params.of("1/3", 1)
    pat = GamePattern.one_n(2)
    traj = iterate(cycle_stationary(pat, p), p, 30_000)
    with p.working():
        assert abs(empirical_profit(traj) - mu_cycle_1n(2, p)) < mpfr("1e-10")


def test_empirical_profit_on_the_double_cycle():
    p = Params.of("1/3", "0.68804")
    pat = GamePattern.one_n_one_nm2(4)
    traj = iterate(cycle_stationary(pat, p), p, 50_000)
    assert traj.letters[:8] == pat.letters
    with p.working():
        assert abs(empirical_profit(traj) - mu_cycle_1n1nm2(4, p)) < mpfr("1e-8")


@pytest.mark.parametrize("phi,pattern,value", KNOWN)
def test_one_period_equals_closed_form(phi, pattern, value):
    p = Params.of("1/3", phi)
    traj = iterate(cycle_stationary(pattern, p), p, pattern.period)
    with p.working():
        assert abs(empirical_profit(traj) - mu_for(pattern, p)) < mpfr(2) ** -(p.bits // 4)


def test_cesaro_averages_settle():
    # from an arbitrary start the running average approaches the cycle value
    p = Params.of("1/3", 1)
    mu = mu_cycle_1n(2, p)
    x = SimplexPoint.from_values(Fraction(1, 10), Fraction(7, 10), p.bits)
    traj = iterate(x, p, 100_000)
    gaps = []
    for T in (1_000, 10_000, 100_000):
        part = Trajectory(traj.states[:T], traj.games[:T], p)
        with p.working():
            gaps.append(abs(empirical_profit(part) - mu))
    assert gaps[0] > gaps[1] > gaps[2]
    assert gaps[2] < mpfr("1e-5")


def test_all_a_and_b_forever_trajectories_earn_nothing():
    p = Params.of("1/3", "1/2")
    x = SimplexPoint.from_values(Fraction(1, 2), Fraction(1, 4), p.bits)
    all_a = Trajectory([x] * 10, [A] * 10, p)
    assert empirical_profit(all_a) == 0
    # x0 = pi0 exactly is a tie and plays A, so hold B at pi by hand
    at_pi = Trajectory([p.pi] * 50, ["B"] * 50, p)
    with p.working():
        assert abs(empirical_profit(at_pi)) < mpfr(2) ** -200


def test_empty_trajectory_rejected():
    p = Params.of("1/3", 1)
    with pytest.raises(ValueError):
        empirical_profit(Trajectory([], [], p))


def test_not_a_cycle():
    p = Params.of("1/3", "0.7")
    with pytest.raises(NotACycle):
        mu_cycle_1n(4, p)
    with pytest.raises(NotACycle):
        mu_cycle_1n1nm2(4, p)
    with pytest.raises(NotACycle):
        mu_for(GamePattern.parse("[1,2]"), Params.of("1/3", "0.5"))
    # unchecked evaluation is still available
    assert mu_cycle_1n(4, p, check=False) is not None
