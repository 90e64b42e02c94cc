"""Average profit per turn: each game alone earns nothing, greedy play earns.

Game A only moves money between players and game B is fair at its own
equilibrium, yet the greedy switching between them wins on average.
"""
from parrondo_greedy import GamePattern, Params, classify, cycle_stationary, iterate
from parrondo_greedy.profit import empirical_profit, mu_b_forever, mu_for

print("phi    cycle        closed form      simulated (30000 turns)")
for phi in ("1", "0.9", "0.8", "0.7", "0.68804", "0.675"):
    params = Params.of("1/3", phi)
    for pattern in classify(params, with_region=False).cycles:
        mu = mu_for(pattern, params)
        start = cycle_stationary(pattern, params)
        turns = 30_000 - 30_000 % pattern.period
        sim = empirical_profit(iterate(start, params, turns))
        print(f"{phi:6s} {str(pattern):12s} {float(mu):.12f}   {float(sim):.12f}")

print("\nphi=1/2, B forever:", mu_b_forever(Params.of("1/3", "1/2")))
