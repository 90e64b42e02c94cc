"""Walk down in phi at rho=1/3 and watch the limit cycle change.

Above the G_4_2 curve the greedy strategy plays [1,2] (one A, two B's).
Lower down the runs of B get longer, and between neighbouring bands there
are thin slices where two cycles coexist.
"""
from parrondo_greedy import Params, classify, table2, verify_cycle_from_stationary

print("critical values of phi at rho = 1/3")
for label, root, forms in table2(18):
    print(f"  {label:6s} {root.truncated()}   cycles just above: {forms}")

print()
for phi in ("0.9", "0.7", "0.6880664", "0.68804", "0.68802689", "0.68", "0.677218", "0.675", "0.6"):
    params = Params.of("1/3", phi)
    c = classify(params, with_region=False)
    if c.regime == "GAS-equilibrium":
        print(f"phi={phi:11s} game B forever, equilibrium at pi")
        continue
    checks = [verify_cycle_from_stationary(params, p).passed for p in c.cycles]
    print(f"phi={phi:11s} {c.cycle_labels():18s} band {c.band:28s} simulated from stationary: {checks}")
