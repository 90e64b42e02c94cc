"""Why double precision is not enough at rho=1/3, phi=1/2.

With phi <= 2/3 greedy play should settle into game B forever, converging to
pi = (5/13, 2/13, 6/13).  Near pi the decision x0 >= pi0 compares two nearly
equal numbers, so rounding can flip it.  We run the same start at several
precisions and look at what each one concludes.
"""
from fractions import Fraction

from parrondo_greedy import Params, SimplexPoint, detect, iterate

for bits in (53, 128, 256, 512):
    params = Params.of("1/3", "1/2", bits=bits)
    start = SimplexPoint.from_values(Fraction(1, 3), Fraction(1, 3), bits)
    found = detect(start, params, keep_trajectory=True)
    last = found.trajectory.states[-1]
    with params.working():
        gap = float(last.distance(params.pi))
    print(f"{bits:4d} bits: {found.describe()} after {len(found.trajectory.games)} turns, |x - pi| = {gap:.1e}")

# Keep playing long after convergence.  Once x0 equals pi0 to the last bit the
# tie rule plays A, so a long raw run shows a few isolated A turns.  detect()
# stops well before that point.
params = Params.of("1/3", "1/2")
traj = iterate(SimplexPoint.from_values(Fraction(1, 3), Fraction(1, 3), 256), params, 500)
print("A turns in a 500-turn raw run at 256 bits:",
      [t for t, g in enumerate(traj.games) if g == "A"][:10])
