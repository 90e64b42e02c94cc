"""Coarse text maps of the parameter plane.

The first map zooms into 2/3 < phi < 0.72, where the cycle changes: each
cell shows n for a [1,n] cycle (mod 10), '*' where two cycles coexist and
'x' for a [1,n,1,n-2] cycle alone.  The second map covers 2/3 < phi < 1 and
shows which of the twelve regions of the [1,2] territory a point lies in
(1-9, then a, b, c for 10-12; blank outside).  The CLI's regionmap command
writes the same data as CSV.
"""
from fractions import Fraction

from parrondo_greedy import NotInPartition, Params, classify, region12

COLS = 60


def cell_cycle(rho, phi):
    c = classify(Params.of(rho, phi), with_region=False)
    if len(c.cycles) == 2:
        return "*"
    (pattern,) = c.cycles
    return str(pattern.n % 10) if pattern.kind == "1n" else "x"


def cell_region(rho, phi):
    try:
        return "123456789abc"[region12(Params.of(rho, phi)) - 1]
    except NotInPartition:
        return " "


for title, lo, hi, rows, cell in (
    ("cycles, 2/3 < phi < 0.72", Fraction(2, 3), Fraction(72, 100), 20, cell_cycle),
    ("regions, 2/3 < phi < 1", Fraction(2, 3), Fraction(1), 24, cell_region),
):
    print(title)
    for i in range(rows, 0, -1):
        phi = lo + (hi - lo) * Fraction(2 * i - 1, 2 * rows)
        line = "".join(cell(Fraction(j, COLS), phi) for j in range(1, COLS))
        print(f"{float(phi):.4f} {line}")
    print("       rho ->\n")
