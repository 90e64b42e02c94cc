"""Greedy play of the mean-field Parrondo games A and B at arbitrary precision.

A population of players shares capitals modulo 3; each turn a fraction
``phi`` of them plays the game (A or B) with the larger expected profit.
The package computes the resulting dynamics, predicts equilibria and limit
cycles from closed forms, and checks the predictions by simulation.
"""
from .classifier import (Classification, Curve, boundary_root, check_theorem6_vertices, classify,
                         cycle_exists, cycle_stationary, find_s, line_family, region12, table2)
from .dynamics import DetectedBehavior, GamePattern, Trajectory, detect, in_b_forever, iterate, step
from .errors import (BadIndex, BoundaryAmbiguous, DegenerateSpectrum, NoSignChange, NotACycle,
                     NotInDeltaB, NotInPartition, ParrondoError, PredicateAmbiguous, SNotFound,
                     Undetected, WrongRegion)
from .model import Params, SimplexPoint, power_A, power_B, spectral, stationary
from .numerics import PrecisionConfig, Sign, certified_sign, decide_sign
from .oracle import sweep, verify_cycle_from_stationary
from .profit import empirical_profit, mu_b_forever, mu_cycle_1n, mu_cycle_1n1nm2, zeta

__version__ = "0.1.0"
