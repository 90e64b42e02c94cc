"""Brute-force cross-checks of the analytical predictions against simulation."""
from __future__ import annotations

from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from .classifier import classify, cycle_stationary
from .dynamics import GamePattern, detect, iterate
from .errors import ParrondoError, Undetected, WrongRegion
from .model import Params, SimplexPoint
from .numerics import PrecisionConfig, parse_rational, to_real


@dataclass
class CycleReport:
    pattern: str
    passed: bool
    detected: Optional[str] = None
    transient_length: Optional[int] = None
    divergence_step: Optional[int] = None  # first turn whose letter leaves the pattern
    max_state_gap: Optional[float] = None
    message: str = ""


def _divergence(x: SimplexPoint, pattern: GamePattern, params: Params, periods: int = 4) -> Optional[int]:
    expected = pattern.letters * periods
    played = iterate(x, params, len(expected)).letters
    for t, (a, b) in enumerate(zip(expected, played)):
        if a != b:
            return t
    return None


def verify_cycle_from_stationary(params: Params, pattern: GamePattern,
                                 budget: int = 10_000) -> CycleReport:
    """Start at the stationary state of ``pattern`` and check that play follows it.

    The pattern must be one that :func:`classify` predicts at ``params``;
    otherwise :class:`WrongRegion` is raised.
    """
    predicted = classify(params, with_region=False)
    if pattern not in predicted.cycles:
        raise WrongRegion(f"{pattern} is not predicted at {params} ({predicted.regime})")
    x = cycle_stationary(pattern, params)
    report = CycleReport(str(pattern), False)
    report.divergence_step = _divergence(x, pattern, params)
    try:
        found = detect(x, params, budget=budget)
    except Undetected as exc:
        report.message = str(exc)
        return report
    report.detected = str(found.pattern)
    report.transient_length = found.transient_length
    if found.cycle_states:
        with params.working():
            report.max_state_gap = float(found.cycle_states[0].distance(x))
    report.passed = (found.pattern == pattern and found.transient_length == 0
                     and report.divergence_step is None)
    if not report.passed:
        report.message = f"expected {pattern} from its stationary state, saw {found.describe()}"
    return report


# -- random sweeps -----------------------------------------------------------

def random_simplex_points(rng: np.random.Generator, count: int) -> List[Tuple[Fraction, Fraction]]:
    """Uniform points of the simplex as exact ``(x0, x1)`` via sorted uniform gaps."""
    out = []
    for u in np.sort(rng.random((count, 2)), axis=1):
        a, b = Fraction(float(u[0])), Fraction(float(u[1]))
        out.append((a, b - a))
    return out


def _behaviour_label(found) -> str:
    return "B-forever" if found.kind == "B-forever" else str(found.pattern)


def _sweep_point(args) -> dict:
    rho, phi, starts, budget, seed_state, bits, index = args
    params = Params(rho, phi, PrecisionConfig.scaled(bits))
    rng = np.random.default_rng(seed_state)
    point = {"rho": str(rho), "phi": str(phi), "expected": [], "observed": {},
             "agreements": 0, "disagreements": 0, "undetected": 0,
             "missing_expected": [], "findings": [], "error": None}
    try:
        c = classify(params, with_region=False)
    except ParrondoError as exc:
        point["error"] = f"{type(exc).__name__}: {exc}"
        return point
    expected = ["B-forever"] if c.regime == "GAS-equilibrium" else [str(p) for p in c.cycles]
    point["expected"] = expected
    seen = Counter()
    for k, (x0, x1) in enumerate(random_simplex_points(rng, starts)):
        x = SimplexPoint.from_values(x0, x1, bits)
        try:
            label = _behaviour_label(detect(x, params, budget=budget))
        except Undetected:
            point["undetected"] += 1
            seen["undetected"] += 1
            point["findings"].append(_finding("undetected", rho, phi, x0, x1, bits, index, k, None))
            continue
        seen[label] += 1
        if label in expected:
            point["agreements"] += 1
        else:
            point["disagreements"] += 1
            point["findings"].append(_finding("disagreement", rho, phi, x0, x1, bits, index, k, label))
    point["observed"] = dict(sorted(seen.items()))
    point["missing_expected"] = [e for e in expected if e not in seen]
    return point


def _finding(kind, rho, phi, x0, x1, bits, index, k, label) -> dict:
    # enough to replay the start exactly
    return {"kind": kind, "rho": str(rho), "phi": str(phi), "x0": str(x0), "x1": str(x1),
            "bits": bits, "grid_index": index, "start_index": k, "observed": label}


def sweep(grid: Sequence[Tuple], starts_per_point: int = 100, budget: int = 10_000,
          seed: int = 0, workers: int = 1, bits: int = 256) -> dict:
    """Run greedy play from random starts at every grid point and compare with classify.

    The result is plain JSON-able data.  Each grid point gets its own child
    seed, so the summary does not depend on ``workers``.
    """
    if not grid:
        raise ValueError("grid must be nonempty")
    points = [(parse_rational(r), parse_rational(p)) for r, p in grid]
    seeds = np.random.SeedSequence(seed).spawn(len(points))
    jobs = [(r, p, starts_per_point, budget, s, bits, i) for i, ((r, p), s) in enumerate(zip(points, seeds))]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_sweep_point, jobs))
    else:
        results = [_sweep_point(j) for j in jobs]
    summary = {
        "seed": seed, "bits": bits, "budget": budget, "starts_per_point": starts_per_point,
        "agreements": sum(r["agreements"] for r in results),
        "disagreements": sum(r["disagreements"] for r in results),
        "undetected": sum(r["undetected"] for r in results),
        "points": results,
    }
    summary["findings"] = [f for r in results for f in r["findings"]]
    return summary
