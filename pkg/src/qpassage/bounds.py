"""Orthogonalization time bounds: Fleming, two-level Delta-E, Margolus-Levitin."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

from .errors import EvenK, NotTwoLevelEqual
from .state import EnergyState, energy_dispersion, is_equal_two_level

EQUAL_WEIGHT_TOL = 1e-9


@dataclass(frozen=True)
class BoundsReport:
    delta_h: float
    fleming: float
    delta_e_passage: Optional[float]
    margolus_levitin: float
    # margolus_levitin <= fleming; both infinite counts as true
    ml_never_sharper: bool


def fleming_bound(state: EnergyState) -> float:
    """pi*hbar / (2 Delta H), or ``math.inf`` for an energy eigenstate."""
    dh = energy_dispersion(state)
    if dh == 0.0:
        return math.inf
    return math.pi * state.hbar / (2.0 * dh)


def _pair_gap(state: EnergyState) -> float:
    if not is_equal_two_level(state, EQUAL_WEIGHT_TOL):
        raise NotTwoLevelEqual(
            f"need two occupied levels of weight 1/2, got probabilities "
            f"{state.probabilities.round(12).tolist()}")
    E, _ = state.support()
    return float(E[1] - E[0])


def two_level_passage(state: EnergyState) -> float:
    """Exact passage time pi*hbar/Delta E of an equal-weight two-level state."""
    return math.pi * state.hbar / _pair_gap(state)


def passage_time_family(state: EnergyState, k: int) -> float:
    """The k-th orthogonality time pi*hbar*k/Delta E, k odd."""
    if int(k) != k or k < 1:
        raise ValueError(f"k must be a positive odd integer, got {k}")
    if k % 2 == 0:
        raise EvenK(f"k={k} is even; the state returns to itself at even multiples")
    return math.pi * state.hbar * int(k) / _pair_gap(state)


def margolus_levitin_bound(state: EnergyState) -> float:
    """pi*hbar / (2E) with E the mean energy above the lowest eigenvalue.

    The spectrum is shifted so that its smallest level sits at zero before the
    mean is taken; a state entirely on that level gives ``math.inf``.
    """
    p = state.probabilities
    e_shifted = float((p * (state.energies - state.energies[0])).sum())
    if e_shifted <= 0.0:
        return math.inf
    return math.pi * state.hbar / (2.0 * e_shifted)


def bounds_report(state: EnergyState) -> BoundsReport:
    fl = fleming_bound(state)
    ml = margolus_levitin_bound(state)
    de = two_level_passage(state) if is_equal_two_level(state, EQUAL_WEIGHT_TOL) else None
    return BoundsReport(
        delta_h=energy_dispersion(state),
        fleming=fl,
        delta_e_passage=de,
        margolus_levitin=ml,
        ml_never_sharper=bool(ml <= fl * (1 + 1e-12)),
    )
