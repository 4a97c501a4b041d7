"""Simultaneous passage for a probabilistic mixture of two-level states.

Each member is an equal-weight superposition of two levels and is orthogonal
to itself exactly at the odd multiples of pi*hbar/omega_m. The mixture passes
when one time is an odd multiple for every member at once. Writing all
frequencies as omega_m = g*n_m with coprime integers n_m, that happens iff
every n_m is odd, and the first such time is pi*hbar/g, which equals
pi*hbar*LCM(1/omega_m). If some n_m is even no such time exists (parity
obstruction), even though the LCM is still defined.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from .bounds import EQUAL_WEIGHT_TOL
from .errors import DimensionMismatch, IncommensurateEnsemble, NotTwoLevelEqual
from .rational import DEFAULT_MAX_DEN, DEFAULT_TOL, approximate_rational, fraction_gcd
from .state import EnergyState, is_equal_two_level, make_state, survival_amplitude

DEFAULT_K_MAX = 10**4

PARITY_OBSTRUCTION = "parity obstruction"
INCOMMENSURATE = "incommensurate"
BEYOND_K_MAX = "beyond k_max"


@dataclass(frozen=True)
class Ensemble:
    weights: tuple[float, ...]
    states: tuple[EnergyState, ...]

    @property
    def hbar(self) -> float:
        return self.states[0].hbar

    @property
    def members(self) -> list[tuple[float, EnergyState]]:
        return list(zip(self.weights, self.states))

    def frequencies(self) -> list[float]:
        return [float(s.support()[0][1] - s.support()[0][0]) for s in self.states]


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    entries: np.ndarray
    energies: np.ndarray
    hbar: float = 1.0


@dataclass(frozen=True)
class EnsemblePassage:
    time: Optional[float]
    reason: Optional[str]
    # odd multiple k_m reached by each member at ``time``
    multiples: Optional[tuple[int, ...]] = None


def make_ensemble(members: Sequence[tuple[float, EnergyState]]) -> Ensemble:
    """Validate members and normalize weights to unit sum."""
    if not members:
        raise ValueError("ensemble needs at least one member")
    weights = np.array([float(w) for w, _ in members])
    states = tuple(s for _, s in members)
    if np.any(~np.isfinite(weights)) or np.any(weights <= 0):
        raise ValueError(f"weights must be positive, got {weights.tolist()}")
    for i, s in enumerate(states):
        if not is_equal_two_level(s, EQUAL_WEIGHT_TOL):
            raise NotTwoLevelEqual(f"member {i} is not an equal-weight two-level state")
    if len({s.hbar for s in states}) != 1:
        raise ValueError("all members must share the same hbar")
    weights = weights / weights.sum()
    return Ensemble(tuple(float(w) for w in weights), states)


def two_level_member(e_a: float, e_b: float, phase: float = 0.0,
                     hbar: float = 1.0) -> EnergyState:
    """(|E_a> + e^{i phase}|E_b>)/sqrt 2."""
    return make_state([e_a, e_b], [1.0, np.exp(1j * phase)], hbar)


def ensemble_passage(ens: Ensemble, tol: float = DEFAULT_TOL,
                     max_den: int = DEFAULT_MAX_DEN,
                     k_max: int = DEFAULT_K_MAX) -> EnsemblePassage:
    """First time every member is orthogonal to its initial state, with the reason if none.

    Raises :class:`IncommensurateEnsemble` when a frequency ratio has no
    rational approximation within ``(tol, max_den)``.
    """
    omegas = ens.frequencies()
    base = omegas[0]
    fracs = []
    for i, w in enumerate(omegas):
        r = approximate_rational(w / base, tol, max_den)
        if r is None:
            raise IncommensurateEnsemble(
                f"frequency ratio omega_{i}/omega_0 = {w / base!r} is not rational "
                f"within tol={tol}, max_den={max_den}")
        fracs.append(Fraction(*r))
    g = fraction_gcd(fracs)
    harmonics = [int(f / g) for f in fracs]
    if any(n % 2 == 0 for n in harmonics):
        return EnsemblePassage(None, PARITY_OBSTRUCTION)
    if max(harmonics) > k_max:
        return EnsemblePassage(None, BEYOND_K_MAX)
    time = math.pi * ens.hbar / (base * float(g))
    return EnsemblePassage(time, None, tuple(harmonics))


def ensemble_passage_time(ens: Ensemble, tol: float = DEFAULT_TOL,
                          max_den: int = DEFAULT_MAX_DEN,
                          k_max: int = DEFAULT_K_MAX) -> Optional[float]:
    return ensemble_passage(ens, tol, max_den, k_max).time


def density_matrix(ens: Ensemble) -> DensityMatrix:
    """Weighted sum of member projectors on the union of their energy levels."""
    levels = np.unique(np.concatenate([s.energies for s in ens.states]))
    rho = np.zeros((levels.size, levels.size), dtype=complex)
    for w, s in ens.members:
        v = np.zeros(levels.size, dtype=complex)
        v[np.searchsorted(levels, s.energies)] = s.amplitudes
        rho += w * np.outer(v, v.conj())
    return DensityMatrix(rho, levels, ens.hbar)


def evolve_density(rho: DensityMatrix, energies: Optional[Sequence[float]] = None,
                   t: float = 0.0, hbar: Optional[float] = None) -> DensityMatrix:
    """rho(t) = U(t)^dagger rho U(t), i.e. rho_kl picks up exp(+i(E_k - E_l)t/hbar)."""
    E = rho.energies if energies is None else np.asarray(energies, dtype=float)
    hb = rho.hbar if hbar is None else hbar
    if E.shape != (rho.entries.shape[0],) or rho.entries.shape[0] != rho.entries.shape[1]:
        raise DimensionMismatch(
            f"{E.size} energies for a {rho.entries.shape} density matrix")
    phase = np.exp(1j * E * t / hb)
    out = phase[:, None] * rho.entries * phase.conj()[None, :]
    np.fill_diagonal(out, np.diag(rho.entries))
    return DensityMatrix(out, E, hb)


def verify_member_orthogonality(ens: Ensemble, t: float) -> list[float]:
    """|<psi_m(0)|psi_m(t)>| for each member."""
    return [abs(survival_amplitude(s, t)) for s in ens.states]
