"""Pure states in the energy eigenbasis and their survival amplitude."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import EmptyState, ZeroNorm

ZERO_NORM = 1e-9
# relative spacing below which two eigenvalues count as one degenerate level
DEGENERACY_TOL = 1e-12


def _frozen(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class EnergyState:
    """A normalized pure state given by its energy-basis amplitudes.

    ``energies`` are strictly increasing; ``amplitudes[l]`` multiplies the
    eigenvector of ``energies[l]``. Build instances with :func:`make_state`,
    which sorts, merges degenerate levels and normalizes.
    """

    energies: np.ndarray
    amplitudes: np.ndarray
    hbar: float = 1.0

    @property
    def probabilities(self) -> np.ndarray:
        p = np.abs(self.amplitudes) ** 2
        return p / p.sum()

    @property
    def n_levels(self) -> int:
        return len(self.energies)

    def support(self) -> tuple[np.ndarray, np.ndarray]:
        """Energies and probabilities of the occupied levels only."""
        p = self.probabilities
        mask = p > 0.0
        return self.energies[mask], p[mask]

    def vector(self) -> np.ndarray:
        return np.array(self.amplitudes, dtype=complex)

    def __repr__(self) -> str:
        return (f"EnergyState(energies={self.energies.tolist()}, "
                f"probabilities={self.probabilities.round(12).tolist()}, hbar={self.hbar})")


@dataclass(frozen=True)
class SurvivalSample:
    t: float
    amplitude: complex
    probability: float


def make_state(energies: Sequence[float], amplitudes: Sequence[complex],
               hbar: float = 1.0) -> EnergyState:
    """Build a normalized :class:`EnergyState`.

    Levels are sorted by energy. Eigenvalues closer than ``DEGENERACY_TOL``
    (relative to the spectral scale) are merged: the merged amplitude is
    ``sqrt(sum |c|^2)``, since nothing computed here depends on phases within
    a degenerate level.
    """
    E = np.asarray(energies, dtype=float).ravel()
    c = np.asarray(amplitudes, dtype=complex).ravel()
    if E.size == 0:
        raise EmptyState("state needs at least one energy level")
    if E.size != c.size:
        raise ValueError(f"got {E.size} energies but {c.size} amplitudes")
    if not np.all(np.isfinite(E)) or not np.all(np.isfinite(c)):
        raise ValueError("energies and amplitudes must be finite")
    if not hbar > 0 or not np.isfinite(hbar):
        raise ValueError(f"hbar must be positive, got {hbar}")

    norm = float(np.sqrt(np.sum(np.abs(c) ** 2)))
    if norm < ZERO_NORM:
        raise ZeroNorm(f"amplitude norm {norm:.3g} is below {ZERO_NORM}")

    order = np.argsort(E, kind="stable")
    E, c = E[order], c[order] / norm

    scale = max(1.0, float(np.max(np.abs(E))))
    merged_E: list[float] = []
    merged_c: list[complex] = []
    group: list[int] = []

    def flush() -> None:
        if len(group) == 1:
            merged_c.append(complex(c[group[0]]))
        else:
            merged_c.append(complex(np.sqrt(np.sum(np.abs(c[group]) ** 2))))
        merged_E.append(float(E[group[0]]))

    for i in range(E.size):
        if group and E[i] - E[group[0]] > DEGENERACY_TOL * scale:
            flush()
            group = []
        group.append(i)
    flush()

    amps = np.array(merged_c, dtype=complex)
    # second pass removes the rounding left by the first division
    amps /= np.sqrt(np.sum(np.abs(amps) ** 2))
    return EnergyState(_frozen(np.array(merged_E)), _frozen(amps), float(hbar))


def survival_amplitude(state: EnergyState, t):
    """a(t) = sum_l p_l exp(-i E_l t / hbar). Accepts a scalar or an array of times."""
    E, p = state.support()
    t_arr = np.asarray(t, dtype=float)
    phases = np.exp(-1j * np.multiply.outer(t_arr, E) / state.hbar)
    a = phases @ p
    if t_arr.ndim == 0:
        return complex(a)
    return a


def survival_probability(state: EnergyState, t):
    return np.abs(survival_amplitude(state, t)) ** 2


def energy_mean(state: EnergyState) -> float:
    E, p = state.support()
    return float(np.dot(p, E))


def energy_dispersion(state: EnergyState) -> float:
    """Energy uncertainty Delta H; exactly zero for a single occupied level."""
    E, p = state.support()
    if E.size == 1:
        return 0.0
    # centring on the lowest level keeps the result shift-invariant
    x = E - E[0]
    mean = np.dot(p, x)
    return float(np.sqrt(max(0.0, np.dot(p, (x - mean) ** 2))))


def is_equal_two_level(state: EnergyState, tol: float = 1e-9) -> bool:
    """True for the occupied-level pattern (1/2, 1/2) on exactly two levels."""
    _, p = state.support()
    return p.size == 2 and bool(np.all(np.abs(p - 0.5) < tol))
