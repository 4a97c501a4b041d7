"""Fubini-Study geometry of unitary orbits in projective Hilbert space.

Distances are normalized so that orthogonal rays sit at distance pi, and a
ray evolving under H moves at the constant speed 2*Delta H/hbar.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Union

import numpy as np
from scipy import optimize

from .bounds import two_level_passage
from .errors import InvalidWindow, ZeroVector
from .state import EnergyState, energy_dispersion


@dataclass(frozen=True, eq=False)
class ProjectivePoint:
    """Representative vector of a ray; any nonzero multiple is the same point."""

    amplitudes: np.ndarray

    def __post_init__(self):
        a = np.array(self.amplitudes, dtype=complex).ravel()
        a.setflags(write=False)
        object.__setattr__(self, "amplitudes", a)


PointLike = Union[ProjectivePoint, EnergyState, np.ndarray, list]


def _vec(x: PointLike) -> np.ndarray:
    if isinstance(x, (ProjectivePoint, EnergyState)):
        return np.asarray(x.amplitudes, dtype=complex)
    return np.asarray(x, dtype=complex).ravel()


def _fs_many(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Row-wise distance between stacks of vectors, shape (..., n)."""
    nx = np.sum(np.abs(x) ** 2, axis=-1)
    ny = np.sum(np.abs(y) ** 2, axis=-1)
    if np.any(nx == 0) or np.any(ny == 0):
        raise ZeroVector("Fubini-Study distance is undefined for the zero vector")
    overlap = np.abs(np.sum(np.conj(x) * y, axis=-1))
    # Lagrange identity: |x|^2|y|^2 - |<x|y>|^2 = sum_{i<j} |x_i y_j - x_j y_i|^2.
    # It keeps sin(d/2) accurate for nearly parallel rays, where arccos loses
    # half the digits.
    i, j = np.triu_indices(x.shape[-1], k=1)
    wedge = x[..., i] * y[..., j] - x[..., j] * y[..., i]
    sin_part = np.sqrt(np.sum(np.abs(wedge) ** 2, axis=-1))
    return 2.0 * np.arctan2(sin_part, overlap)


def fs_distance(x: PointLike, y: PointLike) -> float:
    """2*arccos(|<x|y>| / (|x||y|)), in [0, pi]."""
    a, b = _vec(x), _vec(y)
    if a.shape != b.shape:
        raise ValueError(f"dimension mismatch: {a.shape} vs {b.shape}")
    return float(_fs_many(a, b))


def aa_speed(state: EnergyState) -> float:
    return 2.0 * energy_dispersion(state) / state.hbar


def evolve(state: EnergyState, t: float) -> ProjectivePoint:
    return ProjectivePoint(_evolved(state, np.asarray(t, dtype=float)))


def _evolved(state: EnergyState, ts: np.ndarray) -> np.ndarray:
    return state.amplitudes * np.exp(-1j * np.multiply.outer(ts, state.energies) / state.hbar)


def path_length(state: EnergyState, t_end: float, n: int) -> float:
    """Sum of chord distances between ``n`` equally spaced points of the orbit on [0, t_end].

    Converges to ``aa_speed(state) * t_end`` with error O(n**-2).
    """
    if n < 2 or not t_end > 0:
        raise InvalidWindow(f"need n >= 2 and t_end > 0, got n={n}, t_end={t_end}")
    pts = _evolved(state, np.linspace(0.0, t_end, n))
    return float(np.sum(_fs_many(pts[:-1], pts[1:])))


def geodesic_check(state: EnergyState, t_end: float, tol: float = 1e-6) -> bool:
    """Whether the orbit from 0 to ``t_end`` is as long as the distance between its ends.

    The chord sum is refined by doubling until a Richardson estimate of its
    discretization error drops below ``tol/10``.
    """
    if not t_end > 0:
        raise InvalidWindow(f"t_end must be positive, got {t_end}")
    n = 64
    prev = path_length(state, t_end, n)
    while True:
        n = 2 * n - 1
        cur = path_length(state, t_end, n)
        if abs(cur - prev) / 3.0 < tol / 10.0 or n > 2**22:
            break
        prev = cur
    chord = fs_distance(evolve(state, 0.0), evolve(state, t_end))
    return abs(cur - chord) < tol


def equator_rays(state: EnergyState, phi: float, tau: Optional[float] = None
                 ) -> tuple[np.ndarray, np.ndarray]:
    """(psi + e^{i phi} eta)/sqrt 2 and (psi - e^{i phi} eta)/sqrt 2, eta = U(tau) psi."""
    if tau is None:
        tau = two_level_passage(state)
    psi = state.vector()
    eta = _evolved(state, np.asarray(tau, dtype=float))
    w = np.exp(1j * phi)
    return (psi + w * eta) / math.sqrt(2.0), (psi - w * eta) / math.sqrt(2.0)


def _eigen_rays(state: EnergyState) -> tuple[np.ndarray, np.ndarray]:
    occupied = np.nonzero(state.probabilities > 0)[0]
    lower, upper = np.zeros((2, state.n_levels), dtype=complex)
    lower[occupied[0]] = 1.0
    upper[occupied[-1]] = 1.0
    return lower, upper


def equator_deficit(state: EnergyState, phi: float, tau: Optional[float] = None) -> float:
    """Summed distance of the two equator rays from the lower and upper eigenstates."""
    plus, minus = equator_rays(state, phi, tau)
    lower, upper = _eigen_rays(state)
    return fs_distance(plus, lower) + fs_distance(minus, upper)


def equator_phase(state: EnergyState, n_grid: int = 64) -> float:
    """Phase in [0, 2pi) placing both energy eigenstates on the psi-eta line.

    For an equal-weight two-level state psi and its passage image eta, the
    rays (psi +/- e^{i phi} eta)/sqrt 2 are the two eigenstates for one phi.
    A coarse grid locates it, golden-section search refines it.
    """
    tau = two_level_passage(state)
    grid = np.linspace(0.0, 2 * math.pi, n_grid, endpoint=False)
    vals = [equator_deficit(state, g, tau) for g in grid]
    k = int(np.argmin(vals))
    step = grid[1] - grid[0]
    phi = optimize.golden(lambda x: equator_deficit(state, x, tau),
                          brack=(grid[k] - step, grid[k], grid[k] + step), tol=1e-15)
    return float(phi % (2 * math.pi))
