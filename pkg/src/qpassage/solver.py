"""First-orthogonality search: when does the survival amplitude first vanish?

a(t) is complex, so there is no sign change to bracket. Zeros are found as
minima of |a(t)|^2: a uniform grid brackets every local minimum, each bracket
is shrunk by golden-section search, and the earliest minimum whose modulus is
below ``zero_tol`` is the passage time.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from enum import Enum
from typing import Optional

import numpy as np

from .bounds import BoundsReport, EQUAL_WEIGHT_TOL, fleming_bound, two_level_passage
from .errors import EigenstateInput, InvalidWindow
from .rational import (DEFAULT_MAX_DEN, DEFAULT_TOL, RationalStructure,
                       analyze_spectrum, approximate_rational)
from .state import EnergyState, SurvivalSample, is_equal_two_level, survival_amplitude

log = logging.getLogger(__name__)

ZERO_TOL = 1e-10
ATTAINMENT_TOL = 1e-6
# grid points per fastest oscillation period of |a|^2
SAMPLES_PER_PERIOD = 16
CHUNK = 1 << 15
_INVPHI = (math.sqrt(5.0) - 1.0) / 2.0


class Method(str, Enum):
    EXACT_TWO_LEVEL = "exact_two_level"
    # commensurate spectrum; the zero is an exact rational multiple of pi*hbar/g
    EXACT_SYMMETRIC = "exact_symmetric"
    NUMERIC = "numeric"


class Attainment(str, Enum):
    ATTAINS_FLEMING = "attains_fleming"
    EXCEEDS_FLEMING = "exceeds_fleming"
    NO_PASSAGE = "no_passage"


@dataclass(frozen=True)
class PassageResult:
    found: bool
    time: Optional[float]
    residual: float
    min_location: float
    window: float
    method: Method
    fleming_ratio: Optional[float]


def _support_structure(state: EnergyState, tol: float, max_den: int) -> RationalStructure:
    E, _ = state.support()
    return analyze_spectrum(E, tol, max_den, state.hbar)


def default_window(state: EnergyState, tol: float = DEFAULT_TOL,
                   max_den: int = DEFAULT_MAX_DEN) -> float:
    """One period of a(t) for a commensurate spectrum, else 100 Fleming times."""
    E, _ = state.support()
    if E.size < 2:
        raise EigenstateInput("a single occupied level never reaches an orthogonal state")
    structure = _support_structure(state, tol, max_den)
    if structure.all_commensurate:
        return structure.period
    return 100.0 * fleming_bound(state)


def _golden_refine(f, lo: np.ndarray, hi: np.ndarray, rel_width: float = 1e-14):
    """Vectorized golden-section minimization of ``f`` on each ``[lo, hi]``."""
    lo = lo.copy()
    hi = hi.copy()
    c = hi - _INVPHI * (hi - lo)
    d = lo + _INVPHI * (hi - lo)
    fc, fd = f(c), f(d)
    for _ in range(200):
        if np.all(hi - lo <= rel_width * np.maximum(np.abs(hi), 1e-300)):
            break
        left = fc < fd
        hi = np.where(left, d, hi)
        lo = np.where(left, lo, c)
        x = np.where(left, hi - _INVPHI * (hi - lo), lo + _INVPHI * (hi - lo))
        fx = f(x)
        c, d, fc, fd = (np.where(left, x, d), np.where(left, c, x),
                        np.where(left, fx, fd), np.where(left, fc, fx))
    return np.where(fc < fd, c, d), np.minimum(fc, fd)


def _snap(state: EnergyState, t: float, structure: RationalStructure,
          zero_tol: float, window: float) -> Optional[float]:
    """Replace ``t`` by a nearby exact multiple p/q of pi*hbar/g when that is also a zero."""
    half = math.pi * state.hbar / structure.fundamental
    frac = approximate_rational(t / half, tol=1e-6, max_den=10**4)
    if frac is None:
        return None
    p, q = frac
    t_exact = math.pi * state.hbar * p / (q * structure.fundamental)
    if not 0 < t_exact <= window or abs(t_exact - t) > 1e-6 * t:
        return None
    if abs(survival_amplitude(state, t_exact)) >= zero_tol:
        return None
    return t_exact


def _result(state: EnergyState, found: bool, time: Optional[float], residual: float,
            loc: float, window: float, method: Method) -> PassageResult:
    ratio = None
    if found:
        fl = fleming_bound(state)
        if math.isfinite(fl):
            ratio = time / fl
    return PassageResult(found, time, float(residual), float(loc), float(window), method, ratio)


def find_passage(state: EnergyState, t_max: Optional[float] = None,
                 zero_tol: float = ZERO_TOL, *, fast_paths: bool = True,
                 tol: float = DEFAULT_TOL, max_den: int = DEFAULT_MAX_DEN) -> PassageResult:
    """Earliest t in (0, t_max] with |a(t)| < zero_tol.

    With ``t_max=None`` the window is :func:`default_window`. ``found=False``
    only means no zero was located inside the window. ``fast_paths=False``
    forces the plain numerical search (no closed forms, no exact snapping).
    """
    E, _ = state.support()
    if E.size < 2:
        raise EigenstateInput("a single occupied level never reaches an orthogonal state")
    if t_max is not None and not t_max > 0:
        raise InvalidWindow(f"t_max must be positive, got {t_max}")
    if not zero_tol > 0:
        raise ValueError("zero_tol must be positive")

    structure = _support_structure(state, tol, max_den)
    if t_max is not None:
        window = float(t_max)
    elif structure.all_commensurate:
        window = structure.period
    else:
        window = 100.0 * fleming_bound(state)

    if fast_paths and is_equal_two_level(state, EQUAL_WEIGHT_TOL):
        tau = two_level_passage(state)
        if tau <= window:
            res = abs(survival_amplitude(state, tau))
            return _result(state, True, tau, res, tau, window, Method.EXACT_TWO_LEVEL)

    width = float(E[-1] - E[0])
    dt_target = math.pi * state.hbar / (SAMPLES_PER_PERIOD / 2 * width)
    n = max(2, math.ceil(window / dt_target))
    dt = window / n

    def sq(t):
        return np.abs(survival_amplitude(state, t)) ** 2

    best_val, best_loc = math.inf, window
    for k0 in range(1, n + 1, CHUNK):
        k1 = min(n, k0 + CHUNK - 1)
        ks = np.arange(k0 - 1, min(n, k1 + 1) + 1)
        f = sq(ks * dt)
        mid = f[1:-1] if k1 < n else f[1:]
        left = f[:-2] if k1 < n else f[:-1]
        right = f[2:] if k1 < n else np.append(f[2:], np.inf)
        idx = np.nonzero((mid <= left) & (mid <= right))[0] + k0
        if idx.size == 0:
            continue
        lo = (idx - 1) * dt
        hi = np.minimum(idx + 1, n) * dt
        t_ref, f_ref = _golden_refine(sq, lo, hi)
        # never report worse than the grid point that seeded the bracket
        f_grid = f[idx - k0 + 1]
        worse = f_grid < f_ref
        t_ref = np.where(worse, idx * dt, t_ref)
        f_ref = np.where(worse, f_grid, f_ref)
        mods = np.sqrt(f_ref)

        hits = np.nonzero(mods < zero_tol)[0]
        if hits.size:
            j = hits[np.argmin(t_ref[hits])]
            t0, r0 = float(t_ref[j]), float(mods[j])
            if fast_paths and structure.all_commensurate:
                t_exact = _snap(state, t0, structure, zero_tol, window)
                if t_exact is not None:
                    r = abs(survival_amplitude(state, t_exact))
                    return _result(state, True, t_exact, r, t_exact, window,
                                   Method.EXACT_SYMMETRIC)
            return _result(state, True, t0, r0, t0, window, Method.NUMERIC)

        j = int(np.argmin(mods))
        if mods[j] < best_val:
            best_val, best_loc = float(mods[j]), float(t_ref[j])

    return _result(state, False, None, best_val, best_loc, window, Method.NUMERIC)


def classify_attainment(result: PassageResult, report: BoundsReport,
                        tol: float = ATTAINMENT_TOL) -> Attainment:
    if not result.found or not math.isfinite(report.fleming):
        return Attainment.NO_PASSAGE
    ratio = result.time / report.fleming
    if abs(ratio - 1.0) < tol:
        return Attainment.ATTAINS_FLEMING
    if ratio > 1.0 + tol:
        return Attainment.EXCEEDS_FLEMING
    log.warning("passage time %.17g is below the Fleming bound %.17g",
                result.time, report.fleming)
    return Attainment.NO_PASSAGE


def survival_scan(state: EnergyState, t_max: float, n: int) -> list[SurvivalSample]:
    """``n`` equally spaced samples of a(t) on ``[0, t_max]``."""
    if n < 2 or not t_max > 0:
        raise InvalidWindow(f"need n >= 2 and t_max > 0, got n={n}, t_max={t_max}")
    ts = np.linspace(0.0, t_max, n)
    amps = survival_amplitude(state, ts)
    return [SurvivalSample(float(t), complex(a), float(abs(a) ** 2)) for t, a in zip(ts, amps)]


