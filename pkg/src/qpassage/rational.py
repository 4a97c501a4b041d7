"""Rational frequency ratios, the odd/odd condition, and commensurate periods.

Floating ratios are converted to fractions once, through continued-fraction
convergents. Everything downstream (gcd, lcm, periods) uses exact integer
arithmetic on those fractions.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Optional, Sequence, Union

import numpy as np

from .state import EnergyState

DEFAULT_TOL = 1e-9
DEFAULT_MAX_DEN = 10**6


def convergents(x: float) -> Iterator[tuple[int, int]]:
    """Continued-fraction convergents p/q of ``x``, in order.

    The float is expanded exactly (as the rational it represents), so the
    sequence is finite and free of rounding drift.
    """
    f = Fraction(x)
    h0, h1 = 0, 1
    k0, k1 = 1, 0
    while True:
        a = math.floor(f)
        h0, h1 = h1, a * h1 + h0
        k0, k1 = k1, a * k1 + k0
        yield h1, k1
        if f == a:
            return
        f = 1 / (f - a)


def approximate_rational(x: float, tol: float = DEFAULT_TOL,
                         max_den: int = DEFAULT_MAX_DEN) -> Optional[tuple[int, int]]:
    """Smallest-denominator convergent p/q of ``x`` with ``|q*x - p| <= tol``.

    The integer-relation residual ``|q*x - p|`` is used rather than
    ``|x - p/q|``: every real has convergents with ``|x - p/q| < 1/q**2``,
    so an absolute test with a large ``max_den`` would call almost anything
    rational (pi matches 103993/33102 to 6e-10). Since ``q >= 1`` the
    returned fraction also satisfies ``|x - p/q| <= tol``.

    Returns ``(p, q)`` in lowest terms, or ``None``.
    """
    if not x > 0:
        raise ValueError(f"x must be positive, got {x}")
    if not tol > 0 or max_den < 1:
        raise ValueError("tol must be positive and max_den >= 1")
    for p, q in convergents(x):
        if q > max_den:
            return None
        if abs(q * x - p) <= tol and p > 0:
            return p, q
    return None


def odd_odd_ratio(omega_num: float, omega_den: float, tol: float = DEFAULT_TOL,
                  max_den: int = DEFAULT_MAX_DEN) -> Optional[tuple[int, int]]:
    """``(m, n)`` with ``omega_num/omega_den == (2m-1)/(2n-1)``, or ``None``."""
    if not (omega_num > 0 and omega_den > 0):
        raise ValueError("frequencies must be positive")
    frac = approximate_rational(omega_num / omega_den, tol, max_den)
    if frac is None:
        return None
    p, q = frac
    if p % 2 == 1 and q % 2 == 1:
        return (p + 1) // 2, (q + 1) // 2
    return None


def fraction_gcd(fracs: Sequence[Fraction]) -> Fraction:
    """Largest rational g such that every entry is an integer multiple of g."""
    num = 0
    den = 1
    for f in fracs:
        num = math.gcd(num, f.numerator)
        den = den * f.denominator // math.gcd(den, f.denominator)
    return Fraction(num, den)


def fraction_lcm(fracs: Sequence[Fraction]) -> Fraction:
    """Smallest positive rational that is an integer multiple of every entry."""
    num = 1
    den = 0
    for f in fracs:
        num = num * f.numerator // math.gcd(num, f.numerator)
        den = math.gcd(den, f.denominator)
    return Fraction(num, den)


@dataclass(frozen=True)
class RationalStructure:
    frequencies: tuple[float, ...]
    ratios: tuple[Optional[tuple[int, int]], ...]
    all_commensurate: bool
    period: Optional[float]
    odd_odd: bool
    # fundamental angular frequency g, set when all_commensurate
    fundamental: Optional[float] = None
    # omega_l / g as exact integers, set when all_commensurate
    harmonics: Optional[tuple[int, ...]] = None


def analyze_spectrum(energies: Sequence[float], tol: float = DEFAULT_TOL,
                     max_den: int = DEFAULT_MAX_DEN, hbar: float = 1.0) -> RationalStructure:
    """Frequencies measured from the lowest level and their ratios to the first one.

    ``odd_odd`` only records whether every ratio is odd/odd. It describes the
    symmetric three-level family and is not a passage criterion in general.
    """
    E = np.unique(np.asarray(energies, dtype=float))
    if E.size < 2:
        raise ValueError("need at least two distinct energy levels")
    omegas = tuple(float(w) for w in E[1:] - E[0])
    base = omegas[0]
    ratios = tuple(approximate_rational(w / base, tol, max_den) for w in omegas)
    commensurate = all(r is not None for r in ratios)
    odd_odd = commensurate and all(p % 2 == 1 and q % 2 == 1 for p, q in ratios)

    period = fundamental = harmonics = None
    if commensurate:
        fracs = [Fraction(p, q) for p, q in ratios]
        g = fraction_gcd(fracs)
        harmonics = tuple(int(f / g) for f in fracs)
        fundamental = base * float(g)
        period = 2 * math.pi * hbar / fundamental
    return RationalStructure(omegas, ratios, commensurate, period, odd_odd,
                             fundamental, harmonics)


def analyze(state: Union[EnergyState, Sequence[float]], tol: float = DEFAULT_TOL,
            max_den: int = DEFAULT_MAX_DEN) -> RationalStructure:
    """Rational structure of a state's spectrum (all listed levels) or of a bare spectrum."""
    if isinstance(state, EnergyState):
        return analyze_spectrum(state.energies, tol, max_den, state.hbar)
    return analyze_spectrum(state, tol, max_den)
