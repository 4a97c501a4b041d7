import math

import numpy as np
import pytest

from qpassage import (InvalidWindow, ProjectivePoint, ZeroVector, aa_speed, energy_dispersion,
                      evolve, find_passage, fs_distance, geodesic_check, make_state, path_length)
from qpassage.geometry import equator_deficit, equator_phase, equator_rays

from conftest import equal_two_level, passage_family_state, random_state
from oracles import fs_distance_arccos

SQ2 = math.sqrt(2.0)


def test_fs_distance_examples():
    x = [1, 0, 0]
    assert fs_distance(x, x) == 0.0
    assert fs_distance([1, 0], [0, 1]) == pytest.approx(math.pi, rel=1e-15)
    assert fs_distance([1, 0], [1, 1]) == pytest.approx(math.pi / 2, rel=1e-15)


def test_fs_distance_matches_arccos_form(rng):
    for _ in range(200):
        n = int(rng.integers(2, 6))
        x = rng.normal(size=n) + 1j * rng.normal(size=n)
        y = rng.normal(size=n) + 1j * rng.normal(size=n)
        assert fs_distance(x, y) == pytest.approx(fs_distance_arccos(x, y), abs=1e-7)


def test_fs_distance_zero_vector():
    with pytest.raises(ZeroVector):
        fs_distance([0, 0], [1, 0])


def test_ray_invariance(rng):
    for _ in range(100):
        n = int(rng.integers(2, 6))
        x = rng.normal(size=n) + 1j * rng.normal(size=n)
        y = rng.normal(size=n) + 1j * rng.normal(size=n)
        lam, mu = rng.normal(size=2) + 1j * rng.normal(size=2)
        assert fs_distance(lam * x, mu * y) == pytest.approx(fs_distance(x, y), abs=1e-12)
        assert fs_distance(ProjectivePoint(lam * x), y) == pytest.approx(fs_distance(x, y),
                                                                          abs=1e-12)


def test_triangle_inequality(rng):
    for _ in range(300):
        n = int(rng.integers(2, 5))
        x, y, z = (rng.normal(size=n) + 1j * rng.normal(size=n) for _ in range(3))
        assert fs_distance(x, z) <= fs_distance(x, y) + fs_distance(y, z) + 1e-12


def test_aa_speed_examples(two_level, spin1):
    assert aa_speed(two_level) == 1.0
    assert aa_speed(spin1) == pytest.approx(SQ2, rel=1e-15)
    assert aa_speed(make_state([0, 3], [0, 1])) == 0.0


def test_evolve_examples(two_level, spin1):
    assert fs_distance(evolve(spin1, 0.0), spin1) == 0.0
    assert fs_distance(evolve(two_level, math.pi), two_level) == pytest.approx(math.pi)
    eta = evolve(spin1, math.pi).amplitudes
    np.testing.assert_allclose(eta, [-0.5, 1 / SQ2, -0.5], atol=1e-15)


@pytest.mark.parametrize("energies,amps,expected,tol", [
    ([0, 1], [1, 1], math.pi, 1e-6),
    ([-1, 0, 1], [0.5, 1 / SQ2, 0.5], SQ2 * math.pi, 1e-5),
    ([0, 1, 3], [1 / SQ2, 0.5, 0.5], math.sqrt(6) * math.pi, 1e-5),
])
def test_path_length_examples(energies, amps, expected, tol):
    s = make_state(energies, amps)
    assert path_length(s, math.pi, 10**4) == pytest.approx(expected, abs=tol)


def test_path_length_errors(two_level):
    with pytest.raises(InvalidWindow):
        path_length(two_level, 1.0, 1)
    with pytest.raises(InvalidWindow):
        path_length(two_level, 0.0, 10)


def test_geodesic_examples(two_level, spin1, family013):
    assert geodesic_check(two_level, math.pi)
    assert not geodesic_check(spin1, math.pi)
    assert not geodesic_check(family013, math.pi)
    assert geodesic_check(spin1, 1e-7)
    assert geodesic_check(family013, 1e-7)
    # past the antipode the orbit is longer than the distance between its ends
    assert not geodesic_check(two_level, 1.5 * math.pi)


def test_finite_difference_speed(rng):
    delta = 1e-5
    for _ in range(100):
        s = random_state(rng)
        t = rng.uniform(0, 10)
        fd = fs_distance(evolve(s, t), evolve(s, t + delta)) / delta
        assert fd == pytest.approx(2 * energy_dispersion(s), abs=1e-6)


def test_stationarity(rng):
    for _ in range(100):
        s = random_state(rng)
        t1, t2, c = rng.uniform(0, 5, 3)
        a = fs_distance(evolve(s, t1), evolve(s, t2))
        b = fs_distance(evolve(s, t1 + c), evolve(s, t2 + c))
        assert a == pytest.approx(b, abs=1e-12)


def test_chord_sum_second_order(rng):
    for _ in range(20):
        s = random_state(rng, n_levels=int(rng.integers(3, 6)))
        t_end = 1.0 / aa_speed(s)
        exact = aa_speed(s) * t_end
        errs = [exact - path_length(s, t_end, m + 1) for m in (8, 16, 32, 64)]
        orders = [math.log2(errs[i] / errs[i + 1]) for i in range(3)]
        assert min(orders) > 1.9


def test_geometric_fleming_bound(rng):
    for _ in range(100):
        s = passage_family_state(rng)
        r = find_passage(s)
        assert aa_speed(s) * r.time >= math.pi - 1e-9


def test_equator_construction(rng):
    for _ in range(30):
        s, _ = equal_two_level(rng)
        phi = equator_phase(s)
        assert 0 <= phi < 2 * math.pi
        plus, minus = equator_rays(s, phi)
        assert fs_distance(plus, [1, 0]) < 1e-9
        assert fs_distance(minus, [0, 1]) < 1e-9


def test_equator_deficit_positive_off_optimum(two_level):
    phi = equator_phase(two_level)
    assert equator_deficit(two_level, phi + 0.3) > 0.1
