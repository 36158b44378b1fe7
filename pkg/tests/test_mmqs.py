import math

import numpy as np
import pytest

from macrocoherence import mmqs, oracle, states
from macrocoherence.core import Observable
from macrocoherence.errors import AllZeroWeights, FlatSpectrum, TooLarge
from macrocoherence.measure import measure


def test_construct_mmqs_example():
    obs = Observable([-1.0, 0.0, 2.0])
    psi = mmqs.construct_mmqs(obs)
    assert psi.indices == (0, 2)
    assert measure(psi, obs).m == pytest.approx(1.5, abs=1e-12)


@pytest.mark.parametrize("phi", [0.0, math.pi / 3, math.pi, 1.7])
def test_mmqs_reaches_half_span_for_any_phase(phi):
    for seed in range(10):
        obs = oracle.random_spectrum(6, seed)
        psi = mmqs.construct_mmqs(obs, phi)
        assert measure(psi, obs).m == pytest.approx(obs.span() / 2, abs=1e-12)


def test_mmqs_of_magnetization_is_ghz():
    for n in (1, 3, 8):
        psi = mmqs.construct_mmqs(states.magnetization_z(n))
        ref = states.ghz(n)
        assert psi.indices == ref.indices
        np.testing.assert_allclose(np.abs(psi.coefficients), np.abs(ref.coefficients))


def test_mmqs_flat_spectrum():
    with pytest.raises(FlatSpectrum):
        mmqs.construct_mmqs(Observable([2.0, 2.0]))


def test_pure_objective_examples():
    assert mmqs.pure_objective([1, 1], [0, 1]) == 0.5
    assert mmqs.pure_objective([1, 0, 0], [0, 1, 2]) == 0.0
    with pytest.raises(AllZeroWeights):
        mmqs.pure_objective([0, 0], [0, 1])
    with pytest.raises(ValueError):
        mmqs.pure_objective([1, -1], [0, 1])
    with pytest.raises(ValueError):
        mmqs.pure_objective([1, 1, 1], [0, 1])


def test_pure_objective_homogeneous():
    rng = np.random.default_rng(2)
    for _ in range(50):
        w = rng.random(5)
        v = rng.normal(size=5)
        f = mmqs.pure_objective(w, v)
        # bit-exact for power-of-two factors, otherwise the scaled input is itself rounded
        assert mmqs.pure_objective(4 * w, v) == f
        assert mmqs.pure_objective(0.25 * w, v) == f
        assert mmqs.pure_objective(3 * w, v) == pytest.approx(f, rel=4 * np.finfo(float).eps)


def test_pure_objective_matches_measure():
    psi = oracle.random_pure(6, 4)
    obs = oracle.random_spectrum(6, 5)
    assert mmqs.pure_objective(np.abs(psi.to_dense()), obs.eigenvalues) == pytest.approx(measure(psi, obs).m, abs=1e-14)


def test_maximize_two_levels():
    r = mmqs.maximize_measure(Observable([0.0, 1.0]))
    assert r.converged
    assert r.best_m == pytest.approx(0.5, abs=1e-12)
    np.testing.assert_allclose(r.weights, [0.5, 0.5], atol=1e-6)


def test_maximize_equally_spaced():
    r = mmqs.maximize_measure(Observable([0.0, 1.0, 2.0, 3.0]))
    assert r.converged
    assert r.best_m == pytest.approx(1.5, abs=1e-12)
    assert r.weights[1] + r.weights[2] < 1e-6
    assert r.extreme_mass() > 1 - 1e-6


def test_maximize_degenerate():
    r = mmqs.maximize_measure(Observable([0.0, 0.0, 5.0]))
    assert r.best_m == pytest.approx(2.5, abs=1e-12)
    assert r.class_values.tolist() == [0.0, 5.0]


def test_maximize_flat_and_limits():
    r = mmqs.maximize_measure(Observable([1.0, 1.0]))
    assert r.best_m == 0.0 and r.converged
    with pytest.raises(ValueError):
        mmqs.maximize_measure(Observable([0.0, 1.0]), restarts=0)
    with pytest.raises(TooLarge):
        mmqs.maximize_measure(Observable(np.arange(65.0)))


def test_maximize_close_interior_levels():
    r = mmqs.maximize_measure(Observable([0.0, 1e-3, 2e-3, 1.0]))
    assert r.converged
    assert r.best_m == pytest.approx(0.5, abs=1e-9)


def test_maximize_is_deterministic():
    obs = oracle.random_spectrum(7, 1)
    a = mmqs.maximize_measure(obs, seed=3)
    b = mmqs.maximize_measure(obs, seed=3)
    np.testing.assert_array_equal(a.weights, b.weights)


def test_optimizer_on_random_spectra():
    for seed in range(50):
        obs = oracle.random_spectrum(3 + seed % 6, seed)
        r = mmqs.maximize_measure(obs, 20, seed)
        assert r.converged
        assert abs(r.best_m - obs.span() / 2) < 1e-6
        assert r.extreme_mass() >= 1 - 1e-4


def test_verify_theorem_dim4():
    rep = mmqs.verify_theorem(oracle.random_spectrum(4, 0), 1000, 0)
    assert rep.bound_violations == 0
    assert rep.optimum_attained and rep.converged
    assert rep.unique_optimum is True
    assert rep.max_sampled_mixed <= rep.d_max_over_2
    assert set(rep.as_dict()) == {"d_max_over_2", "best_m", "bound_violations", "converged"}


def test_verify_theorem_two_levels():
    rep = mmqs.verify_theorem(Observable([0.0, 1.0]), 500, 1)
    assert rep.best_m == pytest.approx(0.5)
    assert rep.max_sampled_pure <= 0.5 + 1e-12


def test_verify_theorem_flat_and_degenerate():
    rep = mmqs.verify_theorem(Observable([3.0, 3.0, 3.0]), 100, 0)
    assert rep.max_sampled_mixed == 0.0 and rep.best_m == 0.0
    rep = mmqs.verify_theorem(Observable([0.0, 0.0, 1.0]), 100, 0)
    assert rep.degenerate and rep.unique_optimum is None
    with pytest.raises(TooLarge):
        mmqs.verify_theorem(Observable(np.arange(9.0)), 10, 0)
