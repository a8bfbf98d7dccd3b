import math

import numpy as np
import pytest

import estimability as est


def test_finite_maps():
    p = est.FiniteMap(4, 3, [0, 1, 1, 2])
    q = est.FiniteMap(4, 2, [0, 0, 1, 1])
    assert not est.is_injective(p)
    assert not est.parameter_identifiable_standard(p, q)
    assert est.parameter_identifiable_sections(p, p) == est.parameter_identifiable_standard(p, p)
    g = est.construct_inner_inverse(p)
    assert est.verify_inner_inverse(p, g)
    assert est.fisher_consistent_estimator(p) is None
    assert est.run_equivalence_checks(3, 3)["counterexamples"] == 0
    with pytest.raises(est.CompositionError):
        est.compose(est.FiniteMap(2, 2, [0, 1]), est.FiniteMap(2, 3, [0, 2]))


def test_linear_example():
    p = np.array([[1.0, 1.0]])
    assert not est.is_identifiable_linear(p)
    assert not est.linear_parameter_identifiable(p, np.array([[1.0, 0.0]]))
    assert est.linear_parameter_identifiable(p, np.array([[1.0, 1.0]]))
    a = np.random.default_rng(7).standard_normal((8, 3))
    np.testing.assert_allclose(est.pseudoinverse(a), np.linalg.pinv(a), atol=1e-12)


def test_diagnose():
    r = est.diagnose(np.eye(3))
    assert r.classification == "WELL_POSED"
    r = est.diagnose(est.heaviside_operator(256), kappa_threshold=100.0)
    assert r.classification == "ILL_CONDITIONED"
    assert r.condition_number == pytest.approx((4 * 256 + 2) / math.pi, rel=1e-2)
    with pytest.raises(est.InvalidInput):
        est.bounded_away_from_zero(np.array([[1.0, 1.0]]))


def test_fredholm_and_regularization():
    r = est.run_instability_experiment(1000, 8)
    assert r["amplification"] == pytest.approx(16 * math.pi, rel=0.1)
    with pytest.raises(est.InvalidInput):
        est.run_instability_experiment(100, 8)
    k = est.heaviside_operator(64)
    d = est.fredholm_rhs(64, 4)
    x = est.tikhonov_solve(k, d, 1e-3)
    oracle = np.linalg.solve(k.T @ k + 1e-3 * np.eye(64), k.T @ d)
    np.testing.assert_allclose(x, oracle, rtol=1e-8)
    lam = est.discrepancy_select(k, d, 0.01)
    assert np.linalg.norm(k @ est.tikhonov_solve(k, d, lam) - d) == pytest.approx(0.01, rel=0.01)
    with pytest.raises(est.NoSolution):
        est.discrepancy_select(k, d, 10.0)


def test_robustness():
    xs = [1, 2, 3, 4, 5, 6, 7, 8, 9]
    assert est.evaluate("median", xs) == 5
    assert est.influence_function("mean", xs, 100.0) == pytest.approx(95.0, abs=1e-8)
    probes = [10.0 ** (1 + 0.5 * i) for i in range(11)]
    assert est.influence_profile("mean", xs, probes)["unbounded_flag"]
    assert not est.influence_profile("median", xs, probes)["unbounded_flag"]
    y, achieved, eps = est.sensitivity_attack([-1.0, 1.0], 0.01, 5.0)
    assert y == pytest.approx(500.0)
    assert achieved == pytest.approx(5.0, abs=1e-10)
    with pytest.raises(est.NumericalFailure):
        est.influence_function("median", [-1.0, 1.0], 1.0)
