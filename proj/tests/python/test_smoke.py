"""Python-side smoke tests: the bindings expose the main operations and the
numbers agree with the library's own invariants."""

import math

import pytest

import glekin


def test_version():
    assert glekin.__version__


def test_model_roots():
    m = glekin.make_noise_model("hn", gamma_big=1.0, omega2=2.0)
    assert m.mu1 == pytest.approx(complex(-0.5, math.sqrt(7) / 2), abs=1e-12)
    with pytest.raises(ValueError):
        glekin.make_noise_model("hn", gamma_big=0.0)


def test_white_noise_pole_and_transmission():
    m = glekin.make_noise_model("ohmic", gamma_ohmic=1.0)
    d = glekin.spectral_decomposition(m, omega_b=1.0)
    golden = (math.sqrt(5.0) - 1.0) / 2.0
    assert d.dominant_pole == pytest.approx(complex(golden, 0.0), abs=1e-10)
    corr = glekin.correlation_form(m)
    assert glekin.transmission(d, corr, 20.0) == pytest.approx(golden, abs=1e-4)


def test_sum_rules_and_response():
    m = glekin.make_noise_model("hvn")
    d = glekin.spectral_decomposition(m, omega_b=1.0)
    assert abs(sum(d.residues)) < 1e-10
    assert abs(sum(r * s for r, s in zip(d.residues, d.poles)) - 1.0) < 1e-10
    assert d.response(0.0) == pytest.approx(0.0, abs=1e-12)
    assert d.response(1e-6) / 1e-6 == pytest.approx(1.0, rel=1e-4)


def test_variance_routes_agree():
    m = glekin.make_noise_model("han")
    d = glekin.spectral_decomposition(m, omega_b=1.0)
    corr = glekin.correlation_form(m)
    closed = glekin.variance(d, corr, 2.0, method="closed")
    quad = glekin.variance(d, corr, 2.0, method="quadrature")
    assert closed == pytest.approx(quad, rel=1e-6)


def test_chi_symmetry():
    assert glekin.passing_probability(0.0, 1.3) == 0.5
    assert glekin.passing_probability(1.0, 0.7) + glekin.passing_probability(-1.0, 0.7) == pytest.approx(1.0, abs=1e-12)


def test_simulation_determinism_and_agreement():
    m = glekin.make_noise_model("hn")
    a = glekin.simulate_ensemble(m, omega_b=1.0, x0=0.0, v0=2.0, t_max=1.0, dt=0.02,
                                 n_traj=400, seed=31337, workers=1)
    b = glekin.simulate_ensemble(m, omega_b=1.0, x0=0.0, v0=2.0, t_max=1.0, dt=0.02,
                                 n_traj=400, seed=31337, workers=4)
    assert a["chi"] == b["chi"]
    assert a["var"] == b["var"]

    d = glekin.spectral_decomposition(m, omega_b=1.0)
    corr = glekin.correlation_form(m)
    j = len(a["t"]) - 1
    t = a["t"][j]
    var = glekin.variance(d, corr, t)
    assert abs(a["var"][j] - var) <= 3.0 * a["se_var"][j]
