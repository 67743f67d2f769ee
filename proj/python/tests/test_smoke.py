import math

import numpy as np
import pytest

import gaa


def test_mobility_edge_and_fractions():
    spec = gaa.LatticeSpec(L=200, lam=1.0, a=0.3)
    assert gaa.mobility_edge(spec) == pytest.approx(0.0)
    data = gaa.analyze_spectrum(spec)
    assert data["n_e"] + data["n_l"] == pytest.approx(1.0)
    assert np.all(np.diff(data["energies"]) >= 0)
    assert data["phase"] == "intermediate"
    assert gaa.mobility_edge(gaa.LatticeSpec(L=10, lam=1.0)) is None


def test_hamiltonian_is_symmetric():
    h = gaa.build_hamiltonian(gaa.LatticeSpec(L=12, lam=0.7, a=0.2))
    assert np.allclose(h, h.T)
    assert np.allclose(np.diag(h), gaa.potential_profile(gaa.LatticeSpec(L=12, lam=0.7, a=0.2)))


def test_periodic_rational_frequency():
    spec = gaa.LatticeSpec(L=233, lam=1.0, a=0.3, b_rational=(144, 233), boundary=gaa.Boundary.periodic)
    assert spec.b == pytest.approx(144 / 233)
    with pytest.raises(ValueError):
        gaa.LatticeSpec(L=10, boundary=gaa.Boundary.periodic)


def test_initial_correlation_is_projector():
    setup = gaa.QuenchSetup(gaa.LatticeSpec(L=8, lam=1.0))
    c = gaa.initial_correlation(setup)
    assert np.allclose(c @ c, c)
    assert np.trace(c).real == pytest.approx(4.0)
    c_t = gaa.evolve_correlation(setup, 3.0)
    assert np.allclose(c_t, c_t.conj().T)


def test_oracle_agreement():
    setup = gaa.QuenchSetup(gaa.LatticeSpec(L=8, lam=1.0, a=0.3))
    assert gaa.oracle_ee_deviation(setup, [0.5, 1.0, 2.0]) < 1e-8
    ref = gaa.QuenchSetup(gaa.LatticeSpec(L=6, lam=0.5), reference_site=3)
    assert gaa.oracle_sic_deviation(ref, [1.0], [[0], [1, 2, 3], list(range(6))]) < 1e-8


def test_short_dynamics():
    setup = gaa.QuenchSetup(gaa.LatticeSpec(L=40, lam=0.5))
    s = gaa.ee_timeseries(setup, [0.0, 1.0, 2.0])
    assert s[0] == pytest.approx(0.0, abs=1e-9)
    assert s[2] > s[1] > 0
    protocol = gaa.SamplingProtocol(burn_in=500, n_samples=20)
    assert gaa.early_velocity(setup, protocol) > 0
    assert 0 < gaa.saturation_value(setup, protocol) < 40 * math.log(2)


def test_sic_endpoints():
    setup = gaa.QuenchSetup(gaa.LatticeSpec(L=20, lam=0.5))
    protocol = gaa.SamplingProtocol(burn_in=200, n_samples=10)
    mi = gaa.sic_profile(setup, [0, 5, 20], "center", protocol)
    assert mi[0] == pytest.approx(0.0, abs=1e-12)
    assert mi[2] == pytest.approx(2.0, abs=1e-6)


def test_run_config(tmp_path):
    result = gaa.run_config('{"experiment": "fractions", "L": 50, "a": 0.3, "lambda": [0.5, 1.0]}', out=str(tmp_path))
    assert (tmp_path / "fractions.csv").read_text().splitlines()[0] == "a,lambda,n_e,n_l"
    assert result["failures"] == 0
    with pytest.raises(ValueError):
        gaa.run_config('{"experiment": "fractions", "lamda": 1}')
