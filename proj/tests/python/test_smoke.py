"""Smoke tests for the opsent python module."""

import math

import numpy as np
import pytest

import opsent as op


def test_kinematics_roundtrip():
    d = op.DalitzPoint(2 / 3, 2 / 3)
    assert d.x3 == pytest.approx(2 / 3)
    t = op.build_event(d)
    for i in (1, 2, 3):
        assert t.theta(i) == pytest.approx(math.pi / 2)
    n = op.plane_normal(t)
    assert n @ np.array([0.0, 0.0, 1.0]) == pytest.approx(1.0)
    assert op.f_factor(t, 1, 2) == pytest.approx(1.5)


def test_dalitz_validation():
    with pytest.raises(ValueError):
        op.DalitzPoint(1.2, 0.5)
    with pytest.raises(ValueError):
        op.build_event(op.DalitzPoint(1.0, 1.0))  # x3 = 0


def test_state_tensor_and_closed_forms():
    t = op.build_event(op.DalitzPoint(0.9, 0.7))
    s = op.state_tensor(t, 0)
    assert s.basis == "circular"
    amps = s.amplitudes
    assert amps.shape == (2, 2, 2)
    assert amps[0, 0, 0] == 0 and amps[1, 1, 1] == 0
    cf = op.closed_form_coefficients(t, 0)
    assert cf["max_relative_residual"] < 1e-10
    assert abs(cf["global_factor"]) == pytest.approx(2.0)


def test_entanglement_anchors():
    assert op.three_tangle(op.ghz_state()) == pytest.approx(1.0)
    assert op.three_tangle(op.w_state()) == pytest.approx(0.0, abs=1e-14)
    assert op.hyperdeterminant(op.ghz_state()) == pytest.approx(0.25)
    sym = op.state_tensor(op.build_event(op.DalitzPoint(2 / 3, 2 / 3)), 0)
    assert op.three_tangle(sym) == pytest.approx(1 / 3)
    report = op.classify(sym)
    assert report.state_class == op.StateClass.GHZ_CLASS
    assert report.label == "GHZ_CLASS"


def test_collinear_configuration_is_biseparable():
    s = op.state_tensor(op.build_event(op.DalitzPoint(0.5, 0.5)), 0)
    report = op.classify(s)
    assert report.label == "BISEPARABLE(3|12)"
    sv = op.bipartition_schmidt(s, 3)
    assert sv[1] < 1e-9


def test_linear_basis_round_trip():
    s = op.pair_coefficient_state(0.3, 0.5, 0.7)
    lin = op.to_linear_basis(s)
    back = op.to_circular_basis(lin)
    assert np.allclose(back.amplitudes, s.amplitudes, atol=1e-13)
    assert op.s_z0_hdet_product(0.7, 0.7, 0.0) == pytest.approx(0.0)


def test_correlations():
    a = np.array([0.0, 0.0, 1.0])
    assert op.two_qubit_correlation(op.deformed_singlet(0.0), a, a) == pytest.approx(-0.25)
    b = np.array([1.0, 0.0, 0.0])
    closed = op.deformed_correlation_closed(1.1, a, b)
    oracle = op.two_qubit_correlation(op.deformed_singlet(1.1), a, b)
    assert closed == pytest.approx(oracle, abs=1e-12)
    s3 = op.spin1_matrix(a)
    v = np.array([1.0, 1.0j, 0.0]) / math.sqrt(2)
    assert np.allclose(s3 @ v, v)


def test_correlation_3d_transversality():
    t = op.build_event(op.DalitzPoint(0.8, 0.75), op.Orientation(0.2, 1.0, 0.5))
    s = op.state_tensor(t, 1)
    psi = op.embed_3d(s, t)
    assert psi.shape == (3, 3, 3)
    k1 = t.direction(1)
    assert np.abs(np.einsum("i,ijk->jk", k1, psi)).max() < 1e-12 * s.norm
    val = op.correlation_3d(psi, *np.eye(3))
    assert abs(val) <= 1.0 + 1e-12


def test_optimizer_and_scan():
    result = op.optimize_settings(op.ghz_state(), "mermin", restarts=8, seed=3)
    assert result["value"] == pytest.approx(4.0, abs=1e-6)
    rows = op.scan_dalitz(n=11, s_z=0, observable="tangle")
    assert rows and all(0.0 <= r["value"] <= 1.0 + 1e-12 for r in rows)


def test_sampling_determinism():
    a = op.sample_events(50, weighting="matrix-element", seed=9)
    b = op.sample_events(50, weighting="matrix-element", seed=9)
    assert [e["x1"] for e in a["events"]] == [e["x1"] for e in b["events"]]
    assert 0.0 < a["acceptance_rate"] <= 1.0


def test_search_smoke():
    findings = op.find_hdet_zeros(s_z=0, policy="plane-normal", grid_n=15)
    assert findings
    assert all(f["hdet_abs"] < 1e-9 for f in findings)
    assert all(f["class"].startswith("BISEPARABLE") for f in findings)
