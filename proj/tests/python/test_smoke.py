import math

import numpy as np
import pytest

import schiffer


def quadratic(t=0.3, n=8):
    return schiffer.build_complex([schiffer.CapSpec([1.0, t])], n)


def test_version():
    assert schiffer.__version__ == "0.1.0"


def test_identity_grunsky_vanishes():
    cx = schiffer.build_complex([schiffer.CapSpec([1.0])], 8)
    assert np.abs(schiffer.grunsky_matrix(cx)).max() < 1e-12
    assert schiffer.grunsky_norm(cx) < 1e-12


def test_quadratic_leading_entries():
    g = schiffer.grunsky_matrix(quadratic())
    assert g.shape == (8, 8)
    assert abs(g[0, 0] - 0.09) < 1e-13
    assert abs(g[1, 0] + math.sqrt(2) * 0.027) < 1e-13
    assert np.allclose(g, g.T, atol=1e-14)


def test_operators_and_scattering():
    ops = schiffer.assemble_operators(quadratic(0.2 + 0.1j, 12))
    assert ops.t11.shape == (12, 12)
    assert ops.t11_ext.shape[0] == ops.J
    assert schiffer.pythagoras_defect(ops) < 1e-10
    s = schiffer.scattering_matrix(ops)
    assert np.abs(s.conj().T @ s - np.eye(24)).max() < 1e-8
    assert schiffer.unitarity_defect(ops) < 1e-8
    assert 0.0 < schiffer.theta_sigma_min(ops) <= 1.0


def test_ladder():
    hist = schiffer.refinement_ladder([schiffer.CapSpec([1.0, 0.3])], [8, 16])
    assert [h["N"] for h in hist] == [8, 16]
    assert hist[1]["defect"] < hist[0]["defect"]


def test_overfare_and_hbvp():
    caps = [schiffer.CapSpec([1.0, 0.3]), schiffer.CapSpec([0.5, 0.1], center=3.0)]
    ops = schiffer.assemble_operators(schiffer.build_complex(caps, 10))
    g = schiffer.random_gamma_bar(ops, 5)
    oc = schiffer.overfare_check(ops, g)
    assert oc["mismatch"] < 1e-6
    assert max(abs(a + b) for a, b in zip(oc["periods_sigma1"], oc["periods_sigma2"])) < 1e-9
    holo, anti = schiffer.manufactured_datum(ops, g)
    assert schiffer.solvability_residual(ops, holo, anti) < 1e-10
    sol = schiffer.solve_hbvp(ops, holo, anti)
    assert np.linalg.norm(sol["gamma_bar"] - g) < 1e-9
    assert sol["boundary_mismatch"] < 1e-6


def test_unsolvable_and_errors():
    ops = schiffer.assemble_operators(schiffer.build_complex([schiffer.CapSpec([1.0])], 6))
    holo = np.zeros(6, complex)
    holo[0] = 1.0
    with pytest.raises(schiffer.Unsolvable):
        schiffer.solve_hbvp(ops, holo, np.zeros(6, complex))
    with pytest.raises(schiffer.UnivalenceViolation):
        schiffer.build_complex([schiffer.CapSpec([1.0, 1.0])], 8)
    with pytest.raises(schiffer.Error):
        schiffer.harmonic_measures(schiffer.build_complex([schiffer.CapSpec([1.0])], 8))


def test_annulus_period():
    caps = [schiffer.CapSpec([0.25]), schiffer.CapSpec([1.0], at_infinity=True)]
    hm = schiffer.harmonic_measures(schiffer.build_complex(caps, 8, 2048))
    assert abs(hm["period_matrix"][0, 0] - 2 * math.pi / math.log(4)) < 1e-6


def test_mobius_invariance():
    cx = quadratic(0.25, 10)
    t = schiffer.transform(cx, 0.8 + 0.2j, 1.0 - 0.5j, 0.25 + 0.1j, 1.0)
    a = np.linalg.svd(schiffer.assemble_operators(cx).t11, compute_uv=False)
    b = np.linalg.svd(schiffer.assemble_operators(t).t11, compute_uv=False)
    assert np.abs(a - b).max() < 1e-7
