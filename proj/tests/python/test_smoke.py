import math

import pytest

import pqcdet


def test_gate_probabilities():
    det = pqcdet.gesi_300k()
    gp = pqcdet.gate_probabilities(det)
    assert gp.p_pc == 0.95
    assert gp.p_dc == pytest.approx(-math.expm1(-1.6e6 * 1e-9), rel=1e-14)


def test_photon_detection_matches_enumeration():
    cfg = pqcdet.NpdConfig()
    cfg.m = 4
    cfg.detector = pqcdet.gesi_300k()
    closed = pqcdet.photon_detection(cfg, 2)
    oracle = pqcdet.enumerate_photon_events(cfg, 2)
    assert closed.p_click == pytest.approx(oracle.p_click, abs=1e-12)
    assert closed.p_success == pytest.approx(oracle.p_success, abs=1e-12)


def test_qubit_success_delta():
    delta = (
        pqcdet.qubit_detection(pqcdet.gesi_300k(), 1).p_success
        - pqcdet.qubit_detection(pqcdet.snspd_4k(), 1).p_success
    )
    assert delta == pytest.approx(0.03848, abs=1e-5)


def test_monte_carlo_determinism():
    cfg = pqcdet.NpdConfig()
    cfg.m = 3
    cfg.detector = pqcdet.gesi_300k()
    a = pqcdet.monte_carlo(cfg, 2, pqcdet.Scheme.Photon, 100000, 5)
    b = pqcdet.monte_carlo(cfg, 2, pqcdet.Scheme.Photon, 100000, 5)
    assert a.click.value == b.click.value
    assert a.success.value == b.success.value


def test_dcr_fit_and_projection():
    samples = pqcdet.samples_from_csv(
        "diameter_um,current_na\n20,0.0573\n60,0.2457\n100,0.5455\n140,0.9567\n"
    )
    fit = pqcdet.fit_dark_densities(samples)
    assert fit.bulk_a_per_cm2 > 0
    projected = pqcdet.project_dcr(
        pqcdet.DeviceGeometry.disc(15e-6),
        5e6,
        pqcdet.DeviceGeometry.rectangle(14.2e-6, 2e-6),
        pqcdet.ProjectionMode.AreaOnly,
    )
    assert projected == pytest.approx(0.8036e6, rel=1e-3)


def test_slab_and_qe():
    stack = pqcdet.LayerStack()
    stack.layers = [pqcdet.Layer(400e-9, 3.48 + 0j)]
    stack.clad_bottom = 1.444 + 0j
    stack.clad_top = 1.444 + 0j
    modes = pqcdet.solve_slab_modes(stack, 1.33e-6, pqcdet.Polarization.TE)
    assert len(modes.modes) == 2
    assert abs(pqcdet.mode_overlap(modes.modes[0], modes.modes[0]) - 1) < 1e-8

    geom = pqcdet.CouplerGeometry()
    geom.coupler_m = 5e-6
    result = pqcdet.compute_qe(stack, stack, geom, 1.33e-6, pqcdet.Polarization.TE)
    assert result.breakdown.transmitted == pytest.approx(1.0, abs=1e-6)


def test_mesh_hom():
    bs = pqcdet.CMatrix(2, 2)
    s = 1 / math.sqrt(2)
    bs[0, 0] = s
    bs[0, 1] = 1j * s
    bs[1, 0] = 1j * s
    bs[1, 1] = s
    assert pqcdet.output_fock_probability(bs, [1, 1], [1, 1]) < 1e-12
