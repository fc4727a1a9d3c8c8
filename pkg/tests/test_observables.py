"""Tests of energy densities, spectra, decay fits and angular profiles."""

import numpy as np
import pytest

import qosim
from qosim import (Atom, GaussianSpec, HalfPlane, Rectangle, Scene,
                   StateVector, analyzer_spectrum, angular_intensity,
                   atom_excitations, build_analyzer_array, build_lattice,
                   classical_two_slit, energy_density, field_energy_modes,
                   field_energy_space, fit_decay, make_gaussian_photon,
                   mode_slice, region_energy_fraction)
from qosim.scene import AnalyzerArray
from qosim.state import INTERACTION


def single_mode_state(lat, mx, my):
    s = StateVector(np.zeros((lat.n, lat.n), complex), np.zeros(0, complex))
    s.field[lat.index_of_mode(mx, my)] = 1.0
    return s


def random_field_state(lat, rng):
    f = rng.normal(size=(lat.n, lat.n)) + 1j * rng.normal(size=(lat.n, lat.n))
    f /= np.sqrt(np.vdot(f, f).real)
    return StateVector(f, np.zeros(0, complex))


def test_single_mode_density_is_uniform():
    lat = build_lattice(10 * np.pi, 64)
    s = single_mode_state(lat, 20, 0)  # omega = 4
    e = energy_density(s, lat)
    expected = 4.0 / (10 * np.pi) ** 2
    assert np.allclose(e.total, expected, rtol=1e-12)
    assert np.allclose(e.electric, e.magnetic)
    assert expected == pytest.approx(4.05e-3, rel=1e-2)


def test_vacuum_density_is_zero():
    lat = build_lattice(5.0, 8)
    s = StateVector(np.zeros((8, 8), complex), np.zeros(0, complex))
    e = energy_density(s, lat)
    assert np.all(e.total == 0.0)


def test_zero_mode_carries_no_energy():
    lat = build_lattice(5.0, 8)
    s = single_mode_state(lat, 0, 0)
    e = energy_density(s, lat)
    assert np.all(e.total == 0.0)
    assert field_energy_modes(s, lat) == 0.0


def test_density_requires_schroedinger_picture():
    lat = build_lattice(5.0, 8)
    s = single_mode_state(lat, 1, 0)
    s.picture = INTERACTION
    with pytest.raises(ValueError):
        energy_density(s, lat)


def test_single_mode_energy_both_ways():
    lat = build_lattice(2 * np.pi, 16)
    s = single_mode_state(lat, 3, 4)  # omega = 5
    assert field_energy_modes(s, lat) == pytest.approx(5.0)
    e = energy_density(s, lat)
    assert field_energy_space(e, lat) == pytest.approx(5.0)


def test_parseval_on_random_states():
    lat = build_lattice(7.0, 16)
    rng = np.random.default_rng(2)
    for _ in range(50):
        s = random_field_state(lat, rng)
        em = field_energy_modes(s, lat)
        es = field_energy_space(energy_density(s, lat), lat)
        assert abs(em - es) / em < 1e-12


def test_electric_equals_magnetic_integrated():
    lat = build_lattice(7.0, 16)
    rng = np.random.default_rng(4)
    for _ in range(10):
        s = random_field_state(lat, rng)
        e = energy_density(s, lat)
        assert e.electric.sum() == pytest.approx(e.magnetic.sum(), rel=1e-10)


def test_gaussian_energy_matches_mean_frequency():
    lat = build_lattice(10 * np.pi, 128)
    s = make_gaussian_photon(lat, GaussianSpec((0, 0), (5, 0), 0.125, 0.125))
    # direct weighted sum over the lattice amplitudes
    direct = float(np.sum(lat.omega * np.abs(s.field) ** 2))
    assert field_energy_modes(s, lat) == pytest.approx(direct, rel=1e-13)
    # transverse variance shifts <omega> to k0 + var/(2 k0)
    assert direct == pytest.approx(5.0125, abs=5e-3)


def test_atom_excitations_readout():
    s = StateVector(np.zeros((4, 4), complex),
                    np.array([0.0, 0.6j, -0.8]), t=0.0)
    assert atom_excitations(s) == pytest.approx([0.0, 0.36, 0.64])


def test_analyzer_spectrum_sorted_and_selective():
    lat = build_lattice(10.0, 16)
    spec = AnalyzerArray(omega_min=2.0, omega_max=4.0, count=3, C=1e-4,
                         positions=[(0.0, 0.0)])
    scene = build_analyzer_array(lat, spec) + Scene(
        lat, [Atom((1.0, 1.0), 9.0, 0.5)])
    s = StateVector(np.zeros((16, 16), complex),
                    np.array([0.1, 0.2, 0.3, 0.9]))
    omega, probs = analyzer_spectrum(scene, s)
    assert omega == pytest.approx([2.0, 3.0, 4.0])
    assert probs == pytest.approx([0.01, 0.04, 0.09])


def test_analyzer_spectrum_requires_analyzers():
    lat = build_lattice(10.0, 16)
    scene = Scene(lat, [Atom((0, 0), 5.0, 0.5)])
    s = StateVector(np.zeros((16, 16), complex), np.zeros(1, complex))
    with pytest.raises(ValueError):
        analyzer_spectrum(scene, s)


def test_fit_decay_recovers_exact_exponential():
    t = np.linspace(0.0, 30.0, 400)
    fit = fit_decay(t, np.exp(-0.14 * t))
    assert fit.gamma == pytest.approx(0.14, rel=1e-12)
    assert fit.residual < 1e-12


def test_fit_decay_rejects_nonpositive_probabilities():
    t = np.linspace(0.0, 10.0, 50)
    p = np.exp(-0.5 * t)
    p[30] = 0.0
    with pytest.raises(ValueError):
        fit_decay(t, p, window=(0.0, 10.0))


def test_fit_decay_default_window_skips_onset():
    t = np.linspace(0.0, 40.0, 800)
    fit = fit_decay(t, np.exp(-0.2 * t))
    lo, hi = fit.window
    assert lo == pytest.approx(0.5 / 0.2, rel=0.05)
    assert hi == pytest.approx(2.0 / 0.2, rel=0.05)


def test_mode_slice_of_fresh_gaussian():
    lat = build_lattice(10 * np.pi, 64)
    s = make_gaussian_photon(lat, GaussianSpec((-8, 0), (4, 0), 1.0, 1.0))
    iy0 = lat.index_of_mode(0, 0)[1]
    k, p = mode_slice(s, lat, "x", iy0)
    assert np.all(np.diff(k) > 0)
    assert k[np.argmax(p)] == pytest.approx(4.0)


def test_mode_slice_rejects_bad_axis_and_index():
    lat = build_lattice(10.0, 8)
    s = single_mode_state(lat, 1, 0)
    with pytest.raises(ValueError):
        mode_slice(s, lat, "z", 0)
    with pytest.raises(IndexError):
        mode_slice(s, lat, "x", 12)


def test_angular_profile_of_isotropic_ring():
    lat = build_lattice(20.0, 256)
    x = lat.x[:, None]
    y = lat.x[None, :]
    r = np.hypot(x, y)
    density = np.where((r > 4.0) & (r < 7.0), 1.0, 0.0)
    e = qosim.EnergyField(electric=density, magnetic=np.zeros_like(density),
                          t=0.0)
    prof = angular_intensity(e, lat, origin=(0.0, 0.0), r_min=2.0, n_bins=64)
    vals = prof.intensity[np.isfinite(prof.intensity)]
    assert vals.max() == 1.0
    assert vals.min() > 0.8  # flat up to cell-assignment noise
    assert np.std(vals) < 0.05


def test_angular_profile_rejects_bad_r_min():
    lat = build_lattice(20.0, 32)
    e = qosim.EnergyField(np.ones((32, 32)), np.zeros((32, 32)), 0.0)
    with pytest.raises(ValueError):
        angular_intensity(e, lat, (0, 0), r_min=10.0)


def test_classical_two_slit_limits():
    theta = np.linspace(-1.0, 1.0, 2001)
    prof = classical_two_slit(k=15.0, d=1.227, a=1.963, theta=theta)
    assert prof.intensity.max() == 1.0
    assert prof.intensity[1000] == pytest.approx(1.0)  # theta = 0 is the peak
    # even in theta
    assert np.allclose(prof.intensity, prof.intensity[::-1], atol=1e-12)
    # first envelope zero where k*d*sin(theta)/2 == pi
    z = np.arcsin(2 * np.pi / (15.0 * 1.227))
    idx = np.argmin(np.abs(theta - z))
    env = classical_two_slit(15.0, 1.227, 0.0, theta)
    assert env.intensity[idx] < 1e-4


def test_classical_two_slit_merged_slits():
    theta = np.linspace(-0.8, 0.8, 801)
    merged = classical_two_slit(k=10.0, d=1.5, a=0.0, theta=theta)
    single = (0.75 * np.sinc(0.5 * 10.0 * 1.5 * np.sin(theta) / np.pi)) ** 2
    assert np.allclose(merged.intensity, single / single.max(), atol=1e-12)


def test_region_fraction_whole_cavity_and_halves():
    lat = build_lattice(10.0, 32)
    rng = np.random.default_rng(9)
    s = random_field_state(lat, rng)
    e = energy_density(s, lat)
    whole = region_energy_fraction(
        e, lat, Rectangle(-5.0, 5.0, -5.0, 5.0))
    assert whole == pytest.approx(1.0)
    left = region_energy_fraction(e, lat, HalfPlane((-1.0, 0.0), 0.0))
    right = region_energy_fraction(e, lat, HalfPlane((1.0, 0.0), lat.dx / 2))
    assert left + right == pytest.approx(1.0)


def test_region_fraction_rejects_degenerate_region():
    lat = build_lattice(10.0, 32)
    e = qosim.EnergyField(np.ones((32, 32)), np.zeros((32, 32)), 0.0)
    with pytest.raises(ValueError):
        region_energy_fraction(e, lat, Rectangle(8.0, 9.0, 8.0, 9.0))


def test_analyzer_back_action_scales_as_c_squared():
    # weak probing: halving C quarters the absorbed probability, and the
    # total absorbed stays far below the non-destructive budget
    lat = build_lattice(10 * np.pi, 64)
    packet = GaussianSpec((-3.0, 0.0), (5.0, 0.0), 0.25, 0.25)
    absorbed = {}
    for c_scale in (1e-4, 5e-5):
        spec = AnalyzerArray(omega_min=4.0, omega_max=6.0, count=20,
                             C=c_scale, positions=[(3.0, 0.0)])
        scene = build_analyzer_array(lat, spec)
        s0 = make_gaussian_photon(lat, packet, n_atoms=len(scene))
        last = None
        for snap in qosim.simulate(lat, scene, s0,
                                   qosim.stable_dt(lat, scene), 10.0, 10.0):
            last = snap
        absorbed[c_scale] = float(atom_excitations(last.state).sum())
    ratio = absorbed[1e-4] / absorbed[5e-5]
    assert ratio == pytest.approx(4.0, rel=0.2)
    assert absorbed[1e-4] < 1e-6


def test_off_band_analyzers_stay_dark():
    # two analyzers sharing a grid point, tuned far above the packet band
    lat = build_lattice(10 * np.pi, 64)
    scene = Scene(lat, [Atom((3.0, 0.0), 10.0, 1e-5 / 10.0, "analyzer"),
                        Atom((3.0, 0.0), 11.0, 1e-5 / 11.0, "analyzer")])
    assert len(scene) == 2
    s0 = make_gaussian_photon(lat, GaussianSpec((-3.0, 0.0), (4.0, 0.0),
                                                0.25, 0.25), n_atoms=2)
    last = None
    for snap in qosim.simulate(lat, scene, s0, qosim.stable_dt(lat, scene),
                               10.0, 10.0):
        last = snap
    assert np.all(atom_excitations(last.state) < 1e-8)


def test_decay_rate_scales_with_dipole_squared():
    # quadrupling D^2 quadruples the fitted decay rate
    lat = build_lattice(10 * np.pi, 64)
    rates = {}
    for dipole in (0.15, 0.30):
        scene = Scene(lat, [Atom((0.0, 0.0), 5.0, dipole)])
        s0 = StateVector(np.zeros((64, 64), complex), np.array([1.0 + 0j]))
        times, probs = [], []
        for snap in qosim.simulate(lat, scene, s0,
                                   qosim.stable_dt(lat, scene), 10.0, 0.05):
            times.append(snap.t)
            probs.append(atom_excitations(snap.state)[0])
        rates[dipole] = fit_decay(times, probs).gamma
    assert rates[0.30] / rates[0.15] == pytest.approx(4.0, rel=0.2)
