"""Tests of atom placement and the optical-element builders."""

import numpy as np
import pytest

from qosim import (AnalyzerArray, Atom, Scene, build_analyzer_array,
                   build_beam_splitter, build_interferometer, build_lattice,
                   build_parabola, build_slab_mirror, build_two_slit)

L = 10 * np.pi


@pytest.fixture(scope="module")
def lat():
    return build_lattice(L, 256)


def test_atoms_snap_to_grid(lat):
    scene = Scene(lat, [Atom((1.0, -2.3), omega=5.0, dipole=0.5)])
    x, y = scene.atoms[0].pos
    i, j = lat.position_to_index((x, y))
    assert lat.index_to_position(i, j) == (x, y)


def test_exact_duplicates_merge_with_warning(lat):
    a = Atom((0.0, 0.0), 5.0, 0.5)
    with pytest.warns(UserWarning):
        scene = Scene(lat, [a, a])
    assert len(scene) == 1


def test_same_position_distinct_frequencies_allowed(lat):
    atoms = [Atom((0.0, 0.0), 5.0, 0.5), Atom((0.0, 0.0), 6.0, 0.5)]
    scene = Scene(lat, atoms)
    assert len(scene) == 2


def test_scene_merge_concatenates_in_order(lat):
    s1 = Scene(lat, [Atom((0, 0), 5.0, 0.5)])
    s2 = Scene(lat, [Atom((1, 0), 6.0, 0.5)])
    merged = s1 + s2
    assert [a.omega for a in merged.atoms] == [5.0, 6.0]


def test_diagonal_slab_geometry(lat):
    scene = build_slab_mirror(lat, (0, 0), np.pi / 4, 2.0, layers=2,
                              omega=5.0, D=0.5)
    # atoms along one diagonal layer sit sqrt(2)*dx apart
    layer0 = scene.pos[np.isclose(scene.pos[:, 1] - scene.pos[:, 0], 0.0)]
    layer0 = layer0[np.argsort(layer0[:, 0])]
    step = np.hypot(*(layer0[1] - layer0[0]))
    assert step == pytest.approx(np.sqrt(2) * lat.dx)
    assert step == pytest.approx(0.17, abs=0.01)
    # layers occupy adjacent diagonals: perpendicular spacing dx/sqrt(2)
    d = (scene.pos[:, 1] - scene.pos[:, 0])
    gaps = np.unique(np.round(d, 9))
    assert len(gaps) == 2
    perp = abs(gaps[1] - gaps[0]) / np.sqrt(2)
    assert perp == pytest.approx(lat.dx / np.sqrt(2))


def test_mirror_slab_atom_count(lat):
    scene = build_slab_mirror(lat, (0, 0), np.pi / 4, 34.2, layers=8,
                              omega=5.0, D=0.5)
    assert len(scene) == 1584


def test_degenerate_slab_is_single_atom(lat):
    scene = build_slab_mirror(lat, (1.0, 1.0), np.pi / 4, 0.0, layers=1,
                              omega=5.0, D=0.5)
    assert len(scene) == 1
    assert scene.atoms[0].pos == pytest.approx(lat.snap_position((1.0, 1.0)))


def test_slab_exiting_cavity_rejected(lat):
    with pytest.raises(ValueError):
        build_slab_mirror(lat, (14.0, 0.0), np.pi / 2, 10.0, layers=60,
                          omega=5.0, D=0.5)


def test_slab_rejects_unrepresentable_angle(lat):
    with pytest.raises(ValueError):
        build_slab_mirror(lat, (0, 0), 0.3, 5.0, layers=1, omega=5.0, D=0.5)


def test_beam_splitter_is_single_layer_and_symmetric(lat):
    scene = build_beam_splitter(lat, (0, 0), np.pi / 4, 20.2, omega=10.4, D=0.5)
    pos = scene.pos
    # one layer on the diagonal through the origin
    assert np.allclose(pos[:, 0], pos[:, 1])
    flipped = set(map(tuple, np.round(-pos, 9)))
    assert flipped == set(map(tuple, np.round(pos, 9)))


def test_beam_splitter_detuning_against_packet():
    assert 15.0 - 10.4 == pytest.approx(4.6)


def test_parabola_focus_and_count(lat):
    scene = build_parabola(lat, x0=2.0, p=-9.0, y_extent=26.9, layers=5,
                           omega=5.0, D=0.5)
    assert scene.meta["focus"] == pytest.approx((-2.5, 0.0))
    assert len(scene) == 1100


def test_parabola_traces_curve(lat):
    scene = build_parabola(lat, x0=2.0, p=-9.0, y_extent=10.0, layers=1,
                           omega=5.0, D=0.5)
    for x, y in scene.pos:
        assert abs(x - (2.0 - y * y / 18.0)) <= lat.dx


def test_flat_parabola_matches_vertical_slab(lat):
    flat_parab = build_parabola(lat, x0=2.0, p=np.inf, y_extent=5.0, layers=1,
                                omega=5.0, D=0.5)
    assert np.allclose(flat_parab.pos[:, 0], flat_parab.pos[0, 0])


def test_parabola_exiting_cavity_rejected(lat):
    with pytest.raises(ValueError):
        build_parabola(lat, x0=15.0, p=1e-3, y_extent=10.0, layers=1,
                       omega=5.0, D=0.5)


def test_two_slit_composite_atom_count():
    lat512 = build_lattice(L, 512)
    slits = build_two_slit(lat512, x_pos=-2.0, slit_width=1.227,
                           separation=1.963, omega=15.0, D=0.5, layers=8)
    backing = build_slab_mirror(lat512, (-13.0, 0.0), np.pi / 2,
                                length=L, layers=8, omega=15.0, D=0.5)
    assert len(slits) + len(backing) == 7872


def test_two_slit_desk_scale_count(lat):
    slits = build_two_slit(lat, x_pos=-2.0, slit_width=1.227,
                           separation=1.963, omega=15.0, D=0.5, layers=8)
    backing = build_slab_mirror(lat, (-13.0, 0.0), np.pi / 2,
                                length=L, layers=8, omega=15.0, D=0.5)
    assert len(slits) + len(backing) == 7872 // 2


def test_two_slit_full_width_gap_leaves_nothing(lat):
    scene = build_two_slit(lat, x_pos=0.0, slit_width=L, separation=0.0,
                           omega=15.0, D=0.5, layers=1)
    assert len(scene) == 0


def test_two_slit_coincident_slits_merge(lat):
    one = build_two_slit(lat, 0.0, slit_width=1.0, separation=0.0,
                         omega=15.0, D=0.5, layers=1)
    # a single gap of the same width
    w = int(np.rint(1.0 / lat.dx))
    assert len(one) == lat.n - w


def test_two_slit_overlapping_slits_rejected(lat):
    with pytest.raises(ValueError):
        build_two_slit(lat, 0.0, slit_width=1.0, separation=0.4,
                       omega=15.0, D=0.5, layers=1)


def test_interferometer_composition(lat):
    eq = build_interferometer(lat, arm_difference=0.0)
    assert eq.meta["arm_difference_eff"] == 0.0
    shifted = build_interferometer(lat, arm_difference=4 * lat.dx)
    assert shifted.meta["arm_difference_eff"] == pytest.approx(4 * lat.dx)
    # identical atom counts; the vertical mirror moves along +x only
    assert len(eq) == len(shifted)
    moved = shifted.pos[:, 0].max() - eq.pos[:, 0].max()
    assert moved == pytest.approx(4 * lat.dx)


def test_interferometer_snaps_arm_difference(lat):
    s = build_interferometer(lat, arm_difference=0.4 * lat.dx)
    assert s.meta["arm_difference_eff"] == 0.0


def test_analyzer_ladder_and_dipoles(lat):
    spec = AnalyzerArray(omega_min=10.0, omega_max=20.0, count=2, C=1e-4,
                         positions=[(0.0, 0.0)])
    scene = build_analyzer_array(lat, spec)
    assert list(scene.omega) == [10.0, 20.0]
    assert np.allclose(scene.dipole, [1e-5, 5e-6])
    # equal decay constants: D_j^2 w_j^2 == C^2 for every analyzer
    assert np.allclose(np.abs(scene.dipole) ** 2 * scene.omega**2, 1e-8)


def test_analyzer_array_validation():
    with pytest.raises(ValueError):
        AnalyzerArray(omega_min=-1.0, omega_max=2.0, count=5, C=1e-4,
                      positions=[(0, 0)])
    with pytest.raises(ValueError):
        AnalyzerArray(omega_min=1.0, omega_max=2.0, count=1, C=1e-4,
                      positions=[(0, 0)])


def test_builders_are_deterministic(lat):
    a = build_slab_mirror(lat, (0, 0), np.pi / 4, 10.0, 3, 5.0, 0.5)
    b = build_slab_mirror(lat, (0, 0), np.pi / 4, 10.0, 3, 5.0, 0.5)
    assert a.atoms == b.atoms
