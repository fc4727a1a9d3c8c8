"""Atom placement: optical elements and analyzer arrays on the cavity grid.

Optical elements (mirrors, beam splitters, parabolas, slit masks) are made of
two-level atoms pinned to configuration-grid points; the point-source term in
the dynamics requires exact grid placement.  Builders work in index space so
atom counts are deterministic functions of the requested geometry.

Supported slab orientations are the ones representable on a square grid:
axis-aligned (rows/columns at spacing dx) and the two diagonals.  For a
diagonal slab the atoms within a layer sit sqrt(2)*dx apart along the line
and successive layers occupy adjacent parallel diagonals, the closest
packing the grid allows (perpendicular spacing dx/sqrt(2)).
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .lattice import ModeLattice

KIND_ELEMENT = "element"
KIND_ANALYZER = "analyzer"

_QUARTER = np.pi / 4.0


@dataclass(frozen=True)
class Atom:
    """A two-level atom: grid position, transition frequency, dipole constant."""

    pos: tuple[float, float]
    omega: float
    dipole: complex
    kind: str = KIND_ELEMENT

    def __post_init__(self):
        if self.omega <= 0:
            raise ValueError(f"transition frequency must be positive, got {self.omega}")


@dataclass
class AnalyzerArray:
    """Weakly coupled probe atoms with a linear frequency ladder.

    Atom j gets omega_j = omega_min + (j-1)*(omega_max-omega_min)/(N-1) and
    dipole D_j = C/omega_j, which equalizes the decay constants across the
    band.  ``positions`` are cycled if shorter than ``count``.  The default
    coupling scale keeps the probe non-destructive.
    """

    omega_min: float
    omega_max: float
    count: int
    positions: list[tuple[float, float]]
    C: float = 1e-4

    def __post_init__(self):
        if self.count < 2:
            raise ValueError("analyzer array needs at least 2 atoms")
        if self.omega_min <= 0 or self.omega_max <= self.omega_min:
            raise ValueError("analyzer band must satisfy 0 < omega_min < omega_max")
        if self.C <= 0:
            raise ValueError("coupling scale C must be positive")
        if not self.positions:
            raise ValueError("analyzer array needs at least one position")


class Scene:
    """An immutable list of atoms bound to a lattice.

    Positions are snapped to the grid on construction.  Atoms that are exact
    duplicates (same grid point, frequency, dipole and kind) are collapsed
    with a warning; distinct atoms may share a grid point, their source
    contributions simply add.
    """

    def __init__(self, lattice: ModeLattice, atoms: list[Atom],
                 meta: dict | None = None):
        self.lattice = lattice
        self.meta = dict(meta or {})
        seen = set()
        kept: list[Atom] = []
        dupes = 0
        for a in atoms:
            idx = lattice.position_to_index(a.pos)
            key = (idx, a.omega, complex(a.dipole), a.kind)
            if key in seen:
                dupes += 1
                continue
            seen.add(key)
            kept.append(Atom(lattice.index_to_position(*idx), a.omega,
                             complex(a.dipole), a.kind))
        if dupes:
            warnings.warn(f"merged {dupes} duplicate atoms", stacklevel=2)
        self.atoms = tuple(kept)
        n_a = len(kept)
        self.pos_index = np.array([lattice.position_to_index(a.pos) for a in kept],
                                  dtype=int).reshape(n_a, 2)
        self.pos = np.array([a.pos for a in kept], dtype=float).reshape(n_a, 2)
        self.omega = np.array([a.omega for a in kept], dtype=float)
        self.dipole = np.array([a.dipole for a in kept], dtype=complex)
        self.kind = np.array([a.kind for a in kept])

    def __len__(self) -> int:
        return len(self.atoms)

    def __add__(self, other: "Scene") -> "Scene":
        if other.lattice is not self.lattice:
            raise ValueError("scenes can only be merged on the same lattice")
        meta = {**self.meta, **other.meta}
        return Scene(self.lattice, list(self.atoms) + list(other.atoms), meta)

    @classmethod
    def empty(cls, lattice: ModeLattice) -> "Scene":
        return cls(lattice, [])

    def analyzer_mask(self) -> np.ndarray:
        return self.kind == KIND_ANALYZER

    def __repr__(self):
        return f"Scene({len(self)} atoms on {self.lattice!r})"


# ----------------------------------------------------------------------
# slab geometry in index space
# ----------------------------------------------------------------------

def _classify_angle(angle: float) -> str:
    """Map an angle to one of the grid-representable slab orientations."""
    a = float(angle) % np.pi
    for name, ref in (("horizontal", 0.0), ("diag_up", _QUARTER),
                      ("vertical", 2 * _QUARTER), ("diag_down", 3 * _QUARTER),
                      ("horizontal", np.pi)):
        if abs(a - ref) < 1e-9:
            return name
    raise ValueError(
        "slab angle must be a multiple of pi/4 (axis-aligned or diagonal); "
        f"got {angle!r} rad")


def _slab_indices(lat: ModeLattice, center, angle: float, length: float,
                  layers: int):
    """Grid indices of a slab; raises if the slab leaves the cavity."""
    if layers < 1:
        raise ValueError("need at least one layer")
    orient = _classify_angle(angle)
    i0, j0 = lat.position_to_index(center)
    n = lat.n

    along_diag = orient in ("diag_up", "diag_down")
    step_len = lat.dx * (np.sqrt(2.0) if along_diag else 1.0)
    npts = int(np.rint(length / step_len)) + 1
    full_span = npts >= n
    if full_span:
        npts = n  # wraps seamlessly under the periodic boundary
    s = np.arange(npts) - (npts - 1) // 2

    # layers on adjacent grid lines: rows/columns for axis-aligned slabs,
    # neighboring diagonals for diagonal ones
    offs = np.arange(layers) - (layers - 1) // 2

    pts = []
    for d in offs:
        if orient == "vertical":
            ii, jj = np.full_like(s, i0 + d), j0 + s
        elif orient == "horizontal":
            ii, jj = i0 + s, np.full_like(s, j0 + d)
        elif orient == "diag_up":      # slope +1
            ii, jj = i0 + s, j0 + s + d
        else:                          # slope -1
            ii, jj = i0 + s, j0 - s + d
        pts.append(np.stack([ii, jj], axis=1))
    pts = np.concatenate(pts, axis=0)

    if not full_span and (pts.min() < 0 or pts.max() >= n):
        raise ValueError("slab exits the cavity bounds")
    return pts % n


def build_slab_mirror(lat: ModeLattice, center, angle: float, length: float,
                      layers: int, omega: float, D: complex,
                      kind: str = KIND_ELEMENT) -> Scene:
    """A straight slab of identical atoms, ``layers`` grid lines thick.

    ``length`` extends along the slab; a length spanning the whole cavity
    wraps periodically into a closed line.  All atoms share ``omega`` and
    the dipole constant ``D``.
    """
    pts = _slab_indices(lat, center, angle, length, layers)
    atoms = [Atom(lat.index_to_position(i, j), omega, D, kind) for i, j in pts]
    return Scene(lat, atoms)


def build_beam_splitter(lat: ModeLattice, center, angle: float, length: float,
                        omega: float, D: complex) -> Scene:
    """A single-layer slab; with detuned atoms it splits instead of reflecting."""
    return build_slab_mirror(lat, center, angle, length, layers=1,
                             omega=omega, D=D)


def build_parabola(lat: ModeLattice, x0: float, p: float, y_extent: float,
                   layers: int, omega: float, D: complex) -> Scene:
    """Atoms tracing x = x0 + y^2/(2p), thickened ``layers`` cells along x.

    ``y_extent`` is the span along y between the first and last grid row,
    centered on y = 0 (same fence-post convention as the slab length).  The
    thickening goes behind the reflecting surface (toward +x for p < 0,
    toward -x for p > 0).  The focus (x0 + p/2, 0) is recorded in the scene
    metadata.
    """
    if p == 0:
        raise ValueError("parabola parameter p must be nonzero")
    if layers < 1:
        raise ValueError("need at least one layer")
    curvature = 0.0 if np.isinf(p) else 1.0 / (2.0 * p)
    n_rows = int(np.rint(y_extent / lat.dx)) + 1
    if n_rows > lat.n:
        raise ValueError("parabola exits the cavity bounds")
    j0 = lat.position_to_index((0.0, 0.0))[1]
    rows = j0 + np.arange(n_rows) - (n_rows - 1) // 2
    if rows.min() < 0 or rows.max() >= lat.n:
        raise ValueError("parabola exits the cavity bounds")
    back = 1 if (curvature < 0 or np.isinf(p)) else -1
    atoms = []
    n = lat.n
    for j in rows:
        y = lat.x[j]
        xs = x0 + curvature * y * y
        i_surf = int(np.rint((xs + lat.L / 2.0) / lat.dx))
        for m in range(layers):
            i = i_surf + back * m
            if not 0 <= i < n:
                raise ValueError("parabola exits the cavity bounds")
            atoms.append(Atom(lat.index_to_position(i, j), omega, D))
    meta = {"focus": (x0 + (0.0 if np.isinf(p) else p / 2.0), 0.0)}
    return Scene(lat, atoms, meta)


def build_two_slit(lat: ModeLattice, x_pos: float, slit_width: float,
                   separation: float, omega: float, D: complex,
                   layers: int = 8) -> Scene:
    """A full-height vertical mirror with two gaps of width ``slit_width``.

    Gap centers sit at y = +-separation/2.  Widths and the separation are
    realized in whole grid cells, with the lower gap mirroring the upper one
    so the pair is exactly symmetric about y = 0; the effective values are
    recorded in the scene metadata.  Coincident slits (separation 0) merge
    into a single gap; partially overlapping slits are rejected.
    """
    if slit_width <= 0:
        raise ValueError("slit width must be positive")
    if separation < 0:
        raise ValueError("slit separation must be non-negative")
    w = int(np.rint(slit_width / lat.dx))
    if w < 1:
        raise ValueError("slit width below one grid cell")
    half_sep = int(np.rint(0.5 * separation / lat.dx))
    if half_sep != 0 and 2 * half_sep < w:
        raise ValueError("slits overlap")

    n = lat.n
    i0, j_mid = lat.position_to_index((x_pos, 0.0))
    open_rows = np.zeros(n, dtype=bool)
    upper = j_mid + half_sep - w // 2 + np.arange(w)
    open_rows[upper % n] = True
    if half_sep != 0:
        open_rows[(2 * j_mid - upper) % n] = True
    sep_eff = 2.0 * (float(upper.mean()) - j_mid) * lat.dx

    offs = np.arange(layers) - (layers - 1) // 2
    atoms = []
    for d in offs:
        i = i0 + d
        if not 0 <= i < n:
            raise ValueError("slit mask exits the cavity bounds")
        for j in np.nonzero(~open_rows)[0]:
            atoms.append(Atom(lat.index_to_position(i, j), omega, D))
    meta = {"slit_width_eff": w * lat.dx, "separation_eff": sep_eff}
    return Scene(lat, atoms, meta)


def build_interferometer(lat: ModeLattice, arm_difference: float,
                         bs_center=(0.0, 0.0), arm_length: float = 7.0,
                         bs_length: float = 16.0, mirror_length: float = 12.0,
                         mirror_layers: int = 8, bs_omega: float = 10.4,
                         mirror_omega: float = 15.0, D: complex = 0.5) -> Scene:
    """Beam splitter plus two retro mirrors forming a folded interferometer.

    A packet arriving from -x splits at the diagonal beam splitter into a
    transmitted arm (toward +x, retro-reflected by a vertical mirror) and a
    reflected arm (toward -y, retro-reflected by a horizontal mirror).  The
    recombined output leaves through the +y and -x ports.  The vertical
    mirror sits ``arm_difference`` farther out (snapped to the grid), which
    sets the optical path imbalance.
    """
    dx = lat.dx
    shift = np.rint(arm_difference / dx) * dx
    bs = build_beam_splitter(lat, bs_center, -_QUARTER, bs_length,
                             omega=bs_omega, D=D)
    # both retro mirrors must present their beam-facing surface at exactly
    # the arm distance; the layer stack is centered, so shift each center by
    # the offset of its near face (low side for the vertical mirror, high
    # side for the horizontal one)
    lo = ((mirror_layers - 1) // 2) * dx
    hi = (mirror_layers // 2) * dx
    m_right = build_slab_mirror(
        lat, (bs_center[0] + arm_length + shift + lo, bs_center[1]),
        angle=np.pi / 2, length=mirror_length, layers=mirror_layers,
        omega=mirror_omega, D=D)
    m_down = build_slab_mirror(
        lat, (bs_center[0], bs_center[1] - arm_length - hi),
        angle=0.0, length=mirror_length, layers=mirror_layers,
        omega=mirror_omega, D=D)
    scene = bs + m_right + m_down
    scene.meta["arm_difference_eff"] = float(shift)
    return scene


def build_analyzer_array(lat: ModeLattice, spec: AnalyzerArray) -> Scene:
    """Place the analyzer atoms of ``spec`` with their frequency ladder."""
    d_omega = (spec.omega_max - spec.omega_min) / (spec.count - 1)
    atoms = []
    for j in range(spec.count):
        omega_j = spec.omega_min + d_omega * j
        pos = spec.positions[j % len(spec.positions)]
        atoms.append(Atom(tuple(pos), omega_j, spec.C / omega_j, KIND_ANALYZER))
    return Scene(lat, atoms)
