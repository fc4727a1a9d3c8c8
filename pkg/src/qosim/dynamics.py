"""Time evolution: FFT-factorized Hamiltonian action and fixed-step RK4.

In the interaction picture only the field-atom coupling evolves the state.
With the one-excitation expansion the Schroedinger equation reduces to

    d c_j / dt = -(1/(2 eps0 L)) sqrt(omega_j) D_j e^{+i omega_j t} T(r_j, t)
    d c_k / dt = +(1/(2 eps0 L)) e^{+i omega_k t} U(k, t)

where T(r, t) = sum_k c_k e^{-i omega_k t} e^{+i k.r} is a mode sum sampled
at the atom positions and U(k, t) is the transform of the atomic point-source
grid sum_j sqrt(omega_j) D_j^* c_j e^{-i omega_j t} delta(r - r_j).  Both are
single 2D FFTs, so one derivative evaluation costs two transforms regardless
of the atom count.  The coupling uses the atomic frequency in the prefactor;
the mode index enters only through the positional phase.

Time stepping is the classical four-stage fourth-order Runge-Kutta rule with
a fixed step.  A free-field fast path advances a pure photon state by exact
phase rotation.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator

import numpy as np

from .lattice import ModeLattice
from .scene import Scene
from .state import INTERACTION, SCHROEDINGER, StateVector, to_picture


class NumericalFailure(RuntimeError):
    """Raised when the integration produces non-finite amplitudes."""

    def __init__(self, step: int, t: float):
        super().__init__(f"non-finite amplitudes at step {step} (t={t:g})")
        self.step = step
        self.t = t


class CouplingTable:
    """Per-atom coupling prefactors and grid addresses, precomputed once."""

    def __init__(self, scene: Scene, lat: ModeLattice):
        if scene.lattice is not lat:
            raise ValueError("scene was built on a different lattice")
        u = lat.units
        kappa = 1.0 / (2.0 * u.epsilon0 * lat.L)
        sqrt_w = np.sqrt(scene.omega)
        self.omega_atoms = scene.omega
        self.flat_index = scene.pos_index[:, 0] * lat.n + scene.pos_index[:, 1]
        # multiplies e^{+i w_j t} T(r_j, t) in the atom derivative
        self.atom_gain = -kappa * sqrt_w * scene.dipole
        # multiplies c_j e^{-i w_j t} in the point-source grid
        self.source_amp = sqrt_w * np.conj(scene.dipole)
        # multiplies e^{+i w_k t} U(k, t) in the field derivative
        self.field_gain = kappa
        self.n_atoms = len(scene)


@dataclass
class RhsWorkspace:
    """Scratch buffers and phase caches sized for one lattice."""

    lat: ModeLattice
    source: np.ndarray = None

    def __post_init__(self):
        if self.source is None:
            self.source = np.zeros(self.lat.n * self.lat.n, dtype=complex)


def _rhs(field, atoms, mode_phase, atom_phase, lat, table, ws):
    """Derivative of (field, atoms) given precomputed e^{-i w t} phases."""
    tr = lat.modes_to_grid(field * mode_phase)
    d_atoms = table.atom_gain * np.conj(atom_phase) * tr.ravel()[table.flat_index]

    src = table.source_amp * atoms * atom_phase
    g = ws.source
    g.real = np.bincount(table.flat_index, weights=src.real, minlength=g.size)
    g.imag = np.bincount(table.flat_index, weights=src.imag, minlength=g.size)
    u = lat.grid_to_modes(g.reshape(lat.n, lat.n))
    d_field = (table.field_gain * np.conj(mode_phase)) * u
    return d_field, d_atoms


def apply_hamiltonian(s: StateVector, scene: Scene, lat: ModeLattice,
                      t: float | None = None,
                      ws: RhsWorkspace | None = None):
    """Evaluate d|psi>/dt = -(i/hbar) H_int(t) |psi| in the interaction picture.

    Returns the pair (d_field, d_atoms).  With no atoms in the scene the
    derivative vanishes identically.
    """
    if s.picture != INTERACTION:
        raise ValueError("apply_hamiltonian expects an interaction-picture state")
    if len(s.atoms) != len(scene):
        raise ValueError(f"state carries {len(s.atoms)} atom amplitudes, "
                         f"scene has {len(scene)}")
    if ws is None:
        ws = RhsWorkspace(lat)
    if t is None:
        t = s.t
    if len(scene) == 0:
        return np.zeros_like(s.field), np.zeros_like(s.atoms)
    table = CouplingTable(scene, lat)
    mode_phase = np.exp(-1j * t * lat.omega)
    atom_phase = np.exp(-1j * t * table.omega_atoms)
    return _rhs(s.field, s.atoms, mode_phase, atom_phase, lat, table, ws)


def rk4_step_arrays(field, atoms, t, dt, rhs):
    """One classical RK4 step for a (field, atoms) amplitude pair.

    ``rhs(field, atoms, t)`` must return the derivative pair.  Stage offsets
    are (0, dt/2, dt/2, dt) with weights (1/6, 1/3, 1/3, 1/6).
    """
    k1f, k1a = rhs(field, atoms, t)
    k2f, k2a = rhs(field + 0.5 * dt * k1f, atoms + 0.5 * dt * k1a, t + 0.5 * dt)
    k3f, k3a = rhs(field + 0.5 * dt * k2f, atoms + 0.5 * dt * k2a, t + 0.5 * dt)
    k4f, k4a = rhs(field + dt * k3f, atoms + dt * k3a, t + dt)
    new_f = field + (dt / 6.0) * (k1f + 2.0 * (k2f + k3f) + k4f)
    new_a = atoms + (dt / 6.0) * (k1a + 2.0 * (k2a + k3a) + k4a)
    return new_f, new_a


def rk4_step(s: StateVector, scene: Scene, lat: ModeLattice, dt: float,
             ws: RhsWorkspace | None = None) -> StateVector:
    """Advance an interaction-picture state by one fixed RK4 step."""
    if dt <= 0:
        raise ValueError("dt must be positive")
    if s.picture != INTERACTION:
        raise ValueError("rk4_step expects an interaction-picture state")
    if len(scene) == 0:
        out = s.copy()
        out.t = s.t + dt
        return out
    if ws is None:
        ws = RhsWorkspace(lat)
    table = CouplingTable(scene, lat)

    def rhs(f, a, t):
        mp = np.exp(-1j * t * lat.omega)
        ap = np.exp(-1j * t * table.omega_atoms)
        return _rhs(f, a, mp, ap, lat, table, ws)

    nf, na = rk4_step_arrays(s.field, s.atoms, s.t, dt, rhs)
    return StateVector(nf, na, INTERACTION, s.t + dt)


def free_evolve(s: StateVector, lat: ModeLattice, dt: float) -> StateVector:
    """Exact free-field evolution: c_k -> c_k e^{-i omega_k dt}.

    Only valid without atoms in play; atom amplitudes are left untouched.
    Mode magnitudes are preserved exactly.
    """
    if s.picture != SCHROEDINGER:
        raise ValueError("free_evolve expects a Schroedinger-picture state")
    out = s.copy()
    if dt != 0.0:
        out.field *= np.exp(-1j * lat.omega * dt)
    out.t = s.t + dt
    return out


def stable_dt(lat: ModeLattice, scene: Scene, budget: float = 0.1) -> float:
    """Fixed step satisfying dt * (omega_max + max_j omega_j) <= budget."""
    w = float(lat.omega.max())
    if len(scene):
        w += float(scene.omega.max())
    return budget / w


@dataclass
class Snapshot:
    """Schroedinger-picture state plus conservation diagnostics at one time."""

    step: int
    t: float
    state: StateVector
    norm: float
    e_field: float
    e_atoms: float
    e_int: float

    @property
    def e_total(self) -> float:
        return self.e_field + self.e_atoms + self.e_int


def _energies(state: StateVector, lat: ModeLattice, scene: Scene):
    """Field, atom and interaction energy of a Schroedinger-picture state."""
    u = lat.units
    e_field = u.hbar * float(np.sum(lat.omega * np.abs(state.field) ** 2))
    if len(scene) == 0:
        return e_field, 0.0, 0.0
    e_atoms = u.hbar * float(np.sum(scene.omega * np.abs(state.atoms) ** 2))
    kappa = 1.0 / (2.0 * u.epsilon0 * lat.L)
    t0 = lat.modes_to_grid(state.field)
    flat = scene.pos_index[:, 0] * lat.n + scene.pos_index[:, 1]
    amp = np.sum(np.conj(state.atoms) * (-1j) * np.sqrt(scene.omega)
                 * scene.dipole * t0.ravel()[flat])
    e_int = 2.0 * u.hbar * kappa * float(amp.real)
    return e_field, e_atoms, e_int


def simulate(lat: ModeLattice, scene: Scene, state0: StateVector, dt: float,
             t_end: float, snapshot_every: float) -> Iterator[Snapshot]:
    """Run a scenario, yielding Schroedinger-picture snapshots.

    The initial state (t = 0, Schroedinger picture) is integrated with fixed
    step ``dt`` until ``t_end``; a snapshot with norm and energy diagnostics
    is emitted roughly every ``snapshot_every`` time units, plus one at the
    start and one at the final step.  An empty scene takes the exact
    free-evolution fast path.  Non-finite amplitudes abort with
    :class:`NumericalFailure` carrying the offending step index.
    """
    if state0.t != 0.0 or state0.picture != SCHROEDINGER:
        raise ValueError("simulate expects a Schroedinger-picture state at t=0")
    if dt <= 0 or t_end <= 0:
        raise ValueError("dt and t_end must be positive")

    n_steps = int(np.ceil(t_end / dt - 1e-9))
    every = max(1, int(np.rint(snapshot_every / dt)))

    def wanted(step):
        # regular cadence, except when the final snapshot is about to cover it
        if step == n_steps:
            return True
        return step % every == 0 and n_steps - step >= every // 2

    def emit(step, st):
        ef, ea, ei = _energies(st, lat, scene)
        nrm = st.norm()
        if not np.isfinite(nrm):
            raise NumericalFailure(step, st.t)
        return Snapshot(step, st.t, st, nrm, ef, ea, ei)

    yield emit(0, state0.copy())

    if len(scene) == 0:
        # free photon: exact rotation from the initial amplitudes
        for step in range(1, n_steps + 1):
            if wanted(step):
                yield emit(step, free_evolve(state0, lat, step * dt))
        return

    table = CouplingTable(scene, lat)
    ws = RhsWorkspace(lat)
    # stage phase factors at fixed offsets; the base phase is recomputed
    # exactly every step so no multiplicative drift accumulates
    eh_mode = np.exp(-0.5j * dt * lat.omega)
    ef_mode = eh_mode * eh_mode
    eh_atom = np.exp(-0.5j * dt * table.omega_atoms)
    ef_atom = eh_atom * eh_atom

    f = state0.field.copy()
    a = state0.atoms.copy()
    for step in range(1, n_steps + 1):
        t = (step - 1) * dt
        p0m = np.exp(-1j * t * lat.omega)
        p0a = np.exp(-1j * t * table.omega_atoms)
        p1m, p1a = p0m * eh_mode, p0a * eh_atom
        p2m, p2a = p0m * ef_mode, p0a * ef_atom

        k1f, k1a = _rhs(f, a, p0m, p0a, lat, table, ws)
        k2f, k2a = _rhs(f + 0.5 * dt * k1f, a + 0.5 * dt * k1a, p1m, p1a,
                        lat, table, ws)
        k3f, k3a = _rhs(f + 0.5 * dt * k2f, a + 0.5 * dt * k2a, p1m, p1a,
                        lat, table, ws)
        k4f, k4a = _rhs(f + dt * k3f, a + dt * k3a, p2m, p2a, lat, table, ws)
        f += (dt / 6.0) * (k1f + 2.0 * (k2f + k3f) + k4f)
        a += (dt / 6.0) * (k1a + 2.0 * (k2a + k3a) + k4a)

        if wanted(step):
            st = to_picture(StateVector(f.copy(), a.copy(), INTERACTION, step * dt),
                            SCHROEDINGER, lat, scene)
            yield emit(step, st)
