"""qosim: single-photon wave packets in a 2D periodic cavity.

The field is expanded in the cavity's discrete momentum modes and coupled to
point-like two-level atoms arranged into optical elements (mirrors, beam
splitters, parabolas, slit masks, interferometers).  The joint state keeps a
single excitation, which covers linear optics exactly; the Hamiltonian action
factorizes into two FFTs per evaluation and the state advances with a
fixed-step fourth-order Runge-Kutta integrator in the interaction picture.
"""

from .lattice import ModeLattice, SimUnits, build_lattice, mode_frequency
from .state import (GaussianSpec, StateVector, SCHROEDINGER, INTERACTION,
                    dump_state, load_state, make_gaussian_photon, norm,
                    to_picture)
from .scene import (AnalyzerArray, Atom, Scene, KIND_ANALYZER, KIND_ELEMENT,
                    build_analyzer_array, build_beam_splitter,
                    build_interferometer, build_parabola, build_slab_mirror,
                    build_two_slit)
from .dynamics import (CouplingTable, NumericalFailure, RhsWorkspace, Snapshot,
                       apply_hamiltonian, free_evolve, rk4_step,
                       rk4_step_arrays, simulate, stable_dt)
from .observables import (AngularProfile, DecayFit, EnergyField, HalfPlane,
                          Rectangle, analyzer_spectrum, angular_intensity,
                          atom_excitations, classical_two_slit,
                          energy_density, field_energy_modes,
                          field_energy_space, fit_decay, mode_slice,
                          region_energy_fraction)
from .config import ConfigError, ScenarioConfig, build_elements, load_config

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
