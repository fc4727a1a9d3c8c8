"""One-excitation state of the field-atom system and Gaussian photon packets.

The joint state stores a complex amplitude per field mode plus one per atom;
exactly one excitation is shared between them, so the probabilities sum to
one.  States carry a picture tag: in the Schroedinger picture amplitudes
evolve with the full Hamiltonian, in the interaction picture the free phases
exp(+i*omega*t) have been absorbed into the amplitudes.
"""

from __future__ import annotations

import struct
import warnings
from dataclasses import dataclass

import numpy as np

from .lattice import ModeLattice

SCHROEDINGER = "schroedinger"
INTERACTION = "interaction"

STATE_MAGIC = b"QOS1"


@dataclass
class GaussianSpec:
    """Parameters of a Gaussian one-photon wave packet in momentum space.

    r0 : packet center in configuration space.
    k0 : central wavevector.
    var_kx, var_ky : momentum-space variances per axis.
    covar_kxky : cross-variance; zero gives two independent Gaussians.
    """

    r0: tuple[float, float]
    k0: tuple[float, float]
    var_kx: float
    var_ky: float
    covar_kxky: float = 0.0

    def __post_init__(self):
        if self.var_kx < 1e-6 or self.var_ky < 1e-6:
            raise ValueError("variances below 1e-6 give a degenerate packet")
        if self.m_det() <= 0.0:
            raise ValueError("covariance matrix must be positive definite")

    def m_det(self) -> float:
        """Determinant var_kx*var_ky - covar**2 of the covariance matrix."""
        return self.var_kx * self.var_ky - self.covar_kxky**2


@dataclass
class StateVector:
    """Amplitudes c_k over the mode lattice plus c_j over the atoms.

    ``field`` has shape (n, n) in the lattice's FFT ordering; ``atoms`` has
    one entry per scene atom, in scene order.
    """

    field: np.ndarray
    atoms: np.ndarray
    picture: str = SCHROEDINGER
    t: float = 0.0

    def copy(self) -> "StateVector":
        return StateVector(self.field.copy(), self.atoms.copy(), self.picture, self.t)

    def norm(self) -> float:
        return float(np.sqrt(np.vdot(self.field, self.field).real
                             + np.vdot(self.atoms, self.atoms).real))


def norm(s: StateVector) -> float:
    """sqrt of the total excitation probability (1 for a physical state)."""
    return s.norm()


def make_gaussian_photon(lat: ModeLattice, spec: GaussianSpec,
                         n_atoms: int = 0) -> StateVector:
    """Build a normalized Gaussian photon state on the lattice.

    The amplitude of mode k is

        c_k ~ exp(-i k.r0) * exp(-(var_ky/4M)(kx-kx0)^2 - (var_kx/4M)(ky-ky0)^2
                                 + (covar/2M)(kx-kx0)(ky-ky0))

    with M the covariance determinant; for covar = 0 this factorizes into two
    independent Gaussians.  The discrete sum of |c_k|^2 is renormalized to
    exactly 1.  Atom amplitudes (if any) start at zero.
    """
    kx0, ky0 = spec.k0
    band_min = lat.kx.min()
    band_max = lat.kx.max()
    if not (band_min <= kx0 <= band_max and band_min <= ky0 <= band_max):
        raise ValueError(
            f"k0={spec.k0} outside representable band [{band_min:g}, {band_max:g}]")
    margin = 3.0 * np.sqrt(max(spec.var_kx, spec.var_ky))
    if (kx0 - margin < band_min or kx0 + margin > band_max
            or ky0 - margin < band_min or ky0 + margin > band_max):
        warnings.warn("k0 is closer than 3 sigma to the band edge; "
                      "the packet will be truncated", stacklevel=2)

    m = spec.m_det()
    dkx = lat.kx[:, None] - kx0
    dky = lat.ky[None, :] - ky0
    envelope = np.exp(-(spec.var_ky / (4.0 * m)) * dkx**2
                      - (spec.var_kx / (4.0 * m)) * dky**2
                      + (spec.covar_kxky / (2.0 * m)) * dkx * dky)
    phase = np.exp(-1j * (lat.kx[:, None] * spec.r0[0]
                          + lat.ky[None, :] * spec.r0[1]))
    c = envelope * phase
    c /= np.sqrt(np.vdot(c, c).real)
    return StateVector(field=c, atoms=np.zeros(n_atoms, dtype=complex),
                       picture=SCHROEDINGER, t=0.0)


def to_picture(s: StateVector, target: str, lat: ModeLattice,
               atom_omega=None) -> StateVector:
    """Convert a state between the Schroedinger and interaction pictures.

    Going to the interaction picture multiplies c_k by exp(+i*omega_k*t) and
    c_j by exp(+i*omega_j*t); the reverse applies the conjugate phases.  The
    round trip is the identity and the norm never changes.

    ``atom_omega`` supplies the atomic transition frequencies (an array, or
    any object with an ``omega`` attribute such as a Scene); it is only
    required when the state has atom amplitudes.
    """
    if target not in (SCHROEDINGER, INTERACTION):
        raise ValueError(f"unknown picture {target!r}")
    if s.picture == target:
        return s.copy()
    sign = +1.0 if target == INTERACTION else -1.0
    out = s.copy()
    out.field *= np.exp(1j * sign * lat.omega * s.t)
    if len(s.atoms):
        if atom_omega is None:
            raise ValueError("atom frequencies required to convert a state "
                             "with atom amplitudes")
        omega_j = np.asarray(getattr(atom_omega, "omega", atom_omega), dtype=float)
        out.atoms *= np.exp(1j * sign * omega_j * s.t)
    out.picture = target
    return out


# ----------------------------------------------------------------------
# checkpoint format: little-endian "QOS1", u32 n, u32 N_A, f64 t,
# u8 picture (0 = schroedinger, 1 = interaction), n^2 complex64 field
# amplitudes row-major, then N_A complex64 atom amplitudes.
# ----------------------------------------------------------------------

def dump_state(s: StateVector, path) -> None:
    """Write a state checkpoint (complex64 precision) to ``path``."""
    n = s.field.shape[0]
    if s.field.shape != (n, n):
        raise ValueError("field amplitudes must form a square grid")
    pic = 0 if s.picture == SCHROEDINGER else 1
    with open(path, "wb") as fh:
        fh.write(STATE_MAGIC)
        fh.write(struct.pack("<IIdB", n, len(s.atoms), s.t, pic))
        fh.write(np.ascontiguousarray(s.field, dtype="<c8").tobytes())
        fh.write(np.ascontiguousarray(s.atoms, dtype="<c8").tobytes())


def load_state(path) -> StateVector:
    """Read a checkpoint written by :func:`dump_state`."""
    with open(path, "rb") as fh:
        magic = fh.read(4)
        if magic != STATE_MAGIC:
            raise ValueError(f"not a state checkpoint (magic {magic!r})")
        n, n_atoms, t, pic = struct.unpack("<IIdB", fh.read(17))
        fld = np.frombuffer(fh.read(8 * n * n), dtype="<c8").reshape(n, n)
        atoms = np.frombuffer(fh.read(8 * n_atoms), dtype="<c8")
    return StateVector(field=fld.astype(complex), atoms=atoms.astype(complex),
                       picture=SCHROEDINGER if pic == 0 else INTERACTION, t=t)
