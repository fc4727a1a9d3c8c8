"""Discrete mode lattice of a square 2D cavity with periodic boundaries.

The cavity spans -L/2 <= x, y <= L/2.  Periodic boundary conditions restrict
wavenumbers to k_i = 2*pi*m_i/L with integer m_i; an n x n lattice keeps
m_i in {-n/2, ..., n/2 - 1} on each axis.  Mode frequencies follow the free
dispersion omega = c*|k|.  Only the out-of-plane polarization is represented;
the in-plane one carries zero amplitude everywhere.

This module owns the mapping between mode indices and FFT array layout.
Amplitude arrays are indexed ``a[ix, iy]`` in standard wraparound order
(non-negative mode numbers first, then negative), matching ``fftfreq``.
All other modules go through :meth:`ModeLattice.modes_to_grid` and
:meth:`ModeLattice.grid_to_modes` instead of calling FFTs directly, so the
ordering and the centered-coordinate phase convention live in one place.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.fft


@dataclass(frozen=True)
class SimUnits:
    """Physical constants. Defaults are natural units (hbar = c = eps0 = mu0 = 1).

    The constraint c**2 * epsilon0 * mu0 == 1 is enforced so that electric and
    magnetic energies stay consistent when SI-like values are substituted.
    """

    hbar: float = 1.0
    c: float = 1.0
    epsilon0: float = 1.0
    mu0: float = 1.0

    def __post_init__(self):
        if min(self.hbar, self.c, self.epsilon0, self.mu0) <= 0.0:
            raise ValueError("all physical constants must be positive")
        if abs(self.c**2 * self.epsilon0 * self.mu0 - 1.0) > 1e-12:
            raise ValueError("require c^2 * epsilon0 * mu0 == 1")


class ModeLattice:
    """Momentum grid, mode frequencies and FFT index mapping for the cavity.

    Parameters
    ----------
    L : float
        Cavity side length.
    n : int
        Modes per axis.  Must be even and at least 4.
    units : SimUnits, optional

    Attributes
    ----------
    kx, ky : ndarray, shape (n,)
        Wavenumbers per axis in wraparound (FFT) order.
    omega : ndarray, shape (n, n)
        Mode angular frequencies c*|k|, indexed [ix, iy].
    dx, dk : float
        Configuration-space grid spacing L/n and mode spacing 2*pi/L.
    x : ndarray, shape (n,)
        Configuration-space coordinates x_i = i*dx - L/2 per axis.

    Notes
    -----
    For even n the mode set is asymmetric: the Nyquist row m = -n/2 has no
    positive partner.  It is included in all sums; symmetry properties such
    as omega(k) == omega(-k) hold for every *paired* mode.
    """

    def __init__(self, L: float, n: int, units: SimUnits = SimUnits()):
        if not np.isfinite(L) or L <= 0:
            raise ValueError(f"cavity size must be positive, got L={L}")
        n = int(n)
        if n % 2 != 0 or n < 4:
            raise ValueError(f"modes per axis must be even and >= 4, got n={n}")
        self.L = float(L)
        self.n = n
        self.units = units
        self.dx = self.L / n
        self.dk = 2.0 * np.pi / self.L

        m = np.fft.fftfreq(n, d=1.0 / n)  # integers 0..n/2-1, -n/2..-1
        self.mode_numbers = m.astype(int)
        self.kx = self.dk * m
        self.ky = self.dk * m
        self.omega = units.c * np.hypot(self.kx[:, None], self.ky[None, :])
        self.x = np.arange(n) * self.dx - self.L / 2.0

        sign = np.where(np.arange(n) % 2 == 0, 1.0, -1.0)
        # e^{i k x} on the centered grid equals the plain DFT kernel times
        # (-1)^(ix+iy); exact for even n.
        self._parity = np.outer(sign, sign)

    # ------------------------------------------------------------------
    # index mapping
    # ------------------------------------------------------------------

    def index_of_mode(self, mx: int, my: int) -> tuple[int, int]:
        """Array indices of the mode with integer mode numbers (mx, my)."""
        half = self.n // 2
        if not (-half <= mx < half and -half <= my < half):
            raise IndexError(f"mode numbers ({mx}, {my}) outside lattice")
        return mx % self.n, my % self.n

    def wavevector(self, i: int, j: int) -> tuple[float, float]:
        """Wavevector (kx, ky) of the mode stored at array indices (i, j)."""
        self._check_index(i, j)
        return float(self.kx[i]), float(self.ky[j])

    def _check_index(self, i: int, j: int) -> None:
        if not (0 <= i < self.n and 0 <= j < self.n):
            raise IndexError(f"mode index ({i}, {j}) outside 0..{self.n - 1}")

    def position_to_index(self, pos) -> tuple[int, int]:
        """Grid indices of the configuration-space point nearest to ``pos``."""
        i = int(np.rint((pos[0] + self.L / 2.0) / self.dx)) % self.n
        j = int(np.rint((pos[1] + self.L / 2.0) / self.dx)) % self.n
        return i, j

    def index_to_position(self, i: int, j: int) -> tuple[float, float]:
        return float(self.x[i]), float(self.x[j])

    def snap_position(self, pos) -> tuple[float, float]:
        """Nearest grid point (periodic wrap) of an arbitrary cavity point."""
        return self.index_to_position(*self.position_to_index(pos))

    # ------------------------------------------------------------------
    # transforms between mode amplitudes and the configuration grid
    # ------------------------------------------------------------------

    def modes_to_grid(self, a: np.ndarray) -> np.ndarray:
        """Evaluate sum_k a_k exp(+i k.r) on the configuration grid.

        The sum runs over all n**2 lattice modes; no 1/n**2 normalization is
        applied, so the result is the literal mode sum at each grid point.
        """
        return (self.n * self.n) * scipy.fft.ifft2(a * self._parity)

    def grid_to_modes(self, g: np.ndarray) -> np.ndarray:
        """Evaluate sum_r g(r) exp(-i k.r) over the configuration grid.

        Inverse relation: ``grid_to_modes(modes_to_grid(a)) == n**2 * a``.
        """
        return self._parity * scipy.fft.fft2(g)

    def __repr__(self):
        return f"ModeLattice(L={self.L:g}, n={self.n})"


def build_lattice(L: float, n: int, units: SimUnits = SimUnits()) -> ModeLattice:
    """Construct the cavity mode lattice; rejects odd/tiny n and L <= 0."""
    return ModeLattice(L, n, units)


def mode_frequency(lat: ModeLattice, i: int, j: int) -> float:
    """Frequency c*|k| of the mode at array indices (i, j)."""
    lat._check_index(i, j)
    return float(lat.omega[i, j])
