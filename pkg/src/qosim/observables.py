"""Measurements on simulation states.

Normal-ordered energy density, field energies evaluated both in mode space
and configuration space, atomic excitation readouts, analyzer spectra,
exponential decay fits, angular interference profiles and the closed-form
classical two-slit intensity used as an independent cross-check.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .lattice import ModeLattice
from .scene import Scene
from .state import SCHROEDINGER, StateVector

ANGULAR_BINS = 256


@dataclass
class EnergyField:
    """Normal-ordered field energy density on the configuration grid.

    Electric and magnetic parts are stored separately; both are non-negative
    and the vacuum gives identically zero.
    """

    electric: np.ndarray
    magnetic: np.ndarray
    t: float

    @property
    def total(self) -> np.ndarray:
        return self.electric + self.magnetic


@dataclass
class DecayFit:
    """Least-squares exponential decay rate of an excitation history."""

    gamma: float
    window: tuple[float, float]
    residual: float


@dataclass
class AngularProfile:
    """Radially integrated intensity versus polar angle, peak-normalized."""

    theta: np.ndarray
    intensity: np.ndarray
    r_min: float


def energy_density(s: StateVector, lat: ModeLattice) -> EnergyField:
    """Normal-ordered energy density of a Schroedinger-picture state.

    Electric part (hbar/2L^2) |R|^2 with R = sum_k sqrt(omega) c_k e^{ik.r};
    magnetic part (hbar/2L^2 eps0 mu0) (|S_x|^2 + |S_y|^2) with the weights
    k_i/sqrt(omega).  The zero mode carries no energy: both weights vanish
    there by continuity.
    """
    if s.picture != SCHROEDINGER:
        raise ValueError("energy density is defined on Schroedinger-picture states")
    u = lat.units
    w = lat.omega
    safe = np.where(w > 0.0, w, 1.0)
    inv_sqrt = np.where(w > 0.0, 1.0 / np.sqrt(safe), 0.0)

    r = lat.modes_to_grid(np.sqrt(w) * s.field)
    sx = lat.modes_to_grid((lat.kx[:, None] * inv_sqrt) * s.field)
    sy = lat.modes_to_grid((lat.ky[None, :] * inv_sqrt) * s.field)

    pref = u.hbar / (2.0 * lat.L**2)
    electric = pref * (r.real**2 + r.imag**2)
    magnetic = (pref / (u.epsilon0 * u.mu0)) * (
        sx.real**2 + sx.imag**2 + sy.real**2 + sy.imag**2)
    return EnergyField(electric, magnetic, s.t)


def field_energy_modes(s: StateVector, lat: ModeLattice) -> float:
    """Field energy as the mode sum hbar * sum omega_k |c_k|^2."""
    return lat.units.hbar * float(np.sum(lat.omega * np.abs(s.field) ** 2))


def field_energy_space(e: EnergyField, lat: ModeLattice) -> float:
    """Field energy as the grid sum of the density times the cell area."""
    return float(np.sum(e.total)) * lat.dx**2


def atom_excitations(s: StateVector) -> np.ndarray:
    """Excitation probabilities |c_j|^2 of every atom, in scene order."""
    return np.abs(s.atoms) ** 2


def analyzer_spectrum(scene: Scene, s: StateVector):
    """Excitation versus transition frequency for the analyzer atoms.

    Returns (omega_j, |c_j|^2) sorted by frequency.  The instantaneous
    excitations of a weakly coupled frequency ladder read out the local
    spectrum without any two-time averaging.
    """
    mask = scene.analyzer_mask()
    if not mask.any():
        raise ValueError("scene contains no analyzer atoms")
    omega = scene.omega[mask]
    probs = np.abs(s.atoms[mask]) ** 2
    order = np.argsort(omega)
    return omega[order], probs[order]


def fit_decay(times, p_exc, window: tuple[float, float] | None = None) -> DecayFit:
    """Fit ln P_exc = -Gamma t by least squares over a time window.

    Without an explicit window the fit spans [0.5/G, 2/G] where G is guessed
    from the first e-folding; this skips the short-time quadratic onset and
    late-time revivals.
    """
    times = np.asarray(times, dtype=float)
    p_exc = np.asarray(p_exc, dtype=float)
    if window is None:
        below = np.nonzero(p_exc < np.exp(-1.0))[0]
        if len(below) == 0:
            raise ValueError("excitation never completes one e-folding; "
                             "provide an explicit window")
        g_guess = 1.0 / times[below[0]]
        window = (0.5 / g_guess, 2.0 / g_guess)
    lo, hi = window
    sel = (times >= lo) & (times <= hi)
    if sel.sum() < 2:
        raise ValueError("fewer than two samples inside the fit window")
    if np.any(p_exc[sel] <= 0.0):
        raise ValueError("non-positive probabilities inside the fit window")
    t = times[sel]
    y = np.log(p_exc[sel])
    slope, intercept = np.polyfit(t, y, 1)
    resid = float(np.sqrt(np.mean((y - (slope * t + intercept)) ** 2)))
    return DecayFit(gamma=-float(slope), window=(float(lo), float(hi)),
                    residual=resid)


def mode_slice(s: StateVector, lat: ModeLattice, axis: str, fixed_index: int):
    """Mode probabilities |c_k|^2 along one momentum axis.

    ``axis='x'`` returns the line with ky fixed at ``fixed_index`` (array
    index), ordered by ascending kx; ``axis='y'`` the transpose case.
    """
    lat._check_index(fixed_index, fixed_index)
    probs2d = np.abs(s.field) ** 2
    if axis == "x":
        k, p = lat.kx, probs2d[:, fixed_index]
    elif axis == "y":
        k, p = lat.ky, probs2d[fixed_index, :]
    else:
        raise ValueError("axis must be 'x' or 'y'")
    order = np.argsort(k)
    return k[order], p[order]


def angular_intensity(e: EnergyField, lat: ModeLattice, origin,
                      r_min: float, n_bins: int = ANGULAR_BINS) -> AngularProfile:
    """Radially integrated intensity I(phi) = int_{r_min}^{L/2} I(r, phi) dr.

    Grid cells are assigned to the nearest of ``n_bins`` uniform angular bins
    over [-pi, pi); within a bin each cell contributes its density times the
    rectangle-rule weight dx^2 / (r * bin width), the radial footprint of its
    area.  The profile is normalized to peak 1; bins with no cells are
    returned as NaN gaps.
    """
    if not 0.0 <= r_min < lat.L / 2.0:
        raise ValueError("require 0 <= r_min < L/2")
    x = lat.x[:, None] - origin[0]
    y = lat.x[None, :] - origin[1]
    r = np.hypot(x, y)
    phi = np.arctan2(y, x)
    sel = (r >= r_min) & (r < lat.L / 2.0)
    if not sel.any():
        raise ValueError("integration annulus contains no grid cells")

    width = 2.0 * np.pi / n_bins
    # bin centers on multiples of the width, so the forward axis phi = 0 is
    # a center and the on-axis grid rows split symmetrically
    b = np.rint((phi[sel] + np.pi) / width).astype(int) % n_bins
    weights = e.total[sel] * lat.dx**2 / (r[sel] * width)
    intensity = np.bincount(b, weights=weights, minlength=n_bins)
    counts = np.bincount(b, minlength=n_bins)
    intensity[counts == 0] = np.nan

    peak = np.nanmax(intensity)
    if peak > 0:
        intensity = intensity / peak
    theta = -np.pi + width * np.arange(n_bins)
    return AngularProfile(theta, intensity, float(r_min))


def classical_two_slit(k: float, d: float, a: float, theta) -> AngularProfile:
    """Closed-form two-slit intensity from summing secondary wavelets.

    I(theta) ~ cos^2(k a sin(theta)/2) * sin^2(k d sin(theta)/2) / (k sin(theta))^2
    for slit width d and center separation a, evaluated with the removable
    theta = 0 limit and normalized to peak 1.  With a = 0 the two slits
    coincide and the curve reduces to the single-slit form.
    """
    if k <= 0 or d <= 0:
        raise ValueError("wavenumber and slit width must be positive")
    theta = np.asarray(theta, dtype=float)
    s = np.sin(theta)
    amp = np.cos(0.5 * k * a * s) * (0.5 * d) * np.sinc(0.5 * k * d * s / np.pi)
    intensity = amp**2
    return AngularProfile(theta, intensity / intensity.max(), 0.0)


@dataclass(frozen=True)
class Rectangle:
    x0: float
    x1: float
    y0: float
    y1: float


@dataclass(frozen=True)
class HalfPlane:
    """Points r with r . normal >= offset."""

    normal: tuple[float, float]
    offset: float


def region_energy_fraction(e: EnergyField, lat: ModeLattice, region) -> float:
    """Fraction of the integrated energy density inside a region."""
    x = lat.x[:, None]
    y = lat.x[None, :]
    if isinstance(region, Rectangle):
        mask = (x >= region.x0) & (x <= region.x1) & \
               (y >= region.y0) & (y <= region.y1)
    elif isinstance(region, HalfPlane):
        nx, ny = region.normal
        mask = (x * nx + y * ny) >= region.offset
    else:
        raise TypeError(f"unsupported region {region!r}")
    total = float(np.sum(e.total))
    if not mask.any() or total <= 0.0:
        raise ValueError("degenerate region or zero total energy")
    return float(np.sum(e.total[mask])) / total
