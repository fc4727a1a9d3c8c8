"""Reading a local spectrum with weakly coupled analyzer atoms.

An array of atoms with a ladder of transition frequencies and dipole
constants D_j = C / omega_j sits in the beam.  Each atom only responds to
radiation at its own frequency, so the final excitation-vs-frequency curve
is the local spectrum of the passing packet; the couplings are so small
(C = 1e-4) that the field is essentially undisturbed and no two-time
correlation functions are needed.
"""

import numpy as np
import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt

import os

import qosim

os.makedirs("demos/output", exist_ok=True)

lat = qosim.build_lattice(10 * np.pi, 128)
k0 = 8.0
array = qosim.build_analyzer_array(
    lat, qosim.AnalyzerArray(omega_min=6.0, omega_max=10.0, count=160,
                             C=1e-4, positions=[(4.0, 0.0)]))
spec = qosim.GaussianSpec(r0=(-6.0, 0.0), k0=(k0, 0.0),
                          var_kx=0.125, var_ky=0.125)
state0 = qosim.make_gaussian_photon(lat, spec, n_atoms=len(array))

last = None
for snap in qosim.simulate(lat, array, state0, qosim.stable_dt(lat, array),
                           t_end=16.0, snapshot_every=16.0):
    last = snap

omega, probs = qosim.analyzer_spectrum(array, last.state)
print(f"total probability absorbed by the array: {probs.sum():.2e}")
print(f"spectrum peak at omega = {omega[np.argmax(probs)]:.2f} "
      f"(packet centered at {k0})")

# the packet's own momentum distribution, radially binned, for comparison
mags = np.abs(state0.field) ** 2
w = lat.omega.ravel()
hist, edges = np.histogram(w, bins=80, range=(6, 10), weights=mags.ravel())
centers = 0.5 * (edges[1:] + edges[:-1])

fig, ax = plt.subplots(figsize=(7, 4.5))
ax.plot(omega, probs / probs.max(), label="analyzer array")
ax.plot(centers, hist / hist.max(), "--", label=r"$|c_k|^2$ binned in $\omega$")
ax.set(xlabel=r"$\omega$", ylabel="normalized response")
ax.legend()
fig.tight_layout()
fig.savefig("demos/output/08_analyzer_spectroscopy.png", dpi=130)
print("wrote demos/output/08_analyzer_spectroscopy.png")
