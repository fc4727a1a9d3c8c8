"""Spontaneous decay of an excited atom into the cavity vacuum.

A single excited atom at the origin radiates a circular one-photon wave.
The excitation probability decays exponentially at the golden-rule rate
Gamma = (omega D)^2 / 4, the emitted radiation populates the modes on the
resonant ring |k| = omega, and the energy density front never outruns the
light cone |r| = c t.
"""

import numpy as np
import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt

import os

import qosim

os.makedirs("demos/output", exist_ok=True)

lat = qosim.build_lattice(10 * np.pi, 128)
omega_a, dipole = 8.0, 0.09375  # golden-rule Gamma = (omega*D)^2/4 = 0.1406
scene = qosim.Scene(lat, [qosim.Atom((0.0, 0.0), omega_a, dipole)])
state0 = qosim.StateVector(np.zeros((lat.n, lat.n), complex),
                           np.array([1.0 + 0j]))

times, p_exc = [], []
frames = {}
for snap in qosim.simulate(lat, scene, state0, qosim.stable_dt(lat, scene),
                           t_end=12.0, snapshot_every=0.05):
    times.append(snap.t)
    p_exc.append(qosim.atom_excitations(snap.state)[0])
    for t in (4.0, 12.0):
        if abs(snap.t - t) <= 0.025 and t not in frames:
            frames[t] = snap.state

fit = qosim.fit_decay(times, p_exc)
print(f"fitted Gamma = {fit.gamma:.4f} "
      f"(golden rule {(omega_a * dipole) ** 2 / 4:.4f})")

fig, axes = plt.subplots(1, 3, figsize=(14, 4))
axes[0].semilogy(times, p_exc)
axes[0].set(title=rf"$P_\mathrm{{exc}}(t)$, $\Gamma \approx {fit.gamma:.3f}$",
            xlabel="t")

iy0 = lat.index_of_mode(0, 0)[1]
k, p = qosim.mode_slice(frames[12.0], lat, "x", iy0)
axes[1].plot(k, p)
axes[1].axvline(omega_a, ls=":", c="k")
axes[1].axvline(-omega_a, ls=":", c="k")
axes[1].set(title=r"$|c_k|^2$ on the $k_y=0$ line, $t=12$", xlabel=r"$k_x$")

e4 = qosim.energy_density(frames[4.0], lat)
cut = e4.total[:, lat.position_to_index((0, 0))[1]]
axes[2].semilogy(lat.x, np.maximum(cut, 1e-12))
for s in (-1, 1):
    axes[2].axvline(s * 4.0, ls=":", c="k")
axes[2].set(title="energy density on y=0 at t=4 (light cone at |x|=4)",
            xlabel="x")
fig.tight_layout()
fig.savefig("demos/output/07_spontaneous_decay.png", dpi=130)
print("wrote demos/output/07_spontaneous_decay.png")
