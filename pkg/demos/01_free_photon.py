"""A free Gaussian photon wave packet delocalizing in the empty cavity.

The packet starts at x = -8 moving right with central wavenumber k0 = 4.
Because the mode directions within the packet's momentum spread are not
parallel, the energy density fans out sideways as it propagates: by t = 20
the packet is much wider in y than at t = 0, while the magnitudes |c_k| of
the mode amplitudes never change (free evolution is a pure phase rotation).
"""

import numpy as np
import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt

import os

import qosim

os.makedirs("demos/output", exist_ok=True)

lat = qosim.build_lattice(10 * np.pi, 128)
spec = qosim.GaussianSpec(r0=(-8.0, 0.0), k0=(4.0, 0.0), var_kx=1.0, var_ky=1.0)
state = qosim.make_gaussian_photon(lat, spec)

fig, axes = plt.subplots(1, 3, figsize=(13, 4))

# momentum-space probabilities of the initial packet
probs = np.abs(state.field) ** 2
order = np.argsort(lat.kx)
axes[0].pcolormesh(lat.kx[order], lat.ky[order], probs[np.ix_(order, order)].T,
                   shading="nearest")
axes[0].set(title=r"$|c_k|^2$ at $t=0$", xlabel=r"$k_x$", ylabel=r"$k_y$",
            xlim=(0, 8), ylim=(-4, 4))

extent = (-lat.L / 2, lat.L / 2, -lat.L / 2, lat.L / 2)
for ax, t in ((axes[1], 0.0), (axes[2], 20.0)):
    e = qosim.energy_density(qosim.free_evolve(state, lat, t), lat)
    ax.imshow(e.total.T, origin="lower", extent=extent)
    ax.set(title=f"energy density, t={t:g}", xlabel="x", ylabel="y")

fig.tight_layout()
fig.savefig("demos/output/01_free_photon.png", dpi=130)
print("wrote demos/output/01_free_photon.png")
print("norm:", state.norm())
