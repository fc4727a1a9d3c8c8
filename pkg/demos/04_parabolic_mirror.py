"""Focusing by a parabolic mirror traced out of two-level atoms.

The mirror follows x = 2 - y^2/18 (focus at (-2.5, 0)).  The packet comes in
from the left, reflects, converges through the focus around t = 12.8 and
leaves to the left, wider and weaker than it arrived.
"""

import numpy as np
import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt

import os

import qosim

os.makedirs("demos/output", exist_ok=True)

lat = qosim.build_lattice(10 * np.pi, 128)
mirror = qosim.build_parabola(lat, x0=2.0, p=-9.0, y_extent=26.9, layers=5,
                              omega=5.0, D=0.5)
print(f"parabola of {len(mirror)} atoms, focus at {mirror.meta['focus']}")

spec = qosim.GaussianSpec(r0=(-6.0, 0.0), k0=(5.0, 0.0),
                          var_kx=0.125, var_ky=0.125)
state0 = qosim.make_gaussian_photon(lat, spec, n_atoms=len(mirror))

wanted = (0.0, 8.0, 12.8, 18.0)
frames = {}
for snap in qosim.simulate(lat, mirror, state0, qosim.stable_dt(lat, mirror),
                           t_end=18.0, snapshot_every=0.4):
    for t in wanted:
        if abs(snap.t - t) <= 0.2 and t not in frames:
            frames[t] = snap.state

fig, axes = plt.subplots(1, 4, figsize=(16, 4))
extent = (-lat.L / 2, lat.L / 2, -lat.L / 2, lat.L / 2)
for ax, t in zip(axes, wanted):
    e = qosim.energy_density(frames[t], lat)
    ax.imshow(e.total.T, origin="lower", extent=extent)
    ax.plot(mirror.pos[:, 0], mirror.pos[:, 1], ",", color="w", alpha=0.4)
    ax.plot(*mirror.meta["focus"], "o", mfc="none", mec="w", ms=8)
    ax.set(title=f"t={t:g}", xlabel="x", ylabel="y")
fig.tight_layout()
fig.savefig("demos/output/04_parabolic_mirror.png", dpi=130)
print("wrote demos/output/04_parabolic_mirror.png")

e = qosim.energy_density(frames[12.8], lat)
i, j = np.unravel_index(np.argmax(e.total), e.total.shape)
print("density maximum at t=12.8:", lat.index_to_position(i, j))
