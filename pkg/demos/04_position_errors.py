# # Rigid translation of the array
#
# The precoder is computed for the nominal lattice while the hardware sits a
# fraction of a wavelength off.  Sub-millimetre offsets already cost focal power.

# In[1]:

import numpy as np

from thzfocus import sweeps
from thzfocus.field import focal_power_deviated, received_power_deviated, received_power_deviated_taylor
from thzfocus.geometry import DeviationModel

p = sweeps.preset("fig6")
cfg, sc, lam = p.array(), p.scenario(), p.wavelength
L = sc.focal_distance

# In[2]:

p0 = focal_power_deviated(cfg, sc, DeviationModel())
for dx, dy in p.extra["deviations_lam"]:
    dev = DeviationModel(dx * lam, dy * lam)
    exact = received_power_deviated(cfg, sc, L, dev)
    taylor = received_power_deviated_taylor(cfg, sc, L, dev)
    print(f"offset ({dx:.2f}, {dy:.2f}) lambda = {dx * lam * 1e3:.2f} mm: "
          f"focal power {exact / p0:.3f} (first-order model {taylor / p0:.3f})")

# Larger spacing and more elements both make the array more sensitive.

# In[3]:

q = sweeps.preset("fig7")
configs = [(d * lam, n) for d, n in q.extra["configs"]]
deltas = np.linspace(0, lam, 21)
table = sweeps.sensitivity_sweep(configs, deltas, wavelength=lam, focal_distance=q.scenario().focal_distance)
j = table.first_column_below(0.9)
print(f"first offset with any entry below 0.9: {deltas[j] / lam:.2f} lambda")
for (d, n), row in zip(table.configs, table.values):
    print(f"  d = {d / lam:4.1f} lambda, {n}x{n}: {row[j]:.3f}")
