# # Fresnel approximation and main-lobe width
#
# The closed-form focusing factor replaces the N-term phasor sum by Fresnel
# integrals of a single argument b.  Here we compare it with the exact sum and
# with the nulls found numerically.

# In[1]:

import numpy as np

from thzfocus import closed_form as cf
from thzfocus import sweeps
from thzfocus.field import received_power

p = sweeps.preset("fig2b")
cfg, sc, lam = p.array(), p.scenario(), p.wavelength
L = sc.focal_distance

# In[2]:

ext = cf.main_lobe_extent(cfg, L)
print(f"r = {cf.lobe_ratio(cfg, L):.4f}")
print(f"predicted nulls: {ext.backward / lam:+.1f} lambda, {ext.forward / lam:+.1f} lambda")

# The exact trace on a 1-wavelength grid gives the measured nulls.

# In[3]:

tr = sweeps.z_sweep(cfg, sc, sweeps.lobe_grid(cfg, L, 1.0))
lo, hi = sweeps.find_lobe_minima(tr, L)
print(f"exact nulls:     {(lo - L) / lam:+.1f} lambda, {(hi - L) / lam:+.1f} lambda")
print(f"gap in l: backward {(lo - (L + ext.backward)) / (L + ext.backward):+.3f}, "
      f"forward {(hi - (L + ext.forward)) / (L + ext.forward):+.3f}")

# At the focus the two models differ only by the constant (sqrt(N) - 1)^4 / N^2.

# In[4]:

print(cf.approx_power(cfg, sc, L) / received_power(cfg, sc, L), 6 ** 4 / 49 ** 2)

# Away from the focus, the overlay for the 35x35 array is much looser than
# that constant suggests.  Both traces are normalised to their own peaks.

# In[5]:

a = sweeps.preset("fig2a")
ca, sa = a.array(), a.scenario()
La = sa.focal_distance
grid = sweeps.default_grid(La, 400, 0.5, 3.0)
ea = cf.main_lobe_extent(ca, La)
cmp = sweeps.compare_traces(sweeps.z_sweep(ca, sa, grid), sweeps.z_sweep(ca, sa, grid, "closed_form"),
                            normalize=True, window=(La + ea.backward, La + ea.forward))
print(cmp)

# In[6]:

for f in (0.92, 0.96, 1.0, 1.04, 1.08):
    l = f * La
    ex = received_power(ca, sa, l) / received_power(ca, sa, La)
    ap = cf.approx_power(ca, sa, l) / cf.approx_power(ca, sa, La)
    print(f"l = {f:.2f} L   exact {ex:.3f}   closed form {ap:.3f}")
