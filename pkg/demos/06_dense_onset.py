# # When does a half-wavelength array focus?
#
# At d = lambda/2 and L = 2500 lambda a small array only shows free-space decay.
# Growing the side count eventually produces an interior peak.  The 700x700 case
# has 490000 elements and takes tens of seconds.

# In[1]:

import time

from thzfocus import sweeps

p = sweeps.preset("fig2c")
sc = p.scenario()
grid = sweeps.default_grid(sc.focal_distance)

# In[2]:

for n in p.extra["side_counts"]:
    t0 = time.perf_counter()
    tr = sweeps.z_sweep(p.array(n), sc, grid)
    l_star, _ = sweeps.find_peak(tr)
    print(f"{n:4d}x{n:<4d} focusing={sweeps.is_focusing(tr)!s:5}  peak at {l_star / sc.focal_distance:.3f} L  "
          f"({time.perf_counter() - t0:.1f} s)")
