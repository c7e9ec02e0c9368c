"""
Admissible sectors and condition numbers
========================================

A normal matrix is admissible for ``p`` when its eigenvalues lie in a
sector of half-angle ``arccos(|p-2|/p)``; a Hermitian positive definite
matrix is admissible when its condition number lies in a window
``(C_L(p), C_R(p))``. Both shrink as ``p`` moves away from 2.
"""

import numpy as np

from antieig import regions

print(regions.emit_region_table("sector", "1.25:4:12"))
print(regions.emit_region_table("kappa", [1.5, 2.0, 3.0, 4.0, 10.0]))

# An eigenvalue 3+4i turns vectors by about 53 degrees; it is admissible up
# to the p where the sector closes below that angle.
lam = 3 + 4j
for p in (2.0, 4.0, 5.0, 6.0):
    print("p = %.1f  3+4i inside the sector: %s" % (p, regions.sector_membership(lam, p)))

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt

p = np.linspace(1.02, 12.0, 400)
p = p[np.abs(p - 2.0) > 1e-3]
w = [regions.kappa_window(q) for q in p]
fig, ax = plt.subplots(1, 2, figsize=(9, 3.5))
ax[0].plot(p, np.degrees([regions.SectorSpec.from_p(q).half_angle_rad for q in p]))
ax[0].set_xlabel("p")
ax[0].set_ylabel("sector half-angle (degrees)")
ax[1].semilogy(p, [x.C_R for x in w], p, [x.C_L for x in w])
ax[1].set_xlabel("p")
ax[1].set_ylabel("condition number window")
fig.tight_layout()
fig.savefig("admissible_regions.png", dpi=80)
