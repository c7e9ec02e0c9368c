"""
How far does a matrix turn a vector?
====================================

The first antieigenvalue ``mu1(A)`` is the smallest cosine between a vector
``w`` and its image ``Aw``. We compute it by brute force on the unit sphere
and compare with the closed forms for Hermitian and normal matrices.
"""

import numpy as np

import antieig

# A Hermitian positive definite matrix turns vectors the most when they mix
# the extreme eigenvectors. The closed form only needs the condition number.
A = np.diag([1.0, 4.0])
closed = antieig.mu1_hermitian_pd(A)
brute = antieig.mu1_brute(A, seed=0)
print("diag(1, 4): closed %.12f  brute %.12f  angle %.4f rad"
      % (closed.mu1, brute.mu1, closed.angle_rad))
print("antieigenvector", np.round(closed.antieigenvector, 6))

# For a normal matrix the minimum comes either from a single eigenvector or
# from a pair of them; the trace shows both candidate sets.
B = np.diag([1.0, 3 + 4j])
res, trace = antieig.mu1_normal_accretive(B)
print("\ndiag(1, 3+4i): mu1 = %.12f" % res.mu1)
print("  single-eigenvector candidates", np.round(trace.E, 6))
for c in trace.F:
    print("  pair (%d, %d): value %.12f, |w_i|^2 = %.6f" % (c["i"], c["j"], c["value"], c["w_i_sq"]))

# Non-normal matrices have no closed form; ``mu1`` falls back to the sphere
# search, and the witness reproduces the value through the defining quotient.
J = np.array([[1.0, 1.0], [0.0, 1.0]])
r = antieig.mu1(J)
print("\nJordan block: mu1 = %.10f via %s, quotient at witness %.10f"
      % (r.mu1, r.method, antieig.antieigen.quotient(J, r.antieigenvector)))

# The real angle grows with the condition number of a Hermitian matrix.
import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt

kappa = np.logspace(0, 3, 60)
angles = [antieig.mu1_hermitian_pd(np.diag([1.0, k])).angle_rad for k in kappa]
plt.semilogx(kappa, np.degrees(angles))
plt.xlabel("condition number")
plt.ylabel("largest turning angle (degrees)")
plt.savefig("antieigen_angles.png", dpi=80)
