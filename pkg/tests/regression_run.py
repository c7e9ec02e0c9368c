"""Write a JSON file of seeded results from every module.

Used by the determinism criterion: two runs, in fresh interpreters and with
different worker counts, must produce byte-identical files.

    python3 tests/regression_run.py OUT.json
"""
import sys

import numpy as np

from antieig import antieigen, dissipativity, io, ou_kernel, regions


def collect() -> dict:
    out = {"mu1": [], "gamma": [], "equivalence": []}
    for k in range(6):
        rng = np.random.default_rng([2015, k])
        n = 1 + k % 4
        A = np.eye(n) + 0.6 * (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n)))
        res = antieigen.mu1_brute(A, seed=k, restarts=48)
        out["mu1"].append({"A": io.matrix_to_json(A), **res.to_dict(),
                           "restarts_used": res.restarts_used})
        rep = dissipativity.gamma_best(A, 1.5 + k, seed=k, restarts=48, mu1_value=res.mu1)
        out["gamma"].append(rep.to_dict())
        out["equivalence"].append(dissipativity.check_equivalence(A, 1.5 + k, report=rep))
    res, trace = antieigen.mu1_normal_accretive(np.diag([1.0, 3 + 4j]))
    out["normal"] = {**res.to_dict(), "E": trace.E, "F": trace.F}
    out["two_vector"] = dissipativity.check_two_vector(np.diag([1.0, 4.0]), 4.0, samples=16)
    out["kappa"] = regions.region_rows("kappa", "1.5:10:12")
    out["sector"] = regions.region_rows("sector", "1.5:10:12")
    V = np.array([[1.0, 0.4], [0.2, 1.0]])
    S = np.array([[0.0, -1.0], [1.0, 0.0]])
    spec = ou_kernel.OUOperatorSpec.from_matrices(
        V @ np.diag([1 + 0.5j, 2.0]) @ np.linalg.inv(V), V @ np.diag([1.0, 2.0]) @ np.linalg.inv(V), S)
    grid = ou_kernel.default_grid(2)
    out["mass"] = ou_kernel.mass_check(spec, [0.5, -0.3], 0.25, grid)
    out["chapman"] = ou_kernel.chapman_check(spec, 0.3, 0.4, grid, seed=3)
    scalar = ou_kernel.OUOperatorSpec.from_matrices(np.array([[1 + 0.5j]]), None, S)
    g = lambda P: np.exp(-0.5 * np.sum(P**2, axis=1))
    out["resolvent"] = ou_kernel.resolvent_probe(scalar, 2.0, g, ou_kernel.GridSpec(2, 16.0, 65), p=3,
                                                 n_time=60, out_stride=4).to_dict()
    return out


def main(path: str) -> None:
    with open(path, "w") as fh:
        fh.write(io.dumps(collect()) + "\n")


if __name__ == "__main__":
    main(sys.argv[1])
