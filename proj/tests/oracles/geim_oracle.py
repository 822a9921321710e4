"""Independent numpy/scipy re-implementation of the greedy and its diagnostics.

Prints JSON with the values frozen into tests/test_oracle.cpp.
Interpolation here solves the dense system (S Q) a = S f, without using the
triangular structure; widths come from a plain SVD; sup distances from scipy's
LP solver.

    python3 tests/oracles/geim_oracle.py
"""

import json

import numpy as np
from scipy.optimize import linprog


def uniform(lo, hi, n):
    x = lo + (hi - lo) / (n - 1) * np.arange(n)
    x[-1] = hi
    return x


def trapezoid(x):
    h = x[1] - x[0]
    w = np.full(x.size, h)
    w[0] = w[-1] = 0.5 * h
    return w


def norm(v, w, mode):
    return np.sqrt(np.sum(w * v * v)) if mode == "hilbert" else np.max(np.abs(v))


def family(kind, x, w, params, mode, width=0.25):
    if kind == "gaussian":
        F = np.exp(-((x[:, None] - params[None, :]) ** 2) / width**2)
    else:
        F = 1.0 / (1.0 + (params[None, :] * x[:, None]) ** 2)
    scale = max(norm(F[:, j], w, mode) for j in range(F.shape[1]))
    return F / scale


def dictionary(kind, x, w, centers, spread, mode):
    # columns are densities; sigma(f) = sum_i w_i d_i f_i
    D = np.zeros((x.size, centers.size))
    for k, c in enumerate(centers):
        if kind == "local_average":
            D[np.abs(x - c) <= spread + 1e-12 * (x[-1] - x[0]), k] = 1.0
        D[np.argmin(np.abs(x - c)), k] = 1.0
        dn = np.sqrt(np.sum(w * D[:, k] ** 2)) if mode == "hilbert" else np.sum(w * np.abs(D[:, k]))
        D[:, k] /= dn
    return D


def interpolate(F, Q, S):
    if Q.shape[1] == 0:
        return np.zeros_like(F)
    return Q @ np.linalg.solve(S.T @ Q, S.T @ F)


def greedy(F, D, w, mode, n_max):
    M = D * w[:, None]  # measurement matrix: M.T @ f
    Q = np.zeros((F.shape[0], 0))
    S = np.zeros((F.shape[0], 0))
    phi, sig, eps = [], [], []
    for _ in range(n_max):
        R = F - interpolate(F, Q, S)
        errs = np.array([norm(R[:, j], w, mode) for j in range(F.shape[1])])
        j = int(np.argmax(errs))
        r = R[:, j]
        v = M.T @ r
        k = int(np.argmax(np.abs(v)))
        Q = np.column_stack([Q, r / v[k]])
        S = np.column_stack([S, M[:, k]])
        phi.append(j)
        sig.append(k)
        eps.append(float(errs[j]))
    return phi, sig, eps, Q, S


def dist_hilbert(F, P, w):
    if P.shape[1] == 0:
        return np.sqrt(np.sum(w[:, None] * F**2, axis=0))
    sw = np.sqrt(w)[:, None]
    coef, *_ = np.linalg.lstsq(sw * P, sw * F, rcond=None)
    R = F - P @ coef
    return np.sqrt(np.sum(w[:, None] * R**2, axis=0))


def dist_sup(f, P):
    # min t  s.t.  -t <= f - P c <= t
    g, n = P.shape
    if n == 0:
        return float(np.max(np.abs(f)))
    c = np.zeros(n + 1)
    c[-1] = 1.0
    ones = np.ones((g, 1))
    A = np.vstack([np.hstack([-P, -ones]), np.hstack([P, -ones])])
    b = np.concatenate([-f, f])
    res = linprog(c, A_ub=A, b_ub=b, bounds=[(None, None)] * n + [(0, None)], method="highs")
    return float(res.x[-1])


def lambda_hilbert(Q, S, D, w):
    # 1 / smallest singular value between span(Q) and span of the Riesz
    # representers of the selected functionals (their densities)
    sw = np.sqrt(w)[:, None]
    U, _ = np.linalg.qr(sw * Q)
    idx = [int(np.argmax(np.all(np.isclose(D * w[:, None], S[:, [i]]), axis=0))) for i in range(S.shape[1])]
    V, _ = np.linalg.qr(sw * D[:, idx])
    return 1.0 / np.linalg.svd(U.T @ V, compute_uv=False)[-1]


def lambda_sup(Q, S):
    L = Q @ np.linalg.inv(S.T @ Q) @ S.T
    return float(np.max(np.sum(np.abs(L), axis=1)))


def pod_widths(F, w, n_max):
    sw = np.sqrt(w)[:, None]
    U, _, _ = np.linalg.svd(sw * F, full_matrices=False)
    out = []
    for n in range(n_max + 1):
        P = U[:, :n]
        R = sw * F - P @ (P.T @ (sw * F))
        out.append(float(np.max(np.sqrt(np.sum(R**2, axis=0)))))
    return out


def hilbert_case():
    n_max = 12
    x = uniform(-1.0, 1.0, 200)
    w = trapezoid(x)
    # asymmetric parameters: a mirror-symmetric set makes argmax ties exact
    F = family("gaussian", x, w, uniform(-0.95, 1.0, 40), "hilbert")
    D = dictionary("local_average", x, w, uniform(-0.99, 0.99, 100), 0.02, "hilbert")
    phi, sig, eps, Q, S = greedy(F, D, w, "hilbert", n_max)
    tau = [float(np.max(dist_hilbert(F, F[:, phi[:n]], w))) for n in range(n_max + 1)]
    lam = [float(lambda_hilbert(Q[:, :n], S[:, :n], D, w)) for n in range(1, n_max + 1)]
    return {
        "phi_index": phi,
        "sigma_index": sig,
        "eps": eps,
        "tau": tau,
        "lambda": lam,
        "d_pod": pod_widths(F, w, n_max),
    }


def sup_case():
    n_max = 12
    tau_max = 6
    x = uniform(-0.7, 1.0, 200)
    w = trapezoid(x)
    F = family("rational", x, w, uniform(1.0, 10.0, 40), "sup")
    D = dictionary("dirac", x, w, x, 0.0, "sup")
    phi, sig, eps, Q, S = greedy(F, D, w, "sup", n_max)
    tau = [max(dist_sup(F[:, j], F[:, phi[:n]]) for j in range(F.shape[1])) for n in range(tau_max + 1)]
    lam = [lambda_sup(Q[:, :n], S[:, :n]) for n in range(1, n_max + 1)]
    return {"phi_index": phi, "sigma_index": sig, "eps": eps, "tau": tau, "lambda": lam}


if __name__ == "__main__":
    print(json.dumps({"hilbert_gaussian": hilbert_case(), "sup_rational": sup_case()}, indent=1))
