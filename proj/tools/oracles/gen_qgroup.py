"""Reference U_q(sl2) data at rational specializations of q.

Independent of the C++ code: generators are dense Kronecker products built
from the coproduct, embeddings come from the explicit highest-vector formula
propagated with the dense F matrix, projections from one global inverse of
the full change-of-basis matrix, and 6j symbols from a dense solve.
Output: tests/data/qgroup_values.json
"""
import itertools
import json

import sympy as sp

Q_POINTS = [sp.Rational(3, 2), sp.Rational(-2, 7)]


def qint(n, q):
    return (q**n - q**(-n)) / (q - 1 / q)


def qfact(n, q):
    r = sp.Integer(1)
    for m in range(1, n + 1):
        r *= qint(m, q)
    return r


def single(lam, q):
    d = lam + 1
    E = sp.zeros(d, d)
    F = sp.zeros(d, d)
    K = sp.zeros(d, d)
    for j in range(d):
        K[j, j] = q ** (lam - 2 * j)
        if j > 0:
            E[j - 1, j] = qint(j, q) * qint(lam + 1 - j, q)
        if j < lam:
            F[j + 1, j] = 1
    return E, F, K


def kron(*ms):
    r = ms[0]
    for m in ms[1:]:
        r = sp.kronecker_product(r, m)
    return r


def generators(shape, q):
    """Dense E, F, K on the tensor product, factors left to right."""
    mats = [single(l, q) for l in shape]
    eyes = [sp.eye(l + 1) for l in shape]
    n = len(shape)
    E = sp.zeros(*kron(*eyes).shape)
    F = sp.zeros(*E.shape)
    for p in range(n):
        # E on p, K on factors right of p; F on p, K^-1 on factors left of p
        E += kron(*[eyes[i] if i < p else mats[i][0] if i == p else mats[i][2] for i in range(n)])
        F += kron(*[mats[i][2].inv() if i < p else mats[i][1] if i == p else eyes[i] for i in range(n)])
    K = kron(*[m[2] for m in mats])
    return E, F, K


def flat(shape, idx):
    r = 0
    for l, j in zip(shape, idx):
        r = r * (l + 1) + j
    return r


def embed(sigma, lam, mu, q):
    L = (lam + mu - sigma) // 2
    v = sp.zeros((lam + 1) * (mu + 1), 1)
    for j in range(L + 1):
        i = L - j
        if i > lam or j > mu:
            continue
        c = (-1) ** j * qfact(mu - j, q) * qfact(lam - i, q) / (qfact(mu, q) * qfact(lam, q) * qfact(i, q) * qfact(j, q))
        c *= q ** (j * (mu + 1 - j)) / (q - 1 / q) ** L
        v[flat((lam, mu), (i, j)), 0] = c
    _, F, _ = generators((lam, mu), q)
    cols = [v]
    for _ in range(sigma):
        cols.append(F * cols[-1])
    return sp.Matrix.hstack(*cols)


def sel(a, b):
    return list(range(abs(a - b), a + b + 1, 2))


def fmt(x):
    return str(sp.nsimplify(x))


def main():
    out = {"q_points": [str(q) for q in Q_POINTS], "embed": [], "project": [], "sixj": [], "hw_dim": []}
    for q in Q_POINTS:
        for lam, mu in itertools.product(range(3), repeat=2):
            blocks = {s: embed(s, lam, mu, q) for s in sel(mu, lam)}
            big = sp.Matrix.hstack(*blocks.values())
            inv = big.inv()
            row = 0
            for s, m in blocks.items():
                out["embed"].append({"q": str(q), "sigma": s, "lambda": lam, "mu": mu,
                                     "matrix": [[fmt(m[r, c]) for c in range(m.cols)] for r in range(m.rows)]})
                p = inv[row:row + s + 1, :]
                out["project"].append({"q": str(q), "sigma": s, "lambda": lam, "mu": mu,
                                       "matrix": [[fmt(p[r, c]) for c in range(p.cols)] for r in range(p.rows)]})
                row += s + 1
        for sigma, l3, l2, l1 in itertools.product(range(3), repeat=4):
            kappas = sorted(set(sel(sigma, l3)) & set(sel(l2, l1)))
            nus = sorted(set(sel(sigma, l1)) & set(sel(l3, l2)))
            if not kappas:
                continue
            eye1 = sp.eye(l1 + 1)
            eye3 = sp.eye(l3 + 1)
            rhs = []
            for nu in nus:
                rhs.append(sp.kronecker_product(embed(nu, l3, l2, q), eye1) * embed(sigma, nu, l1, q)[:, 0])
            A = sp.Matrix.hstack(*rhs)
            for k in kappas:
                lhs = sp.kronecker_product(eye3, embed(k, l2, l1, q)) * embed(sigma, l3, k, q)[:, 0]
                sol, params = A.gauss_jordan_solve(lhs)
                assert not params.free_symbols
                for nu, val in zip(nus, sol):
                    out["sixj"].append({"q": str(q), "sigma": sigma, "l3": l3, "l2": l2, "l1": l1,
                                        "kappa": k, "nu": nu, "value": fmt(val)})
    q = Q_POINTS[0]
    for shape in [(1, 1), (1, 1, 1), (2, 1, 1), (2, 2, 1), (1, 2, 2, 1)]:
        E, _, K = generators(shape, q)
        total = sum(shape)
        for sigma in range(total + 1):
            idxs = [i for i in range(E.cols) if K[i, i] == q**sigma]
            if not idxs:
                continue
            sub = E[:, idxs]
            out["hw_dim"].append({"shape": list(shape), "sigma": sigma, "dim": len(idxs) - sub.rank()})
    with open("tests/data/qgroup_values.json", "w") as f:
        json.dump(out, f, indent=1)


if __name__ == "__main__":
    main()
