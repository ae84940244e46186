"""Reference Virasoro data at rational kappa.

The singular vectors here are NOT taken from the composition formula: they are
obtained as the common kernel of L_1 and L_2 on the degree-(lambda+1) slice of
V(c, h_lambda), normalized so that the coefficient of L_{-1}^{lambda+1} is 1.
The Virasoro action is a small independent implementation that rewrites words
by moving positive modes to the right.
Output: tests/data/virasoro_values.json
"""
import json
from functools import lru_cache

import sympy as sp

KAPPAS = [sp.Rational(7, 2), sp.Rational(13, 5)]


def partitions(d, maxpart=None):
    if maxpart is None:
        maxpart = d
    if d == 0:
        return [()]
    out = []
    for m in range(min(d, maxpart), 0, -1):
        for rest in partitions(d - m, m):
            out.append((m,) + rest)
    return out


def make_action(h, c):
    @lru_cache(maxsize=None)
    def word(w):
        """Normal-order a word (tuple of mode indices, leftmost first) on v."""
        if not w:
            return {(): sp.Integer(1)}
        # find the rightmost position that breaks "strictly negative, weakly increasing index"
        for i in range(len(w) - 1, -1, -1):
            n = w[i]
            if n >= 0 and i == len(w) - 1:
                return {} if n > 0 else scale(word(w[:-1]), h)
            if i < len(w) - 1:
                m = w[i + 1]
                if n >= 0 or n > m:
                    # swap L_n L_m = L_m L_n + (n-m) L_{n+m} + central
                    res = add(word(w[:i] + (m, n) + w[i + 2:]),
                              scale(word(w[:i] + (n + m,) + w[i + 2:]), n - m))
                    if n + m == 0:
                        res = add(res, scale(word(w[:i] + w[i + 2:]), c / 12 * (n**3 - n)))
                    return res
        # already ordered: modes all negative, weakly increasing index
        return {tuple(sorted((-x for x in w), reverse=True)): sp.Integer(1)}

    return word


def add(a, b):
    out = dict(a)
    for k, v in b.items():
        out[k] = out.get(k, 0) + v
        if out[k] == 0:
            del out[k]
    return out


def scale(a, s):
    return {k: v * s for k, v in a.items() if v * s != 0}


def main():
    out = {"singular": []}
    for kappa in KAPPAS:
        c = 13 - 6 * (kappa / 4 + 4 / kappa)
        for lam in range(4):
            h = sp.Rational(lam) * (2 * (lam + 2) - kappa) / (2 * kappa)
            word = make_action(h, c)
            d = lam + 1
            basis = partitions(d)
            rows = []
            for n in (1, 2):
                targets = partitions(d - n)
                block = sp.zeros(len(targets), len(basis))
                for j, p in enumerate(basis):
                    img = word((n,) + tuple(-x for x in p))
                    for k, v in img.items():
                        block[targets.index(k), j] += v
                rows.append(block)
            M = sp.Matrix.vstack(*rows)
            ns = M.nullspace()
            assert len(ns) == 1
            v = ns[0] / ns[0][basis.index((1,) * d)]
            out["singular"].append({"kappa": str(kappa), "lambda": lam,
                                    "entries": [{"partition": list(p), "coef": str(sp.nsimplify(v[i]))}
                                                for i, p in enumerate(basis) if v[i] != 0]})
    with open("tests/data/virasoro_values.json", "w") as f:
        json.dump(out, f, indent=1)


if __name__ == "__main__":
    main()
