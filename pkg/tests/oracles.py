"""Deliberately naive reference computations, written without the package internals."""
from __future__ import annotations

import itertools
from fractions import Fraction

import numpy as np


def rank_mod_p(rows, p: int) -> int:
    """Rank over F_p by plain Gaussian elimination on an int64 copy."""
    m = np.array(rows, dtype=np.int64) % p
    if m.size == 0:
        return 0
    r = 0
    for c in range(m.shape[1]):
        piv = next((i for i in range(r, m.shape[0]) if m[i, c]), None)
        if piv is None:
            continue
        m[[r, piv]] = m[[piv, r]]
        m[r] = (m[r] * pow(int(m[r, c]), -1, p)) % p
        for i in range(m.shape[0]):
            if i != r and m[i, c]:
                m[i] = (m[i] - m[i, c] * m[r]) % p
        r += 1
        if r == m.shape[0]:
            break
    return r


def rank_rational(rows) -> int:
    m = [[Fraction(x) for x in row] for row in rows]
    if not m:
        return 0
    r = 0
    for c in range(len(m[0])):
        piv = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        r += 1
    return r


def truncated_polynomial_mult(n: int):
    """Structure constants of k[t]/tⁿ on 1, t, ..., tⁿ⁻¹."""
    mult = np.zeros((n, n, n), dtype=np.int64)
    for a in range(n):
        for b in range(n):
            if a + b < n:
                mult[a, b, a + b] = 1
    return mult


def path_algebra_a2_mult():
    """Basis e1, e2, a with a = e2·a·e1 (arrow 1 → 2); products in composition order."""
    mult = np.zeros((3, 3, 3), dtype=np.int64)
    e1, e2, a = 0, 1, 2
    mult[e1, e1, e1] = 1
    mult[e2, e2, e2] = 1
    mult[e2, a, a] = 1
    mult[a, e1, a] = 1
    return mult


def hochschild_dims(mult, p: int, top: int) -> list[int]:
    """dim HHⁿ(A, A) for n = 0..top from the unnormalized bar complex, over F_p."""
    d = mult.shape[0]

    def delta(n):
        cols = list(itertools.product(range(d), repeat=n))
        rows = list(itertools.product(range(d), repeat=n + 1))
        col_ix = {t: i for i, t in enumerate(cols)}
        mat = np.zeros((len(rows) * d, len(cols) * d), dtype=np.int64)
        for ri, args in enumerate(rows):
            # a₁·f(a₂, …)
            for l in range(d):
                for m_ in range(d):
                    c = mult[args[0], m_, l]
                    if c:
                        mat[ri * d + l, col_ix[args[1:]] * d + m_] += c
            # Σ (−1)^i f(…, aᵢaᵢ₊₁, …)
            for i in range(n):
                for b in range(d):
                    c = mult[args[i], args[i + 1], b]
                    if c:
                        t = args[:i] + (b,) + args[i + 2:]
                        for m_ in range(d):
                            mat[ri * d + m_, col_ix[t] * d + m_] += (-1) ** (i + 1) * c
            # (−1)^{n+1} f(a₁…aₙ)·aₙ₊₁
            for l in range(d):
                for m_ in range(d):
                    c = mult[m_, args[-1], l]
                    if c:
                        mat[ri * d + l, col_ix[args[:-1]] * d + m_] += (-1) ** (n + 1) * c
        return mat % p

    ranks = [rank_mod_p(delta(n), p) for n in range(top + 1)]
    dims = []
    for n in range(top + 1):
        cn = d ** (n + 1)
        dims.append(cn - ranks[n] - (ranks[n - 1] if n else 0))
    return dims


def module_hom_dim(act_m, act_n, p: int) -> int:
    """dim {X : X·a = a·X for every basis element a} from the Kronecker system; p = 0 means Q."""
    m, n = act_m.shape[1], act_n.shape[1]
    if m == 0 or n == 0:
        return 0
    blocks = [np.kron(np.eye(n, dtype=np.int64), np.asarray(a).T) - np.kron(np.asarray(b), np.eye(m, dtype=np.int64))
              for a, b in zip(act_m, act_n)]
    rows = np.concatenate(blocks, axis=0)
    r = rank_mod_p(rows, p) if p else rank_rational(rows.tolist())
    return m * n - r
