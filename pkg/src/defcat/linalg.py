"""Exact dense linear algebra over prime fields and the rationals.

Matrices are numpy arrays. Over F_p they hold reduced ``int64`` entries,
over Q they are object arrays of :class:`fractions.Fraction`. No floating
point is used anywhere.
"""
from __future__ import annotations

import math
from fractions import Fraction

import numpy as np

_MAX_PRIME = 1 << 20


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    f = 2
    while f * f <= n:
        if n % f == 0:
            return False
        f += 1
    return True


_numer = np.frompyfunc(lambda x: x.numerator, 1, 1)
_denom = np.frompyfunc(lambda x: x.denominator, 1, 1)
_INT64_SAFE = 1 << 62


def _scaled_integers(a: np.ndarray):
    """(integer array, common denominator) with a = ints / den."""
    if not a.size:
        return a.astype(object), 1
    dens = _denom(a)
    den = math.lcm(*set(dens.ravel().tolist()))
    ints = _numer(a) * (den // dens) if den != 1 else _numer(a)
    return ints, den


def _rational_contract(spec: str, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Exact einsum of two Fraction arrays through integer arithmetic on a common denominator."""
    ia, da = _scaled_integers(a)
    ib, db = _scaled_integers(b)
    inputs, out = spec.split("->")
    ta, tb = inputs.split(",")
    dims = dict(zip(ta, a.shape)) | dict(zip(tb, b.shape))
    terms = math.prod(dims[c] for c in set(ta + tb) if c not in out) if dims else 1
    ma = max((abs(int(x)) for x in ia.ravel()), default=0)
    mb = max((abs(int(x)) for x in ib.ravel()), default=0)
    if ma * mb * max(terms, 1) < _INT64_SAFE:
        prod = np.einsum(spec, ia.astype(np.int64), ib.astype(np.int64)).astype(object)
    else:
        prod = np.einsum(spec, ia, ib)
    den = da * db
    res = np.empty(np.shape(prod), dtype=object)
    flat = res.reshape(-1)
    for i, v in enumerate(np.asarray(prod).reshape(-1).tolist()):
        flat[i] = Fraction(v, den)
    return res


class Field:
    """The prime field F_p (``characteristic=p``) or Q (``characteristic=0``)."""

    def __init__(self, characteristic: int = 0):
        characteristic = int(characteristic)
        if characteristic != 0 and not _is_prime(characteristic):
            raise ValueError(f"characteristic must be 0 or prime, got {characteristic}")
        if characteristic >= _MAX_PRIME:
            raise ValueError(f"characteristic {characteristic} too large for int64 kernels")
        self.characteristic = characteristic

    @property
    def p(self) -> int:
        return self.characteristic

    @property
    def dtype(self):
        return np.int64 if self.characteristic else object

    def __eq__(self, other):
        return isinstance(other, Field) and other.characteristic == self.characteristic

    def __hash__(self):
        return hash(("Field", self.characteristic))

    @property
    def name(self) -> str:
        return f"F{self.characteristic}" if self.characteristic else "Q"

    def __repr__(self):
        return f"F_{self.characteristic}" if self.characteristic else "Q"

    # -- scalars and arrays -------------------------------------------------

    def scalar(self, x):
        if self.characteristic:
            if isinstance(x, Fraction):
                return int(x.numerator * pow(x.denominator, -1, self.p)) % self.p
            return int(x) % self.p
        return Fraction(x)

    def array(self, data, shape=None) -> np.ndarray:
        if self.characteristic:
            a = np.asarray(data)
            if a.dtype == object:
                a = np.vectorize(self.scalar, otypes=[np.int64])(a) if a.size else a.astype(np.int64)
            a = np.asarray(a, dtype=np.int64) % self.p
        else:
            a = np.asarray(data, dtype=object)
            if a.size:
                a = np.vectorize(Fraction, otypes=[object])(a)
        if shape is not None:
            a = a.reshape(shape)
        return a

    def zeros(self, shape) -> np.ndarray:
        if self.characteristic:
            return np.zeros(shape, dtype=np.int64)
        a = np.empty(shape, dtype=object)
        a.fill(Fraction(0))
        return a

    def eye(self, n: int) -> np.ndarray:
        a = self.zeros((n, n))
        for i in range(n):
            a[i, i] = self.scalar(1)
        return a

    def reduce(self, a):
        if self.characteristic:
            return np.asarray(a, dtype=np.int64) % self.p
        return a

    def inv(self, x):
        if self.characteristic:
            x = int(x) % self.p
            if x == 0:
                raise ZeroDivisionError("inverse of zero in F_%d" % self.p)
            return pow(x, -1, self.p)
        if x == 0:
            raise ZeroDivisionError("inverse of zero in Q")
        return Fraction(1) / x

    def dot(self, a, b) -> np.ndarray:
        a = np.asarray(a)
        b = np.asarray(b)
        if a.shape[-1] == 0:
            shape = a.shape[:-1] + b.shape[1:]
            return self.zeros(shape)
        if not self.characteristic and a.ndim == 2 and b.ndim in (1, 2):
            return _rational_contract("ij,j->i" if b.ndim == 1 else "ij,jk->ik", a, b)
        return self.reduce(a @ b)

    def einsum(self, subscripts: str, *ops) -> np.ndarray:
        """``np.einsum`` contracted pairwise from the left, reducing after every step.

        Pairwise contraction keeps object arrays fast and int64 products below overflow.
        """
        inputs, output = subscripts.replace(" ", "").split("->")
        terms = inputs.split(",")
        cur, cur_ix = np.asarray(ops[0]), terms[0]
        for k in range(1, len(terms)):
            later = set(output).union(*terms[k + 1:])
            keep = "".join(dict.fromkeys(c for c in cur_ix + terms[k] if c in later))
            spec = f"{cur_ix},{terms[k]}->{keep}"
            if self.characteristic:
                cur = self.reduce(np.einsum(spec, cur, np.asarray(ops[k])))
            else:
                cur = _rational_contract(spec, cur, np.asarray(ops[k]))
            cur_ix = keep
        return self.reduce(np.einsum(f"{cur_ix}->{output}", cur))

    def chain(self, *mats) -> np.ndarray:
        out = mats[0]
        for m in mats[1:]:
            out = self.dot(out, m)
        return out

    def random(self, rng: np.random.Generator, shape, low: int = -3, high: int = 3) -> np.ndarray:
        if self.characteristic:
            return rng.integers(0, self.p, size=shape).astype(np.int64)
        vals = rng.integers(low, high + 1, size=shape)
        return self.array(vals)

    def is_zero(self, a) -> bool:
        a = np.asarray(a)
        return not a.size or not np.any(a != 0)

    # -- elimination --------------------------------------------------------

    def rref(self, a):
        """Reduced row echelon form. Returns ``(R, pivot_columns)``."""
        m = np.array(a, dtype=self.dtype, copy=True)
        if m.ndim != 2:
            raise ValueError("rref expects a matrix")
        rows, cols = m.shape
        pivots: list[int] = []
        r = 0
        for c in range(cols):
            if r == rows:
                break
            nz = np.nonzero(m[r:, c] != 0)[0]
            if not len(nz):
                continue
            i = r + int(nz[0])
            if i != r:
                m[[r, i]] = m[[i, r]]
            m[r, c:] = self.reduce(m[r, c:] * self.inv(m[r, c]))
            col = m[:, c].copy()
            col[r] = 0
            hit = np.nonzero(col != 0)[0]
            if len(hit):
                m[np.ix_(hit, np.arange(c, cols))] = self.reduce(
                    m[np.ix_(hit, np.arange(c, cols))] - np.outer(col[hit], m[r, c:])
                )
            pivots.append(c)
            r += 1
        return m, pivots

    def rank(self, a) -> int:
        a = np.asarray(a)
        if not a.size:
            return 0
        if a.shape[0] > a.shape[1]:
            a = a.T
        return len(self.rref(a)[1])

    def nullspace(self, a) -> np.ndarray:
        """Basis of ``{x : a x = 0}`` as the columns of the returned matrix."""
        a = np.asarray(a)
        n = a.shape[1]
        if a.shape[0] == 0:
            return self.eye(n)
        r, piv = self.rref(a)
        free = [c for c in range(n) if c not in set(piv)]
        out = self.zeros((n, len(free)))
        one = self.scalar(1)
        for k, f in enumerate(free):
            out[f, k] = one
            for i, pc in enumerate(piv):
                out[pc, k] = self.reduce(-r[i, f])
        return out

    def solve(self, a, b):
        """A solution ``x`` of ``a x = b`` (b a vector or matrix), or None."""
        a = np.asarray(a)
        b = np.asarray(b)
        vec = b.ndim == 1
        if vec:
            b = b.reshape(-1, 1)
        n = a.shape[1]
        if a.shape[0] == 0:
            x = self.zeros((n, b.shape[1]))
            return x[:, 0] if vec else x
        aug = np.concatenate([np.asarray(a, dtype=self.dtype), np.asarray(b, dtype=self.dtype)], axis=1)
        r, piv = self.rref(aug)
        if piv and piv[-1] >= n:
            return None
        x = self.zeros((n, b.shape[1]))
        for i, pc in enumerate(piv):
            x[pc] = r[i, n:]
        return x[:, 0] if vec else x

    def inverse(self, a):
        a = np.asarray(a)
        if a.shape[0] != a.shape[1]:
            return None
        n = a.shape[0]
        if n == 0:
            return self.zeros((0, 0))
        r, piv = self.rref(np.concatenate([a, self.eye(n)], axis=1))
        if len(piv) < n or piv[n - 1] != n - 1:
            return None
        return r[:, n:]

    def colspace(self, a) -> np.ndarray:
        """Independent columns of ``a`` spanning its column space."""
        a = np.asarray(a)
        if not a.size:
            return self.zeros((a.shape[0], 0))
        _, piv = self.rref(a)
        return np.array(a[:, piv], dtype=self.dtype)

    def rowspace_rref(self, vectors) -> np.ndarray:
        """Echelon basis (rows) of the span of the columns of ``vectors``."""
        v = np.asarray(vectors)
        if not v.size:
            return self.zeros((0, v.shape[0]))
        r, piv = self.rref(v.T)
        return r[: len(piv)]

    def left_inverse(self, w) -> np.ndarray:
        """``L`` with ``L @ w = I`` for ``w`` of full column rank."""
        w = np.asarray(w)
        n, k = w.shape
        if k == 0:
            return self.zeros((0, n))
        _, rows = self.rref(w.T)
        if len(rows) != k:
            raise ValueError("matrix does not have full column rank")
        inv = self.inverse(w[rows, :])
        out = self.zeros((k, n))
        out[:, rows] = inv
        return out

    def complement(self, w, n: int):
        """Quotient data for the subspace spanned by the columns of ``w``.

        Returns ``(proj, section)`` with ``proj`` of shape (n-r, n) having kernel
        exactly span(w), and ``section`` of shape (n, n-r) with proj @ section = I.
        """
        w = np.asarray(w)
        if not w.size or w.shape[1] == 0:
            return self.eye(n), self.eye(n)
        r, piv = self.rref(w.T)
        r = r[: len(piv)]
        keep = [c for c in range(n) if c not in set(piv)]
        proj = self.zeros((len(keep), n))
        for k, q in enumerate(keep):
            proj[k, q] = self.scalar(1)
        if piv:
            proj[:, piv] = self.reduce(-r[:, keep].T)
        section = self.zeros((n, len(keep)))
        for k, q in enumerate(keep):
            section[q, k] = self.scalar(1)
        return proj, section

    def in_span(self, w, v) -> bool:
        w = np.asarray(w)
        if not w.size or w.shape[1] == 0:
            return self.is_zero(v)
        return self.solve(w, v) is not None

    def intersect(self, u, v) -> np.ndarray:
        """Basis of span(u) ∩ span(v) (columns)."""
        u = np.asarray(u)
        v = np.asarray(v)
        if u.shape[1] == 0 or v.shape[1] == 0:
            return self.zeros((u.shape[0], 0))
        ns = self.nullspace(np.concatenate([u, self.reduce(-v)], axis=1))
        return self.colspace(self.dot(u, ns[: u.shape[1]]))

    def matrix_power(self, a, k: int) -> np.ndarray:
        result = self.eye(a.shape[0])
        base = np.array(a, dtype=self.dtype)
        while k:
            if k & 1:
                result = self.dot(result, base)
            base = self.dot(base, base)
            k >>= 1
        return result

    def to_json(self, a):
        """Nested lists; F_p entries as ints, Q entries as [num, den]."""
        a = np.asarray(a)
        if self.characteristic:
            return a.astype(np.int64).tolist()
        return np.vectorize(lambda x: [x.numerator, x.denominator], otypes=[object])(a).tolist() if a.ndim else [a.item().numerator, a.item().denominator]
