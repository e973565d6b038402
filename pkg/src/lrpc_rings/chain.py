"""Arithmetic and complete linear algebra over Galois rings GR(p^s, mu).

A Galois ring is a chain ring: its ideals are (1) > (p) > ... > (p^s) = 0,
so every nonzero element factors as p^v * unit.  That structure makes a
Howell-form row reduction possible, which in turn yields *complete*
solution sets of linear systems (a particular solution plus generators of
the homogeneous kernel), membership tests for row modules, and kernels.

Elements are numpy arrays whose trailing axis holds the mu coefficients of
the representing polynomial, reduced mod p^s.  All routines broadcast over
leading axes.
"""

from __future__ import annotations

import numpy as np

from . import fq
from .errors import MalformedModulus, NotAUnit, NotPrime


class ChainRing:
    """GR(p^s, mu) = Z_{p^s}[x]/(h) with h monic, irreducible mod p."""

    def __init__(self, p: int, s: int, mu: int, h=None):
        if not fq.is_prime(p):
            raise NotPrime(f"{p} is not prime")
        if s < 1 or mu < 1:
            raise MalformedModulus("need s >= 1 and mu >= 1")
        self.p = p
        self.s = s
        self.mu = mu
        self.char = p ** s
        if h is None:
            h = fq.smallest_irreducible(p, mu)
        h = [int(c) % self.char for c in h]
        if len(h) != mu + 1 or h[-1] != 1:
            raise MalformedModulus("modulus must be monic of the stated degree")
        if mu > 1 and not fq.irreducible_mod_p([c % p for c in h], p):
            raise MalformedModulus("modulus is not irreducible mod p")
        self.h = np.array(h, dtype=np.int64)
        self.q = p ** mu
        # x^k mod h for k in [0, 2mu-2], as coefficient rows
        pows = np.zeros((max(2 * mu - 1, 1), mu), dtype=np.int64)
        pows[0, 0] = 1
        for k in range(1, 2 * mu - 1):
            shifted = np.zeros(mu, dtype=np.int64)
            shifted[1:] = pows[k - 1, :-1]
            lead = pows[k - 1, -1]
            shifted = (shifted - lead * self.h[:-1]) % self.char
            pows[k] = shifted
        # multiplication tensor: (a*b)_k = sum_ij a_i b_j T[i,j,k]
        self.tensor = np.zeros((mu, mu, mu), dtype=np.int64)
        for i in range(mu):
            for j in range(mu):
                self.tensor[i, j] = pows[i + j]
        self.zero = np.zeros(mu, dtype=np.int64)
        self.one = np.zeros(mu, dtype=np.int64)
        self.one[0] = 1

    def __repr__(self):
        return f"ChainRing(p={self.p}, s={self.s}, mu={self.mu})"

    # -- elementwise arithmetic (arrays (..., mu)) --

    def add(self, a, b):
        return (a + b) % self.char

    def sub(self, a, b):
        return (a - b) % self.char

    def neg(self, a):
        return (-np.asarray(a)) % self.char

    def mul(self, a, b):
        if self.mu == 1:
            return (np.asarray(a) * np.asarray(b)) % self.char
        return np.einsum("...i,...j,ijk->...k", a, b, self.tensor, optimize=True) % self.char

    def is_zero(self, a):
        return not np.any(a)

    def val(self, a):
        """p-adic valuation of one element: min coefficient valuation, s for 0."""
        a = np.asarray(a)
        v = self.s
        for c in a.reshape(-1):
            c = int(c)
            if c == 0:
                continue
            w = 0
            while c % self.p == 0:
                c //= self.p
                w += 1
            v = min(v, w)
            if v == 0:
                return 0
        return v

    def unit_part(self, a, v):
        """u with a = p^v * u exactly (canonical representative)."""
        return np.asarray(a) // (self.p ** v)

    def unit_inv(self, u):
        """Inverse of a unit: residue-field inverse lifted by Newton iteration."""
        u = np.asarray(u)
        if self.val(u) != 0:
            raise NotAUnit("element is not a unit of the Galois ring")
        b = u.copy() if self.q == 2 else self._pow(u, self.q - 2)
        two = (2 * self.one) % self.char
        for _ in range(self.s.bit_length() + 2):
            ub = self.mul(u, b)
            if np.array_equal(ub, self.one):
                return b % self.char
            b = self.mul(b, (two - ub) % self.char)
        raise NotAUnit("Newton inversion failed to converge")  # pragma: no cover

    def _pow(self, a, e):
        result = self.one.copy()
        base = np.asarray(a) % self.char
        while e:
            if e & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            e >>= 1
        return result

    def divide_exact(self, a, v):
        """a // p^v coefficientwise; exact when val(a) >= v."""
        return np.asarray(a) // (self.p ** v)

    # ------------------------------------------------------------------
    # Howell form

    def howell(self, mat, n_main=None):
        """Howell-form reduction of the rows of ``mat``.

        ``mat`` has shape (k, n, mu).  Pivots are normalized to p^v (unit
        part scaled away); for every pivot with v > 0 the annihilator row
        p^(s-v) * row is folded back in, which is what makes greedy
        reduction against the result a complete membership test for the
        row module.

        Returns a HowellForm over all n columns.  ``n_main`` marks how many
        leading columns are "real" when ``mat`` carries augmented tracking
        columns; it is recorded on the result for the solver helpers.
        """
        mat = np.asarray(mat, dtype=np.int64) % self.char
        k, n = mat.shape[0], mat.shape[1]
        if n_main is None:
            n_main = n
        pivots = {}  # col -> [row, val]
        queue = [mat[i].copy() for i in range(k)]
        qi = 0
        while qi < len(queue):
            r = queue[qi]
            qi += 1
            while True:
                nz = np.nonzero(np.any(r, axis=-1))[0] if self.mu > 1 else np.nonzero(r[:, 0])[0]
                if nz.size == 0:
                    break
                c = int(nz[0])
                v = self.val(r[c])
                if c not in pivots:
                    u = self.unit_part(r[c], v)
                    if not np.array_equal(u % self.char, self.one):
                        r = self.mul(r, self.unit_inv(u)) % self.char
                    pivots[c] = [r, v]
                    if v > 0:
                        queue.append((r * (self.p ** (self.s - v))) % self.char)
                    break
                pr, pv = pivots[c]
                if v < pv:
                    u = self.unit_part(r[c], v)
                    if not np.array_equal(u % self.char, self.one):
                        r = self.mul(r, self.unit_inv(u)) % self.char
                    pivots[c] = [r, v]
                    if v > 0:
                        queue.append((r * (self.p ** (self.s - v))) % self.char)
                    r = pr
                    continue
                qcoef = self.divide_exact(r[c], pv)
                r = (r - self.mul(qcoef[None, :], pr)) % self.char
        cols = sorted(pivots)
        rows = np.array([pivots[c][0] for c in cols], dtype=np.int64).reshape(len(cols), n, self.mu)
        vals = [pivots[c][1] for c in cols]
        return HowellForm(self, rows, cols, vals, n_main)

    # ------------------------------------------------------------------
    # solving

    def solve(self, a, b):
        """Complete solution set of A x = b over the chain ring.

        ``a`` has shape (m, n, mu) and ``b`` shape (m, mu).  Returns
        (particular, kernel) where particular is an (n, mu) array or None
        when the system is inconsistent, and kernel is a (g, n, mu) array
        of generators of the homogeneous solution module.
        """
        a = np.asarray(a, dtype=np.int64) % self.char
        m, n = a.shape[0], a.shape[1]
        hf = self._augmented_transpose_form(a)
        kernel = hf.kernel_part()
        coeffs = hf.member_solve(np.asarray(b, dtype=np.int64).reshape(m, self.mu) % self.char)
        particular = None if coeffs is None else coeffs
        return particular, kernel

    def left_kernel(self, mat):
        """Generators of {x : x M = 0} for M of shape (k, n, mu)."""
        mat = np.asarray(mat, dtype=np.int64) % self.char
        k, n = mat.shape[0], mat.shape[1]
        aug = np.zeros((k, n + k, self.mu), dtype=np.int64)
        aug[:, :n] = mat % self.char
        aug[np.arange(k), n + np.arange(k)] = self.one
        hf = self.howell(aug, n_main=n)
        return hf.kernel_part()

    def _augmented_transpose_form(self, a):
        """Howell form of [A^T | I], used for solving A x = b."""
        m, n = a.shape[0], a.shape[1]
        at = np.swapaxes(a, 0, 1)  # (n, m, mu)
        aug = np.zeros((n, m + n, self.mu), dtype=np.int64)
        aug[:, :m] = at
        aug[np.arange(n), m + np.arange(n)] = self.one
        return self.howell(aug, n_main=m)


class HowellForm:
    """Rows in Howell form, with optional augmented tracking columns."""

    def __init__(self, ring, rows, cols, vals, n_main):
        self.ring = ring
        self.rows = rows          # (r, n_total, mu)
        self.cols = cols          # pivot columns, ascending
        self.vals = vals          # pivot valuations
        self.n_main = n_main

    def kernel_part(self):
        """Tracking parts of rows whose pivot lies in the augmented block."""
        ring = self.ring
        picks = [i for i, c in enumerate(self.cols) if c >= self.n_main]
        n_aug = self.rows.shape[1] - self.n_main
        if not picks:
            return np.zeros((0, n_aug, ring.mu), dtype=np.int64)
        return self.rows[picks][:, self.n_main:, :]

    def member_solve(self, v):
        """Greedy-reduce ``v`` (shape (n_main, mu)) against the main block.

        Returns the accumulated tracking combination (an (n_aug, mu) array,
        or the coefficient vector itself if the form has no augmentation)
        when v lies in the row module of the main block, else None.
        """
        ring = self.ring
        res = np.asarray(v, dtype=np.int64).copy() % ring.char
        n_aug = self.rows.shape[1] - self.n_main
        witness = np.zeros((max(n_aug, 1), ring.mu), dtype=np.int64)
        col_to_idx = {c: i for i, c in enumerate(self.cols) if c < self.n_main}
        for c in range(self.n_main):
            if not np.any(res[c]):
                continue
            i = col_to_idx.get(c)
            if i is None:
                return None
            pv = self.vals[i]
            if ring.val(res[c]) < pv:
                return None
            qcoef = ring.divide_exact(res[c], pv)
            res = (res - ring.mul(qcoef[None, :], self.rows[i, :self.n_main])) % ring.char
            if n_aug:
                witness = (witness - ring.mul(qcoef[None, :], self.rows[i, self.n_main:])) % ring.char
        if np.any(res):
            return None  # pragma: no cover - reduction always clears main cols
        return (-witness) % ring.char if n_aug else witness

    def member(self, v) -> bool:
        """Membership of v in the row module of the main block."""
        ring = self.ring
        res = np.asarray(v, dtype=np.int64).copy() % ring.char
        col_to_idx = {c: i for i, c in enumerate(self.cols) if c < self.n_main}
        for c in range(self.n_main):
            if not np.any(res[c]):
                continue
            i = col_to_idx.get(c)
            if i is None:
                return False
            pv = self.vals[i]
            if ring.val(res[c]) < pv:
                return False
            qcoef = ring.divide_exact(res[c], pv)
            res = (res - ring.mul(qcoef[None, :], self.rows[i, :self.n_main])) % ring.char
        return not np.any(res)
