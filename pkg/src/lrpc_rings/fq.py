"""Prime- and extension-field helpers used for residue computations.

Residue fields F_q with q = p^mu appear as quotients R/m of the local rings
in this package.  Field elements are encoded as integers in [0, q): the
base-p digits of the code are the coefficients of the representing
polynomial modulo the field's defining irreducible w(x).  For mu = 1 the
code of an element is the element itself, and the fast paths below operate
directly on numpy integer arrays mod p.
"""

from __future__ import annotations

import numpy as np

from .errors import NotPrime

# ---------------------------------------------------------------------------
# primes


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin, valid for all n < 3.3e24."""
    if n < 2:
        return False
    for small in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % small == 0:
            return n == small
    d, r = n - 1, 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def prime_power(n: int):
    """Return (p, e) with n = p^e, or None if n is not a prime power."""
    if n < 2:
        return None
    for p in range(2, n + 1):
        if p * p > n:
            return (n, 1) if is_prime(n) else None
        if n % p:
            continue
        e = 0
        m = n
        while m % p == 0:
            m //= p
            e += 1
        return (p, e) if m == 1 else None
    return None


def factor_into_prime_powers(n: int) -> list[tuple[int, int]]:
    """Factor n >= 2 into [(p, e), ...] with p ascending."""
    out = []
    m = n
    p = 2
    while p * p <= m:
        if m % p == 0:
            e = 0
            while m % p == 0:
                m //= p
                e += 1
            out.append((p, e))
        p += 1
    if m > 1:
        out.append((m, 1))
    return out


# ---------------------------------------------------------------------------
# polynomials over F_p (coefficient lists, ascending degree, ints in [0, p))


def trim(poly):
    poly = list(poly)
    while poly and poly[-1] == 0:
        poly.pop()
    return poly


def poly_add_p(a, b, p):
    n = max(len(a), len(b))
    return trim([((a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0)) % p for i in range(n)])


def poly_mul_p(a, b, p):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] = (out[i + j] + ai * bj) % p
    return trim(out)


def poly_mod_p(a, m, p):
    """Remainder of a modulo m (m need not be monic; leading coeff inverted)."""
    a = trim(a)
    m = trim(m)
    dm = len(m) - 1
    inv_lead = pow(m[-1], p - 2, p)
    while len(a) - 1 >= dm and a:
        shift = len(a) - 1 - dm
        c = a[-1] * inv_lead % p
        for i, mi in enumerate(m):
            a[shift + i] = (a[shift + i] - c * mi) % p
        a = trim(a)
    return a


def poly_gcd_p(a, b, p):
    a, b = trim(a), trim(b)
    while b:
        a, b = b, poly_mod_p(a, b, p)
    if a:
        inv = pow(a[-1], p - 2, p)
        a = [c * inv % p for c in a]
    return a


def poly_powmod_p(base, exp, m, p):
    result = [1]
    base = poly_mod_p(base, m, p)
    while exp:
        if exp & 1:
            result = poly_mod_p(poly_mul_p(result, base, p), m, p)
        base = poly_mod_p(poly_mul_p(base, base, p), m, p)
        exp >>= 1
    return result


def irreducible_mod_p(poly, p) -> bool:
    """Rabin irreducibility test for a polynomial over F_p."""
    poly = trim(poly)
    n = len(poly) - 1
    if n <= 0:
        return False
    if n == 1:
        return True
    x = [0, 1]
    # x^(p^n) == x mod poly
    t = poly_powmod_p(x, p ** n, poly, p)
    if trim(poly_add_p(t, [(-c) % p for c in x], p)):
        return False
    for d in sorted({q for q, _ in factor_into_prime_powers(n)}):
        t = poly_powmod_p(x, p ** (n // d), poly, p)
        g = poly_gcd_p(poly_add_p(t, [(-c) % p for c in x], p), poly, p)
        if len(g) - 1 > 0:
            return False
    return True


def power_of_irreducible(gbar, p):
    """Decompose gbar = w^e over F_p with w irreducible.

    Returns (w, e) or None when gbar has at least two distinct irreducible
    factors.  Uses distinct-degree gcds: scanning mu upward, the first
    nontrivial gcd(gbar, x^(p^mu) - x) collects exactly the distinct
    degree-mu factors.
    """
    gbar = trim(gbar)
    deg = len(gbar) - 1
    if deg <= 0:
        return None
    x = [0, 1]
    for mu in range(1, deg + 1):
        t = poly_powmod_p(x, p ** mu, gbar, p)
        g = poly_gcd_p(poly_add_p(t, [(-c) % p for c in x], p), gbar, p)
        dg = len(g) - 1
        if dg <= 0:
            continue
        if dg != mu:
            return None  # >= 2 distinct factors of degree mu
        if deg % mu:
            return None
        w = g
        # verify exact power: gbar == w^e up to the (monic) normalization
        e = deg // mu
        acc = [1]
        for _ in range(e):
            acc = poly_mul_p(acc, w, p)
        lead = gbar[-1]
        if trim([(gi - lead * ai) % p for gi, ai in zip(gbar + [0] * len(acc), acc + [0] * len(gbar))]):
            return None
        return w, e
    return None


def smallest_irreducible(p, deg):
    """Deterministically pick the monic irreducible of given degree over F_p
    whose non-leading coefficient vector, read as a base-p integer, is
    smallest."""
    if deg == 1:
        return [0, 1]
    for code in range(1, p ** deg):
        coeffs = []
        c = code
        for _ in range(deg):
            coeffs.append(c % p)
            c //= p
        poly = coeffs + [1]
        if irreducible_mod_p(poly, p):
            return poly
    raise NotPrime(f"no irreducible of degree {deg} over F_{p}")  # unreachable for prime p


# ---------------------------------------------------------------------------
# F_p matrix routines (vectorized)


def rank_mod_p(mat, p) -> int:
    """Rank of an integer matrix over F_p."""
    m = np.asarray(mat, dtype=np.int64) % p
    if m.size == 0:
        return 0
    rows, cols = m.shape
    rank = 0
    for c in range(cols):
        if rank == rows:
            break
        nz = np.nonzero(m[rank:, c])[0]
        if nz.size == 0:
            continue
        i = rank + nz[0]
        if i != rank:
            m[[rank, i]] = m[[i, rank]]
        inv = pow(int(m[rank, c]), p - 2, p)
        m[rank] = m[rank] * inv % p
        rest = np.nonzero(m[rank + 1:, c])[0]
        if rest.size:
            idx = rank + 1 + rest
            m[idx] = (m[idx] - np.outer(m[idx, c], m[rank])) % p
        rank += 1
    return rank


def rref_mod_p(mat, p):
    """Reduced row echelon form over F_p: returns (rref, pivot_columns)."""
    m = np.asarray(mat, dtype=np.int64) % p
    rows, cols = m.shape
    pivots = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(m[r:, c])[0]
        if nz.size == 0:
            continue
        i = r + nz[0]
        if i != r:
            m[[r, i]] = m[[i, r]]
        inv = pow(int(m[r, c]), p - 2, p)
        m[r] = m[r] * inv % p
        others = np.nonzero(m[:, c])[0]
        others = others[others != r]
        if others.size:
            m[others] = (m[others] - np.outer(m[others, c], m[r])) % p
        pivots.append(c)
        r += 1
    return m[:r], pivots


# ---------------------------------------------------------------------------
# F_q = F_p[x]/(w), elements as integer codes (base-p digit vectors)


class Fq:
    """Small extension field F_{p^mu} with integer-coded elements."""

    def __init__(self, p: int, w):
        self.p = p
        self.w = trim(list(w))
        self.mu = len(self.w) - 1
        self.q = p ** self.mu

    def __repr__(self):
        return f"Fq(p={self.p}, mu={self.mu})"

    def encode(self, digits) -> int:
        code = 0
        for d in reversed(list(digits)):
            code = code * self.p + int(d) % self.p
        return code

    def decode(self, code: int):
        out = []
        c = int(code)
        for _ in range(self.mu):
            out.append(c % self.p)
            c //= self.p
        return out

    def add(self, a, b):
        if self.mu == 1:
            return (a + b) % self.p
        return self.encode([(x + y) % self.p for x, y in zip(self.decode(a), self.decode(b))])

    def sub(self, a, b):
        if self.mu == 1:
            return (a - b) % self.p
        return self.encode([(x - y) % self.p for x, y in zip(self.decode(a), self.decode(b))])

    def mul(self, a, b):
        if self.mu == 1:
            return a * b % self.p
        prod = poly_mul_p(self.decode(a), self.decode(b), self.p)
        return self.encode(poly_mod_p(prod, self.w, self.p) + [0] * self.mu)

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("0 has no inverse in F_q")
        if self.mu == 1:
            return pow(a, self.p - 2, self.p)
        return self.pow(a, self.q - 2)

    def pow(self, a, e):
        result = 1
        base = a
        while e:
            if e & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            e >>= 1
        return result

    def neg(self, a):
        if self.mu == 1:
            return (-a) % self.p
        return self.encode([(-x) % self.p for x in self.decode(a)])

    # -- matrices of integer-coded elements --

    def matrix_rank(self, mat) -> int:
        if self.mu == 1:
            return rank_mod_p(mat, self.p)
        m = [list(map(int, row)) for row in mat]
        rows = len(m)
        cols = len(m[0]) if rows else 0
        rank = 0
        for c in range(cols):
            piv = next((i for i in range(rank, rows) if m[i][c]), None)
            if piv is None:
                continue
            m[rank], m[piv] = m[piv], m[rank]
            inv = self.inv(m[rank][c])
            m[rank] = [self.mul(inv, v) for v in m[rank]]
            for i in range(rows):
                if i != rank and m[i][c]:
                    f = m[i][c]
                    m[i] = [self.sub(v, self.mul(f, u)) for v, u in zip(m[i], m[rank])]
            rank += 1
        return rank

    def rref(self, mat):
        """RREF over F_q; returns (rows list, pivot columns)."""
        if self.mu == 1:
            r, piv = rref_mod_p(mat, self.p)
            return [list(map(int, row)) for row in r], piv
        m = [list(map(int, row)) for row in mat]
        rows = len(m)
        cols = len(m[0]) if rows else 0
        pivots = []
        r = 0
        for c in range(cols):
            piv = next((i for i in range(r, rows) if m[i][c]), None)
            if piv is None:
                continue
            m[r], m[piv] = m[piv], m[r]
            inv = self.inv(m[r][c])
            m[r] = [self.mul(inv, v) for v in m[r]]
            for i in range(rows):
                if i != r and m[i][c]:
                    f = m[i][c]
                    m[i] = [self.sub(v, self.mul(f, u)) for v, u in zip(m[i], m[r])]
            pivots.append(c)
            r += 1
        return m[:r], pivots

    # -- polynomials over F_q (lists of integer codes, ascending) --

    def ptrim(self, a):
        a = list(a)
        while a and a[-1] == 0:
            a.pop()
        return a

    def pmul(self, a, b):
        if not a or not b:
            return []
        out = [0] * (len(a) + len(b) - 1)
        for i, ai in enumerate(a):
            if ai:
                for j, bj in enumerate(b):
                    out[i + j] = self.add(out[i + j], self.mul(ai, bj))
        return self.ptrim(out)

    def pmod(self, a, m):
        a = self.ptrim(a)
        m = self.ptrim(m)
        dm = len(m) - 1
        inv_lead = self.inv(m[-1])
        while a and len(a) - 1 >= dm:
            shift = len(a) - 1 - dm
            c = self.mul(a[-1], inv_lead)
            for i, mi in enumerate(m):
                a[shift + i] = self.sub(a[shift + i], self.mul(c, mi))
            a = self.ptrim(a)
        return a

    def pgcd(self, a, b):
        a, b = self.ptrim(a), self.ptrim(b)
        while b:
            a, b = b, self.pmod(a, b)
        if a:
            inv = self.inv(a[-1])
            a = [self.mul(inv, c) for c in a]
        return a

    def ppowmod(self, base, e, m):
        result = [1]
        base = self.pmod(base, m)
        while e:
            if e & 1:
                result = self.pmod(self.pmul(result, base), m)
            base = self.pmod(self.pmul(base, base), m)
            e >>= 1
        return result

    def irreducible(self, poly) -> bool:
        """Rabin test over F_q."""
        poly = self.ptrim(poly)
        n = len(poly) - 1
        if n <= 0:
            return False
        if n == 1:
            return True
        x = [0, 1]
        t = self.ppowmod(x, self.q ** n, poly)
        if self.ptrim([self.sub(a, b) for a, b in zip(t + [0, 0], x + [0] * len(t))]):
            return False
        for d in sorted({f for f, _ in factor_into_prime_powers(n)}):
            t = self.ppowmod(x, self.q ** (n // d), poly)
            diff = [self.sub(a, b) for a, b in zip(t + [0, 0], x + [0] * len(t))]
            if len(self.pgcd(self.ptrim(diff), poly)) - 1 > 0:
                return False
        return True

    def smallest_irreducible_poly(self, deg, prime_coeffs_only=True):
        """Deterministic irreducible of given degree over F_q.

        Prefers lifts with coefficients in the prime subfield {0..p-1};
        falls back to general F_q coefficients when no such lift exists.
        """
        span = self.p if prime_coeffs_only else self.q
        for code in range(1, span ** deg):
            coeffs = []
            c = code
            for _ in range(deg):
                coeffs.append(c % span)
                c //= span
            poly = coeffs + [1]
            if self.irreducible(poly):
                return poly
        if prime_coeffs_only:
            return self.smallest_irreducible_poly(deg, prime_coeffs_only=False)
        raise ValueError(f"no irreducible of degree {deg} over F_{self.q}")
