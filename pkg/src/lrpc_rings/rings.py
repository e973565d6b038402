"""Finite commutative local rings presented over a maximal Galois subring.

A local ring R here is always one of
  * a Galois ring GR(p^s, mu) = Z_{p^s}[x]/(h), or
  * a univariate quotient Z_{p^s}[x]/(g) whose reduction mod p is a power
    of a single irreducible polynomial (the necessary and sufficient
    condition for the quotient to be local).

R is stored as a free algebra of rank gamma over its maximal Galois
subring R0 = GR(p^s, mu).  An element is a flat coordinate vector of
length D = gamma * mu over Z_{p^s}: index ell*mu + u holds the coefficient
of z_ell * y^u, where z_1..z_gamma is the R0-basis of R (z_1 = 1) and y
generates R0 over Z_{p^s}.  Multiplication is a bilinear form given by a
precomputed (D, D, D) structure tensor, so all arithmetic vectorizes over
numpy arrays with trailing axis D.

Descriptors are immutable after construction and safely shareable across
threads; elements are plain values and every operation is pure.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from . import fq
from .chain import ChainRing
from .errors import (MalformedModulus, NotAUnit, NotLocal, NotPrime,
                     RingMismatch, UnsupportedRing)

LOCALITY_CHECK_CAP = 2 ** 16


@dataclass(frozen=True)
class GaloisRingParams:
    """Parameters of GR(p^s, mu): characteristic p^s, residue degree mu,
    monic modulus h of degree mu, irreducible mod p."""

    p: int
    s: int
    mu: int
    h: tuple

    def __post_init__(self):
        if not fq.is_prime(self.p):
            raise NotPrime(f"{self.p} is not prime")
        if self.s < 1 or self.mu < 1:
            raise MalformedModulus("need s >= 1 and mu >= 1")
        h = list(self.h)
        if len(h) != self.mu + 1 or h[-1] % (self.p ** self.s) != 1:
            raise MalformedModulus("h must be monic of degree mu")
        if not fq.irreducible_mod_p([c % self.p for c in h], self.p):
            raise MalformedModulus("h must be irreducible mod p")


@dataclass(frozen=True)
class QuotientSpec:
    """A quotient Z_{char}[x]/(poly) with char = p^s a prime power."""

    char: int
    poly: tuple


def _fp_nullspace(mat, p):
    """Basis of {x : x @ mat = 0 over F_p} for an integer matrix (rows, cols)."""
    mat = np.asarray(mat, dtype=np.int64) % p
    rows, cols = mat.shape
    rref, pivots = fq.rref_mod_p(mat.T, p)  # solves mat.T y = 0 with y = x^T
    free = [c for c in range(rows) if c not in pivots]
    basis = np.zeros((len(free), rows), dtype=np.int64)
    for bi, fc in enumerate(free):
        basis[bi, fc] = 1
        for ri, pc in enumerate(pivots):
            basis[bi, pc] = (-rref[ri, fc]) % p
    return basis


def _fp_solve_all(a, b, p):
    """One solution X of A X = B over F_p (A (r,c), B (r,k)); A must have
    full column-rank coverage of B's span."""
    a = np.asarray(a, dtype=np.int64) % p
    b = np.asarray(b, dtype=np.int64) % p
    r, c = a.shape
    k = b.shape[1]
    aug = np.concatenate([a, b], axis=1)
    rref, pivots = fq.rref_mod_p(aug, p)
    x = np.zeros((c, k), dtype=np.int64)
    for ri, pc in enumerate(pivots):
        if pc >= c:
            raise NotLocal("inconsistent residue system")  # pragma: no cover
        x[pc] = rref[ri, c:]
    return x


class LocalRingDesc:
    """Descriptor of a finite commutative local ring (immutable once built).

    Carries the structure tensor, residue projection, maximal ideal data
    and the chain subring R0 used for linear-system solving.  Elements are
    plain numpy coordinate arrays; the methods broadcast over leading axes.
    """

    def __init__(self, base: GaloisRingParams, gamma, tensor, psi_mat,
                 maximal_ideal_gen_coords, spec_string, power_basis=True):
        self.base = base
        self.p = base.p
        self.s = base.s
        self.mu = base.mu
        self.char = base.p ** base.s
        self.gamma = gamma
        self.D = gamma * base.mu
        self.q = base.p ** base.mu
        self.upsilon = base.s * gamma
        self.size = self.char ** self.D
        self.mult_tensor = np.asarray(tensor, dtype=np.int64) % self.char
        self.psi_mat = np.asarray(psi_mat, dtype=np.int64) % base.p
        self.maximal_ideal_gens = [np.asarray(g, dtype=np.int64) % self.char
                                   for g in maximal_ideal_gen_coords]
        self.spec_string = spec_string
        self.power_basis = power_basis
        self.zero = np.zeros(self.D, dtype=np.int64)
        self.one = np.zeros(self.D, dtype=np.int64)
        self.one[0] = 1
        self.chain = ChainRing(base.p, base.s, base.mu, list(base.h))
        self.residue_field = fq.Fq(base.p, [c % base.p for c in base.h])
        self._psi_powers = self.p ** np.arange(self.mu, dtype=np.int64)
        self._psi_kernel = _fp_nullspace(self.psi_mat, self.p)
        self._psi_lift = _fp_solve_all(self.psi_mat.T, np.eye(self.mu, dtype=np.int64), self.p).T
        self._zvecs = np.zeros((gamma, self.D), dtype=np.int64)
        for ell in range(gamma):
            self._zvecs[ell, ell * self.mu] = 1
        self._validate()

    # ------------------------------------------------------------------
    # construction checks

    def _validate(self):
        t = self.mult_tensor
        d = self.D
        if not np.array_equal(t[0] % self.char, np.eye(d, dtype=np.int64) % self.char):
            raise MalformedModulus("first basis element must be the identity")
        if not np.array_equal(t, np.swapaxes(t, 0, 1)):
            raise MalformedModulus("structure constants are not commutative")
        lhs = np.einsum("abe,eck->abck", t, t) % self.char
        rhs = np.einsum("bce,aek->abck", t, t) % self.char
        if not np.array_equal(lhs, rhs):
            raise MalformedModulus("structure constants are not associative")
        if (self._psi_lift @ self.psi_mat % self.p != np.eye(self.mu, dtype=np.int64)).any():
            raise NotLocal("residue projection is not surjective")  # pragma: no cover
        if self.size <= LOCALITY_CHECK_CAP:
            self._check_locality_exhaustive()
        else:
            warnings.warn(
                f"ring of size {self.size} exceeds the exhaustive locality "
                f"check cap ({LOCALITY_CHECK_CAP}); locality is trusted",
                stacklevel=4)

    def _check_locality_exhaustive(self):
        elems = self.enumerate_elements()
        units = self.is_unit(elems)
        # the ideal generated by the maximal-ideal generators, as a
        # Z_{p^s}-lattice spanned by {basis_a * gen_i}
        rows = []
        basis = np.eye(self.D, dtype=np.int64)
        for g in self.maximal_ideal_gens:
            rows.append(self.mul(basis, g[None, :]))
        lattice = np.concatenate(rows, axis=0) if rows else np.zeros((0, self.D))
        zps = ChainRing(self.p, self.s, 1)
        hf = zps.howell(lattice.reshape(-1, self.D, 1))
        res = elems.copy()
        alive = np.ones(len(elems), dtype=bool)
        for i, c in enumerate(hf.cols):
            pv = hf.vals[i]
            pw = self.p ** pv
            bad = alive & (res[:, c] % pw != 0)
            alive &= ~bad
            qcoef = res[:, c] // pw
            res = (res - qcoef[:, None] * hf.rows[i, :, 0][None, :]) % self.char
        in_ideal = alive & ~res.any(axis=1)
        if not np.array_equal(in_ideal, ~units):
            raise NotLocal("non-units do not form the stated maximal ideal")

    # ------------------------------------------------------------------
    # arithmetic on coordinate arrays (..., D)

    def add(self, a, b):
        return (np.asarray(a) + np.asarray(b)) % self.char

    def sub(self, a, b):
        return (np.asarray(a) - np.asarray(b)) % self.char

    def neg(self, a):
        return (-np.asarray(a)) % self.char

    _MUL_PATH = ["einsum_path", (0, 1), (0, 1)]

    def mul(self, a, b):
        if self.D == 1:
            return (np.asarray(a) * np.asarray(b)) % self.char
        return np.einsum("...i,...j,ijk->...k", a, b,
                         self.mult_tensor, optimize=self._MUL_PATH) % self.char

    def pow(self, a, e):
        result = np.broadcast_to(self.one, np.asarray(a).shape).copy()
        base = np.asarray(a) % self.char
        e = int(e)
        while e:
            if e & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            e >>= 1
        return result

    def matmul(self, a, b):
        """Matrix product over R: (r, k, D) x (k, c, D) -> (r, c, D)."""
        if self.D == 1:
            return (a[..., 0] @ b[..., 0])[..., None] % self.char
        return np.einsum("rki,kcj,ijl->rcl", a, b,
                         self.mult_tensor, optimize=self._MUL_PATH) % self.char

    def residue(self, a):
        """Residue-field image as digit vectors (..., mu) over F_p."""
        return (np.asarray(a) % self.p) @ self.psi_mat % self.p

    def residue_codes(self, a):
        """Residue-field image as integer codes (base-p digits)."""
        return self.residue(a) @ self._psi_powers

    def residue_project(self, a):
        """Projection onto the residue field F_q, as an integer code; a
        surjective ring homomorphism whose kernel is the maximal ideal."""
        return self.residue_codes(self.coerce(a))

    def is_unit(self, a):
        """True where the residue image is nonzero."""
        if self.D == 1:
            return (np.asarray(a)[..., 0] % self.p) != 0
        return self.residue(np.asarray(a)).any(axis=-1)

    def inverse(self, a):
        """Multiplicative inverse of a unit (Newton lift of the residue inverse)."""
        a = np.asarray(a) % self.char
        if not self.is_unit(a):
            raise NotAUnit(f"{a} is not a unit")
        if self.D == 1:
            return np.array([pow(int(a[0]), -1, self.char)], dtype=np.int64)
        b = a.copy() if self.q == 2 else self.pow(a, self.q - 2)
        two = (2 * self.one) % self.char
        for _ in range(self.upsilon.bit_length() + 2):
            ab = self.mul(a, b)
            if np.array_equal(ab, self.one):
                return b
            b = self.mul(b, (two - ab) % self.char)
        raise NotAUnit("inversion failed to converge")  # pragma: no cover

    def arith(self, a, b, op: str):
        """Dispatch form of the basic operations; ``b`` is ignored for neg."""
        a = self.coerce(a)
        if op == "neg":
            return self.neg(a)
        b = self.coerce(b)
        if op == "add":
            return self.add(a, b)
        if op == "sub":
            return self.sub(a, b)
        if op == "mul":
            return self.mul(a, b)
        raise ValueError(f"unknown op {op!r}")

    # ------------------------------------------------------------------
    # element construction and sampling

    def coerce(self, v):
        """Coordinate array from an int, coefficient list, or RingElem."""
        if isinstance(v, RingElem):
            if v.ring is not self:
                raise RingMismatch("element belongs to a different ring")
            return v.flat
        if isinstance(v, (int, np.integer)):
            return (int(v) * self.one) % self.char
        arr = np.asarray(v, dtype=np.int64) % self.char
        if arr.shape[-1] != self.D:
            raise RingMismatch(f"expected {self.D} coordinates, got {arr.shape[-1]}")
        return arr

    def elem(self, v) -> "RingElem":
        return RingElem(self, self.coerce(v))

    def from_poly(self, coeffs) -> "RingElem":
        """Element from polynomial coefficients in the presentation variable
        (only meaningful for presentations whose flat basis is the power
        basis, which covers every ring the string grammar can produce)."""
        if not self.power_basis:
            raise UnsupportedRing("ring coordinates are not power-basis coordinates")
        coeffs = list(coeffs)
        if len(coeffs) > self.D:
            raise MalformedModulus("too many coefficients")
        flat = np.zeros(self.D, dtype=np.int64)
        flat[:len(coeffs)] = [int(c) % self.char for c in coeffs]
        return RingElem(self, flat)

    def rand(self, rng, shape=()):
        return rng.integers(0, self.char, size=tuple(shape) + (self.D,), dtype=np.int64)

    def rand_unit(self, rng, shape=()):
        out = self.rand(rng, shape)
        flat = out.reshape(-1, self.D)
        while True:
            bad = ~self.is_unit(flat)
            n_bad = int(bad.sum())
            if n_bad == 0:
                break
            flat[bad] = rng.integers(0, self.char, size=(n_bad, self.D), dtype=np.int64)
        return flat.reshape(out.shape)

    def rand_ideal(self, rng, shape=()):
        """Uniform over the maximal ideal (the kernel of the residue map)."""
        shape = tuple(shape)
        kdim = self._psi_kernel.shape[0]
        coeffs = rng.integers(0, self.p, size=shape + (kdim,), dtype=np.int64)
        head = coeffs @ self._psi_kernel % self.p
        tail = rng.integers(0, self.char // self.p, size=shape + (self.D,), dtype=np.int64)
        return (head + self.p * tail) % self.char

    def rand_with_residue(self, rng, digits):
        """Uniform over the elements whose residue has the given digit
        vector(s); digits has shape (..., mu)."""
        digits = np.asarray(digits, dtype=np.int64) % self.p
        head = digits @ self._psi_lift % self.p
        return (head + self.rand_ideal(rng, digits.shape[:-1])) % self.char

    def rand_unit_or_zero(self, rng, shape=()):
        """Uniform over R* union {0}."""
        shape = tuple(shape)
        n_units = self.size - self.size // self.q
        pick = rng.integers(0, n_units + 1, size=shape)
        out = self.rand_unit(rng, shape)
        return np.where(np.asarray(pick == 0)[..., None], 0, out)

    def enumerate_elements(self, cap=LOCALITY_CHECK_CAP):
        if self.size > cap:
            raise NotLocal(f"ring too large to enumerate ({self.size} elements)")
        grids = np.meshgrid(*([np.arange(self.char, dtype=np.int64)] * self.D),
                            indexing="ij")
        return np.stack(grids, axis=-1).reshape(-1, self.D)

    # ------------------------------------------------------------------
    # expansion over the Galois subring R0 (for linear solving)

    def expand_matrix(self, a):
        """R0-expansion of an R-matrix for right systems A x = b.

        (r, c, D) -> (gamma*r, gamma*c, mu) with block
        M[(i,k),(j,l)] = coord_k(A_ij * z_l).
        """
        a = np.asarray(a, dtype=np.int64)
        r, c = a.shape[0], a.shape[1]
        g, mu = self.gamma, self.mu
        z = self.mul(a[:, :, None, :], self._zvecs[None, None, :, :])
        z = z.reshape(r, c, g, g, mu)  # axes: i, j, l, k, u
        return z.transpose(0, 3, 1, 2, 4).reshape(r * g, c * g, mu)

    def expand_vector(self, b):
        b = np.asarray(b, dtype=np.int64)
        r = b.shape[0]
        return b.reshape(r * self.gamma, self.mu)

    def contract_vectors(self, x):
        x = np.asarray(x, dtype=np.int64)
        lead = x.shape[:-2]
        n = x.shape[-2] // self.gamma
        return x.reshape(lead + (n, self.D))

    def solve_right(self, a, b):
        """Complete solution of A x = b over R: (particular | None, kernel)."""
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        part, ker = self.chain.solve(self.expand_matrix(a), self.expand_vector(b))
        particular = None if part is None else self.contract_vectors(part[None])[0]
        return particular, self.contract_vectors(ker)

    def left_kernel(self, m):
        """Generators of {x in R^k : x M = 0} for M of shape (k, n, D)."""
        m = np.asarray(m, dtype=np.int64)
        mt = np.swapaxes(m, 0, 1)
        big = np.swapaxes(self.expand_matrix(mt), 0, 1)
        ker = self.chain.left_kernel(big)
        if ker.shape[0] == 0:
            return np.zeros((0, m.shape[0], self.D), dtype=np.int64)
        return self.contract_vectors(ker)

    def solve_form(self, a):
        """Cacheable Howell form for repeated solves of A x = b (same A)."""
        return self.chain._augmented_transpose_form(self.expand_matrix(np.asarray(a)))

    def __repr__(self):
        return f"LocalRingDesc({self.spec_string})"

    @property
    def struct_consts(self):
        """Structure constants c[i][j][k] as R0-elements: (gamma, gamma, gamma, mu)
        with z_i * z_j = sum_k c[i][j][k] z_k."""
        t = self.mult_tensor.reshape(self.gamma, self.mu, self.gamma, self.mu,
                                     self.gamma, self.mu)
        return t[:, 0, :, 0]


class RingElem:
    """A value of a local ring: a thin wrapper over flat coordinates."""

    __slots__ = ("ring", "flat")

    def __init__(self, ring: LocalRingDesc, flat):
        self.ring = ring
        self.flat = np.asarray(flat, dtype=np.int64) % ring.char

    @property
    def coords(self):
        """Coordinates as a (gamma, mu) grid of Galois-subring elements."""
        return self.flat.reshape(self.ring.gamma, self.ring.mu)

    def _other(self, v):
        return self.ring.coerce(v)

    def __add__(self, other):
        return RingElem(self.ring, self.ring.add(self.flat, self._other(other)))

    __radd__ = __add__

    def __sub__(self, other):
        return RingElem(self.ring, self.ring.sub(self.flat, self._other(other)))

    def __rsub__(self, other):
        return RingElem(self.ring, self.ring.sub(self._other(other), self.flat))

    def __mul__(self, other):
        return RingElem(self.ring, self.ring.mul(self.flat, self._other(other)))

    __rmul__ = __mul__

    def __neg__(self):
        return RingElem(self.ring, self.ring.neg(self.flat))

    def __pow__(self, e):
        return RingElem(self.ring, self.ring.pow(self.flat, e))

    def __eq__(self, other):
        if isinstance(other, (int, np.integer, list, tuple, np.ndarray, RingElem)):
            return np.array_equal(self.flat, self._other(other))
        return NotImplemented

    def __hash__(self):
        return hash(self.flat.tobytes())

    def is_unit(self) -> bool:
        return bool(self.ring.is_unit(self.flat))

    def inverse(self) -> "RingElem":
        return RingElem(self.ring, self.ring.inverse(self.flat))

    def residue(self) -> int:
        """Image in the residue field, as an integer code."""
        return int(self.ring.residue_codes(self.flat))

    def __repr__(self):
        ring = self.ring
        if ring.D == 1:
            return str(int(self.flat[0]))
        terms = []
        for i, c in enumerate(self.flat):
            if c == 0:
                continue
            if i == 0:
                terms.append(str(int(c)))
            else:
                var = "x" if i == 1 else f"x^{i}"
                terms.append(var if c == 1 else f"{int(c)}*{var}")
        return " + ".join(terms) if terms else "0"


# ---------------------------------------------------------------------------
# constructors


def _zps_poly_mod(a, m, char):
    """Remainder of integer-coefficient a modulo monic m, coefficients mod char."""
    a = [c % char for c in a]
    dm = len(m) - 1
    while len(a) > dm:
        lead = a[-1]
        if lead:
            for i in range(dm + 1):
                a[len(a) - 1 - dm + i] = (a[len(a) - 1 - dm + i] - lead * m[i]) % char
        a.pop()
    return a + [0] * (dm - len(a))


def _power_basis_tensor(g, char):
    """Structure tensor of Z_char[x]/(g) in the power basis."""
    d = len(g) - 1
    pows = np.zeros((2 * d - 1 if d > 0 else 1, d), dtype=np.int64)
    pows[0, 0] = 1
    for k in range(1, 2 * d - 1):
        shifted = np.zeros(d, dtype=np.int64)
        shifted[1:] = pows[k - 1, :-1]
        lead = pows[k - 1, -1]
        shifted = (shifted - lead * np.array(g[:-1], dtype=np.int64)) % char
        pows[k] = shifted
    tensor = np.zeros((d, d, d), dtype=np.int64)
    for i in range(d):
        for j in range(d):
            tensor[i, j] = pows[i + j]
    return tensor


def galois_ring(p: int, s: int, mu: int = 1, h=None) -> LocalRingDesc:
    """The Galois ring GR(p^s, mu); gamma = 1, maximal ideal (p)."""
    char = p ** s
    default_h = fq.smallest_irreducible(p, mu)
    if h is None:
        h = default_h
    params = GaloisRingParams(p, s, mu, tuple(int(c) for c in h))
    tensor = _power_basis_tensor([c % char for c in h], char) if mu > 1 \
        else np.ones((1, 1, 1), dtype=np.int64)
    psi = np.eye(mu, dtype=np.int64)
    mgen = np.zeros(mu, dtype=np.int64)
    mgen[0] = p
    if mu == 1:
        spec = f"Z{char}"
    elif [c % char for c in h] == [c % char for c in default_h]:
        spec = f"GR({char},{mu})"
    else:
        # grammar-compatible form that pins the non-default modulus
        spec = f"Z{char}[x]/({_poly_string([int(c) % char for c in h])})"
    return LocalRingDesc(params, 1, tensor, psi, [mgen], spec)


def Zmod(q: int) -> LocalRingDesc:
    """Z_q for a prime power q."""
    pp = fq.prime_power(q)
    if pp is None:
        raise NotLocal(f"Z_{q} is not local (composite modulus); "
                       "use the product-ring constructors")
    p, s = pp
    return galois_ring(p, s, 1)


def _poly_string(coeffs):
    terms = []
    for i in range(len(coeffs) - 1, -1, -1):
        c = coeffs[i]
        if c == 0:
            continue
        if i == 0:
            terms.append(str(c))
        else:
            var = "x" if i == 1 else f"x^{i}"
            terms.append(var if c == 1 else f"{c}*{var}")
    return "+".join(terms) if terms else "0"


def quotient_ring(p: int, s: int, g) -> LocalRingDesc:
    """Z_{p^s}[x]/(g) for monic g whose reduction mod p is w^e with w
    irreducible; raises NotLocal otherwise."""
    if not fq.is_prime(p):
        raise NotPrime(f"{p} is not prime")
    char = p ** s
    g = [int(c) % char for c in g]
    g = g[:max(i for i, c in enumerate(g) if c) + 1] if any(g) else [0]
    d = len(g) - 1
    if d < 1 or g[-1] != 1:
        raise MalformedModulus("quotient modulus must be monic of degree >= 1")
    shape = fq.power_of_irreducible([c % p for c in g], p)
    if shape is None:
        raise NotLocal(f"{_poly_string(g)} mod {p} is not a power of a single "
                       "irreducible; the quotient is not local")
    w, e = shape
    mu = len(w) - 1
    spec = f"Z{char}[x]/({_poly_string(g)})"
    if e == 1:
        # the quotient is itself a Galois ring with modulus g
        params = GaloisRingParams(p, s, mu, tuple(g))
        tensor = _power_basis_tensor(g, char) if mu > 1 else np.ones((1, 1, 1), dtype=np.int64)
        psi = np.eye(mu, dtype=np.int64)
        mgen = np.zeros(mu, dtype=np.int64)
        mgen[0] = p
        return LocalRingDesc(params, 1, tensor, psi, [mgen], spec)
    if mu == 1:
        # R0 = Z_{p^s}; power basis 1, xi, ..., xi^(d-1)
        params = GaloisRingParams(p, s, 1, (0, 1))
        tensor = _power_basis_tensor(g, char)
        a = (-w[0]) % p  # w = x - a
        psi = np.array([[pow(int(a), i, p)] for i in range(d)], dtype=np.int64)
        p_gen = np.zeros(d, dtype=np.int64)
        p_gen[0] = p
        w_gen = np.zeros(d, dtype=np.int64)
        w_gen[0] = (-a) % char
        w_gen[1] = 1
        return LocalRingDesc(params, e, tensor, psi,
                             [p_gen, w_gen], spec)
    return _quotient_ring_general(p, s, g, w, e, spec)


def _quotient_ring_general(p, s, g, w, e, spec):
    """Quotient with residue degree mu > 1 and nilpotency e > 1.

    Finds the maximal Galois subring by Hensel-lifting a root y of the
    lifted w inside the power-basis presentation, then rebases to the
    basis {w(xi)^i * y^u}.
    """
    char = p ** s
    d = len(g) - 1
    mu = len(w) - 1
    pw_tensor = _power_basis_tensor(g, char)

    def pmul(a, b):
        return np.einsum("i,j,ijk->k", a, b, pw_tensor) % char

    def ppow(a, n):
        out = np.zeros(d, dtype=np.int64)
        out[0] = 1
        base = a.copy()
        while n:
            if n & 1:
                out = pmul(out, base)
            base = pmul(base, base)
            n >>= 1
        return out

    def peval(poly, x):
        # evaluate an integer-coefficient polynomial at a power-basis element
        acc = np.zeros(d, dtype=np.int64)
        for c in reversed(poly):
            acc = pmul(acc, x)
            acc[0] = (acc[0] + c) % char
        return acc

    # residue map in the power basis: xi |-> xbar in F_p[x]/(w)
    fqw = fq.Fq(p, w)
    xbar_pows = [fqw.encode([1] + [0] * (mu - 1))]
    xbar = fqw.encode(([0, 1] + [0] * mu)[:mu])
    for _ in range(1, d):
        xbar_pows.append(fqw.mul(xbar_pows[-1], xbar))

    def presidue(a):
        out = 0
        for i, c in enumerate(a):
            out = fqw.add(out, fqw.mul(int(c) % p, xbar_pows[i]))
        return out

    def pinverse(a):
        # Newton inversion of a power-basis unit
        b = ppow(a, fqw.q - 2) if fqw.q > 2 else a.copy()
        two = np.zeros(d, dtype=np.int64)
        two[0] = 2
        for _ in range(s.bit_length() + e.bit_length() + 2):
            ab = pmul(a, b)
            one_vec = np.zeros(d, dtype=np.int64)
            one_vec[0] = 1
            if np.array_equal(ab, one_vec):
                return b
            b = pmul(b, (two - ab) % char)
        raise NotAUnit("power-basis inversion failed")  # pragma: no cover

    h = [int(c) % char for c in w]  # lift of w with coefficients in {0..p-1}
    hprime = [(i * h[i]) % char for i in range(1, len(h))]
    y = np.zeros(d, dtype=np.int64)
    y[1] = 1  # start at xi
    for _ in range(8 * s * e):
        fy = peval(h, y)
        if not fy.any():
            break
        y = (y - pmul(fy, pinverse(peval(hprime, y)))) % char
    else:  # pragma: no cover
        raise NotLocal("Hensel lifting of the Galois subring failed")

    w_of_xi = peval([c % char for c in w], np.array([0, 1] + [0] * (d - 2), dtype=np.int64))
    # basis elements z_i * y^u in power coordinates
    cols = []
    z = np.zeros(d, dtype=np.int64)
    z[0] = 1
    for i in range(e):
        yu = np.zeros(d, dtype=np.int64)
        yu[0] = 1
        for u in range(mu):
            cols.append(pmul(z, yu))
            yu = pmul(yu, y)
        z = pmul(z, w_of_xi)
    c_mat = np.array(cols, dtype=np.int64).T  # power coords of new basis, columns
    c_inv = _invert_zps_matrix(c_mat, p, s)

    dd = d
    new_tensor = np.zeros((dd, dd, dd), dtype=np.int64)
    basis_power = [np.array(col, dtype=np.int64) for col in np.array(cols)]
    for a_i in range(dd):
        for b_i in range(a_i, dd):
            prod = pmul(basis_power[a_i], basis_power[b_i])
            coords = c_inv @ prod % char
            new_tensor[a_i, b_i] = coords
            new_tensor[b_i, a_i] = coords
    psi = np.zeros((dd, mu), dtype=np.int64)
    for u in range(mu):
        psi[u, u] = 1  # z_1 y^u |-> xbar^u; z_{i>1} blocks map to 0
    p_gen = (c_inv @ np.array([p] + [0] * (d - 1), dtype=np.int64)) % char
    w_gen = (c_inv @ w_of_xi) % char
    params = GaloisRingParams(p, s, mu, tuple(h))
    return LocalRingDesc(params, e, new_tensor, psi, [p_gen, w_gen], spec,
                         power_basis=False)


def _invert_zps_matrix(m, p, s):
    """Inverse of a matrix over Z_{p^s} whose determinant is a unit."""
    char = p ** s
    n = m.shape[0]
    a = m.copy() % char
    inv = np.eye(n, dtype=np.int64)
    for col in range(n):
        piv = next((r for r in range(col, n) if a[r, col] % p != 0), None)
        if piv is None:
            raise NotLocal("basis change matrix is singular")  # pragma: no cover
        if piv != col:
            a[[col, piv]] = a[[piv, col]]
            inv[[col, piv]] = inv[[piv, col]]
        u = int(a[col, col])
        ui = pow(u, -1, char)
        a[col] = a[col] * ui % char
        inv[col] = inv[col] * ui % char
        for r in range(n):
            if r != col and a[r, col]:
                f = a[r, col]
                a[r] = (a[r] - f * a[col]) % char
                inv[r] = (inv[r] - f * inv[col]) % char
    return inv


def construct_local_ring(spec) -> LocalRingDesc:
    """Build a validated local ring from construction data.

    Accepts a GaloisRingParams, a QuotientSpec, or a plain integer q
    (meaning Z_q with q a prime power).
    """
    if isinstance(spec, LocalRingDesc):
        return spec
    if isinstance(spec, GaloisRingParams):
        return galois_ring(spec.p, spec.s, spec.mu, list(spec.h))
    if isinstance(spec, QuotientSpec):
        pp = fq.prime_power(spec.char)
        if pp is None:
            raise NotLocal(f"coefficient modulus {spec.char} is not a prime power")
        p, s = pp
        return quotient_ring(p, s, list(spec.poly))
    if isinstance(spec, (int, np.integer)):
        return Zmod(int(spec))
    raise UnsupportedRing(f"cannot build a local ring from {spec!r}")
