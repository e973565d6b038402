"""The Galois extension S of a local ring R.

S = R[theta]/(f) for a monic degree-m polynomial f whose residue image is
irreducible over the residue field F_q.  S is itself a local ring with
maximal ideal mS and residue field F_{q^m}, and is free of rank m as an
R-module, so each element has a vector representation in R^m.

Elements are flat coordinate vectors of length D_S = m * D_R over
Z_{p^s}; index i*D_R + a holds coordinate a (in R's flat basis) of the
coefficient of theta^i.  Multiplication uses a precomputed structure
tensor, exactly as in the base ring.  Descriptors are immutable and all
operations pure, so they are safe to share across threads.
"""

from __future__ import annotations

import numpy as np

from .errors import ExtensionMismatch, MalformedModulus, NotAUnit
from .rings import LocalRingDesc, RingElem


class ExtensionDesc:
    """Degree-m Galois extension of a local ring, with vectorized arithmetic."""

    def __init__(self, base: LocalRingDesc, m: int, f=None):
        if m < 1:
            raise MalformedModulus("extension degree must be >= 1")
        self.base = base
        self.m = m
        self.D = m * base.D
        self.char = base.char
        if f is None:
            f = self._default_modulus()
        self.f = self._coerce_modulus(f)
        self._validate_modulus()
        self.zero = np.zeros(self.D, dtype=np.int64)
        self.one = np.zeros(self.D, dtype=np.int64)
        self.one[0] = 1
        self._theta_pows = self._theta_powers()
        self.mult_tensor = self._build_tensor()
        self.spec_string = f"{base.spec_string} ext m={m} f={self.modulus_string()}"

    # ------------------------------------------------------------------
    # construction

    def _default_modulus(self):
        """Deterministic default: the smallest irreducible over F_q with
        prime-subfield coefficients, lifted coefficientwise."""
        field = self.base.residue_field
        codes = field.smallest_irreducible_poly(self.m)
        rows = []
        for code in codes:
            digits = field.decode(code)
            flat = np.zeros(self.base.D, dtype=np.int64)
            flat[:self.base.mu] = digits
            rows.append(flat)
        return np.array(rows, dtype=np.int64)

    def _coerce_modulus(self, f):
        rows = []
        for c in list(f):
            rows.append(self.base.coerce(c))
        arr = np.array(rows, dtype=np.int64) % self.char
        if arr.shape != (self.m + 1, self.base.D):
            raise MalformedModulus(
                f"modulus needs {self.m + 1} coefficients over the base ring")
        return arr

    def _validate_modulus(self):
        base = self.base
        if not np.array_equal(self.f[-1], base.one):
            raise MalformedModulus("extension modulus must be monic")
        field = base.residue_field
        fbar = [int(c) for c in base.residue_codes(self.f)]
        if not field.irreducible(fbar):
            raise MalformedModulus(
                "residue image of the extension modulus is not irreducible")

    def _theta_powers(self):
        """vec_rep of theta^k over R for k in [0, 2m-2]."""
        base, m = self.base, self.m
        count = max(2 * m - 1, 1)
        pows = np.zeros((count, m, base.D), dtype=np.int64)
        pows[0, 0] = base.one
        for k in range(1, count):
            prev = pows[k - 1]
            shifted = np.zeros((m, base.D), dtype=np.int64)
            shifted[1:] = prev[:-1]
            lead = prev[-1]
            red = base.mul(lead[None, :], self.f[:m])
            pows[k] = (shifted - red) % self.char
        return pows

    def _build_tensor(self):
        base, m = self.base, self.m
        dr, ds = base.D, self.D
        t_r = base.mult_tensor if dr > 1 else np.ones((1, 1, 1), dtype=np.int64)
        tensor = np.zeros((ds, ds, ds), dtype=np.int64)
        # G[e, k, c] = sum_d theta_pows[deg][k, d] * T_R[e, d, c]
        for i in range(m):
            for j in range(m):
                theta = self._theta_pows[i + j]  # (m, dr)
                g = np.einsum("kd,edc->ekc", theta, t_r) % self.char
                block = np.einsum("abe,ekc->abkc", t_r, g) % self.char
                tensor[i * dr:(i + 1) * dr, j * dr:(j + 1) * dr] = \
                    block.reshape(dr, dr, ds)
        return tensor

    def modulus_string(self):
        terms = []
        for i in range(self.m, -1, -1):
            c = self.f[i]
            if not c.any():
                continue
            if self.base.D == 1:
                cs = str(int(c[0]))
            else:
                cs = "(" + repr(RingElem(self.base, c)) + ")"
            var = "" if i == 0 else ("x" if i == 1 else f"x^{i}")
            if not var:
                terms.append(cs)
            elif cs == "1":
                terms.append(var)
            else:
                terms.append(f"{cs}*{var}")
        return "+".join(terms) if terms else "0"

    def __repr__(self):
        return f"ExtensionDesc({self.base.spec_string}, m={self.m})"

    # ------------------------------------------------------------------
    # arithmetic on flat coordinate arrays (..., D_S)

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

    def matmul(self, a, b):
        """Matrix product over S: (r, k, D) x (k, c, D) -> (r, c, D)."""
        if self.D == 1:
            return (a[..., 0] @ b[..., 0])[..., None] % self.char
        return np.einsum("rki,kcj,ijl->rcl", a, b,
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

    def ext_arith(self, a, b, op: str):
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

    def ext_inverse(self, a):
        """Inverse of a unit of S (alias of :meth:`inverse`)."""
        return self.inverse(self.coerce(a))

    def vec_rep(self, a):
        """R-linear bijection S -> R^m: (..., D_S) -> (..., m, D_R)."""
        a = np.asarray(a)
        return a.reshape(a.shape[:-1] + (self.m, self.base.D))

    def unrep(self, v):
        v = np.asarray(v)
        return v.reshape(v.shape[:-2] + (self.D,))

    def scalar_mul(self, r, a):
        """Multiply S-elements by base-ring scalars: r (..., D_R), a (..., D_S)."""
        vec = self.vec_rep(np.asarray(a))
        out = self.base.mul(np.asarray(r)[..., None, :], vec)
        return self.unrep(out)

    def embed_ring(self, r):
        """Embed base-ring coordinates into S (theta^0 block)."""
        r = np.asarray(r)
        out = np.zeros(r.shape[:-1] + (self.D,), dtype=np.int64)
        out[..., :self.base.D] = r % self.char
        return out

    def is_unit(self, a):
        """Units of S are the elements with nonzero residue in F_{q^m},
        i.e. with some coordinate of the vector representation a unit of R."""
        vec = self.vec_rep(np.asarray(a))
        return self.base.residue(vec).any(axis=(-1, -2))

    def inverse(self, a):
        a = np.asarray(a) % self.char
        if not self.is_unit(a):
            raise NotAUnit("element is not a unit of the extension")
        qm = self.base.q ** self.m
        b = a.copy() if qm == 2 else self.pow(a, qm - 2)
        two = (2 * self.one) % self.char
        for _ in range(self.base.upsilon.bit_length() + 2):
            ab = self.mul(a, b)
            if np.array_equal(ab, self.one):
                return b
            b = self.mul(b, (two - ab) % self.char)
        raise NotAUnit("extension inversion failed to converge")  # pragma: no cover

    # ------------------------------------------------------------------
    # element plumbing

    def coerce(self, v):
        if isinstance(v, ExtElem):
            if v.ext is not self:
                raise ExtensionMismatch("element belongs to a different extension")
            return v.flat
        if isinstance(v, RingElem):
            return self.embed_ring(self.base.coerce(v))
        if isinstance(v, (int, np.integer)):
            return (int(v) * self.one) % self.char
        arr = np.asarray(v, dtype=np.int64) % self.char
        if arr.shape[-1] == self.D:
            return arr
        raise ExtensionMismatch(f"expected {self.D} coordinates, got {arr.shape}")

    def elem(self, v) -> "ExtElem":
        return ExtElem(self, self.coerce(v))

    def from_poly(self, coeffs) -> "ExtElem":
        """Element from theta-polynomial coefficients (base-ring coercibles)."""
        coeffs = list(coeffs)
        if len(coeffs) > self.m:
            raise MalformedModulus("too many theta coefficients")
        vec = np.zeros((self.m, self.base.D), dtype=np.int64)
        for i, c in enumerate(coeffs):
            vec[i] = self.base.coerce(c)
        return ExtElem(self, self.unrep(vec))

    def theta(self) -> "ExtElem":
        return self.from_poly([0, 1]) if self.m > 1 else self.elem(0)

    def rand(self, rng, shape=()):
        return rng.integers(0, self.char, size=tuple(shape) + (self.D,), dtype=np.int64)

    def rand_unit(self, rng, shape=()):
        out = self.rand(rng, shape)
        flat = out.reshape(-1, self.D)
        while True:
            bad = ~np.atleast_1d(self.is_unit(flat))
            n_bad = int(bad.sum())
            if n_bad == 0:
                break
            flat[bad] = rng.integers(0, self.char, size=(n_bad, self.D), dtype=np.int64)
        return flat.reshape(out.shape)

    def support(self, u):
        """Support of a vector over S: the R-submodule of R^m spanned by the
        vector representations of its entries."""
        from .modlin import Submodule
        u = np.asarray([self.coerce(x) for x in u]) if not isinstance(u, np.ndarray) \
            else self.coerce(u)
        u = u.reshape(-1, self.D)
        return Submodule(self.base, self.m, self.vec_rep(u))


class ExtElem:
    """A value of the extension: thin wrapper over flat coordinates."""

    __slots__ = ("ext", "flat")

    def __init__(self, ext: ExtensionDesc, flat):
        self.ext = ext
        self.flat = np.asarray(flat, dtype=np.int64) % ext.char

    @property
    def coords(self):
        """Vector representation: (m, D_R) coordinates over the base ring."""
        return self.ext.vec_rep(self.flat)

    def _other(self, v):
        return self.ext.coerce(v)

    def __add__(self, other):
        return ExtElem(self.ext, self.ext.add(self.flat, self._other(other)))

    __radd__ = __add__

    def __sub__(self, other):
        return ExtElem(self.ext, self.ext.sub(self.flat, self._other(other)))

    def __rsub__(self, other):
        return ExtElem(self.ext, self.ext.sub(self._other(other), self.flat))

    def __mul__(self, other):
        return ExtElem(self.ext, self.ext.mul(self.flat, self._other(other)))

    __rmul__ = __mul__

    def __neg__(self):
        return ExtElem(self.ext, self.ext.neg(self.flat))

    def __pow__(self, e):
        return ExtElem(self.ext, self.ext.pow(self.flat, e))

    def __eq__(self, other):
        if isinstance(other, (int, np.integer, list, tuple, np.ndarray, ExtElem, RingElem)):
            return np.array_equal(self.flat, self._other(other))
        return NotImplemented

    def __hash__(self):
        return hash(self.flat.tobytes())

    def is_unit(self) -> bool:
        return bool(self.ext.is_unit(self.flat))

    def inverse(self) -> "ExtElem":
        return ExtElem(self.ext, self.ext.inverse(self.flat))

    def __repr__(self):
        ext = self.ext
        base = ext.base
        vec = self.coords
        terms = []
        for i in range(ext.m):
            c = vec[i]
            if not c.any():
                continue
            if base.D == 1:
                cs = str(int(c[0]))
            else:
                cs = "(" + repr(RingElem(base, c)) + ")"
            var = "" if i == 0 else ("t" if i == 1 else f"t^{i}")
            if not var:
                terms.append(cs)
            elif cs == "1":
                terms.append(var)
            else:
                terms.append(f"{cs}*{var}")
        return " + ".join(terms) if terms else "0"
