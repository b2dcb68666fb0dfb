"""Finite field tower GF(p) < GF(q) < GF(q^2) with table-driven arithmetic.

Elements are plain integers.  An element of GF(q) = GF(p)[t]/(m_base) is
encoded as sum d_j p^j where d_j are its coordinates in the basis 1, t, ...;
an element of GF(q^2) = GF(q)[w]/(m_ext) is encoded as c0 + c1*q.  With this
encoding GF(q) is exactly the range [0, q) inside GF(q^2), so a vector over
GF(q) can be fed unchanged to GF(q^2) routines.

Vectorized operations take numpy integer arrays (or ints) and broadcast.
"""
from __future__ import annotations

from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

LEVELS = ("base", "mid", "ext")


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    i = 2
    while i * i <= p:
        if p % i == 0:
            return False
        i += 1
    return True


def prime_power(q: int) -> tuple[int, int]:
    """Return (p, e) with q = p**e, or raise ValueError."""
    if q < 2:
        raise ValueError(f"{q} is not a prime power")
    p = 2
    while q % p:
        p += 1
    e, m = 0, q
    while m % p == 0:
        m //= p
        e += 1
    if m != 1 or not _is_prime(p):
        raise ValueError(f"{q} is not a prime power")
    return p, e


# --- tiny polynomial helpers over GF(p) used only to build the base field ---

def _polymod_p(a: list[int], m: list[int], p: int) -> list[int]:
    a = list(a)
    dm = len(m) - 1
    inv_lead = pow(m[-1], -1, p)
    while len(a) - 1 >= dm and any(a):
        if a[-1] == 0:
            a.pop()
            continue
        c = a[-1] * inv_lead % p
        shift = len(a) - 1 - dm
        for i, mi in enumerate(m):
            a[shift + i] = (a[shift + i] - c * mi) % p
        a.pop()
    while a and a[-1] == 0:
        a.pop()
    return a


def _irreducible_over_prime(m: list[int], p: int) -> bool:
    d = len(m) - 1
    if d <= 1:
        return d == 1
    for dd in range(1, d // 2 + 1):
        for enc in range(p**dd):
            f = [(enc // p**j) % p for j in range(dd)] + [1]
            if not _polymod_p(m, f, p):
                return False
    return True


def smallest_irreducible_base(p: int, e: int) -> tuple[int, ...]:
    """Smallest monic irreducible of degree e over GF(p), coefficients low-to-high.

    Monic polynomials are ordered by the integer sum c_i p^i of their lower
    coefficients.
    """
    for enc in range(p**e):
        m = [(enc // p**j) % p for j in range(e)] + [1]
        if _irreducible_over_prime(m, p):
            return tuple(m)
    raise AssertionError("no irreducible polynomial found")  # pragma: no cover


class FiniteField:
    """One level of the tower.  Arithmetic is vectorized over numpy arrays."""

    def __init__(self, order: int, char: int, level: str, mul_table=None,
                 add_table=None, inv_table=None, sub: "FiniteField | None" = None,
                 ext_modulus: tuple[int, int] | None = None,
                 modulus: tuple[int, ...] | None = None):
        self.order = order
        self.char = char
        self.level = level
        self.is_prime = mul_table is None
        self.sub = sub
        self.ext_modulus = ext_modulus  # (b0, b1) with w^2 + b1 w + b0 = 0
        self.modulus = modulus  # defining polynomial over GF(p) for a non-prime mid level
        if self.is_prime:
            self._inv = np.array([0] + [pow(a, -1, order) for a in range(1, order)],
                                 dtype=np.int64)
        else:
            self._mul = mul_table
            self._add = add_table
            self._inv = inv_table
            self._neg = np.argmin(add_table, axis=1).astype(np.int64)
            self._sub = add_table[np.arange(order)[:, None], self._neg[None, :]]

    def __repr__(self):
        return f"GF({self.order})[{self.level}]"

    # vectorized arithmetic -------------------------------------------------
    def add(self, a, b):
        if self.is_prime:
            return (np.asarray(a, dtype=np.int64) + b) % self.order
        return self._add[a, b]

    def sub_(self, a, b):
        if self.is_prime:
            return (np.asarray(a, dtype=np.int64) - b) % self.order
        return self._sub[a, b]

    def neg(self, a):
        if self.is_prime:
            return (-np.asarray(a, dtype=np.int64)) % self.order
        return self._neg[a]

    def mul(self, a, b):
        if self.is_prime:
            return (np.asarray(a, dtype=np.int64) * b) % self.order
        return self._mul[a, b]

    def inv(self, a):
        a = np.asarray(a)
        if np.any(a == 0):
            raise ZeroDivisionError("inverse of zero")
        return self._inv[a]

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def pow(self, a, k: int):
        """Elementwise a**k (k may be negative for nonzero a)."""
        a = np.asarray(a, dtype=np.int64)
        if k < 0:
            a, k = self.inv(a), -k
        result = np.ones_like(a)
        base = a.copy()
        while k:
            if k & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            k >>= 1
        return result

    def sum(self, a, axis=0):
        """Field sum along an axis."""
        a = np.asarray(a, dtype=np.int64)
        if self.is_prime:
            return a.sum(axis=axis) % self.order
        a = np.moveaxis(a, axis, 0)
        acc = np.zeros(a.shape[1:], dtype=np.int64)
        for row in a:
            acc = self._add[acc, row]
        return acc

    # scalar helpers (plain Python ints) --------------------------------------
    @cached_property
    def _lists(self):
        if self.is_prime:
            return None
        return (self._add.ravel().tolist(), self._mul.ravel().tolist(),
                self._sub.ravel().tolist(), self._inv.tolist(), self._neg.tolist())

    def sadd(self, a: int, b: int) -> int:
        if self.is_prime:
            return (a + b) % self.order
        return self._lists[0][a * self.order + b]

    def ssub(self, a: int, b: int) -> int:
        if self.is_prime:
            return (a - b) % self.order
        return self._lists[2][a * self.order + b]

    def smul(self, a: int, b: int) -> int:
        if self.is_prime:
            return a * b % self.order
        return self._lists[1][a * self.order + b]

    def sinv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        if self.is_prime:
            return pow(a, -1, self.order)
        return self._lists[3][a]

    def sneg(self, a: int) -> int:
        if self.is_prime:
            return -a % self.order
        return self._lists[4][a]

    def elements(self) -> np.ndarray:
        return np.arange(self.order, dtype=np.int64)

    def random(self, rng: np.random.Generator, size=None, nonzero=False):
        lo = 1 if nonzero else 0
        return rng.integers(lo, self.order, size=size, dtype=np.int64)

    # extension-only helpers --------------------------------------------------
    def split(self, a):
        """Coordinates (lo, hi) of an ext element over the subfield."""
        a = np.asarray(a, dtype=np.int64)
        q = self.sub.order
        return a % q, a // q

    def join(self, lo, hi):
        return np.asarray(lo, dtype=np.int64) + self.sub.order * np.asarray(hi, dtype=np.int64)


def _ext_euclid_inverse(coeffs: list[int], modulus: list[int], F) -> list[int]:
    """Inverse of the polynomial `coeffs` modulo `modulus` over the field F.

    F provides scalar ops sadd/ssub/smul/sinv.  Polynomials are low-to-high.
    """
    def trim(a):
        a = list(a)
        while a and a[-1] == 0:
            a.pop()
        return a

    def divmod_(a, b):
        a = trim(a)
        b = trim(b)
        quo = [0] * max(len(a) - len(b) + 1, 1)
        inv_lead = F.sinv(b[-1])
        while len(a) >= len(b) and a:
            c = F.smul(a[-1], inv_lead)
            shift = len(a) - len(b)
            quo[shift] = c
            for i, bi in enumerate(b):
                a[shift + i] = F.ssub(a[shift + i], F.smul(c, bi))
            a = trim(a)
        return trim(quo), a

    def mul(a, b):
        if not a or not b:
            return []
        out = [0] * (len(a) + len(b) - 1)
        for i, ai in enumerate(a):
            for j, bj in enumerate(b):
                out[i + j] = F.sadd(out[i + j], F.smul(ai, bj))
        return trim(out)

    def sub(a, b):
        n = max(len(a), len(b))
        a = a + [0] * (n - len(a))
        b = b + [0] * (n - len(b))
        return trim([F.ssub(x, y) for x, y in zip(a, b)])

    r0, r1 = trim(modulus), trim(coeffs)
    s0, s1 = [], [1]
    while r1:
        quo, rem = divmod_(r0, r1)
        r0, r1 = r1, rem
        s0, s1 = s1, sub(s0, mul(quo, s1))
    if len(r0) != 1:
        raise ZeroDivisionError("element not invertible")
    c = F.sinv(r0[0])
    return [F.smul(c, x) for x in s0]


def _build_power_field(p: int, e: int, modulus: Sequence[int]) -> FiniteField:
    q = p**e
    if e == 1:
        return FiniteField(q, p, "mid")
    digits = np.array([[(a // p**j) % p for j in range(e)] for a in range(q)], dtype=np.int64)
    # digit-wise addition
    pw = p ** np.arange(e)
    add = (((digits[:, None, :] + digits[None, :, :]) % p) * pw).sum(axis=2)
    conv = np.zeros((q, q, 2 * e - 1), dtype=np.int64)
    for i in range(e):
        for j in range(e):
            conv[:, :, i + j] += digits[:, None, i] * digits[None, :, j]
    conv %= p
    m = np.array(modulus, dtype=np.int64)  # monic, length e + 1
    for deg in range(2 * e - 2, e - 1, -1):
        c = conv[:, :, deg].copy()
        for i in range(e + 1):
            conv[:, :, deg - e + i] = (conv[:, :, deg - e + i] - c * m[i]) % p
    mul = (conv[:, :, :e] * pw).sum(axis=2)
    prime = FiniteField(p, p, "base")
    inv = np.zeros(q, dtype=np.int64)
    for a in range(1, q):
        coeffs = [int(d) for d in digits[a]]
        icoeffs = _ext_euclid_inverse(coeffs, list(modulus), prime)
        inv[a] = sum(int(c) * p**j for j, c in enumerate(icoeffs))
    return FiniteField(q, p, "mid", mul_table=mul, add_table=add, inv_table=inv,
                       modulus=tuple(modulus))


def smallest_irreducible_quadratic(F: FiniteField) -> tuple[int, int, int]:
    """Smallest monic irreducible z^2 + c1 z + c0 over F, ordered by c0 + c1*|F|."""
    t = F.elements()
    tt = F.mul(t, t)
    q = F.order
    for enc in range(q * q):
        c0, c1 = enc % q, enc // q
        vals = F.add(F.add(tt, F.mul(t, c1)), c0)
        if np.all(vals != 0):
            return (c0, c1, 1)
    raise AssertionError("no irreducible quadratic")  # pragma: no cover


def _build_quadratic_ext(F: FiniteField, modulus: Sequence[int]) -> FiniteField:
    q = F.order
    Q = q * q
    b0, b1 = int(modulus[0]), int(modulus[1])
    A = np.arange(Q, dtype=np.int64)
    a0, a1 = A % q, A // q
    lo = F.add(a0[:, None], a0[None, :])
    hi = F.add(a1[:, None], a1[None, :])
    add = lo + q * hi
    # (a0 + a1 w)(c0 + c1 w) with w^2 = -b1 w - b0
    p00 = F.mul(a0[:, None], a0[None, :])
    p11 = F.mul(a1[:, None], a1[None, :])
    cross = F.add(F.mul(a0[:, None], a1[None, :]), F.mul(a1[:, None], a0[None, :]))
    lo = F.sub_(p00, F.mul(p11, b0))
    hi = F.sub_(cross, F.mul(p11, b1))
    mul = lo + q * hi
    inv = np.zeros(Q, dtype=np.int64)
    for a in range(1, Q):
        icoeffs = _ext_euclid_inverse([a % q, a // q], [b0, b1, 1], F)
        icoeffs = icoeffs + [0] * (2 - len(icoeffs))
        inv[a] = icoeffs[0] + q * icoeffs[1]
    return FiniteField(Q, F.char, "ext", mul_table=mul, add_table=add, inv_table=inv,
                       sub=F, ext_modulus=(b0, b1))


class FieldTower:
    """GF(p) < GF(q) < GF(q^2) with q = p^e.

    Moduli default to the smallest monic irreducible polynomials (see
    smallest_irreducible_base / smallest_irreducible_quadratic).
    """

    _cache: dict = {}

    def __init__(self, q: int, modulus_base: Sequence[int] | None = None,
                 modulus_ext: Sequence[int] | None = None):
        p, e = prime_power(q)
        self.p, self.e, self.q = p, e, q
        if modulus_base is None:
            modulus_base = smallest_irreducible_base(p, e)
        modulus_base = tuple(int(c) for c in modulus_base)
        if len(modulus_base) != e + 1 or modulus_base[-1] != 1 \
                or not _irreducible_over_prime(list(modulus_base), p):
            raise ValueError(f"base modulus {modulus_base} is not monic irreducible of degree {e}")
        self.modulus_base = modulus_base
        self.base = FiniteField(p, p, "base")
        self.mid = _build_power_field(p, e, modulus_base)
        if modulus_ext is None:
            modulus_ext = smallest_irreducible_quadratic(self.mid)
        modulus_ext = tuple(int(c) for c in modulus_ext)
        if len(modulus_ext) != 3 or modulus_ext[2] != 1:
            raise ValueError(f"ext modulus {modulus_ext} is not monic of degree 2")
        t = self.mid.elements()
        if np.any(self.mid.add(self.mid.add(self.mid.mul(t, t), self.mid.mul(t, modulus_ext[1])),
                               modulus_ext[0]) == 0):
            raise ValueError(f"ext modulus {modulus_ext} has a root in GF({q})")
        self.modulus_ext = modulus_ext
        self.ext = _build_quadratic_ext(self.mid, modulus_ext)

    @classmethod
    def get(cls, q: int) -> "FieldTower":
        """Shared tower with default moduli (construction is the expensive part)."""
        if q not in cls._cache:
            cls._cache[q] = cls(q)
        return cls._cache[q]

    def __repr__(self):
        return f"FieldTower(q={self.q}, base={self.modulus_base}, ext={self.modulus_ext})"

    def level(self, name: str) -> FiniteField:
        if name not in LEVELS:
            raise ValueError(f"unknown level {name!r}")
        return getattr(self, name)

    # Frobenius, norm and trace on GF(q^2) ---------------------------------
    @cached_property
    def _frob(self) -> np.ndarray:
        return self.ext.pow(self.ext.elements(), self.q)

    @cached_property
    def _norm(self) -> np.ndarray:
        all_ = self.ext.elements()
        nrm = self.ext.mul(all_, self._frob)
        assert np.all(nrm < self.q)
        return nrm

    @cached_property
    def _trace(self) -> np.ndarray:
        all_ = self.ext.elements()
        tr = self.ext.add(all_, self._frob)
        assert np.all(tr < self.q)
        return tr

    def _check_ext(self, a):
        a = np.asarray(a, dtype=np.int64)
        if a.size and (a.min() < 0 or a.max() >= self.ext.order):
            raise ValueError(f"element outside GF({self.ext.order})")
        return a

    def _check_mid(self, a):
        a = np.asarray(a, dtype=np.int64)
        if a.size and (a.min() < 0 or a.max() >= self.q):
            raise ValueError(f"element outside GF({self.q})")
        return a

    def frobenius(self, a):
        """a -> a^q (conjugation over GF(q))."""
        return self._frob[self._check_ext(a)]

    def norm(self, a):
        """N(a) = a^(q+1), an element of GF(q)."""
        return self._norm[self._check_ext(a)]

    def trace(self, a):
        """Tr(a) = a^q + a, an element of GF(q)."""
        return self._trace[self._check_ext(a)]

    def in_subfield(self, a) -> np.ndarray:
        return self._check_ext(a) < self.q

    @cached_property
    def _roots_by_trace_norm(self) -> dict:
        out: dict = {}
        for t in range(self.ext.order):
            out.setdefault((int(self._trace[t]), int(self._norm[t])), []).append(t)
        return out

    def roots_of_minimal(self, trace: int, norm: int) -> list[int]:
        """Elements of GF(q^2) with the given trace and norm (sorted)."""
        return sorted(self._roots_by_trace_norm.get((int(trace), int(norm)), []))

    def minimal_poly_from_norms(self, na: int, na1: int) -> "Poly":
        """Minimal-polynomial data of t from N(t) and N(t-1).

        Since N(t-1) = N(t) - Tr(t) + 1, the returned polynomial
        z^2 - Tr(t) z + N(t) equals (z - t)(z - t^q); it is (z - t)^2 when
        t lies in GF(q) and irreducible over GF(q) otherwise.
        """
        F = self.mid
        na, na1 = int(self._check_mid(na)), int(self._check_mid(na1))
        tr = F.sadd(F.ssub(na, na1), 1)
        return Poly(F, [na, F.sneg(tr), 1])


class Poly:
    """Dense univariate polynomial over a FiniteField, coefficients low-to-high."""

    __slots__ = ("field", "coeffs")

    def __init__(self, field: FiniteField, coeffs: Iterable[int]):
        c = [int(x) for x in coeffs]
        while c and c[-1] == 0:
            c.pop()
        for x in c:
            if not 0 <= x < field.order:
                raise ValueError(f"coefficient {x} outside {field}")
        self.field = field
        self.coeffs = tuple(c)

    @classmethod
    def monomial(cls, field, k: int, c: int = 1) -> "Poly":
        return cls(field, [0] * k + [c])

    @property
    def degree(self) -> int:
        """Degree, with -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def lead(self) -> int:
        return self.coeffs[-1] if self.coeffs else 0

    def __eq__(self, other):
        return isinstance(other, Poly) and self.field is other.field and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.field.order, self.coeffs))

    def __repr__(self):
        return f"Poly({list(self.coeffs)} over {self.field})"

    def _same(self, other: "Poly"):
        if self.field is not other.field:
            raise ValueError("polynomials over different fields")

    def __add__(self, other: "Poly") -> "Poly":
        self._same(other)
        F = self.field
        a, b = self.coeffs, other.coeffs
        n = max(len(a), len(b))
        a = a + (0,) * (n - len(a))
        b = b + (0,) * (n - len(b))
        return Poly(F, [F.sadd(x, y) for x, y in zip(a, b)])

    def __neg__(self) -> "Poly":
        return Poly(self.field, [self.field.sneg(x) for x in self.coeffs])

    def __sub__(self, other: "Poly") -> "Poly":
        return self + (-other)

    def __mul__(self, other) -> "Poly":
        F = self.field
        if isinstance(other, int):
            return Poly(F, [F.smul(x, other) for x in self.coeffs])
        self._same(other)
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return Poly(F, [])
        if len(a) * len(b) > 400:
            A = np.array(a, dtype=np.int64)
            out = np.zeros(len(a) + len(b) - 1, dtype=np.int64)
            for j, bj in enumerate(b):
                if bj:
                    out[j:j + len(a)] = F.add(out[j:j + len(a)], F.mul(A, bj))
            return Poly(F, out.tolist())
        out = [0] * (len(a) + len(b) - 1)
        for i, ai in enumerate(a):
            if ai:
                for j, bj in enumerate(b):
                    out[i + j] = F.sadd(out[i + j], F.smul(ai, bj))
        return Poly(F, out)

    __rmul__ = __mul__

    def divmod(self, other: "Poly") -> tuple["Poly", "Poly"]:
        self._same(other)
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        F = self.field
        a = list(self.coeffs)
        b = other.coeffs
        db = len(b) - 1
        inv_lead = F.sinv(b[-1])
        quo = [0] * max(len(a) - db, 0)
        for shift in range(len(a) - 1 - db, -1, -1):
            c = F.smul(a[shift + db], inv_lead)
            if c:
                quo[shift] = c
                for i, bi in enumerate(b):
                    a[shift + i] = F.ssub(a[shift + i], F.smul(c, bi))
        return Poly(F, quo), Poly(F, a[:db])

    def __mod__(self, other: "Poly") -> "Poly":
        return self.divmod(other)[1]

    def __floordiv__(self, other: "Poly") -> "Poly":
        return self.divmod(other)[0]

    def monic(self) -> "Poly":
        if self.is_zero():
            return self
        return self * self.field.sinv(self.lead())

    def derivative(self) -> "Poly":
        F = self.field
        out = []
        for i, c in enumerate(self.coeffs[1:], start=1):
            k = i % F.char
            acc = 0
            for _ in range(k):
                acc = F.sadd(acc, c)
            out.append(acc)
        return Poly(F, out)

    def __call__(self, x):
        """Evaluate by Horner; x may be an int or an array of field elements."""
        F = self.field
        x = np.asarray(x, dtype=np.int64)
        acc = np.zeros_like(x)
        for c in reversed(self.coeffs):
            acc = F.add(F.mul(acc, x), c)
        return acc

    def powmod(self, k: int, mod: "Poly") -> "Poly":
        result = Poly(self.field, [1]) % mod
        base = self % mod
        while k:
            if k & 1:
                result = (result * base) % mod
            base = (base * base) % mod
            k >>= 1
        return result

    def gcd(self, other: "Poly") -> "Poly":
        a, b = self, other
        while not b.is_zero():
            a, b = b, a % b
        return a.monic()


def poly_from_roots(field: FiniteField, roots: Sequence[int]) -> Poly:
    """prod (z - r) computed with vectorized shifts."""
    coeffs = np.zeros(len(roots) + 1, dtype=np.int64)
    coeffs[0] = 1
    deg = 0
    for r in roots:
        nr = field.sneg(int(r))
        new = np.zeros_like(coeffs)
        new[1:deg + 2] = coeffs[:deg + 1]
        new[:deg + 1] = field.add(new[:deg + 1], field.mul(coeffs[:deg + 1], nr))
        coeffs = new
        deg += 1
    return Poly(field, coeffs.tolist())


def _check_distinct(x) -> np.ndarray:
    x = np.asarray(x, dtype=np.int64)
    if len(np.unique(x)) != len(x):
        raise ValueError("support entries are not pairwise distinct")
    return x


def locator_poly(field: FiniteField, x) -> Poly:
    """pi_x(z) = prod (z - x_i)."""
    return poly_from_roots(field, _check_distinct(x))


def locator_derivative_at(field: FiniteField, x) -> np.ndarray:
    """(pi_x'(x_0), ..., pi_x'(x_{n-1})) = prod_{j != i} (x_i - x_j)."""
    x = _check_distinct(x)
    n = len(x)
    out = np.ones(n, dtype=np.int64)
    for j in range(n):
        diff = field.sub_(x, x[j])
        diff[j] = 1
        out = field.mul(out, diff)
    return out


def is_irreducible(f: Poly) -> bool:
    """Irreducibility over the coefficient field via gcd(f, z^(Q^i) - z)."""
    d = f.degree
    if d < 1:
        return False
    if d == 1:
        return True
    F = f.field
    z = Poly(F, [0, 1])
    zp = z
    for i in range(1, d // 2 + 1):
        zp = zp.powmod(F.order, f)
        if (zp - z).gcd(f).degree > 0:
            return False
    return True
