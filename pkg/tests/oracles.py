"""Slow, independent reference implementations used to cross-check the package.

Nothing here imports wildgoppa: arithmetic is plain Python on coefficient
lists, linear algebra is schoolbook elimination over those scalars.
"""
from __future__ import annotations

import itertools


class PrimePowerOracle:
    """GF(p^e) as GF(p)[t]/(m) with elements encoded as sum d_j p^j."""

    def __init__(self, p: int, modulus):
        self.p = p
        self.m = list(modulus)
        self.e = len(self.m) - 1
        self.order = p**self.e

    def digits(self, a: int) -> list[int]:
        return [(a // self.p**j) % self.p for j in range(self.e)]

    def encode(self, d) -> int:
        return sum(int(c) % self.p * self.p**j for j, c in enumerate(d))

    def add(self, a, b):
        return self.encode([x + y for x, y in zip(self.digits(a), self.digits(b))])

    def neg(self, a):
        return self.encode([-x for x in self.digits(a)])

    def mul(self, a, b):
        p, e = self.p, self.e
        da, db = self.digits(a), self.digits(b)
        prod = [0] * (2 * e - 1)
        for i, x in enumerate(da):
            for j, y in enumerate(db):
                prod[i + j] += x * y
        for k in range(len(prod) - 1, e - 1, -1):
            c = prod[k] % p
            prod[k] = 0
            for i in range(e):
                prod[k - e + i] -= c * self.m[i]
        return self.encode(prod[:e])

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError
        return next(b for b in range(1, self.order) if self.mul(a, b) == 1)


class QuadraticOracle:
    """GF(q^2) = GF(q)[w]/(w^2 + b1 w + b0), elements c0 + c1 q."""

    def __init__(self, base, modulus):
        self.F = base
        self.q = base.order
        self.b0, self.b1 = modulus[0], modulus[1]
        self.order = self.q**2

    def parts(self, a):
        return a % self.q, a // self.q

    def add(self, a, b):
        (a0, a1), (c0, c1) = self.parts(a), self.parts(b)
        return self.F.add(a0, c0) + self.q * self.F.add(a1, c1)

    def neg(self, a):
        a0, a1 = self.parts(a)
        return self.F.neg(a0) + self.q * self.F.neg(a1)

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def mul(self, a, b):
        F = self.F
        (a0, a1), (c0, c1) = self.parts(a), self.parts(b)
        hh = F.mul(a1, c1)
        # w^2 = -b1 w - b0
        lo = F.add(F.mul(a0, c0), F.neg(F.mul(hh, self.b0)))
        hi = F.add(F.add(F.mul(a0, c1), F.mul(a1, c0)), F.neg(F.mul(hh, self.b1)))
        return lo + self.q * hi

    def pow(self, a, k):
        out = 1
        for _ in range(k):
            out = self.mul(out, a)
        return out

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError
        return self.pow(a, self.order - 2)


def prime_field(p):
    return PrimePowerOracle(p, [0, 1])


def oracle_tower(p, e, base_mod, ext_mod):
    base = PrimePowerOracle(p, base_mod)
    return base, QuadraticOracle(base, ext_mod)


def irreducible_over_prime(m, p) -> bool:
    """Trial division by every monic polynomial of degree <= deg/2."""
    e = len(m) - 1
    for d in range(1, e // 2 + 1):
        for low in itertools.product(range(p), repeat=d):
            f = list(low) + [1]
            r = list(m)
            for k in range(len(r) - 1, d - 1, -1):
                c = r[k] % p
                for i in range(d + 1):
                    r[k - d + i] -= c * f[i]
            if all(x % p == 0 for x in r[:d]):
                return False
    return True


def smallest_base_modulus(p, e):
    for enc in range(p**e):
        m = [(enc // p**j) % p for j in range(e)] + [1]
        if irreducible_over_prime(m, p):
            return tuple(m)


def smallest_ext_modulus(base):
    q = base.order
    for enc in range(q * q):
        c0, c1 = enc % q, enc // q
        if all(base.add(base.add(base.mul(t, t), base.mul(c1, t)), c0) != 0 for t in range(q)):
            return (c0, c1, 1)


# --- linear algebra over an oracle field -------------------------------------

def rref(rows, F):
    """Schoolbook RREF over an oracle field; returns (rows, pivots)."""
    M = [list(r) for r in rows]
    piv = []
    r = 0
    ncols = len(M[0]) if M else 0
    for c in range(ncols):
        pr = next((i for i in range(r, len(M)) if M[i][c] != 0), None)
        if pr is None:
            continue
        M[r], M[pr] = M[pr], M[r]
        inv = F.inv(M[r][c])
        M[r] = [F.mul(inv, v) for v in M[r]]
        for i in range(len(M)):
            if i != r and M[i][c] != 0:
                f = M[i][c]
                M[i] = [F.add(a, F.neg(F.mul(f, b))) for a, b in zip(M[i], M[r])]
        piv.append(c)
        r += 1
    return M[:r], piv


def rank(rows, F) -> int:
    return len(rref(rows, F)[0]) if rows else 0


def span(rows, F):
    """All vectors of the span (small cases only)."""
    basis = rref(rows, F)[0] if rows else []
    if not basis:
        return [tuple([0] * (len(rows[0]) if rows else 0))]
    n = len(basis[0])
    out = []
    for coeffs in itertools.product(range(F.order), repeat=len(basis)):
        v = [0] * n
        for c, b in zip(coeffs, basis):
            if c:
                v = [F.add(x, F.mul(c, y)) for x, y in zip(v, b)]
        out.append(tuple(v))
    return out
