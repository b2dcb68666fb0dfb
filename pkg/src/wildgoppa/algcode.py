"""GRS, alternant and Goppa codes; wild McEliece keys; an alternant decoder."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import linalg
from .code import LinearCode
from .field import FieldTower, Poly, is_irreducible, locator_derivative_at
from .rng import make_rng


class DecodingFailure(Exception):
    """Raised when no codeword lies within the decoding radius."""


def _support(tower: FieldTower, x, y=None):
    x = np.asarray(x, dtype=np.int64)
    n = x.size
    if n > tower.ext.order:
        raise ValueError(f"support of length {n} exceeds GF({tower.ext.order})")
    if len(np.unique(x)) != n:
        raise ValueError("support entries are not pairwise distinct")
    if x.size and (x.min() < 0 or x.max() >= tower.ext.order):
        raise ValueError("support entries outside GF(q^2)")
    if y is None:
        return x, np.ones(n, dtype=np.int64)
    y = np.asarray(y, dtype=np.int64)
    if y.shape != x.shape:
        raise ValueError("support and multiplier lengths differ")
    if np.any(y == 0) or y.max() >= tower.ext.order:
        raise ValueError("multiplier entries must be nonzero elements of GF(q^2)")
    return x, y


def vandermonde(tower: FieldTower, k: int, x, y) -> np.ndarray:
    """Rows y * x^j for j < k, over GF(q^2)."""
    F = tower.ext
    rows = np.zeros((k, len(x)), dtype=np.int64)
    cur = np.asarray(y, dtype=np.int64)
    for j in range(k):
        rows[j] = cur
        cur = F.mul(cur, x)
    return rows


def grs(tower: FieldTower, k: int, x, y=None) -> LinearCode:
    """GRS_k(x, y) = {y * p(x) : deg p < k} over GF(q^2)."""
    x, y = _support(tower, x, y)
    if not 1 <= k <= x.size:
        raise ValueError(f"GRS dimension {k} outside [1, {x.size}]")
    return LinearCode(tower.ext, vandermonde(tower, k, x, y), x.size)


def grs_dual_multiplier(tower: FieldTower, x, y=None) -> np.ndarray:
    """Multiplier y' with GRS_k(x, y)^dual = GRS_{n-k}(x, y')."""
    x, y = _support(tower, x, y)
    F = tower.ext
    return F.inv(F.mul(y, locator_derivative_at(F, x)))


def alternant_parity(tower: FieldTower, ell: int, x, y) -> np.ndarray:
    """Parity checks over GF(q) of Alt_ell(x, y): both coordinates of y*x^j."""
    H = vandermonde(tower, ell, x, y)
    lo, hi = tower.ext.split(H)
    return np.vstack([lo, hi])


def alternant(tower: FieldTower, ell: int, x, y=None) -> LinearCode:
    """Alt_ell(x, y) = GRS_ell(x, y)^dual meet GF(q)^n.

    Computed directly as the GF(q)-kernel of the expanded parity-check matrix;
    ell <= 0 gives the full space.
    """
    x, y = _support(tower, x, y)
    F = tower.mid
    if ell <= 0:
        return LinearCode.full(F, x.size)
    ell = min(ell, x.size)
    H = alternant_parity(tower, ell, x, y)
    return LinearCode(F, linalg.nullspace(H, F, x.size), x.size)


def goppa(tower: FieldTower, x, Gamma: Poly) -> LinearCode:
    """Goppa(x, Gamma) = Alt_{deg Gamma}(x, Gamma(x)^-1)."""
    if Gamma.field is not tower.ext:
        raise ValueError("Goppa polynomial must have coefficients in GF(q^2)")
    vals = Gamma(np.asarray(x, dtype=np.int64))
    if np.any(vals == 0):
        raise ValueError("Goppa polynomial vanishes on the support")
    return alternant(tower, Gamma.degree, x, tower.ext.inv(vals))


def random_irreducible(tower: FieldTower, r: int, rng: np.random.Generator,
                       max_tries: int = 10000) -> Poly:
    """Monic irreducible polynomial of degree r over GF(q^2), by rejection."""
    F = tower.ext
    for _ in range(max_tries):
        coeffs = F.random(rng, size=r).tolist() + [1]
        if coeffs[0] == 0:
            continue
        f = Poly(F, coeffs)
        if is_irreducible(f):
            return f
    raise RuntimeError("failed to sample an irreducible polynomial")  # pragma: no cover


def wild_dimension(q: int, n: int, r: int) -> int:
    """n - 2r(q+1) + r(r+2), the generic dimension of a wild Goppa code."""
    return n - 2 * r * (q + 1) + r * (r + 2)


@dataclass(frozen=True)
class WildKeyPair:
    tower: FieldTower
    x: np.ndarray
    gamma: Poly
    public: LinearCode
    public_matrix: np.ndarray  # row-scrambled generator handed out as the key

    @property
    def q(self) -> int:
        return self.tower.q

    @property
    def n(self) -> int:
        return self.x.size

    @property
    def r(self) -> int:
        return self.gamma.degree

    @property
    def k(self) -> int:
        return self.public.k

    def alternant_representation(self) -> tuple[np.ndarray, np.ndarray, int]:
        """(x, y, ell) with public = Alt_ell(x, y) and radius floor(ell/2):
        the gamma^(q+1) Goppa representation."""
        F = self.tower.ext
        y = F.pow(self.gamma(self.x), -(self.q + 1))
        return self.x, y, self.r * (self.q + 1)


def check_params(q: int, n: int, r: int):
    tower_order = q * q
    if r < 2:
        raise ValueError("r must be at least 2")
    if n > tower_order:
        raise ValueError(f"n = {n} exceeds q^2 = {tower_order}")
    if n <= r * (q + 1):
        raise ValueError(f"n = {n} too small for r(q+1) = {r * (q + 1)}")


def keygen(q: int, n: int, r: int, seed: int, tower: FieldTower | None = None) -> WildKeyPair:
    """Wild McEliece key: random support, random irreducible gamma of degree r,
    public code Goppa(x, gamma^(q-1)) with a random invertible left scrambler."""
    check_params(q, n, r)
    tower = tower or FieldTower.get(q)
    rng = make_rng(seed, "keygen", q, n, r)
    x = rng.choice(tower.ext.order, size=n, replace=False).astype(np.int64)
    gamma = random_irreducible(tower, r, rng)
    gx = gamma(x)
    assert np.all(gx != 0), "irreducible gamma of degree > 1 has no root in GF(q^2)"
    y = tower.ext.pow(gx, -(q - 1))
    public = alternant(tower, r * (q - 1), x, y)
    S = linalg.random_invertible(public.k, tower.mid, rng)
    G = linalg.matmul(S, public.generator, tower.mid)
    return WildKeyPair(tower, x, gamma, public, G)


# --- affine normalization ------------------------------------------------------

def normalizing_map(tower: FieldTower, x, i0: int, i1: int) -> tuple[int, int]:
    """(a, b) such that psi(z) = a z + b sends x[i0] to 0 and x[i1] to 1."""
    if i0 == i1:
        raise ValueError("anchor positions must differ")
    F = tower.ext
    x0, x1 = int(x[i0]), int(x[i1])
    a = F.sinv(F.ssub(x1, x0))
    b = F.sneg(F.smul(a, x0))
    return a, b


def apply_affine(tower: FieldTower, x, a: int, b: int) -> np.ndarray:
    F = tower.ext
    return F.add(F.mul(np.asarray(x, dtype=np.int64), a), b)


def normalize_support(tower: FieldTower, x, i0: int, i1: int):
    """Return (psi(x), (a, b)).  Alternant codes with multiplier of the form
    f(x) for a polynomial f are unchanged when f is transported along psi."""
    a, b = normalizing_map(tower, x, i0, i1)
    return apply_affine(tower, x, a, b), (a, b)


def invert_affine(tower: FieldTower, a: int, b: int) -> tuple[int, int]:
    F = tower.ext
    ai = F.sinv(a)
    return ai, F.sneg(F.smul(ai, b))


# --- McEliece encryption and alternant decoding ---------------------------------

def random_error(F, n: int, t: int, rng: np.random.Generator) -> np.ndarray:
    e = np.zeros(n, dtype=np.int64)
    pos = rng.choice(n, size=t, replace=False)
    e[pos] = F.random(rng, size=t, nonzero=True)
    return e


def encrypt(tower: FieldTower, G, message, t: int, rng: np.random.Generator) -> np.ndarray:
    """m G + e with e of weight exactly t over GF(q)."""
    F = tower.mid
    G = np.asarray(G, dtype=np.int64)
    m = np.asarray(message, dtype=np.int64).reshape(1, -1)
    if m.shape[1] != G.shape[0]:
        raise ValueError(f"message length {m.shape[1]} != dimension {G.shape[0]}")
    c = linalg.matmul(m, G, F)[0]
    return F.add(c, random_error(F, G.shape[1], t, rng))


def syndromes(tower: FieldTower, count: int, x, y, received) -> np.ndarray:
    """S_j = sum_i c_i y_i x_i^j for j < count, over GF(q^2)."""
    H = vandermonde(tower, count, x, y)
    c = np.asarray(received, dtype=np.int64).reshape(-1, 1)
    return linalg.matmul(H, c, tower.ext)[:, 0]


def decode(tower: FieldTower, x, y, ell: int, received) -> tuple[np.ndarray, np.ndarray]:
    """Decode in Alt_ell(x, y) up to floor(ell/2) errors.

    Sugiyama's key-equation solver on (z^{2t}, R) with
    R(z) = sum_{j<2t} S_j z^{2t-1-j}.  The locator prod (z - x_i) is used (not
    the reciprocal form) so that a support entry 0 is located as well.
    """
    x, y = _support(tower, x, y)
    F, S = tower.ext, tower.mid
    c = np.asarray(received, dtype=np.int64)
    if c.shape != x.shape or c.min() < 0 or c.max() >= S.order:
        raise ValueError("received word must be a length-n vector over GF(q)")
    t = ell // 2
    if t == 0:
        if np.any(syndromes(tower, ell, x, y, c)):
            raise DecodingFailure("nonzero syndrome with decoding radius 0")
        return c.copy(), np.zeros_like(c)
    synd = syndromes(tower, ell, x, y, c)
    if not np.any(synd):
        return c.copy(), np.zeros_like(c)
    R = Poly(F, synd[:2 * t][::-1].tolist())
    r0, r1 = Poly.monomial(F, 2 * t), R
    u0, u1 = Poly(F, [1]), Poly(F, [])
    v0, v1 = Poly(F, []), Poly(F, [1])
    while r1.degree >= t:
        quo, rem = r0.divmod(r1)
        r0, r1 = r1, rem
        u0, u1 = u1, u0 - quo * u1
        v0, v1 = v1, v0 - quo * v1
    lam, omega = v1, -u1
    if lam.is_zero() or lam.degree > t:
        raise DecodingFailure("key equation has no admissible locator")
    inv_lead = F.sinv(lam.lead())
    lam, omega = lam * inv_lead, omega * inv_lead
    vals = lam(x)
    pos = np.flatnonzero(vals == 0)
    if pos.size != lam.degree:
        raise DecodingFailure(f"locator of degree {lam.degree} has {pos.size} roots on the support")
    dl = lam.derivative()(x[pos])
    if np.any(dl == 0):
        raise DecodingFailure("repeated locator root")
    ev = F.div(omega(x[pos]), F.mul(dl, y[pos]))
    if np.any(ev >= S.order) or np.any(ev == 0):
        raise DecodingFailure("error values outside GF(q)")
    e = np.zeros_like(c)
    e[pos] = ev
    cw = S.sub_(c, e)
    if np.any(syndromes(tower, ell, x, y, cw)):
        raise DecodingFailure("re-encoding check failed")
    return cw, e


def solve_message(tower: FieldTower, G, codeword) -> np.ndarray:
    """The message m with m G = codeword."""
    G = np.asarray(G, dtype=np.int64)
    m = linalg.solve(G.T, codeword, tower.mid)
    if m is None:
        raise DecodingFailure("decoded word is not in the row space")
    return m
