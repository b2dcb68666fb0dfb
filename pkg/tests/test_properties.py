"""Algebraic identities of codes, alternant codes and the filtration.

Every property draws q from {4, 5, 7, 8, 9} and an integer seed; all other
random data comes from numpy generators seeded by that integer, so failures
replay exactly.
"""
from functools import lru_cache
from itertools import product

import numpy as np
from hypothesis import given
from hypothesis import strategies as st

from wildgoppa import linalg
from wildgoppa.algcode import alternant, apply_affine, grs, keygen, random_irreducible
from wildgoppa.code import (LinearCode, code_sum, conductor, puncture, scale, shorten, square,
                            star_product, subfield_subcode, trace_code)
from wildgoppa.field import FieldTower, locator_derivative_at
from wildgoppa.filtration import coi_oracle, next_term, seed_filtration
from wildgoppa.rng import make_rng

from conftest import SMALL_Q, random_support

cases = st.tuples(st.sampled_from(SMALL_Q), st.integers(0, 2**32 - 1))


def _setup(q, seed, n_lo=3, n_hi=14):
    T = FieldTower.get(q)
    rng = np.random.default_rng(seed)
    n = int(rng.integers(n_lo, min(n_hi, T.ext.order) + 1))
    return T, rng, n


def _subset(rng, n, lo=0, hi=None):
    hi = n - 1 if hi is None else hi
    size = int(rng.integers(lo, hi + 1))
    return np.sort(rng.choice(n, size=size, replace=False))


def _shorten_by_kernel(C: LinearCode, I) -> LinearCode:
    """Words of C vanishing on I, found as combinations m with (m G)_I = 0."""
    F = C.field
    keep = np.setdiff1d(np.arange(C.n), I)
    if C.k == 0:
        return LinearCode.zero(F, keep.size)
    M = linalg.nullspace(C.generator[:, I].T, F, C.k) if len(I) else np.eye(C.k, dtype=np.int64)
    if M.shape[0] == 0:
        return LinearCode.zero(F, keep.size)
    return LinearCode(F, linalg.matmul(M, C.generator, F)[:, keep], keep.size)


@given(cases)
def test_delsarte(case):
    """dual(C meet GF(q)^n) = Tr(dual C)."""
    q, seed = case
    T, rng, n = _setup(q, seed)
    C = LinearCode.random(T.ext, n, int(rng.integers(1, n)), rng)
    assert subfield_subcode(C).dual == trace_code(C.dual, T)


@given(cases)
def test_shorten_dual(case):
    """Shortening is dual to puncturing, and both agree with a direct kernel."""
    q, seed = case
    T, rng, n = _setup(q, seed)
    F = T.mid if rng.integers(2) else T.ext
    C = LinearCode.random(F, n, int(rng.integers(0, n + 1)), rng)
    I = _subset(rng, n)
    assert shorten(C, I) == _shorten_by_kernel(C, I)
    assert shorten(C, I).dual == puncture(C.dual, I)
    assert puncture(C, I).dual == shorten(C.dual, I)
    assert C.dual.dual == C
    assert C.k + C.dual.k == n


@given(cases)
def test_commutation(case):
    """Shortening/puncturing against trace and subfield subcode."""
    q, seed = case
    T, rng, n = _setup(q, seed)
    A = LinearCode.random(T.ext, n, int(rng.integers(1, n + 1)), rng)
    I = _subset(rng, n)
    assert puncture(trace_code(A, T), I) == trace_code(puncture(A, I), T)
    assert trace_code(shorten(A, I), T).issubcode(shorten(trace_code(A, T), I))
    assert subfield_subcode(shorten(A, I)) == shorten(subfield_subcode(A), I)
    assert puncture(subfield_subcode(A), I).issubcode(subfield_subcode(puncture(A, I)))


def _alt_data(T, rng, n, subfield_y=False):
    x = random_support(T, n, rng)
    F = T.mid if subfield_y else T.ext
    y = F.random(rng, size=n, nonzero=True)
    return x, y


@given(cases)
def test_shortened_alternant(case):
    """sh(Alt_l(x, y), I) = Alt_l(x without I, y without I)."""
    q, seed = case
    T, rng, n = _setup(q, seed, 4, 20)
    x, y = _alt_data(T, rng, n)
    ell = int(rng.integers(1, n))
    I = _subset(rng, n, 0, n - 2)
    keep = np.setdiff1d(np.arange(n), I)
    assert shorten(alternant(T, ell, x, y), I) == alternant(T, ell, x[keep], y[keep])


@given(cases)
def test_affine_invariance(case):
    """Alt_l(a x + b, y) = Alt_l(x, y) for a != 0."""
    q, seed = case
    T, rng, n = _setup(q, seed, 4, 20)
    x, y = _alt_data(T, rng, n)
    ell = int(rng.integers(1, n))
    a, b = int(T.ext.random(rng, nonzero=True)), int(T.ext.random(rng))
    assert alternant(T, ell, apply_affine(T, x, a, b), y) == alternant(T, ell, x, y)


@given(cases)
def test_grs_square(case):
    """dim GRS_k(x, y)^2 = min(n, 2k - 1)."""
    q, seed = case
    T, rng, n = _setup(q, seed, 2, 20)
    x, y = _alt_data(T, rng, n)
    k = int(rng.integers(1, n + 1))
    assert square(grs(T, k, x, y)).k == min(n, 2 * k - 1)


@given(cases)
def test_alternant_product_inclusion(case):
    """Alt_s(x, y) * Alt_s'(x, y') lies in Alt_{s+s'-n+1}(x, y y' pi'(x))."""
    q, seed = case
    T, rng, n = _setup(q, seed, 4, 16)
    x = random_support(T, n, rng)
    F = T.ext
    # multipliers over GF(q) keep the codes large for s close to n
    y = (T.mid if rng.integers(2) else F).random(rng, size=n, nonzero=True)
    y2 = (T.mid if rng.integers(2) else F).random(rng, size=n, nonzero=True)
    s, s2 = (int(v) for v in rng.integers(n // 2, n, size=2))
    A, B = alternant(T, s, x, y), alternant(T, s2, x, y2)
    y3 = F.mul(F.mul(y, y2), locator_derivative_at(F, x))
    assert star_product(A, B).issubcode(alternant(T, s + s2 - n + 1, x, y3))


@lru_cache(maxsize=None)
def _gamma(q, r, key):
    return random_irreducible(FieldTower.get(q), r, make_rng(key, "gamma", q, r))


@given(cases)
def test_wild_equality(case):
    """Goppa(x, gamma^(q-1)) = Goppa(x, gamma^q) = Alt_{r(q+1)}(x, gamma^-(q+1))."""
    q, seed = case
    T = FieldTower.get(q)
    rng = np.random.default_rng(seed)
    r = 2 if q < 7 else int(rng.integers(2, 4))
    n = int(rng.integers(r * (q + 1) + 1, q * q + 1))
    g = _gamma(q, r, seed % 16)
    x = random_support(T, n, rng)
    gx = g(x)
    F = T.ext
    codes = [alternant(T, r * e, x, F.pow(gx, -e)) for e in (q - 1, q, q + 1)]
    assert codes[0] == codes[1] == codes[2]


def _brute_conductor(F, A: LinearCode, B: LinearCode, D: LinearCode):
    out = []
    for lam in product(range(F.order), repeat=D.k):
        s = D.encode(np.array(lam))[0] if D.k else np.zeros(D.n, np.int64)
        if B.contains(F.mul(A.generator, s[None, :])) if A.k else True:
            out.append(s)
    return out


@given(st.tuples(st.sampled_from([4, 5]), st.integers(0, 2**32 - 1)))
def test_conductor_brute_force(case):
    """{s in D : s * A in B} by enumeration of D, dim D <= 4."""
    q, seed = case
    T = FieldTower.get(q)
    rng = np.random.default_rng(seed)
    F = T.mid
    n = int(rng.integers(3, 8))
    A = LinearCode.random(F, n, int(rng.integers(1, n)), rng)
    S = LinearCode.random(F, n, int(rng.integers(1, 3)), rng)
    B = code_sum(star_product(S, A), LinearCode.random(F, n, int(rng.integers(0, 2)), rng))
    D = code_sum(S, LinearCode.random(F, n, int(rng.integers(0, 3)), rng))
    if D.k > 4:
        D = LinearCode(F, D.generator[:4], n)
    got = conductor(A, B, D)
    want = _brute_conductor(F, A, B, D)
    assert len(want) == F.order ** got.k
    assert all(got.contains(w) for w in want)


@lru_cache(maxsize=None)
def _small_key(q, n, r, key):
    return keygen(q, n, r, key)


# parameters where every term up to `reach` is computable from the public code
FILTRATION_PARAMS = {4: (16, 2, 2), 5: (25, 2, 2), 7: (35, 2, 5), 8: (50, 2, 5), 9: (60, 3, 6)}


@given(cases)
def test_coi_white_box(case):
    """Every computed filtration term equals the alternant description from the secret."""
    q, seed = case
    n, r, reach = FILTRATION_PARAMS[q]
    rng = np.random.default_rng(seed)
    kp = _small_key(q, n, r, seed % 4)
    a = int(rng.integers(n))
    target = int(rng.integers(2, reach + 1))
    state = seed_filtration(kp.public, a, q, r)
    frng = make_rng(seed, "coi")
    for t in range(2, target + 1):
        next_term(state, t, frng)
    for s, term in state.terms.items():
        assert term == coi_oracle(kp.tower, kp.x, kp.gamma, a, s), (q, a, s)


@given(cases)
def test_double_inclusion(case):
    """N(x' - x_a)^-1 * Coi(a, q+1) lies in Coi(a, 0)."""
    q, seed = case
    n, r, _ = FILTRATION_PARAMS[q]
    T = FieldTower.get(q)
    kp = _small_key(q, n, r, seed % 4)
    a = int(np.random.default_rng(seed).integers(n))
    xr = np.delete(kp.x, a)
    w = T.mid.inv(T.norm(T.ext.sub_(xr, int(kp.x[a]))))
    top = coi_oracle(T, kp.x, kp.gamma, a, q + 1)
    assert scale(w, top).issubcode(coi_oracle(T, kp.x, kp.gamma, a, 0))


@given(cases)
def test_conjugate_support(case):
    """GRS_k(a, b) meet GF(q)^n = GRS_k(a^q, b^q) meet GF(q)^n."""
    q, seed = case
    T, rng, n = _setup(q, seed, 2, 20)
    a, b = _alt_data(T, rng, n)
    k = int(rng.integers(1, n + 1))
    lhs = subfield_subcode(grs(T, k, a, b))
    rhs = subfield_subcode(grs(T, k, T.frobenius(a), T.frobenius(b)))
    assert lhs == rhs


PROPERTIES = [
    test_delsarte, test_shorten_dual, test_commutation, test_shortened_alternant,
    test_affine_invariance, test_grs_square, test_alternant_product_inclusion, test_wild_equality,
    test_conductor_brute_force, test_coi_white_box, test_double_inclusion, test_conjugate_support,
]
