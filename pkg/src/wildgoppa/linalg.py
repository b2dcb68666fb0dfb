"""Dense linear algebra over the fields of a FieldTower.

Row reduction uses vectorized rank-one updates through the field tables (or
plain modular arithmetic for prime fields).  Matrix products are reduced to
float64 BLAS products over GF(p): digits for GF(p^e), and three subfield
products (Karatsuba) for the quadratic extension.  All entries stay far below
2^53, so the float products are exact.
"""
from __future__ import annotations

from typing import Iterable

import numpy as np

from .field import FiniteField

_EXACT = float(2**52)


def _as_int(M) -> np.ndarray:
    return np.ascontiguousarray(np.asarray(M, dtype=np.int64))


def _prime_matmul(A: np.ndarray, B: np.ndarray, p: int) -> np.ndarray:
    if A.shape[1] == 0:
        return np.zeros((A.shape[0], B.shape[1]), dtype=np.int64)
    if A.shape[1] * (p - 1) ** 2 < _EXACT:
        C = A.astype(np.float64) @ B.astype(np.float64)
        return np.rint(C).astype(np.int64) % p
    return (A @ B) % p  # pragma: no cover - astronomically long inner dimension


def _digits(A: np.ndarray, p: int, e: int) -> list[np.ndarray]:
    out, rest = [], A
    for _ in range(e):
        out.append(rest % p)
        rest = rest // p
    return out


def matmul(A, B, F: FiniteField) -> np.ndarray:
    """Matrix product over F."""
    A, B = _as_int(A), _as_int(B)
    if A.ndim != 2 or B.ndim != 2 or A.shape[1] != B.shape[0]:
        raise ValueError(f"shape mismatch {A.shape} @ {B.shape}")
    if F.is_prime:
        return _prime_matmul(A, B, F.order)
    if F.level == "ext":
        S = F.sub
        A0, A1 = F.split(A)
        B0, B1 = F.split(B)
        P00 = matmul(A0, B0, S)
        P11 = matmul(A1, B1, S)
        Pss = matmul(S.add(A0, A1), S.add(B0, B1), S)
        b0, b1 = F.ext_modulus
        cross = S.sub_(S.sub_(Pss, P00), P11)
        lo = S.sub_(P00, S.mul(P11, b0))
        hi = S.sub_(cross, S.mul(P11, b1))
        return F.join(lo, hi)
    # GF(p^e) in the polynomial basis
    p, m = F.char, F.modulus
    e = len(m) - 1
    Ad, Bd = _digits(A, p, e), _digits(B, p, e)
    conv = [np.zeros((A.shape[0], B.shape[1]), dtype=np.int64) for _ in range(2 * e - 1)]
    for i in range(e):
        for j in range(e):
            conv[i + j] = conv[i + j] + _prime_matmul(Ad[i], Bd[j], p)
    conv = [c % p for c in conv]
    for deg in range(2 * e - 2, e - 1, -1):
        c = conv[deg]
        for i in range(e):
            conv[deg - e + i] = (conv[deg - e + i] - c * m[i]) % p
    out = np.zeros_like(conv[0])
    for i in range(e - 1, -1, -1):
        out = out * p + conv[i]
    return out


def _rref_dense(M: np.ndarray, F: FiniteField) -> tuple[np.ndarray, np.ndarray]:
    M = M.copy()
    rows, cols = M.shape
    piv: list[int] = []
    r = 0
    prime = F.is_prime
    p = F.order
    for c in range(cols):
        if r == rows:
            break
        nz = np.flatnonzero(M[r:, c])
        if nz.size == 0:
            continue
        i = r + int(nz[0])
        if i != r:
            M[[r, i]] = M[[i, r]]
        lead = int(M[r, c])
        if lead != 1:
            M[r, c:] = F.mul(M[r, c:], F.sinv(lead))
        others = np.flatnonzero(M[:, c])
        others = others[others != r]
        if others.size:
            f = M[others, c]
            prow = M[r, c:]
            if prime:
                M[others, c:] = (M[others, c:] - f[:, None] * prow[None, :]) % p
            else:
                M[others, c:] = F._sub[M[others, c:], F._mul[f[:, None], prow[None, :]]]
        piv.append(c)
        r += 1
    return M[:r], np.array(piv, dtype=np.int64)


def _merge(basis, bpiv, new, npiv, F):
    """Combine two RREF blocks whose pivot sets are disjoint (new is already
    reduced against basis)."""
    if basis.shape[0] and new.shape[0]:
        coef = basis[:, npiv]
        if np.any(coef):
            basis = F.sub_(basis, matmul(coef, new, F))
    R = np.vstack([basis, new])
    piv = np.concatenate([bpiv, npiv])
    order = np.argsort(piv, kind="stable")
    return R[order], piv[order]


def rref_blocks(blocks: Iterable[np.ndarray], cols: int, F: FiniteField) -> tuple[np.ndarray, np.ndarray]:
    """RREF of the vertical concatenation of `blocks` without materializing it.

    Each block is reduced against the current basis by one matrix product and
    merged; iteration stops once the rank reaches `cols`.
    """
    basis = np.zeros((0, cols), dtype=np.int64)
    bpiv = np.zeros(0, dtype=np.int64)
    for block in blocks:
        if basis.shape[0] == cols:
            break
        block = _as_int(block)
        if block.shape[0] == 0:
            continue
        if basis.shape[0]:
            block = F.sub_(block, matmul(block[:, bpiv], basis, F))
        new, npiv = _rref_dense(block, F)
        if new.shape[0]:
            basis, bpiv = _merge(basis, bpiv, new, npiv, F)
    return basis, bpiv


def rref(M, F: FiniteField, chunk: int | None = None) -> tuple[np.ndarray, np.ndarray]:
    """Reduced row echelon form (leftmost pivots) with zero rows dropped.

    Returns (R, pivots).  Tall inputs are processed in row blocks (see
    rref_blocks); the scan stops early once the rank reaches the number of
    columns.
    """
    M = _as_int(M)
    if M.ndim != 2:
        raise ValueError("expected a matrix")
    rows, cols = M.shape
    if rows == 0 or cols == 0:
        return np.zeros((0, cols), dtype=np.int64), np.zeros(0, dtype=np.int64)
    if chunk is None:
        chunk = max(2 * cols, 128)
    if rows <= chunk + cols:
        return _rref_dense(M, F)
    return rref_blocks((M[i:i + chunk] for i in range(0, rows, chunk)), cols, F)


def rank(M, F: FiniteField) -> int:
    return rref(M, F)[0].shape[0]


def kernel_from_rref(R: np.ndarray, piv: np.ndarray, n: int, F: FiniteField) -> np.ndarray:
    """Basis (as rows) of {v : R v = 0} given an RREF with pivot columns."""
    free = np.setdiff1d(np.arange(n), piv)
    K = np.zeros((free.size, n), dtype=np.int64)
    if free.size == 0:
        return K
    K[np.arange(free.size), free] = 1
    if piv.size:
        K[:, piv] = F.neg(R[:, free].T)
    return K


def nullspace(M, F: FiniteField, n: int | None = None) -> np.ndarray:
    """Rows spanning the right kernel of M."""
    M = _as_int(M)
    if n is None:
        n = M.shape[1]
    R, piv = rref(M, F)
    return kernel_from_rref(R, piv, n, F)


def solve(A, b, F: FiniteField) -> np.ndarray | None:
    """One solution x of A x = b, or None when the system is inconsistent."""
    A = _as_int(A)
    b = _as_int(b).reshape(-1, 1)
    R, piv = rref(np.hstack([A, b]), F)
    n = A.shape[1]
    if piv.size and piv[-1] == n:
        return None
    x = np.zeros(n, dtype=np.int64)
    x[piv] = R[:, n]
    return x


def random_invertible(k: int, F: FiniteField, rng: np.random.Generator) -> np.ndarray:
    while True:
        S = F.random(rng, size=(k, k))
        if rank(S, F) == k:
            return S
