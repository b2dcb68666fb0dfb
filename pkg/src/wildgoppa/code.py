"""Linear codes over GF(q) or GF(q^2) and the operations the attack needs.

A LinearCode stores its generator in canonical reduced row echelon form
(leftmost pivots), so equality and hashing are exact subspace comparisons.
Codes are immutable; the dual is computed lazily and cached.
"""
from __future__ import annotations

from functools import cached_property
from typing import Iterable, TextIO

import numpy as np

from . import linalg
from .field import FiniteField, FieldTower


def _positions(I: Iterable[int], n: int) -> np.ndarray:
    I = np.unique(np.asarray(list(I) if not isinstance(I, np.ndarray) else I, dtype=np.int64))
    if I.size and (I[0] < 0 or I[-1] >= n):
        raise IndexError(f"positions out of range for length {n}")
    return I


class LinearCode:
    """Subspace of F^n held as an RREF generator matrix."""

    def __init__(self, field: FiniteField, generator, n: int | None = None, reduced: bool = False):
        G = np.asarray(generator, dtype=np.int64)
        if G.ndim == 1:
            G = G.reshape(1, -1) if G.size else G.reshape(0, n or 0)
        if n is None:
            n = G.shape[1]
        if G.shape[1] != n:
            raise ValueError(f"generator has {G.shape[1]} columns, expected {n}")
        if G.size and (G.min() < 0 or G.max() >= field.order):
            raise ValueError(f"entries outside {field}")
        if reduced:
            R = G
            piv = np.array([np.flatnonzero(row)[0] for row in R], dtype=np.int64)
        else:
            R, piv = linalg.rref(G, field)
        R.setflags(write=False)
        self.field = field
        self.n = n
        self.generator = R
        self.pivots = piv

    # constructors -------------------------------------------------------
    @classmethod
    def zero(cls, field: FiniteField, n: int) -> "LinearCode":
        return cls(field, np.zeros((0, n), dtype=np.int64), n, reduced=True)

    @classmethod
    def full(cls, field: FiniteField, n: int) -> "LinearCode":
        return cls(field, np.eye(n, dtype=np.int64), n, reduced=True)

    @classmethod
    def random(cls, field: FiniteField, n: int, k: int, rng: np.random.Generator) -> "LinearCode":
        return cls(field, field.random(rng, size=(k, n)), n)

    # basics -------------------------------------------------------------
    @property
    def k(self) -> int:
        return self.generator.shape[0]

    dimension = k

    @property
    def level(self) -> str:
        return self.field.level

    def __repr__(self):
        return f"LinearCode([{self.n}, {self.k}] over {self.field})"

    def __eq__(self, other):
        return (isinstance(other, LinearCode) and self.field is other.field and self.n == other.n
                and self.k == other.k and np.array_equal(self.generator, other.generator))

    def __hash__(self):
        return hash((self.field.order, self.field.level, self.n, self.generator.tobytes()))

    def _compatible(self, other: "LinearCode"):
        if self.field is not other.field:
            raise ValueError(f"field mismatch: {self.field} vs {other.field}")
        if self.n != other.n:
            raise ValueError(f"length mismatch: {self.n} vs {other.n}")

    @cached_property
    def dual(self) -> "LinearCode":
        H = linalg.kernel_from_rref(self.generator, self.pivots, self.n, self.field)
        return LinearCode(self.field, H, self.n)

    def contains(self, words) -> bool:
        """True when every row of `words` lies in the code."""
        W = np.atleast_2d(np.asarray(words, dtype=np.int64))
        if W.shape[1] != self.n:
            raise ValueError("length mismatch")
        if self.k == 0:
            return not np.any(W)
        resid = self.field.sub_(W, linalg.matmul(W[:, self.pivots], self.generator, self.field))
        return not np.any(resid)

    def issubcode(self, other: "LinearCode") -> bool:
        self._compatible(other)
        return self.k <= other.k and other.contains(self.generator) if self.k else True

    def encode(self, message) -> np.ndarray:
        m = np.atleast_2d(np.asarray(message, dtype=np.int64))
        return linalg.matmul(m, self.generator, self.field)

    def random_word(self, rng: np.random.Generator) -> np.ndarray:
        return self.encode(self.field.random(rng, size=self.k))[0]

    def is_full_weight_somewhere(self) -> np.ndarray:
        """Boolean mask of positions not identically zero on the code."""
        return np.any(self.generator != 0, axis=0)


def dual(C: LinearCode) -> LinearCode:
    return C.dual


def puncture(C: LinearCode, I) -> LinearCode:
    """Delete the coordinates in I."""
    I = _positions(I, C.n)
    keep = np.setdiff1d(np.arange(C.n), I)
    return LinearCode(C.field, C.generator[:, keep], keep.size)


def shorten(C: LinearCode, I) -> LinearCode:
    """Words vanishing on I, with I deleted; computed as the dual of the
    punctured dual."""
    I = _positions(I, C.n)
    if I.size == 0:
        return C
    return puncture(C.dual, I).dual


def code_sum(A: LinearCode, B: LinearCode) -> LinearCode:
    A._compatible(B)
    return LinearCode(A.field, np.vstack([A.generator, B.generator]), A.n)


def intersect(A: LinearCode, B: LinearCode) -> LinearCode:
    A._compatible(B)
    return code_sum(A.dual, B.dual).dual


def equal(A: LinearCode, B: LinearCode) -> bool:
    return A == B


def embed_zeros(C: LinearCode, I, n_total: int) -> LinearCode:
    """Reinsert zero columns at positions I (indices in the length-n_total frame)."""
    I = _positions(I, n_total)
    if n_total - I.size != C.n:
        raise ValueError(f"cannot embed length {C.n} into {n_total} with {I.size} zeros")
    keep = np.setdiff1d(np.arange(n_total), I)
    G = np.zeros((C.k, n_total), dtype=np.int64)
    G[:, keep] = C.generator
    return LinearCode(C.field, G, n_total, reduced=True)


def scale(c, C: LinearCode) -> LinearCode:
    """c * C for a vector c with nonzero entries (or any vector)."""
    c = np.asarray(c, dtype=np.int64)
    return LinearCode(C.field, C.field.mul(C.generator, c[None, :]), C.n)


def _product_rows(A: np.ndarray, B: np.ndarray, F: FiniteField, symmetric: bool):
    """Yield blocks of componentwise products of rows of A and B."""
    for i in range(A.shape[0]):
        Bi = B[i:] if symmetric else B
        if Bi.shape[0]:
            yield F.mul(A[i][None, :], Bi)


def star_product(A: LinearCode, B: LinearCode, rng: np.random.Generator | None = None,
                 extra: int = 20) -> LinearCode:
    """Span of all componentwise products a * b.

    With rng given, only n + extra products of random codewords are reduced
    (probabilistic shortcut; each sample misses a fixed hyperplane with
    probability >= 1 - 2/q).
    """
    A._compatible(B)
    F, n = A.field, A.n
    if A.k == 0 or B.k == 0:
        return LinearCode.zero(F, n)
    symmetric = A is B or A == B
    total = A.k * (A.k + 1) // 2 if symmetric else A.k * B.k
    if rng is not None and total > n + extra:
        m = n + extra
        a = linalg.matmul(F.random(rng, size=(m, A.k)), A.generator, F)
        b = linalg.matmul(F.random(rng, size=(m, B.k)), B.generator, F)
        return LinearCode(F, F.mul(a, b), n)
    rows = np.vstack(list(_product_rows(A.generator, B.generator, F, symmetric)))
    return LinearCode(F, rows, n)


def square(A: LinearCode, rng: np.random.Generator | None = None) -> LinearCode:
    return star_product(A, A, rng=rng)


def conductor(A: LinearCode, B: LinearCode, D: LinearCode | None = None,
              rng: np.random.Generator | None = None) -> LinearCode:
    """{s in D : s * A is contained in B} = (A * B^dual)^dual meet D."""
    A._compatible(B)
    S = star_product(A, B.dual, rng=rng).dual
    if D is None:
        return S
    A._compatible(D)
    return intersect(S, D)


# --- subfield structure -------------------------------------------------------

def _spanning_over_subfield(C: LinearCode) -> np.ndarray:
    """Rows {g, w g} spanning C as a vector space over the subfield."""
    F = C.field
    w = F.sub.order  # encoding of the generator w of GF(q^2) over GF(q)
    return np.vstack([C.generator, F.mul(C.generator, w)])


def _require_ext(C: LinearCode):
    if C.field.level != "ext":
        raise ValueError(f"expected a code over GF(q^2), got {C.field}")


def subfield_subcode(C: LinearCode) -> LinearCode:
    """C meet GF(q)^n: combinations over GF(q) of {g, w g} whose high coordinates vanish."""
    _require_ext(C)
    F, S = C.field, C.field.sub
    V = _spanning_over_subfield(C)
    lo, hi = F.split(V)
    lam = linalg.nullspace(hi.T, S)  # lam @ hi == 0
    if lam.shape[0] == 0:
        return LinearCode.zero(S, C.n)
    return LinearCode(S, linalg.matmul(lam, lo, S), C.n)


def trace_code(C: LinearCode, tower: FieldTower) -> LinearCode:
    """Componentwise trace image Tr(C) over GF(q)."""
    _require_ext(C)
    if tower.ext is not C.field:
        raise ValueError("tower does not match the code's field")
    V = _spanning_over_subfield(C)
    return LinearCode(C.field.sub, tower.trace(V), C.n)


def to_ext(C: LinearCode, ext: FiniteField) -> LinearCode:
    """The GF(q^2)-span of a GF(q) code."""
    if ext.sub is not C.field:
        raise ValueError("field mismatch")
    return LinearCode(ext, C.generator, C.n)


# --- text format ---------------------------------------------------------------

def write_matrix(fh: TextIO, G: np.ndarray, level: str):
    """'n k level' followed by k rows of n canonical integers."""
    G = np.asarray(G, dtype=np.int64)
    k, n = G.shape
    fh.write(f"{n} {k} {level}\n")
    for row in G:
        fh.write(" ".join(map(str, row.tolist())) + "\n")


class ParseError(ValueError):
    def __init__(self, lineno: int, msg: str):
        super().__init__(f"line {lineno}: {msg}")
        self.lineno = lineno


def read_matrix(lines: list[str], start: int = 0, order: int | None = None):
    """Parse a matrix block starting at lines[start].

    Returns (G, level, next_index).  Line numbers in errors are 1-based.
    """
    if start >= len(lines):
        raise ParseError(start + 1, "missing matrix header")
    head = lines[start].split()
    if len(head) != 3:
        raise ParseError(start + 1, "matrix header must be 'n k level'")
    try:
        n, k = int(head[0]), int(head[1])
    except ValueError:
        raise ParseError(start + 1, "matrix header must start with two integers") from None
    level = head[2]
    if level not in ("mid", "ext"):
        raise ParseError(start + 1, f"unknown level {level!r}")
    G = np.zeros((k, n), dtype=np.int64)
    for i in range(k):
        ln = start + 1 + i
        if ln >= len(lines):
            raise ParseError(ln + 1, "matrix truncated")
        try:
            row = [int(t) for t in lines[ln].split()]
        except ValueError:
            raise ParseError(ln + 1, "non-integer entry") from None
        if len(row) != n:
            raise ParseError(ln + 1, f"expected {n} entries, got {len(row)}")
        if order is not None and any(not 0 <= v < order for v in row):
            raise ParseError(ln + 1, f"entry outside [0, {order})")
        G[i] = row
    return G, level, start + 1 + k
