"""The filtration Coi(a, s) of a wild Goppa public code, computed from the code alone.

Coi(a, s) is the subcode of the public code punctured at a made of
evaluations that vanish to order at least s at the (unknown) point x_a.
Coi(a, 0) and Coi(a, 1) are the puncturing and the shortening at a; higher
terms are obtained by solving conductor problems on shortened codes and
gluing the pieces back together.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field

import numpy as np

from .algcode import alternant
from .code import LinearCode, code_sum, conductor, embed_zeros, puncture, shorten, star_product
from .distinguisher import filtration_intervals, filtration_target_dim
from .field import FieldTower, Poly

log = logging.getLogger(__name__)


class DegeneratePosition(ValueError):
    """The public code vanishes identically at the requested anchor."""


class FiltrationError(RuntimeError):
    """A filtration term could not be computed."""


@dataclass
class FiltrationState:
    code: LinearCode
    anchor: int
    q: int
    r: int
    terms: dict[int, LinearCode] = field(default_factory=dict)
    events: list[str] = field(default_factory=list)

    @property
    def n(self) -> int:
        return self.code.n

    def target_dim(self, t: int) -> int:
        return filtration_target_dim(self.q, self.n, self.r, t)

    def __getitem__(self, s: int) -> LinearCode:
        return self.terms[s]

    def positions(self) -> np.ndarray:
        """Original coordinates of the length n-1 filtration codes."""
        return np.delete(np.arange(self.n), self.anchor)


def seed_filtration(C: LinearCode, a: int, q: int, r: int) -> FiltrationState:
    """Coi(a, 1) = shorten(C, a) and Coi(a, 0) = puncture(C, a)."""
    if not 0 <= a < C.n:
        raise IndexError(f"anchor {a} out of range")
    sh = shorten(C, [a])
    pu = puncture(C, [a])
    if sh.k == pu.k:
        raise DegeneratePosition(f"position {a} is identically zero on the code")
    return FiltrationState(C, a, q, r, {0: pu, 1: sh})


def exact_interval(state: FiltrationState, t: int, d_index: int) -> tuple[int, int]:
    """Sampling range for |I| when the outer bound is Coi(a, d_index).

    The conductor is guaranteed to be sh(Coi(a, t), I) only when
    n - |I| < 2r(q+1) + d_index + 1, so the lower end of the interval is
    raised to n - 2r(q+1) - d_index when needed.  At |I| = b- with
    d_index = t - 1 the solution space can strictly contain the wanted term.
    """
    iv = filtration_intervals(state.q, state.n, state.r, t)
    if iv is None:
        raise FiltrationError(f"empty shortening interval for term {t}")
    lo = max(iv[0], state.n - 2 * state.r * (state.q + 1) - d_index)
    if lo > iv[1]:
        raise FiltrationError(f"no admissible shortening size for term {t}")
    return lo, iv[1]


def _draw(rng, lo: int, hi: int, m: int) -> np.ndarray:
    size = int(rng.integers(lo, hi + 1))
    return np.sort(rng.choice(m, size=size, replace=False))


def _accumulate(state: FiltrationState, t: int, piece_fn, interval, rng, target: int | None,
                stall: int, confirm: int, max_iter: int | None) -> LinearCode:
    m = state.n - 1
    lo, hi = interval
    if max_iter is None:
        max_iter = 50 * math.ceil(m / (hi - lo + 1))
    acc = LinearCode.zero(state.code.field, m)
    stale = 0
    for it in range(max_iter):
        I = _draw(rng, lo, hi, m)
        piece = piece_fn(I)
        new = code_sum(acc, embed_zeros(piece, I, m))
        stale = stale + 1 if new.k == acc.k else 0
        acc = new
        if target is not None and acc.k == target and stale >= confirm:
            return acc
        if stale >= stall and (target is None or acc.k >= target):
            if target is not None and acc.k > target:
                state.events.append(f"term {t}: dim {acc.k} exceeds k(t)={target}, stopped on stagnation")
            return acc
    raise FiltrationError(f"term {t}: {max_iter} draws reached dim {acc.k}, target {target}")


def _splits(state: FiltrationState, t: int, splits) -> list[tuple[int, int]]:
    if splits is None:
        splits = sorted({1, t // 2})
    out = [(s, t - s) for s in splits if s in state.terms and t - s in state.terms]
    if not out:
        raise FiltrationError(f"no pair of computed terms sums to {t}")
    return out


def next_term(state: FiltrationState, t: int, rng: np.random.Generator,
              d_index: int | None = None, stall: int = 10, confirm: int = 1,
              max_iter: int | None = None, shortcut: bool = False,
              splits=None) -> LinearCode:
    """Compute Coi(a, t), t >= 2, and store it in the state.

    Each draw shortens on a random I and solves
    {c in sh(Coi(d), I) : c * sh(Coi(0), I) in B}, where B is the sum of
    sh(Coi(s), I) * sh(Coi(t-s), I) over the requested splits s (default
    s = 1 and s = floor(t/2), whichever are available).  The balanced
    product alone can have codimension > 1 in the alternant code it spans,
    which makes the conductor too small; the s = 1 product fills that gap.
    The pieces are padded back with zeros on I and summed.
    """
    if t < 2:
        raise ValueError("next_term requires t >= 2")
    if 0 not in state.terms:
        raise FiltrationError(f"term 0 needed for term {t}")
    pairs = _splits(state, t, splits)
    if d_index is None:
        avail = [s for s in state.terms if (t + 1) // 2 <= s < t]
        if not avail:
            raise FiltrationError(f"no intermediate term available for {t}")
        d_index = max(avail)
    interval = exact_interval(state, t, d_index)
    C0, D = state.terms[0], state.terms[d_index]
    sub_rng = rng if shortcut else None

    def piece(I):
        sh = {}
        for s in {u for pair in pairs for u in pair}:
            sh[s] = shorten(state.terms[s], I)
        B = None
        for s1, s2 in pairs:
            P = star_product(sh[s1], sh[s2], rng=sub_rng)
            B = P if B is None else code_sum(B, P)
        return conductor(shorten(C0, I), B, shorten(D, I), rng=sub_rng)

    stagnant = t > state.q - state.r
    target = None if stagnant else state.target_dim(t)
    term = _accumulate(state, t, piece, interval, rng, target, stall, confirm, max_iter)
    state.terms[t] = term
    log.info("anchor %d term %d: dim %d", state.anchor, t, term.k)
    return term


def negative_term(state: FiltrationState, ell: int, rng: np.random.Generator,
                  stall: int = 10, max_iter: int | None = None) -> LinearCode:
    """Coi(a, -ell) as {c : c * Coi(0) in Coi(floor(-ell/2)) * Coi(ceil(-ell/2))}
    on shortened codes, with the ambient space as the outer bound, computed
    for -r-1, -r-2, ... in turn.

    Terms -1, ..., -r are equal to Coi(a, 0) and are filled in directly.
    Beyond -r this formulation has no outer bound to control the degree, and
    the pieces are not guaranteed to be shortenings of Coi(a, -ell); callers
    must validate the result.
    """
    if ell < 1:
        raise ValueError("negative_term requires ell >= 1")
    for s in range(1, min(ell, state.r) + 1):
        state.terms.setdefault(-s, state.terms[0])
    m = state.n - 1
    ambient = LinearCode.full(state.code.field, m)
    C0 = state.terms[0]
    for e in range(state.r + 1, ell + 1):
        t = -e
        if t in state.terms:
            continue
        s1, s2 = math.floor(t / 2), math.ceil(t / 2)
        Ca, Cb = state.terms[s1], state.terms[s2]

        def piece(I, Ca=Ca, Cb=Cb, same=s1 == s2):
            Bs = shorten(Ca, I)
            B = star_product(Bs, Bs if same else shorten(Cb, I))
            return conductor(shorten(C0, I), B, puncture(ambient, I))

        term = _accumulate(state, t, piece, exact_interval(state, t, t - 1), rng, None, stall, 0, max_iter)
        state.terms[t] = code_sum(term, state.terms[t + 1])
    return state.terms[-ell]


def doubling_schedule(target: int) -> list[int]:
    """Terms needed to reach `target` from Coi(0), Coi(1) by halving."""
    need: set[int] = set()

    def visit(t):
        if t < 2 or t in need:
            return
        need.add(t)
        visit(t // 2)
        visit((t + 1) // 2)

    visit(target)
    return sorted(need)


def climb_to(state: FiltrationState, target: int, rng: np.random.Generator,
             sequential: bool = False, **kw) -> FiltrationState:
    """Compute Coi(a, target): every term up to it when sequential, otherwise
    only the terms on the halving schedule."""
    steps = range(2, target + 1) if sequential else doubling_schedule(target)
    for t in steps:
        if t not in state.terms:
            next_term(state, t, rng, **kw)
    return state


# --- white-box oracle --------------------------------------------------------

def coi_oracle(tower: FieldTower, x, gamma: Poly, a: int, s: int) -> LinearCode:
    """Coi(a, s) from the secret: Alt_{r(q+1)+s-1}(x', gamma^{-(q+1)}(x') * (x' - x_a)^{-(s-1)})
    with x' the support without position a."""
    F = tower.ext
    x = np.asarray(x, dtype=np.int64)
    xa = int(x[a])
    xr = np.delete(x, a)
    q, r = tower.q, gamma.degree
    y = F.mul(F.pow(gamma(xr), -(q + 1)), F.pow(F.sub_(xr, xa), -(s - 1)))
    return alternant(tower, r * (q + 1) + s - 1, xr, y)
