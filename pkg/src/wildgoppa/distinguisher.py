"""Square-code distinguisher: intervals, dimension profiles, feasibility tables."""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from math import comb
from typing import Iterable

from .code import LinearCode, shorten, square
from .field import prime_power
from .rng import make_rng


def _largest_satisfying(lo: int, hi: int, pred) -> int | None:
    """Largest b in [lo, hi] with pred(b), scanning down from hi."""
    for b in range(hi, lo - 1, -1):
        if pred(b):
            return b
    return None


def _interval(q: int, n: int, r: int, slack: int, lo: int):
    R = r * (q + 1)

    def alt_dim(a):  # dimension estimate of the alternant containing the square
        return 3 * (n - a) - 4 * R - slack

    tops = [a for a in range(lo, n + 1) if alt_dim(a) > 0]
    if not tops:
        return None
    hi = _largest_satisfying(lo, tops[-1], lambda a: comb(max(n - a - 2 * R + r * (r + 2) + 1, 0), 2) > alt_dim(a))
    if hi is None:
        return None
    return lo, hi


def interval_strict(q: int, n: int, r: int) -> tuple[int, int] | None:
    """[a-, a+] where shortened wild Goppa squares provably fall below random ones."""
    if r >= q:
        raise ValueError("requires r < q")
    if comb(r * (r + 2) + 1, 2) <= 2 * r * (q + 1) - 2:
        return None
    return _interval(q, n, r, 2, n - 2 * r * (q + 1))


def interval_experimental(q: int, n: int, r: int) -> tuple[int, int] | None:
    """Interval under the observed codimension-1 behaviour of the square."""
    if r >= q:
        raise ValueError("requires r < q")
    if comb(r * (r + 2) + 2, 2) <= 2 * r * (q + 1):
        return None
    return _interval(q, n, r, 3, n - 2 * r * (q + 1) - 1)


def random_square_dim(n: int, k: int) -> int:
    """Generic square dimension min{n, C(k+1, 2)}."""
    return min(n, comb(k + 1, 2)) if k > 0 else 0


def filtration_intervals(q: int, n: int, r: int, t: int):
    """Shortening sizes [b-, b+] where the product of the two middle terms
    of the t-th filtration step behaves non-generically."""
    if t in (0, 1):
        raise ValueError("filtration step requires t >= 2 (or a negative index)")
    R = r * (q + 1)
    rr = r * (r + 2)
    lo = n - 2 * R - t
    if t % 2 == 0:
        if comb(rr + 2, 2) <= 2 * R + t - 2:
            return None

        def prod(b):
            return comb(max(n - b - 2 * R - t + 2 + rr, 0), 2)
    else:
        if rr * (rr + 5) // 2 <= 2 * R + t - 2:
            return None
        s = (t - 1) // 2

        def prod(b):
            d = max((n - 1 - b) - 2 * R - 2 * s + rr, 0)
            return d * (d + 5) // 2

    def alt_dim(b):
        return 3 * (n - 1 - b) - 4 * R - 2 * t + 1

    lo = max(lo, 0)
    cands = [b for b in range(lo, n) if alt_dim(b) > 0]
    if not cands:
        return None
    hi = _largest_satisfying(lo, max(cands), lambda b: prod(b) > alt_dim(b))
    if hi is None:
        return None
    return lo, hi


def filtration_target_dim(q: int, n: int, r: int, t: int) -> int:
    """k(t) = (n-1) - 2r(q+1) - 2t + 2 + r(r+2), the generic dim of the t-th term."""
    return (n - 1) - 2 * r * (q + 1) - 2 * t + 2 + r * (r + 2)


@dataclass
class ProfileRow:
    size: int
    goppa_dim: int
    random_dim: int
    samples: list[int] = field(default_factory=list)

    @property
    def varied(self) -> bool:
        return len(set(self.samples)) > 1


@dataclass
class DistinguisherReport:
    q: int
    n: int
    k: int
    r: int
    interval: tuple[int, int] | None
    rows: list[ProfileRow]

    @property
    def distinguishable(self) -> bool:
        return any(row.goppa_dim < row.random_dim for row in self.rows)

    def csv(self) -> str:
        lines = ["size,goppa_dim,random_dim"]
        lines += [f"{row.size},{row.goppa_dim},{row.random_dim}" for row in self.rows]
        return "\n".join(lines) + "\n"


def dimension_profile(C: LinearCode, sizes: Iterable[int], trials: int, seed: int,
                      rng_label: str = "profile") -> list[ProfileRow]:
    """Modal dim of square(shorten(C, I)) over `trials` random I per size,
    next to the random-code value min{n - a, C(k - a + 1, 2)}."""
    rows = []
    for a in sizes:
        if not 0 <= a < C.k:
            raise ValueError(f"shortening size {a} outside [0, {C.k})")
        rng = make_rng(seed, rng_label, a)
        dims = []
        for _ in range(trials):
            I = rng.choice(C.n, size=a, replace=False)
            dims.append(square(shorten(C, I)).k)
        modal = Counter(dims).most_common(1)[0][0]
        rows.append(ProfileRow(a, modal, random_square_dim(C.n - a, C.k - a), dims))
    return rows


def distinguish(C: LinearCode, q: int, r: int, seed: int, trials: int = 5,
                experimental: bool = True, sizes: Iterable[int] | None = None) -> DistinguisherReport:
    n = C.n
    iv = interval_experimental(q, n, r) if experimental else interval_strict(q, n, r)
    if sizes is None:
        if iv is None:
            lo = max(n - 2 * r * (q + 1) - 1, 0)
            sizes = range(lo, min(lo + 8, C.k))
        else:
            sizes = range(max(iv[0], 0), min(iv[1] + 9, C.k))
    rows = dimension_profile(C, sizes, trials, seed)
    return DistinguisherReport(q, n, C.k, r, iv, rows)


# --- feasibility -----------------------------------------------------------

def is_prime_power(q: int) -> bool:
    try:
        prime_power(q)
    except ValueError:
        return False
    return True


def feasible_strict(q: int, r: int) -> bool:
    return comb(r * (r + 2) + 1, 2) > 2 * r * (q + 1) - 2


def feasible_experimental(q: int, r: int) -> bool:
    return comb(r * (r + 2) + 2, 2) > 2 * r * (q + 1)


def max_feasible_q(r: int, experimental: bool, limit: int = 4096) -> int | None:
    """Largest prime power q > r for which the distinguisher interval is nonempty."""
    test = feasible_experimental if experimental else feasible_strict
    best = None
    for q in range(r + 1, limit):
        if is_prime_power(q) and test(q, r):
            best = q
    return best


def feasibility_table(rs: Iterable[int] = (2, 3, 4, 5)) -> dict[str, dict[int, int | None]]:
    rs = list(rs)
    return {
        "strict": {r: max_feasible_q(r, False) for r in rs},
        "experimental": {r: max_feasible_q(r, True) for r in rs},
    }
