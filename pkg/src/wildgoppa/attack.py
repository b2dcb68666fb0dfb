"""Black-box key recovery for wild Goppa codes over quadratic extensions.

Pipeline: climb the filtrations at two anchors, extract candidate norm
vectors N(x - x_anchor) from a conductor, match the candidates by pairs,
turn each pair into minimal polynomials of the support entries, and solve a
sparse linear problem on an extended support to pin down the support and the
column scaling.  Every recovered key is checked by exact code equality and by
a decoding round-trip before it is returned.

The anchors are treated as x_{i0} = 0 and x_{i1} = 1.  Alternant codes with
multiplier 1 are invariant under affine maps of the support, so the recovered
support is the secret one moved by the affine map with these values (or its
coordinate-wise Frobenius conjugate).
"""
from __future__ import annotations

import json
import logging
import time
from dataclasses import dataclass, field
from math import comb

import numpy as np

from . import linalg
from .algcode import (DecodingFailure, alternant, alternant_parity, decode, normalize_support,
                      random_error)
from .code import LinearCode, conductor, scale
from .distinguisher import filtration_intervals
from .field import FieldTower
from .filtration import (DegeneratePosition, FiltrationError, FiltrationState, climb_to,
                         negative_term, seed_filtration)
from .rng import make_rng

log = logging.getLogger(__name__)

MAX_ENUMERATION = 2_000_000


class AttackInfeasible(ValueError):
    """Parameters outside the range where the attack applies."""


class AttackError(RuntimeError):
    """A stage of the attack failed."""


class WrongPair(Exception):
    """A candidate pair was rejected by Steps 3-4."""


# --- transcript ------------------------------------------------------------------

@dataclass
class Stage:
    name: str
    info: dict
    seconds: float | None = None


@dataclass
class AttackTranscript:
    stages: list[Stage] = field(default_factory=list)

    def add(self, name: str, seconds: float | None = None, **info) -> Stage:
        st = Stage(name, info, seconds)
        self.stages.append(st)
        log.info("%s %s", name, info)
        return st

    def __getitem__(self, name: str) -> list[Stage]:
        return [s for s in self.stages if s.name == name]

    def to_json(self, timings: bool = False) -> str:
        """Staged report.  Timings are left out unless asked for, so that
        identical runs produce identical text."""
        out = []
        for s in self.stages:
            d = {"stage": s.name, **s.info}
            if timings and s.seconds is not None:
                d["seconds"] = round(s.seconds, 3)
            out.append(d)
        return json.dumps(out, indent=1, default=_jsonable) + "\n"


def _jsonable(v):
    if isinstance(v, np.integer):
        return int(v)
    if isinstance(v, np.ndarray):
        return v.tolist()
    raise TypeError(f"not serializable: {type(v)}")


class _Timer:
    def __enter__(self):
        self.t0 = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.seconds = time.perf_counter() - self.t0


# --- results ---------------------------------------------------------------------

@dataclass
class RecoveredKey:
    """public = u * Alt_degree(x, 1), i.e. public = Alt_degree(x, u^-1)."""
    x: np.ndarray  # GF(q^2) support
    u: np.ndarray  # nonzero GF(q) scalers
    degree: int

    def multiplier(self, tower: FieldTower) -> np.ndarray:
        """y with public = Alt_degree(x, y); entries lie in GF(q) < GF(q^2)."""
        return tower.mid.inv(self.u)

    def code(self, tower: FieldTower) -> LinearCode:
        return scale(self.u, alternant(tower, self.degree, self.x))


@dataclass
class AttackResult:
    key: RecoveredKey | None
    transcript: AttackTranscript
    anchors: tuple[int, int] | None = None

    @property
    def success(self) -> bool:
        return self.key is not None


# --- preconditions ---------------------------------------------------------------

def precondition_failures(q: int, n: int, r: int) -> list[str]:
    """Reasons the attack does not apply; empty when it does."""
    out = []
    if r < 2:
        out.append(f"r = {r} < 2")
    if r >= q:
        out.append(f"r = {r} >= q = {q}")
    if n <= 2 * q + 4:
        out.append(f"n = {n} <= 2q + 4 = {2 * q + 4}: candidate pairing needs n > 2q + 4")
    lhs, rhs = comb(r * (r + 2) + 2, 2), 2 * r * (q + 1) - 2
    if lhs <= rhs:
        out.append(f"C(r(r+2)+2, 2) = {lhs} <= 2r(q+1) - 2 = {rhs}: no distinguisher interval")
    return out


def choose_anchors(C: LinearCode) -> tuple[int, int]:
    """First two positions where the code is not identically zero."""
    good = np.flatnonzero(C.is_full_weight_somewhere())
    if good.size < 2:
        raise AttackError("fewer than two positions carry nonzero codewords")
    return int(good[0]), int(good[1])


def climb_plan(q: int, n: int, r: int) -> tuple[int, int, int]:
    """(top, s_hi, s_lo): climb the positive filtration to `top` and use the
    pair Coi(s_hi), Coi(s_lo) with s_hi - s_lo = q + 1.

    The default is top = q - r with Coi(q+1) = Coi(q-r) by stagnation.  When
    some term below q - r has no admissible shortening size, the highest
    reachable term is paired with a negative term.
    """
    top = max(q - r, 1)
    reach = 1
    for t in range(2, top + 1):
        iv = filtration_intervals(q, n, r, t)
        lo = n - 2 * r * (q + 1) - (t - 1)
        if iv is None or max(iv[0], lo) > iv[1]:
            break
        reach = t
    if reach == top:
        return top, q + 1, 0
    return reach, reach, reach - (q + 1)


def build_filtration(C: LinearCode, anchor: int, q: int, r: int, plan, rng,
                     shortcut: bool = False) -> FiltrationState:
    top, s_hi, s_lo = plan
    state = seed_filtration(C, anchor, q, r)
    climb_to(state, top, rng, sequential=True, shortcut=shortcut)
    if s_hi == q + 1 and top == q - r:
        state.terms[q + 1] = state.terms[top]
        state.events.append(f"term {q + 1} taken equal to term {top} (stagnation)")
    if s_lo < 0:
        negative_term(state, -s_lo, rng)
    return state


# --- Step 2: norm candidates -------------------------------------------------------

@dataclass
class NormCandidates:
    anchor: int
    positions: np.ndarray  # original coordinates of the length n-1 frame
    vectors: np.ndarray    # candidates for N(x - x_anchor), one per row
    d_dim: int


def _enumerate_normalized(D: LinearCode, j: int, limit: int = MAX_ENUMERATION) -> np.ndarray:
    """All codewords of D with coordinate j equal to 1."""
    F, G = D.field, D.generator
    col = G[:, j]
    nz = np.flatnonzero(col)
    if nz.size == 0:
        return np.zeros((0, D.n), dtype=np.int64)
    i0 = int(nz[0])
    v = F.mul(G[i0], F.sinv(int(col[i0])))
    others = [i for i in range(D.k) if i != i0]
    W = F.sub_(G[others], F.mul(col[others][:, None], v[None, :])) if others else np.zeros((0, D.n), np.int64)
    m = W.shape[0]
    total = F.order ** m
    if total > limit:
        raise AttackError(f"D has dimension {D.k}: {total} points exceed the enumeration limit")
    out = []
    step = max(1, min(total, 1 << 14))
    for start in range(0, total, step):
        idx = np.arange(start, min(start + step, total), dtype=np.int64)
        lam = np.stack([(idx // F.order ** i) % F.order for i in range(m)], axis=1) if m else \
            np.zeros((idx.size, 0), dtype=np.int64)
        vals = F.add(linalg.matmul(lam, W, F), v[None, :]) if m else np.repeat(v[None, :], idx.size, 0)
        out.append(vals)
    return np.vstack(out)


def recover_norm_candidates(state: FiltrationState, partner: int, s_hi: int, s_lo: int,
                            rng=None, limit: int = MAX_ENUMERATION) -> NormCandidates:
    """Full-weight solutions c of c * Coi(s_hi) in Coi(s_lo), with c = 1 at the
    partner anchor, inverted (the all-ones solution is dropped)."""
    F = state.code.field
    D = conductor(state.terms[s_hi], state.terms[s_lo], rng=rng)
    pos = state.positions()
    j = int(np.searchsorted(pos, partner))
    if j >= pos.size or pos[j] != partner:
        raise ValueError("partner anchor must differ from the filtration anchor")
    vals = _enumerate_normalized(D, j, limit)
    full = vals[np.all(vals != 0, axis=1)]
    full = full[~np.all(full == 1, axis=1)]
    return NormCandidates(state.anchor, pos, F.inv(full) if full.size else full, D.k)


# --- pairing -----------------------------------------------------------------------

def _projective_keys(P: np.ndarray, F) -> frozenset[bytes]:
    """Rows scaled so the first coordinate is 1, as a set of byte strings."""
    P = F.mul(P, F.inv(P[:, :1]))
    return frozenset(row.tobytes() for row in P)


def pair_candidates(L0: np.ndarray, L1: np.ndarray, F, events: list | None = None) -> list[tuple[int, int]]:
    """Match a0 in L0 with a1 in L1 when {a0 * c : c in L1} = {c' * a1 : c' in L0}
    up to scalars.  Rows of L0 and L1 are given on the same coordinates.

    Falls back to the largest overlap of the two sets for candidates without
    an exact partner (logged in `events`).
    """
    if L0.shape[0] == 0 or L1.shape[0] == 0:
        raise AttackError("empty candidate list")
    left = [_projective_keys(F.mul(a0[None, :], L1), F) for a0 in L0]
    right = [_projective_keys(F.mul(L0, a1[None, :]), F) for a1 in L1]
    index = {}
    for j, s in enumerate(right):
        index.setdefault(s, []).append(j)
    pairs, used = [], set()
    for i, s in enumerate(left):
        js = index.get(s, [])
        if len(js) == 1:
            pairs.append((i, js[0]))
            used.add(js[0])
    matched = {i for i, _ in pairs}
    for i, s in enumerate(left):
        if i in matched:
            continue
        scores = [(len(s & right[j]), -j) for j in range(len(right)) if j not in used]
        if not scores:
            break
        best = -max(scores)[1]
        pairs.append((i, best))
        used.add(best)
        if events is not None:
            events.append(f"candidate {i}: no exact set match, paired by overlap with {best}")
    if len(pairs) != L0.shape[0] and events is not None:
        events.append(f"{len(pairs)} pairs for {L0.shape[0]} candidates")
    return sorted(pairs)


@dataclass
class CandidateLists:
    L0: NormCandidates
    L1: NormCandidates
    pairs: list[tuple[int, int]]

    def full_norms(self, pair: tuple[int, int], n: int) -> tuple[np.ndarray, np.ndarray]:
        """Length-n vectors (N(x), N(x - 1)) with the anchor entries reinserted."""
        i, j = pair
        N0 = np.zeros(n, dtype=np.int64)
        N1 = np.zeros(n, dtype=np.int64)
        N0[self.L0.positions] = self.L0.vectors[i]
        N1[self.L1.positions] = self.L1.vectors[j]
        return N0, N1


def common_frame(A: NormCandidates, B: NormCandidates) -> tuple[np.ndarray, np.ndarray]:
    """Column selections of A.vectors and B.vectors restricted to positions
    outside both anchors."""
    drop = {A.anchor, B.anchor}
    ka = np.array([k for k, p in enumerate(A.positions) if p not in drop], dtype=np.int64)
    kb = np.array([k for k, p in enumerate(B.positions) if p not in drop], dtype=np.int64)
    return ka, kb


# --- Step 3: minimal polynomials and the extended support -------------------------------

@dataclass
class ExtendedSupportLayout:
    order: np.ndarray          # sigma: positions, rational first, then pairs, then lone entries
    counts: tuple[int, int, int]
    minimal: np.ndarray        # (n, 2): (trace, norm) of each position
    ext_positions: np.ndarray  # length n + l3: original position, -1 for inserted columns
    x_ext: np.ndarray          # arbitrary representative x'_ext
    blocks: list[tuple[str, int]]  # ("rat", c) / ("pair", c) / ("lone", c) by first ext column

    @property
    def ext_length(self) -> int:
        return self.ext_positions.size

    def extend_generator(self, G: np.ndarray) -> np.ndarray:
        G = np.asarray(G, dtype=np.int64)
        Ge = np.zeros((G.shape[0], self.ext_length), dtype=np.int64)
        real = self.ext_positions >= 0
        Ge[:, real] = G[:, self.ext_positions[real]]
        return Ge


def support_from_pair(tower: FieldTower, N0: np.ndarray, N1: np.ndarray) -> ExtendedSupportLayout:
    """Minimal polynomials z^2 - Tr z + N from N(x) and N(x - 1), and the
    extended-support layout built from them."""
    S = tower.mid
    tr = S.add(S.sub_(N0, N1), 1)
    n = N0.size
    groups: dict[tuple[int, int], list[int]] = {}
    roots: dict[tuple[int, int], list[int]] = {}
    for i in range(n):
        key = (int(tr[i]), int(N0[i]))
        if key not in roots:
            roots[key] = tower.roots_of_minimal(*key)
            if not roots[key]:
                raise WrongPair(f"position {i}: z^2 - {key[0]}z + {key[1]} has no root in GF(q^2)")
        groups.setdefault(key, []).append(i)
    rat, pairs, lone = [], [], []
    for key, members in groups.items():
        rts = roots[key]
        if len(rts) == 1:
            if len(members) > 1:
                raise WrongPair(f"rational value {rts[0]} at {len(members)} positions")
            rat.append((members[0], rts[0]))
        elif len(members) == 2:
            pairs.append((members, rts))
        elif len(members) == 1:
            lone.append((members[0], rts))
        else:
            raise WrongPair(f"minimal polynomial {key} shared by {len(members)} positions")
    rat.sort()
    pairs.sort(key=lambda m: m[0][0])
    lone.sort()
    order, ext_pos, x_ext, blocks = [], [], [], []
    for p, v in rat:
        blocks.append(("rat", len(ext_pos)))
        order.append(p)
        ext_pos.append(p)
        x_ext.append(v)
    for (p, p2), (v, w) in pairs:
        blocks.append(("pair", len(ext_pos)))
        order += [p, p2]
        ext_pos += [p, p2]
        x_ext += [v, w]
    for p, (v, w) in lone:
        blocks.append(("lone", len(ext_pos)))
        order.append(p)
        ext_pos += [p, -1]
        x_ext += [v, w]
    minimal = np.stack([tr, N0], axis=1)
    return ExtendedSupportLayout(np.array(order, dtype=np.int64), (len(rat), len(pairs), len(lone)),
                                 minimal, np.array(ext_pos, dtype=np.int64),
                                 np.array(x_ext, dtype=np.int64), blocks)


# --- Step 4: the final linear problem ---------------------------------------------------

def _unknowns(layout: ExtendedSupportLayout) -> tuple[np.ndarray, np.ndarray]:
    """(row, column) of every unknown entry of M."""
    rows, cols = [], []
    for kind, c in layout.blocks:
        if kind == "rat":
            cells = [(c, c)]
        elif kind == "pair":
            cells = [(c, c), (c, c + 1), (c + 1, c), (c + 1, c + 1)]
        else:  # the inserted column carries zeros, so its row of M is irrelevant
            cells = [(c, c), (c, c + 1)]
        for a, b in cells:
            rows.append(a)
            cols.append(b)
    return np.array(rows, dtype=np.int64), np.array(cols, dtype=np.int64)


@dataclass
class FinalProblem:
    layout: ExtendedSupportLayout
    rows: np.ndarray
    cols: np.ndarray
    solutions: np.ndarray  # basis of the solution space, one row per vector
    equations: int

    @property
    def dim(self) -> int:
        return self.solutions.shape[0]


def final_linear_problem(tower: FieldTower, C: LinearCode, layout: ExtendedSupportLayout, degree: int,
                         rng: np.random.Generator | None = None, extra: int = 20,
                         budget: int = 1 << 22) -> FinalProblem:
    """Solve H (G_ext M)^T = 0 for M with the block pattern of the layout.

    Each pair (g, h) of a generator row and a parity row gives the equation
    sum_u g[row_u] h[col_u] M_u = 0.  With rng, only (#unknowns + extra)
    equations from random combinations of generator and parity rows are used.
    """
    F = tower.mid
    Ge = layout.extend_generator(C.generator)
    H = linalg.rref(alternant_parity(tower, degree, layout.x_ext, np.ones(layout.ext_length, np.int64)), F)[0]
    rows, cols = _unknowns(layout)
    U = rows.size
    Gr, Hc = Ge[:, rows], H[:, cols]
    k, h = Gr.shape[0], Hc.shape[0]
    if rng is not None:
        # random combinations g = lam G, h = mu H; a plain subset of the
        # equations is rank deficient because the RREF rows of G are sparse
        m = U + extra
        g = linalg.matmul(F.random(rng, size=(m, k)), Gr, F)
        hh = linalg.matmul(F.random(rng, size=(m, h)), Hc, F)
        R, piv = linalg.rref(F.mul(g, hh), F)
        neq = m
    else:
        per = max(1, budget // max(h * U, 1))

        def blocks():
            for a in range(0, k, per):
                yield F.mul(Gr[a:a + per, None, :], Hc[None, :, :]).reshape(-1, U)

        R, piv = linalg.rref_blocks(blocks(), U, F)
        neq = k * h
    V = linalg.kernel_from_rref(R, piv, U, F)
    return FinalProblem(layout, rows, cols, V, neq)


def _projective_points(F, d: int) -> np.ndarray:
    """One representative per point of P^{d-1}(F): first nonzero entry 1."""
    pts = []
    q = F.order
    for lead in range(d):
        m = d - lead - 1
        idx = np.arange(q ** m, dtype=np.int64)
        tail = np.stack([(idx // q ** i) % q for i in range(m)], axis=1) if m else np.zeros((1, 0), np.int64)
        block = np.zeros((tail.shape[0], d), dtype=np.int64)
        block[:, lead] = 1
        block[:, lead + 1:] = tail
        pts.append(block)
    return np.vstack(pts)


def structured_solutions(problem: FinalProblem, F, limit: int = MAX_ENUMERATION) -> list[np.ndarray]:
    """Solutions of the form R_tau D: every row of M has exactly one nonzero
    and each 2x2 block is diagonal or anti-diagonal."""
    d = problem.dim
    if d == 0:
        return []
    if F.order ** (d - 1) > limit:
        raise WrongPair(f"solution space of dimension {d} too large to search")
    P = _projective_points(F, d)
    Mv = linalg.matmul(P, problem.solutions, F)
    ok = np.ones(P.shape[0], dtype=bool)
    u = 0
    for kind, _ in problem.layout.blocks:
        if kind == "rat":
            ok &= Mv[:, u] != 0
            u += 1
        elif kind == "pair":
            a, b, c, e = (Mv[:, u + i] != 0 for i in range(4))
            ok &= (a & e & ~b & ~c) | (b & c & ~a & ~e)
            u += 4
        else:
            a, b = Mv[:, u] != 0, Mv[:, u + 1] != 0
            ok &= a ^ b
            u += 2
    return [Mv[i] for i in np.flatnonzero(ok)]


def key_from_solution(problem: FinalProblem, m: np.ndarray, tower: FieldTower, n: int,
                      degree: int) -> RecoveredKey:
    """Read the support and scaling off a structured M."""
    lay = problem.layout
    x = np.full(n, -1, dtype=np.int64)
    dvals = np.zeros(n, dtype=np.int64)
    nz = np.flatnonzero(m)
    for u in nz:
        p = lay.ext_positions[problem.rows[u]]
        x[p] = lay.x_ext[problem.cols[u]]
        dvals[p] = m[u]
    if np.any(x < 0):
        raise WrongPair("structured solution leaves positions unassigned")
    return RecoveredKey(x, tower.mid.inv(dvals), degree)


# --- verification ---------------------------------------------------------------------

def verify_key(tower: FieldTower, C: LinearCode, key: RecoveredKey) -> bool:
    return key.code(tower) == C


def decode_roundtrip(tower: FieldTower, C: LinearCode, key: RecoveredKey, rng: np.random.Generator) -> bool:
    """Encode a random message, add floor(degree/2) errors, decode with (x, u^-1)."""
    F = tower.mid
    t = key.degree // 2
    cw = C.random_word(rng)
    e = random_error(F, C.n, t, rng)
    try:
        got, err = decode(tower, key.x, key.multiplier(tower), key.degree, F.add(cw, e))
    except DecodingFailure:
        return False
    return bool(np.array_equal(got, cw) and np.array_equal(err, e))


# --- driver ---------------------------------------------------------------------------

def try_pair(tower: FieldTower, C: LinearCode, lists: CandidateLists, pair, degree: int,
             rng=None) -> tuple[RecoveredKey | None, dict]:
    """Steps 3-4 for one candidate pair."""
    info: dict = {"pair": list(pair)}
    N0, N1 = lists.full_norms(pair, C.n)
    try:
        layout = support_from_pair(tower, N0, N1)
        info["layout"] = list(layout.counts)
        problem = final_linear_problem(tower, C, layout, degree, rng=rng)
        info["unknowns"] = int(problem.rows.size)
        info["equations"] = int(problem.equations)
        info["solution_dim"] = problem.dim
        sols = structured_solutions(problem, tower.mid)
        info["structured"] = len(sols)
        for m in sols:
            key = key_from_solution(problem, m, tower, C.n, degree)
            if verify_key(tower, C, key):
                info["verdict"] = "recovered"
                return key, info
        info["verdict"] = "rejected: no structured solution reproduces the code"
    except WrongPair as exc:
        info["verdict"] = f"rejected: {exc}"
    return None, info


def run_attack(C: LinearCode, q: int, r: int, seed: int, shortcut: bool = False,
               max_trials: int | None = None, tower: FieldTower | None = None) -> AttackResult:
    """Recover (x, u) with C = u * Alt_{r(q+1)}(x, 1) from the public code alone."""
    tower = tower or FieldTower.get(q)
    n = C.n
    tr = AttackTranscript()
    problems = precondition_failures(q, n, r)
    tr.add("preconditions", q=q, n=n, k=C.k, r=r, ok=not problems, failures=problems)
    if problems:
        raise AttackInfeasible("; ".join(problems))
    if C.field is not tower.mid:
        raise ValueError("public code must be over GF(q) of the given tower")
    try:
        return _attack_body(C, q, r, seed, shortcut, max_trials, tower, tr)
    except AttackError as exc:
        tr.add("verdict", success=False, reason=str(exc))
        return AttackResult(None, tr)


def _attack_body(C: LinearCode, q: int, r: int, seed: int, shortcut: bool, max_trials: int | None,
                 tower: FieldTower, tr: AttackTranscript) -> AttackResult:
    n, R = C.n, r * (q + 1)
    i0, i1 = choose_anchors(C)
    tr.add("anchors", positions=[i0, i1])
    plan = climb_plan(q, n, r)
    top, s_hi, s_lo = plan
    tr.add("plan", climb_to=top, s_hi=s_hi, s_lo=s_lo)

    cands = []
    for a, partner in ((i0, i1), (i1, i0)):
        rng = make_rng(seed, "attack", "filtration", a)
        with _Timer() as tm:
            try:
                state = build_filtration(C, a, q, r, plan, rng, shortcut=shortcut)
            except (FiltrationError, DegeneratePosition) as exc:
                raise AttackError(f"filtration at anchor {a}: {exc}") from exc
        dims = {str(s): state.terms[s].k for s in sorted(state.terms)}
        tr.add("filtration", tm.seconds, anchor=a, dims=dims, events=list(state.events))
        with _Timer() as tm:
            nc = recover_norm_candidates(state, partner, s_hi, s_lo,
                                         rng=make_rng(seed, "attack", "D", a) if shortcut else None)
        tr.add("norm_candidates", tm.seconds, anchor=a, d_dim=nc.d_dim, d_dim_expected=4,
               candidates=int(nc.vectors.shape[0]), expected=q * q - n + 1)
        if nc.vectors.shape[0] == 0:
            tr.add("verdict", success=False, reason=f"no full-weight candidate at anchor {a}")
            return AttackResult(None, tr, (i0, i1))
        cands.append(nc)

    L0, L1 = cands
    ka, kb = common_frame(L0, L1)
    events: list[str] = []
    with _Timer() as tm:
        pairs = pair_candidates(L0.vectors[:, ka], L1.vectors[:, kb], tower.mid, events)
    tr.add("pairing", tm.seconds, pairs=len(pairs), events=events)
    lists = CandidateLists(L0, L1, pairs)

    order = make_rng(seed, "attack", "pairs").permutation(len(pairs))
    if max_trials is not None:
        order = order[:max_trials]
    for trial, idx in enumerate(order):
        srng = make_rng(seed, "attack", "final", trial) if shortcut else None
        with _Timer() as tm:
            key, info = try_pair(tower, C, lists, pairs[idx], R, rng=srng)
        tr.add("pair_trial", tm.seconds, trial=trial, **info)
        if key is None:
            continue
        ok = decode_roundtrip(tower, C, key, make_rng(seed, "attack", "decode"))
        tr.add("verification", code_equality=True, decode_roundtrip=ok, errors=R // 2)
        if ok:
            tr.add("verdict", success=True, trials=trial + 1)
            return AttackResult(key, tr, (i0, i1))
    tr.add("verdict", success=False, reason="candidate pairs exhausted", trials=len(order))
    return AttackResult(None, tr, (i0, i1))


def matches_secret(tower: FieldTower, key: RecoveredKey, x_secret, anchors: tuple[int, int]) -> bool:
    """White-box check: the recovered support is the normalized secret support
    or its Frobenius conjugate."""
    xn, _ = normalize_support(tower, np.asarray(x_secret), *anchors)
    return bool(np.array_equal(key.x, xn) or np.array_equal(key.x, tower.frobenius(xn)))
