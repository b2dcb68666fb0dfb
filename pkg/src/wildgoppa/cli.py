"""Command-line front end: wildgoppa <command> [options].

Every randomized command takes --seed; identical arguments produce
byte-identical output files.  Timings go to stderr only.
"""
from __future__ import annotations

import argparse
import logging
import sys
import time

from .algcode import DecodingFailure, check_params, decode, encrypt, keygen, solve_message
from .attack import AttackInfeasible, matches_secret, run_attack
from .code import LinearCode, ParseError
from .distinguisher import distinguish, feasibility_table, interval_experimental, interval_strict
from .filtration import FiltrationError, climb_to, coi_oracle, seed_filtration
from .keyfile import (atomic_write, format_ciphertext, format_key, format_recovered, format_vector,
                      parse_ciphertext, read_key)
from .rng import make_rng

log = logging.getLogger("wildgoppa")

EXIT_INDISTINGUISHABLE = 2
EXIT_EXHAUSTED = 3
EXIT_MISMATCH = 4
EXIT_USAGE = 64

TABLE_PARAMS = ((9, 81, 3), (13, 160, 4), (29, 781, 5), (29, 794, 5))


def _public(kf) -> LinearCode:
    if kf.public is None:
        raise ParseError(1, "key file has no public.G block")
    return kf.public


def _require_secret(kf, what: str):
    if not kf.has_secret:
        raise ParseError(1, f"{what} needs secret.x and secret.gamma")


def cmd_keygen(args) -> int:
    check_params(args.q, args.n, args.r)
    key = keygen(args.q, args.n, args.r, args.seed)
    atomic_write(args.out, format_key(key))
    print(f"k={key.k}")
    return 0


def cmd_encrypt(args) -> int:
    kf = read_key(args.key, read_secret=False)
    C = _public(kf)
    t = args.t if args.t is not None else kf.r * (kf.q + 1) // 2
    if not 0 <= t <= kf.n:
        raise ValueError(f"error weight {t} outside [0, {kf.n}]")
    rng = make_rng(args.seed, "cli", "encrypt")
    F = kf.tower.mid
    m = F.random(rng, size=C.k)
    c = encrypt(kf.tower, kf.public_matrix, m, t, rng)
    atomic_write(args.out, format_ciphertext(c, t))
    if args.message_out:
        atomic_write(args.message_out, format_vector(m))
    return 0


def cmd_decrypt(args) -> int:
    kf = read_key(args.key, read_secret=args.recovered is None)
    _public(kf)
    if args.recovered:
        rk = read_key(args.recovered).recovered
        if rk is None:
            raise ParseError(1, f"{args.recovered} holds no recovered key")
        x, y, ell = rk.x, rk.multiplier(kf.tower), rk.degree
    else:
        _require_secret(kf, "decrypt")
        F = kf.tower.ext
        x = kf.secret_x
        y = F.pow(kf.secret_gamma(x), -(kf.q + 1))
        ell = kf.r * (kf.q + 1)
    with open(args.ciphertext) as fh:
        c, _ = parse_ciphertext(fh.read(), kf.q)
    if c.size != kf.n:
        raise ParseError(1, f"ciphertext length {c.size} differs from n = {kf.n}")
    cw, _ = decode(kf.tower, x, y, ell, c)
    m = solve_message(kf.tower, kf.public_matrix, cw)
    atomic_write(args.out, format_vector(m))
    return 0


def cmd_distinguish(args) -> int:
    kf = read_key(args.key, read_secret=False)
    C = _public(kf)
    sizes = range(args.sizes[0], args.sizes[1] + 1) if args.sizes else None
    rep = distinguish(C, kf.q, kf.r, args.seed, trials=args.trials,
                      experimental=args.experimental, sizes=sizes)
    for row in rep.rows:
        if row.varied:
            log.info("size %d: per-I dims %s", row.size, row.samples)
    atomic_write(args.out, rep.csv())
    return 0 if rep.distinguishable else EXIT_INDISTINGUISHABLE


def cmd_filtration(args) -> int:
    kf = read_key(args.key, read_secret=args.white_box)
    C = _public(kf)
    if args.white_box:
        _require_secret(kf, "--white-box")
    state = seed_filtration(C, args.anchor, kf.q, kf.r)
    rng = make_rng(args.seed, "cli", "filtration", args.anchor)
    climb_to(state, args.target, rng, sequential=not args.doubling, shortcut=args.shortcut)
    header = "s,dim,target_dim" + (",oracle_equal" if args.white_box else "")
    lines = [header]
    ok = True
    for s in sorted(state.terms):
        row = f"{s},{state.terms[s].k},{state.target_dim(s) if s >= 2 else ''}"
        if args.white_box:
            eq = state.terms[s] == coi_oracle(kf.tower, kf.secret_x, kf.secret_gamma, args.anchor, s)
            ok &= eq
            row += f",{int(eq)}"
        lines.append(row)
    for ev in state.events:
        log.info("%s", ev)
    atomic_write(args.out, "\n".join(lines) + "\n")
    return 0 if ok else EXIT_MISMATCH


def cmd_attack(args) -> int:
    kf = read_key(args.key, read_secret=args.white_box)
    C = _public(kf)
    if args.white_box:
        _require_secret(kf, "--white-box")
    t0 = time.perf_counter()
    res = run_attack(C, kf.q, kf.r, args.seed, shortcut=args.shortcut,
                     max_trials=args.max_trials, tower=kf.tower)
    print(f"attack finished in {time.perf_counter() - t0:.2f} s", file=sys.stderr)
    for st in res.transcript.stages:
        if st.seconds is not None:
            print(f"  {st.name}: {st.seconds:.3f} s", file=sys.stderr)
    if args.white_box:
        match = res.success and matches_secret(kf.tower, res.key, kf.secret_x, res.anchors)
        res.transcript.add("white_box", support_matches_secret=bool(match))
    if args.report:
        atomic_write(args.report, res.transcript.to_json())
    if not res.success:
        return EXIT_EXHAUSTED
    atomic_write(args.out, format_recovered(kf.tower, res.key, kf.r))
    return 0


def cmd_tables(args) -> int:
    tab = feasibility_table(args.r)
    lines = ["variant," + ",".join(f"r={r}" for r in args.r)]
    for name in ("strict", "experimental"):
        lines.append(name + "," + ",".join(str(tab[name][r]) for r in args.r))
    diff = [r for r in args.r if tab["strict"][r] != tab["experimental"][r]]
    if diff:
        lines.append("# variants disagree at r=" + ",".join(map(str, diff)))
    lines.append("")
    lines.append("q,n,r,strict_interval,experimental_interval")
    for q, n, r in args.params or TABLE_PARAMS:
        s, e = interval_strict(q, n, r), interval_experimental(q, n, r)
        fmt = lambda iv: "none" if iv is None else f"{iv[0]}..{iv[1]}"
        lines.append(f"{q},{n},{r},{fmt(s)},{fmt(e)}")
    text = "\n".join(lines) + "\n"
    if args.out:
        atomic_write(args.out, text)
    else:
        sys.stdout.write(text)
    return 0


def _triple(s: str) -> tuple[int, int, int]:
    try:
        q, n, r = (int(v) for v in s.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError("expected q,n,r") from None
    return q, n, r


def _range(s: str) -> tuple[int, int]:
    try:
        lo, hi = (int(v) for v in s.split(":"))
    except ValueError:
        raise argparse.ArgumentTypeError("expected lo:hi") from None
    return lo, hi


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="wildgoppa", description=__doc__.splitlines()[0])
    p.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = p.add_subparsers(dest="command", required=True)

    def cmd(name, fn, help_, seed=True):
        sp = sub.add_parser(name, help=help_)
        if seed:
            sp.add_argument("--seed", type=int, required=True)
        sp.set_defaults(func=fn)
        return sp

    sp = cmd("keygen", cmd_keygen, "generate a wild McEliece key")
    sp.add_argument("--q", type=int, required=True)
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--r", type=int, required=True)
    sp.add_argument("--out", required=True)

    sp = cmd("encrypt", cmd_encrypt, "encrypt a random message under the public key")
    sp.add_argument("--key", required=True)
    sp.add_argument("--t", type=int, help="error weight (default floor(r(q+1)/2))")
    sp.add_argument("--out", required=True)
    sp.add_argument("--message-out")

    sp = cmd("decrypt", cmd_decrypt, "decrypt with the secret key or a recovered key", seed=False)
    sp.add_argument("--key", required=True)
    sp.add_argument("--recovered", help="recovered key file to decode with instead of the secret")
    sp.add_argument("--ciphertext", required=True)
    sp.add_argument("--out", required=True)

    sp = cmd("distinguish", cmd_distinguish, "square-code dimension profile (CSV)")
    sp.add_argument("--key", required=True)
    sp.add_argument("--out", required=True)
    sp.add_argument("--trials", type=int, default=5)
    sp.add_argument("--sizes", type=_range, help="shortening sizes lo:hi (inclusive)")
    sp.add_argument("--experimental", action=argparse.BooleanOptionalAction, default=True,
                    help="use the experimental interval (default) rather than the strict one")

    sp = cmd("filtration", cmd_filtration, "compute filtration dimensions at an anchor")
    sp.add_argument("--key", required=True)
    sp.add_argument("--anchor", type=int, default=0)
    sp.add_argument("--target", type=int, required=True)
    sp.add_argument("--doubling", action="store_true", help="compute only the halving schedule")
    sp.add_argument("--shortcut", action="store_true")
    sp.add_argument("--white-box", action="store_true", help="compare every term with the secret oracle")
    sp.add_argument("--out", required=True)

    sp = cmd("attack", cmd_attack, "recover an equivalent private key from the public block")
    sp.add_argument("--key", required=True)
    sp.add_argument("--out", required=True, help="recovered key file")
    sp.add_argument("--report", help="JSON transcript")
    sp.add_argument("--shortcut", action="store_true", help="probabilistic linear algebra")
    sp.add_argument("--max-trials", type=int)
    sp.add_argument("--white-box", action="store_true", help="also compare with the secret support")

    sp = cmd("tables", cmd_tables, "feasibility and interval tables", seed=False)
    sp.add_argument("--r", type=int, nargs="+", default=[2, 3, 4, 5])
    sp.add_argument("--params", type=_triple, action="append", help="q,n,r (repeatable)")
    sp.add_argument("--out")
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(name)s: %(message)s", stream=sys.stderr)
    try:
        return args.func(args)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (AttackInfeasible, FiltrationError, DecodingFailure, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
