"""Line-oriented text formats for keys, recovered keys and ciphertexts.

Key file::

    WGKEY v1
    q=9 m=2 n=81 r=3
    modulus.base=<e+1 integers over GF(p), low to high>
    modulus.ext=<3 integers over GF(q), low to high>
    secret.x=<n integers>
    secret.gamma=<r+1 integers>
    public.G=
    <matrix block: 'n k mid' then k rows>

A recovered key replaces the secret lines by recovered.degree=,
recovered.x= and recovered.u= and carries no public block.  A ciphertext
file is 'n t' followed by one line of n integers.
"""
from __future__ import annotations

import os
import tempfile
from dataclasses import dataclass
from io import StringIO
from pathlib import Path

import numpy as np

from .algcode import WildKeyPair
from .attack import RecoveredKey
from .code import LinearCode, ParseError, read_matrix, write_matrix
from .field import FieldTower, Poly

MAGIC = "WGKEY v1"


def _ints(v) -> str:
    return " ".join(str(int(c)) for c in v)


def atomic_write(path, text: str):
    """Write text to path through a temporary file in the same directory."""
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=path.parent or ".", prefix=f".{path.name}.")
    try:
        with os.fdopen(fd, "w", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _header(tower: FieldTower, n: int, r: int) -> list[str]:
    return [MAGIC, f"q={tower.q} m=2 n={n} r={r}",
            f"modulus.base={_ints(tower.modulus_base)}",
            f"modulus.ext={_ints(tower.modulus_ext)}"]


def format_key(key: WildKeyPair) -> str:
    lines = _header(key.tower, key.n, key.r)
    lines.append(f"secret.x={_ints(key.x)}")
    lines.append(f"secret.gamma={_ints(key.gamma.coeffs)}")
    lines.append("public.G=")
    buf = StringIO()
    write_matrix(buf, key.public_matrix, "mid")
    return "\n".join(lines) + "\n" + buf.getvalue()


def format_recovered(tower: FieldTower, key: RecoveredKey, r: int) -> str:
    lines = _header(tower, key.x.size, r)
    lines.append(f"recovered.degree={key.degree}")
    lines.append(f"recovered.x={_ints(key.x)}")
    lines.append(f"recovered.u={_ints(key.u)}")
    return "\n".join(lines) + "\n"


@dataclass
class KeyFile:
    """Parsed contents of a key file; absent fields are None."""
    tower: FieldTower
    q: int
    n: int
    r: int
    public: LinearCode | None = None
    public_matrix: np.ndarray | None = None
    secret_x: np.ndarray | None = None
    secret_gamma: Poly | None = None
    recovered: RecoveredKey | None = None

    @property
    def has_secret(self) -> bool:
        return self.secret_x is not None and self.secret_gamma is not None


def _vector(value: str, lineno: int, length: int | None, order: int) -> np.ndarray:
    try:
        v = np.array([int(t) for t in value.split()], dtype=np.int64)
    except ValueError:
        raise ParseError(lineno, "non-integer entry") from None
    if length is not None and v.size != length:
        raise ParseError(lineno, f"expected {length} entries, got {v.size}")
    if v.size and (v.min() < 0 or v.max() >= order):
        raise ParseError(lineno, f"entry outside [0, {order})")
    return v


def _tower(q: int, base, ext, line_base: int, line_ext: int) -> FieldTower:
    default = FieldTower.get(q)
    if tuple(base) == default.modulus_base and tuple(ext) == default.modulus_ext:
        return default
    try:
        FieldTower(q, base)
    except ValueError as exc:
        raise ParseError(line_base, str(exc)) from None
    try:
        return FieldTower(q, base, ext)
    except ValueError as exc:
        raise ParseError(line_ext, str(exc)) from None


def parse_key(text: str, read_secret: bool = True) -> KeyFile:
    """Parse a key or recovered-key file.

    With read_secret=False every secret.* line is skipped unread, so a
    black-box consumer cannot depend on it.
    """
    lines = text.splitlines()
    if not lines or lines[0].strip() != MAGIC:
        raise ParseError(1, f"expected {MAGIC!r}")
    if len(lines) < 2:
        raise ParseError(2, "missing parameter line")
    params = {}
    for tok in lines[1].split():
        k, sep, v = tok.partition("=")
        if not sep:
            raise ParseError(2, f"malformed parameter {tok!r}")
        try:
            params[k] = int(v)
        except ValueError:
            raise ParseError(2, f"parameter {k} is not an integer") from None
    for k in ("q", "m", "n", "r"):
        if k not in params:
            raise ParseError(2, f"missing parameter {k}")
    if params["m"] != 2:
        raise ParseError(2, "only m=2 is supported")
    q, n, r = params["q"], params["n"], params["r"]
    try:
        FieldTower.get(q)
    except ValueError as exc:
        raise ParseError(2, str(exc)) from None

    fields: dict[str, tuple[int, str]] = {}
    G = None
    i = 2
    while i < len(lines):
        line = lines[i].strip()
        i += 1
        if not line:
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise ParseError(i, f"expected 'name=value', got {line!r}")
        if key == "public.G":
            if value.strip():
                raise ParseError(i, "public.G= must be followed by a matrix block")
            hdr = i + 1
            G, level, i = read_matrix(lines, i, order=q)
            if level != "mid":
                raise ParseError(hdr, "public matrix must be over GF(q)")
            if G.shape[1] != n:
                raise ParseError(hdr, f"public matrix has length {G.shape[1]}, expected {n}")
            continue
        if key.startswith("secret.") and not read_secret:
            continue
        if key in fields:
            raise ParseError(i, f"duplicate field {key}")
        fields[key] = (i, value)

    for need in ("modulus.base", "modulus.ext"):
        if need not in fields:
            raise ParseError(len(lines), f"missing {need}")
    lb, vb = fields.pop("modulus.base")
    le, ve = fields.pop("modulus.ext")
    base = _vector(vb, lb, None, 10**9)
    ext = _vector(ve, le, 3, q)
    tower = _tower(q, base.tolist(), ext.tolist(), lb, le)
    kf = KeyFile(tower, q, n, r)
    if G is not None:
        kf.public_matrix = G
        kf.public = LinearCode(tower.mid, G, n)

    Q = q * q
    if "secret.x" in fields:
        ln, v = fields.pop("secret.x")
        kf.secret_x = _vector(v, ln, n, Q)
    if "secret.gamma" in fields:
        ln, v = fields.pop("secret.gamma")
        kf.secret_gamma = Poly(tower.ext, _vector(v, ln, r + 1, Q).tolist())
    rec = [f for f in ("recovered.degree", "recovered.x", "recovered.u") if f in fields]
    if rec:
        if len(rec) != 3:
            raise ParseError(len(lines), "incomplete recovered key")
        ln, v = fields.pop("recovered.degree")
        try:
            degree = int(v)
        except ValueError:
            raise ParseError(ln, "degree is not an integer") from None
        ln, v = fields.pop("recovered.x")
        x = _vector(v, ln, n, Q)
        ln, v = fields.pop("recovered.u")
        u = _vector(v, ln, n, q)
        if np.any(u == 0):
            raise ParseError(ln, "scalers must be nonzero")
        kf.recovered = RecoveredKey(x, u, degree)
    if fields:
        name, (ln, _) = min(fields.items(), key=lambda kv: kv[1][0])
        raise ParseError(ln, f"unknown field {name}")
    return kf


def read_key(path, read_secret: bool = True) -> KeyFile:
    return parse_key(Path(path).read_text(), read_secret=read_secret)


def format_ciphertext(c: np.ndarray, t: int) -> str:
    return f"{c.size} {t}\n{_ints(c)}\n"


def parse_ciphertext(text: str, order: int) -> tuple[np.ndarray, int]:
    lines = text.splitlines()
    if not lines:
        raise ParseError(1, "empty ciphertext file")
    head = lines[0].split()
    if len(head) != 2:
        raise ParseError(1, "ciphertext header must be 'n t'")
    try:
        n, t = int(head[0]), int(head[1])
    except ValueError:
        raise ParseError(1, "ciphertext header must be two integers") from None
    if len(lines) < 2:
        raise ParseError(2, "missing ciphertext vector")
    return _vector(lines[1], 2, n, order), t


def format_vector(v: np.ndarray) -> str:
    return f"{v.size}\n{_ints(v)}\n"


def parse_vector(text: str, order: int) -> np.ndarray:
    lines = text.splitlines()
    if len(lines) < 2:
        raise ParseError(len(lines) + 1, "expected a length line and a vector line")
    try:
        n = int(lines[0])
    except ValueError:
        raise ParseError(1, "length is not an integer") from None
    return _vector(lines[1], 2, n, order)
