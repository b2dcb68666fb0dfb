from functools import lru_cache

import numpy as np
import pytest

from wildgoppa.algcode import keygen
from wildgoppa.attack import RecoveredKey
from wildgoppa.code import ParseError
from wildgoppa.keyfile import (MAGIC, atomic_write, format_ciphertext, format_key, format_recovered,
                               format_vector, parse_ciphertext, parse_key, parse_vector, read_key)


@lru_cache(maxsize=None)
def key():
    return keygen(7, 40, 2, 3)


def strip_secret(text: str) -> str:
    return "\n".join(l for l in text.splitlines() if not l.startswith("secret.")) + "\n"


def test_key_roundtrip():
    kp = key()
    kf = parse_key(format_key(kp))
    assert (kf.q, kf.n, kf.r) == (7, 40, 2)
    assert kf.tower is kp.tower
    assert np.array_equal(kf.public_matrix, kp.public_matrix)
    assert kf.public == kp.public
    assert np.array_equal(kf.secret_x, kp.x) and kf.secret_gamma == kp.gamma
    assert kf.has_secret and kf.recovered is None


def test_black_box_ignores_secret_lines():
    text = format_key(key())
    a = parse_key(text, read_secret=False)
    b = parse_key(strip_secret(text))
    assert not a.has_secret and not b.has_secret
    assert np.array_equal(a.public_matrix, b.public_matrix)
    # a corrupt secret line does not matter to a black-box reader
    bad = text.replace("secret.x=", "secret.x=oops ")
    parse_key(bad, read_secret=False)
    with pytest.raises(ParseError):
        parse_key(bad)


def test_recovered_roundtrip():
    kp = key()
    rk = RecoveredKey(kp.x.copy(), np.arange(40) % 6 + 1, 16)
    kf = parse_key(format_recovered(kp.tower, rk, 2))
    assert kf.public is None
    assert np.array_equal(kf.recovered.x, rk.x) and np.array_equal(kf.recovered.u, rk.u)
    assert kf.recovered.degree == 16


def test_nondefault_moduli_roundtrip():
    kp = key()
    text = format_key(kp).replace("modulus.ext=1 0 1", "modulus.ext=3 1 1")
    kf = parse_key(text, read_secret=False)
    assert kf.tower.modulus_ext == (3, 1, 1)
    assert kf.tower is not kp.tower


def _lines(text):
    return text.splitlines()


@pytest.mark.parametrize("edit, line", [
    (lambda L: ["WGKEY v0"] + L[1:], 1),
    (lambda L: L[:1] + ["q=7 m=2 n=40"] + L[2:], 2),
    (lambda L: L[:1] + ["q=7 m=3 n=40 r=2"] + L[2:], 2),
    (lambda L: L[:1] + ["q=6 m=2 n=40 r=2"] + L[2:], 2),
    (lambda L: L[:4] + ["secret.x=1 2 3"] + L[5:], 5),
    (lambda L: L[:5] + [L[5], L[5]] + L[6:], 7),
    (lambda L: L[:3] + ["modulus.ext=1 0 6"] + L[4:], 4),
    (lambda L: L[:2] + ["modulus.base=0 0"] + L[3:], 3),
    (lambda L: L[:4] + ["nonsense"] + L[5:], 5),
    (lambda L: L[:4] + ["bogus.field=3"] + L[5:], 5),
])
def test_parse_errors_carry_line_numbers(edit, line):
    text = "\n".join(edit(_lines(format_key(key())))) + "\n"
    with pytest.raises(ParseError) as exc:
        parse_key(text)
    assert exc.value.lineno == line
    assert str(exc.value).startswith(f"line {line}:")


def test_public_block_errors():
    L = _lines(format_key(key()))
    i = L.index("public.G=")
    bad = L[:i + 1] + ["40 2 ext"] + L[i + 2:]
    with pytest.raises(ParseError) as exc:
        parse_key("\n".join(bad))
    assert exc.value.lineno == i + 2


def test_ciphertext_and_vector():
    c = np.array([0, 6, 3, 1])
    v, t = parse_ciphertext(format_ciphertext(c, 2), 7)
    assert np.array_equal(v, c) and t == 2
    assert np.array_equal(parse_vector(format_vector(c), 7), c)
    with pytest.raises(ParseError):
        parse_ciphertext("4 x\n0 1 2 3\n", 7)
    with pytest.raises(ParseError) as exc:
        parse_ciphertext("4 2\n0 1 2 7\n", 7)
    assert exc.value.lineno == 2
    with pytest.raises(ParseError):
        parse_vector("3\n1 2\n", 7)


def test_atomic_write(tmp_path):
    p = tmp_path / "k.txt"
    atomic_write(p, format_key(key()))
    assert read_key(p).public == key().public
    assert p.read_text().startswith(MAGIC)
    assert [f.name for f in tmp_path.iterdir()] == ["k.txt"]
