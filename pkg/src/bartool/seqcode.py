"""Finite sequences of naturals and their bijective numeric coding.

Sequences are plain tuples of nonnegative ints and are the common
currency of every construction in the package.  The coding is
Cantor-pairing based:

    encode(())        = 0
    encode(a + (m,))  = cantor_pair(encode(a), m) + 1

which is a bijection between sequences and all of N.  Entries are
arbitrary-precision; encode grows super-exponentially in length.
"""

from __future__ import annotations

from math import isqrt

from .errors import ContractViolation

FinSeq = tuple[int, ...]

EMPTY: FinSeq = ()


def cantor_pair(x: int, y: int) -> int:
    s = x + y
    return s * (s + 1) // 2 + y


def cantor_unpair(z: int) -> tuple[int, int]:
    w = (isqrt(8 * z + 1) - 1) // 2
    y = z - w * (w + 1) // 2
    return w - y, y


def encode(a: FinSeq) -> int:
    """Numeric code of a finite sequence."""
    n = 0
    for entry in a:
        n = cantor_pair(n, entry) + 1
    return n


def decode(n: int) -> FinSeq:
    """Inverse of :func:`encode`; total on the naturals."""
    if n < 0:
        raise ContractViolation(f"cannot decode negative code {n}")
    out = []
    while n > 0:
        n, entry = cantor_unpair(n - 1)
        out.append(entry)
    out.reverse()
    return tuple(out)


def concat(a: FinSeq, b: FinSeq) -> FinSeq:
    return a + b


def prefix(a: FinSeq, n: int) -> FinSeq:
    """First ``n`` entries of ``a``; ``n`` must not exceed ``len(a)``."""
    if n < 0 or n > len(a):
        raise ContractViolation(
            f"prefix length {n} out of range for sequence of length {len(a)}"
        )
    return a[:n]


def to_json(a: FinSeq) -> list[int]:
    return list(a)


def from_json(obj: object) -> FinSeq:
    if not isinstance(obj, list) or not all(
        isinstance(e, int) and not isinstance(e, bool) and e >= 0 for e in obj
    ):
        raise ContractViolation(f"not a finite sequence of naturals: {obj!r}")
    return tuple(obj)
