"""Binary sequences over the alphabet {O, X}.

O is bit 0 and X is bit 1.  A sequence x1..xn encodes to the integer
2^(n-1)*x1 + ... + 2*x(n-1) + xn, so OXOOXXOX is 77.
"""
from __future__ import annotations

import enum
import re
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

__all__ = [
    "Symbol",
    "BitSeq",
    "encode",
    "decode",
    "shift_append",
    "windows",
    "parse",
    "WINDOW",
]

WINDOW = 8
_WINDOW_MASK = (1 << WINDOW) - 1

_OX_TOKEN = re.compile(r"[OXox]+")
_01_TOKEN = re.compile(r"[01]+")


class Symbol(enum.IntEnum):
    O = 0
    X = 1

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class BitSeq:
    """Immutable sequence of bits; ``str()`` gives the O/X view."""

    bits: tuple[int, ...] = ()

    def __post_init__(self):
        if any(b not in (0, 1) for b in self.bits):
            raise ValueError(f"bits must be 0 or 1, got {self.bits!r}")

    @classmethod
    def of(cls, items: Iterable[int | Symbol | str]) -> "BitSeq":
        out = []
        for item in items:
            if isinstance(item, str):
                out.append(_char_bit(item))
            else:
                out.append(int(item))
        return cls(tuple(out))

    def __len__(self) -> int:
        return len(self.bits)

    def __iter__(self) -> Iterator[int]:
        return iter(self.bits)

    def __getitem__(self, idx):
        if isinstance(idx, slice):
            return BitSeq(self.bits[idx])
        return self.bits[idx]

    def __add__(self, other: "BitSeq") -> "BitSeq":
        return BitSeq(self.bits + tuple(other.bits))

    def __str__(self) -> str:
        return self.to_ox()

    def __repr__(self) -> str:
        return f"BitSeq({self.to_ox()!r})"

    @property
    def symbols(self) -> tuple[Symbol, ...]:
        return tuple(Symbol(b) for b in self.bits)

    def to_ox(self) -> str:
        return "".join("X" if b else "O" for b in self.bits)

    def to_01(self) -> str:
        return "".join("1" if b else "0" for b in self.bits)

    def format(self, fmt: str = "ox") -> str:
        if fmt == "ox":
            return self.to_ox()
        if fmt == "01":
            return self.to_01()
        raise ValueError(f"unknown sequence format {fmt!r}")

    def complement(self) -> "BitSeq":
        return BitSeq(tuple(1 - b for b in self.bits))

    def reverse(self) -> "BitSeq":
        return BitSeq(self.bits[::-1])

    def count_x(self) -> int:
        return sum(self.bits)


def _char_bit(ch: str) -> int:
    if ch in "Oo0":
        return 0
    if ch in "Xx1":
        return 1
    raise ValueError(f"invalid sequence symbol {ch!r}")


def parse(text: str) -> BitSeq:
    """Parse a token over ``[OX]`` (any case) or over ``[01]``; mixing is an error."""
    token = text.strip()
    if _OX_TOKEN.fullmatch(token) or _01_TOKEN.fullmatch(token):
        return BitSeq(tuple(_char_bit(c) for c in token))
    raise ValueError(f"malformed sequence token {text!r}: expected [OX]+ or [01]+")


def encode(x: BitSeq | Sequence[int]) -> int:
    bits = tuple(x)
    if not bits:
        raise ValueError("cannot encode the empty sequence")
    code = 0
    for b in bits:
        code = (code << 1) | int(b)
    return code


def decode(code: int, n: int) -> BitSeq:
    if n < 0 or not 0 <= code < (1 << n):
        raise ValueError(f"code {code} out of range for length {n}")
    return BitSeq(tuple((code >> (n - 1 - k)) & 1 for k in range(n)))


def shift_append(window: int, symbol: int | Symbol) -> int:
    """Drop the first symbol of an 8-bit window and append ``symbol``."""
    if not 0 <= window <= _WINDOW_MASK:
        raise ValueError(f"window code {window} out of range")
    return ((window << 1) & _WINDOW_MASK) | int(symbol)


def windows(x: BitSeq, k: int) -> list[BitSeq]:
    if k < 1:
        raise ValueError("window length must be >= 1")
    return [x[i:i + k] for i in range(len(x) - k + 1)]
