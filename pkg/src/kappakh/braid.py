"""Braid words in the Artin generators and the moves applied to them.

A word on ``n`` strands is a tuple of nonzero integers; ``g > 0`` stands for
sigma_g and ``g < 0`` for its inverse.  Crossing ``i`` of the closed diagram is
letter ``i`` of the word, and that ordering is used everywhere in the package.
"""

from __future__ import annotations

import re
from dataclasses import dataclass


class BraidParseError(ValueError):
    pass


@dataclass(frozen=True)
class BraidWord:
    n: int
    letters: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "letters", tuple(int(g) for g in self.letters))
        if self.n < 1:
            raise ValueError(f"strand count must be positive, got {self.n}")
        for g in self.letters:
            if g == 0 or abs(g) > self.n - 1:
                raise ValueError(f"letter {g} is not a generator of B_{self.n}")

    @property
    def c(self) -> int:
        return len(self.letters)

    @property
    def n_plus(self) -> int:
        return sum(1 for g in self.letters if g > 0)

    @property
    def n_minus(self) -> int:
        return sum(1 for g in self.letters if g < 0)

    def inverse(self) -> BraidWord:
        return BraidWord(self.n, tuple(-g for g in reversed(self.letters)))

    def __mul__(self, other: BraidWord) -> BraidWord:
        if other.n != self.n:
            raise ValueError(f"cannot multiply braids on {self.n} and {other.n} strands")
        return BraidWord(self.n, self.letters + other.letters)

    def text(self) -> str:
        return ",".join(str(g) for g in self.letters)

    def __str__(self) -> str:
        return f"B_{self.n}[{self.text()}]"


@dataclass(frozen=True)
class BasepointAddress:
    """Point on the vertical arc at strand ``position`` between letters
    ``gap`` and ``gap + 1`` (gap 0 is below the first letter)."""

    position: int
    gap: int

    def check(self, b: BraidWord) -> None:
        if not 1 <= self.position <= b.n:
            raise ValueError(f"basepoint position {self.position} not in [1, {b.n}]")
        if not 0 <= self.gap <= b.c:
            raise ValueError(f"basepoint gap {self.gap} not in [0, {b.c}]")


_TOKEN = re.compile(r"[,\s]+")


def parse_braid(text: str, n_hint: int | None = None) -> BraidWord:
    tokens = [t for t in _TOKEN.split(text.strip()) if t]
    letters = []
    for tok in tokens:
        try:
            g = int(tok)
        except ValueError:
            raise BraidParseError(f"not an integer: {tok!r}") from None
        if g == 0:
            raise BraidParseError("zero is not a braid generator")
        letters.append(g)
    if n_hint is None:
        n = 1 + max((abs(g) for g in letters), default=0)
    else:
        n = n_hint
        if n < 1:
            raise BraidParseError(f"strand count must be positive, got {n}")
        bad = [g for g in letters if abs(g) >= n]
        if bad:
            raise BraidParseError(f"letter {bad[0]} needs more than {n} strands")
    return BraidWord(n, tuple(letters))


def parse_basepoint(text: str) -> BasepointAddress:
    parts = [t for t in _TOKEN.split(text.strip()) if t]
    if len(parts) != 2:
        raise BraidParseError(f"basepoint must be 'position,gap', got {text!r}")
    try:
        return BasepointAddress(int(parts[0]), int(parts[1]))
    except ValueError:
        raise BraidParseError(f"basepoint must be 'position,gap', got {text!r}") from None


def exponent_sum(b: BraidWord) -> int:
    return sum(1 if g > 0 else -1 for g in b.letters)


def self_linking(b: BraidWord) -> int:
    return exponent_sum(b) - b.n


def conjugate(b: BraidWord, w: BraidWord) -> BraidWord:
    """Return ``w * b * w^-1``."""
    return w * b * w.inverse()


def mirror(b: BraidWord) -> BraidWord:
    return BraidWord(b.n, tuple(-g for g in b.letters))


def stabilize(b: BraidWord, sign: int, j: int) -> BraidWord:
    """Insert sigma_n^(+-1) at word index ``j``, adding strand ``n + 1``.

    The gaps ``0..c`` of the word enumerate the innermost points of the
    closure up to planar isotopy (gaps 0 and c lie on the same closure arc).
    """
    if sign not in (1, -1):
        raise ValueError(f"sign must be +1 or -1, got {sign}")
    if not 0 <= j <= b.c:
        raise ValueError(f"insertion index {j} not in [0, {b.c}]")
    letters = b.letters[:j] + (sign * b.n,) + b.letters[j:]
    return BraidWord(b.n + 1, letters)


def flype_pair(a: int, b: int) -> tuple[BraidWord, BraidWord]:
    """The 4-braids A(a, b) and B(a, b), related by a negative flype."""
    head = (3, -2, -2) + (3,) * (2 * a + 2) + (2, -3)
    ones = (1,) * (2 * b + 2)
    return BraidWord(4, head + (-1, 2) + ones), BraidWord(4, head + ones + (2, -1))
