"""Lattice paths of +/-1 steps and the ballot-problem counts.

A :class:`Path` keeps its prefix sums, and every predicate used for
enumeration receives those sums ``(S_0, S_1, ..., S_n)`` rather than the
raw steps.  :func:`enumerate_paths` is the brute-force oracle: it walks the
whole ``2**n`` sample space in lexicographic order with -1 before +1.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Iterator, Sequence

from .errors import TooLarge, Unreachable
from .numerics import binomial

MAX_ENUMERATION_LENGTH = 26

Predicate = Callable[[tuple[int, ...]], bool]

_MINUS_CHARS = "-−"


@dataclass(frozen=True)
class Path:
    steps: tuple[int, ...]
    sums: tuple[int, ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        steps = tuple(self.steps)
        if any(s not in (1, -1) for s in steps):
            raise ValueError(f"steps must be +1/-1, got {steps}")
        object.__setattr__(self, "steps", steps)
        object.__setattr__(self, "sums", tuple(itertools.accumulate(steps, initial=0)))

    def __len__(self) -> int:
        return len(self.steps)

    @property
    def end(self) -> int:
        return self.sums[-1]

    @classmethod
    def from_string(cls, text: str) -> "Path":
        steps = []
        for ch in text.strip():
            if ch == "+":
                steps.append(1)
            elif ch in _MINUS_CHARS:
                steps.append(-1)
            else:
                raise ValueError(f"bad step character {ch!r}")
        return cls(tuple(steps))

    @classmethod
    def from_heights(cls, heights: Sequence[int]) -> "Path":
        if not heights or heights[0] != 0:
            raise ValueError("height sequence must start at 0")
        return cls(tuple(b - a for a, b in zip(heights, heights[1:])))

    def __str__(self) -> str:
        return "".join("+" if s > 0 else "-" for s in self.steps)


@dataclass(frozen=True)
class LatticePoint:
    x: int
    y: int

    def __post_init__(self):
        if self.x < 0:
            raise ValueError("time coordinate must be non-negative")

    @property
    def reflected(self) -> "LatticePoint":
        return LatticePoint(self.x, -self.y)


def _check_length(n: int) -> None:
    if n < 0:
        raise ValueError("path length must be non-negative")
    if n > MAX_ENUMERATION_LENGTH:
        raise TooLarge(
            f"enumeration of 2**{n} paths refused: "
            f"length cap is MAX_ENUMERATION_LENGTH={MAX_ENUMERATION_LENGTH}"
        )


@lru_cache(maxsize=20)
def _all_paths(n: int) -> tuple[Path, ...]:
    return tuple(Path(s) for s in itertools.product((-1, 1), repeat=n))


def iter_paths(n: int, predicate: Predicate | None = None) -> Iterator[Path]:
    _check_length(n)
    source = _all_paths(n) if n <= 16 else (Path(s) for s in itertools.product((-1, 1), repeat=n))
    for path in source:
        if predicate is None or predicate(path.sums):
            yield path


def enumerate_paths(n: int, predicate: Predicate | None = None) -> list[Path]:
    """All length-``n`` paths whose prefix sums satisfy ``predicate``."""
    return list(iter_paths(n, predicate))


def count_enumerated(n: int, predicate: Predicate | None = None) -> int:
    return sum(1 for _ in iter_paths(n, predicate))


def reverse_path(path: Path) -> Path:
    """Steps in reverse order; its sums satisfy S*_i = S_n - S_{n-i}."""
    return Path(path.steps[::-1])


def count_paths_to(x: int, y: int) -> int:
    """N_{x,y}: number of paths from the origin to (x, y)."""
    if x < 0 or abs(y) > x or (x + y) % 2:
        return 0
    return binomial(x, (x + y) // 2)


def count_always_positive(x: int, y: int) -> int:
    """Paths to (x, y) with S_1, ..., S_x all > 0: (y/x) * N_{x,y}."""
    if x <= 0 or y <= 0:
        raise ValueError("ballot count needs x > 0 and y > 0")
    total = count_paths_to(x, y)
    quotient, rem = divmod(y * total, x)
    assert rem == 0
    return quotient


def count_touching_reflection(a: LatticePoint, b: LatticePoint) -> tuple[int, int]:
    """(A->B paths that touch or cross the axis, all A'->B paths).

    The first entry is counted by enumerating the step sequences from
    ``a`` to ``b``; the second by the closed form for the mirrored start.
    They agree by the reflection lemma.
    """
    if a.y <= 0 or b.y <= 0:
        raise ValueError("both points must lie strictly above the axis")
    if a.x >= b.x:
        raise ValueError("need a.x < b.x")
    m = b.x - a.x
    if (m - (b.y - a.y)) % 2:
        raise Unreachable(f"{b} cannot be reached from {a}: parity mismatch")

    def touches(sums):
        return sums[-1] == b.y - a.y and min(sums) <= -a.y

    touching = count_enumerated(m, touches)
    mirrored = count_paths_to(m, b.y + a.y)
    return touching, mirrored


def count_loops(n: int, mode: str = "nonnegative") -> int:
    """Loops of length 2n that stay >= 0 (L_{2n}) or > 0 inside (L_{2n-2})."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if mode == "nonnegative":
        m = n
    elif mode == "strictly-positive":
        m = n - 1
    else:
        raise ValueError(f"unknown loop mode {mode!r}")
    return binomial(2 * m, m) // (m + 1)
