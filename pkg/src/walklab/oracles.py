"""Independent brute-force oracles.

Nothing here calls the closed forms in ``paths``/``laws``/``ruin``/
``recurrence``: counts come from walking the sample space and the ruin
quantities from a first-step linear system solved by exact Gaussian
elimination.  Tests and ``walklab verify`` compare the two routes.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from functools import lru_cache

from .paths import count_enumerated, iter_paths


def pascal_row(n: int) -> list[int]:
    row = [1]
    for _ in range(n):
        row = [a + b for a, b in zip([0, *row], [*row, 0])]
    return row


def catalan_recurrence(n: int) -> int:
    c = [1]
    for m in range(1, n + 1):
        c.append(sum(c[i] * c[m - 1 - i] for i in range(m)))
    return c[n]


def path_probability(path, p: Fraction) -> Fraction:
    ups = sum(1 for s in path.steps if s > 0)
    return p**ups * (1 - p) ** (len(path) - ups)


def enumerated_probability(n: int, predicate, p: Fraction = Fraction(1, 2)) -> Fraction:
    """Exact probability of a path event, by summing path weights."""
    p = Fraction(p)
    if p == Fraction(1, 2):
        return Fraction(count_enumerated(n, predicate), 2**n)
    return sum((path_probability(x, p) for x in iter_paths(n, predicate)), Fraction(0))


# -- path events -------------------------------------------------------------

def ends_at(y: int):
    return lambda s: s[-1] == y


def always_positive_to(y: int):
    return lambda s: s[-1] == y and all(v > 0 for v in s[1:])


def below_final(y: int):
    """S_i < S_n for all i < n, ending at y."""
    return lambda s: s[-1] == y and all(v < s[-1] for v in s[:-1])


def nonneg_loop(s) -> bool:
    return s[-1] == 0 and min(s) >= 0


def positive_loop(s) -> bool:
    return s[-1] == 0 and all(v > 0 for v in s[1:-1])


def never_zero(s) -> bool:
    return all(v != 0 for v in s[1:])


def never_negative(s) -> bool:
    return min(s) >= 0


def first_return_at_end(s) -> bool:
    return s[-1] == 0 and all(v != 0 for v in s[1:-1])


def first_passage_minus1_at_end(s) -> bool:
    return s[-1] < 0 and min(s[:-1]) >= 0


def positive_sides(s) -> int:
    """Sides k whose endpoint S_{k-1} or S_k is positive."""
    return sum(1 for a, b in zip(s, s[1:]) if a > 0 or b > 0)


def returns(s) -> int:
    return sum(1 for v in s[1:] if v == 0)


def lead_time_pmf_enumerated(n: int) -> list[Fraction]:
    counts = [0] * (n + 1)
    for path in iter_paths(2 * n):
        sides = positive_sides(path.sums)
        assert sides % 2 == 0
        counts[sides // 2] += 1
    return [Fraction(c, 4**n) for c in counts]


def return_count_pmf_enumerated(n: int) -> list[Fraction]:
    counts = [0] * (n + 1)
    for path in iter_paths(2 * n):
        counts[returns(path.sums)] += 1
    return [Fraction(c, 4**n) for c in counts]


# -- ruin by first-step analysis ---------------------------------------------

def solve_exact(matrix: list[list[Fraction]], rhs: list[Fraction]) -> list[Fraction]:
    """Gauss-Jordan elimination over the rationals."""
    n = len(matrix)
    m = [list(map(Fraction, row)) + [Fraction(b)] for row, b in zip(matrix, rhs)]
    for col in range(n):
        pivot = next(r for r in range(col, n) if m[r][col] != 0)
        m[col], m[pivot] = m[pivot], m[col]
        inv = 1 / m[col][col]
        m[col] = [v * inv for v in m[col]]
        for r in range(n):
            if r != col and m[r][col] != 0:
                f = m[r][col]
                m[r] = [a - f * b for a, b in zip(m[r], m[col])]
    return [row[-1] for row in m]


@lru_cache(maxsize=256)
def ruin_linear_system(A: int, B: int, p: Fraction) -> tuple[dict, dict]:
    """(win probability, expected duration) for every start in [-B, A].

    h(x) = p h(x+1) + q h(x-1),      h(A) = 1, h(-B) = 0
    D(x) = 1 + p D(x+1) + q D(x-1),  D(A) = D(-B) = 0
    """
    p = Fraction(p)
    q = 1 - p
    interior = list(range(-B + 1, A))
    index = {x: i for i, x in enumerate(interior)}
    n = len(interior)
    mat = [[Fraction(0)] * n for _ in range(n)]
    b_win = [Fraction(0)] * n
    b_dur = [Fraction(1)] * n
    for x in interior:
        i = index[x]
        mat[i][i] = Fraction(1)
        for nb, w in ((x + 1, p), (x - 1, q)):
            if nb in index:
                mat[i][index[nb]] -= w
            elif nb == A:
                b_win[i] += w
    win = dict(zip(interior, solve_exact(mat, b_win))) if n else {}
    dur = dict(zip(interior, solve_exact(mat, b_dur))) if n else {}
    win.update({A: Fraction(1), -B: Fraction(0)})
    dur.update({A: Fraction(0), -B: Fraction(0)})
    return win, dur


# -- lattice loops -----------------------------------------------------------

def lattice_loops(dimension: int, steps: int) -> int:
    """Count closed walks of ``steps`` unit moves on Z^dimension."""
    moves = []
    for axis in range(dimension):
        for sign in (1, -1):
            v = [0] * dimension
            v[axis] = sign
            moves.append(tuple(v))
    count = 0
    for walk in itertools.product(moves, repeat=steps):
        if all(sum(c) == 0 for c in zip(*walk)):
            count += 1
    return count
