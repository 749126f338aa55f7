"""Exact counts of Kuratowski words and the growth of K(n) = K(n, n).

Everything here is exact: Python ints and :class:`fractions.Fraction`.
Floating point only appears when the CLI formats a value for display.
"""

from __future__ import annotations

from fractions import Fraction
from math import comb

from .errors import InputError

# 20-digit rational enclosure of pi.
PI_LOWER = Fraction(31415926535897932384, 10**19)
PI_UPPER = Fraction(31415926535897932385, 10**19)

SUP_BOUND = Fraction(16, 9)


def binomial(n: int, r: int) -> int:
    if n < 0:
        raise InputError(f"binomial needs n >= 0, got {n}")
    if r < 0 or r > n:
        return 0
    return comb(n, r)


def K(n: int, p: int | None = None) -> int:
    """Number of Kuratowski words over a chain with n negative and p positive letters.

    ``K(n)`` alone is the symmetric value K(n, n).
    """
    if p is None:
        p = n
    if n < 0 or p < 0:
        raise InputError(f"K(n, p) needs n, p >= 0, got ({n}, {p})")
    total = 0
    for i in range(n + 1):
        # C(i+j, j) along the row by the multiplicative Pascal step
        c = 1
        for j in range(p + 1):
            if j:
                c = c * (i + j) // j
            total += c * c
    return total


def K_grid(n_max: int, p_max: int) -> list[list[int]]:
    """Table of K(n, p), rows n = 0..n_max, columns p = 0..p_max."""
    # K(n, p) = K(n-1, p) + sum_j C(n+j, j)^2, accumulated along both axes
    sq = [[binomial(i + j, j) ** 2 for j in range(p_max + 1)] for i in range(n_max + 1)]
    grid = [[0] * (p_max + 1) for _ in range(n_max + 1)]
    for i in range(n_max + 1):
        for j in range(p_max + 1):
            grid[i][j] = (
                sq[i][j]
                + (grid[i - 1][j] if i else 0)
                + (grid[i][j - 1] if j else 0)
                - (grid[i - 1][j - 1] if i and j else 0)
            )
    return grid


def K_diagonal(n_max: int) -> list[int]:
    """K(0), K(1), ..., K(n_max) in O(n_max^2) big-int steps."""
    out = [1]
    total = 1
    for n in range(1, n_max + 1):
        edge = 0
        c = 1  # C(n+i, i)
        for i in range(n):
            if i:
                c = c * (n + i) // i
            edge += c * c
        total += 2 * edge + binomial(2 * n, n) ** 2
        out.append(total)
    return out


def _family_sum(n, p, ul, ur):
    # sum over a < n, b < p, l, r <= a of C(a,l) C(a,r) C(b+1,l+ul) C(b+1,r+ur)
    total = 0
    for a in range(n):
        for b in range(p):
            for l in range(a + 1):
                left = binomial(a, l) * binomial(b + 1, l + ul)
                if not left:
                    continue
                for r in range(a + 1):
                    total += left * binomial(a, r) * binomial(b + 1, r + ur)
    return total


def family_counts(n: int, p: int) -> tuple[int, int, int, int]:
    """Sizes of the four word families (Vmp, Vpm, Wplus, Wminus) for a chain (n, p)."""
    if n < 0 or p < 0:
        raise InputError(f"family_counts needs n, p >= 0, got ({n}, {p})")
    vmp = _family_sum(n, p, 1, 0)
    vpm = _family_sum(n, p, 0, 1)
    wplus = _family_sum(n, p, 0, 0)
    wminus = _family_sum(n, p, 1, 1)
    return vmp, vpm, wplus, wminus


def c_ab(a: int, b: int, n: int) -> Fraction:
    if n < 1 or not (0 <= a <= n and 0 <= b <= n):
        raise InputError(f"c_ab needs 0 <= a, b <= n and n >= 1, got ({a}, {b}, {n})")
    return Fraction(binomial(2 * n - a - b, n - a), binomial(2 * n, n))


def k_ratio(n: int) -> Fraction:
    if n < 0:
        raise InputError(f"k_ratio needs n >= 0, got {n}")
    return Fraction(K(n, n), binomial(2 * n, n) ** 2)


def k_ratio_from_c(n: int) -> Fraction:
    """The same ratio as a sum of squared c_ab values (independent route)."""
    return sum((c_ab(a, b, n) ** 2 for a in range(n + 1) for b in range(n + 1)), Fraction(0))


def verify_sup_bound(N: int) -> tuple[bool, int | None]:
    """Check 9 K(n) <= 16 C(2n, n)^2 for every n <= N; return (ok, first violating n)."""
    for n, kn in enumerate(K_diagonal(N)):
        if 9 * kn > 16 * binomial(2 * n, n) ** 2:
            return False, n
    return True, None


def stirling_ratio(n: int) -> Fraction:
    """K(n) * 9n / 16^(n+1); tends to 1/pi."""
    if n < 1:
        raise InputError(f"stirling_ratio needs n >= 1, got {n}")
    return Fraction(K(n, n) * 9 * n, 16 ** (n + 1))


def pi_enclosure(ratio: Fraction) -> tuple[Fraction, Fraction]:
    """Rational lower/upper bounds for ratio * pi."""
    return ratio * PI_LOWER, ratio * PI_UPPER


def low_order_c_inequality(n: int) -> bool:
    """16/9 c11^2 + 2 (c10^2 + c20^2) < 1/9 + 2 (1/4 + 1/16)."""
    lhs = SUP_BOUND * c_ab(1, 1, n) ** 2 + 2 * (c_ab(1, 0, n) ** 2 + c_ab(2, 0, n) ** 2)
    return lhs < Fraction(1, 9) + 2 * (Fraction(1, 4) + Fraction(1, 16))
