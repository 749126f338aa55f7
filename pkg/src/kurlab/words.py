"""Words over a pointed chain and the Kuratowski word families.

A word ``x_0 x_1 ... x_n`` is read as a composition of operators, so the
rightmost letter acts first.  An alternating word of length >= 2 is a
Kuratowski word when it has one of four shapes around a pivot ``m``:

    Vmp     x_m is the least negative, x_{m+1} the greatest positive letter
    Vpm     x_m is the greatest positive, x_{m+1} the least negative letter
    Wminus  x_{m-1} = x_{m+1} is the least negative, x_m the greatest positive
    Wplus   x_{m-1} = x_{m+1} is the greatest positive, x_m the least negative

and moving away from the pivot, negative letters strictly increase while
positive letters strictly decrease.
"""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass
from itertools import combinations, product
from typing import Iterable, Iterator, Sequence

from .alphabet import ONE, Letter, PointedChain, parse_letter
from .errors import InputError, ResourceError

DEFAULT_ENUM_CAP = 6


class Word(tuple):
    """Nonempty immutable sequence of letters."""

    __slots__ = ()

    def __new__(cls, letters: Iterable = ()):
        letters = tuple(Letter(x) for x in letters)
        if not letters:
            raise InputError("a word must be nonempty")
        return super().__new__(cls, letters)

    @classmethod
    def parse(cls, text) -> "Word":
        if isinstance(text, str):
            text = text.strip()
            if text.startswith("["):
                try:
                    tokens = json.loads(text)
                except json.JSONDecodeError as exc:
                    raise InputError(f"malformed JSON word: {exc}") from None
            else:
                tokens = text.split()
        else:
            tokens = list(text)
        if "c" in tokens:
            raise InputError("complement token 'c' is only allowed at the front of a full word")
        return cls(parse_letter(str(t)) for t in tokens)

    def __add__(self, other):
        return Word(tuple(self) + tuple(other))

    def star(self) -> "Word":
        return Word(x.star() for x in self)

    def tokens(self) -> list[str]:
        return [str(x) for x in self]

    def __str__(self):
        return " ".join(self.tokens())

    def __repr__(self):
        return f"Word({str(self)!r})"


UNIT = Word((ONE,))


@dataclass(frozen=True, order=True)
class FullWord:
    complemented: bool
    word: Word

    @classmethod
    def parse(cls, text) -> "FullWord":
        tokens = text.split() if isinstance(text, str) else list(text)
        complemented = bool(tokens) and tokens[0] == "c"
        if complemented:
            tokens = tokens[1:]
        return cls(complemented, Word.parse(tokens))

    def star(self) -> "FullWord":
        return FullWord(self.complemented, self.word.star())

    def tokens(self) -> list[str]:
        return (["c"] if self.complemented else []) + self.word.tokens()

    def __str__(self):
        return " ".join(self.tokens())


class Family(enum.Enum):
    Single = "Single"
    Vmp = "Vmp"
    Vpm = "Vpm"
    Wminus = "Wminus"
    Wplus = "Wplus"


@dataclass(frozen=True)
class WordClass:
    tag: Family
    pivot: int | None = None


def check_word(w: Sequence, chain: PointedChain) -> Word:
    w = w if isinstance(w, Word) else Word(w)
    for x in w:
        chain.check(x)
    return w


def is_alternating(w: Sequence, chain: PointedChain | None = None) -> bool:
    if chain is not None:
        check_word(w, chain)
    if len(w) == 1:
        return True
    return all((a < 0 < b) or (b < 0 < a) for a, b in zip(w, w[1:]))


def _outward_monotone(w, pos, step) -> bool:
    """The letters w[pos], w[pos+2*step], w[pos+4*step], ... are strictly
    increasing if w[pos] is negative and strictly decreasing if positive."""
    prev = w[pos]
    i = pos + 2 * step
    up = prev < 0
    while 0 <= i < len(w):
        cur = w[i]
        if up:
            if not cur > prev:
                return False
        elif not cur < prev:
            return False
        prev = cur
        i += 2 * step
    return True


def _check_v(w, m, pivot_neg: bool) -> bool:
    a, b = w[m], w[m + 1]
    if pivot_neg and not (a < 0 < b):
        return False
    if not pivot_neg and not (b < 0 < a):
        return False
    # the m-chain goes outward both ways from m, the (m+1)-chain from m+1
    return (
        _outward_monotone(w, m, +1)
        and _outward_monotone(w, m, -1)
        and _outward_monotone(w, m + 1, +1)
        and _outward_monotone(w, m + 1, -1)
    )


def _check_w(w, m, doubled_neg: bool) -> bool:
    a, b, c = w[m - 1], w[m], w[m + 1]
    if a != c:
        return False
    if doubled_neg and not (a < 0 < b):
        return False
    if not doubled_neg and not (b < 0 < a):
        return False
    return (
        _outward_monotone(w, m, +1)
        and _outward_monotone(w, m, -1)
        and _outward_monotone(w, m + 1, +1)
        and _outward_monotone(w, m - 1, -1)
    )


def classify(w: Sequence, chain: PointedChain | None = None) -> WordClass | None:
    """Family and smallest pivot of a Kuratowski word, or None."""
    if chain is not None:
        check_word(w, chain)
    n = len(w)
    if n == 1:
        return WordClass(Family.Single)
    if not is_alternating(w):
        return None
    for m in range(n - 1):
        if _check_v(w, m, True):
            return WordClass(Family.Vmp, m)
    for m in range(n - 1):
        if _check_v(w, m, False):
            return WordClass(Family.Vpm, m)
    for m in range(1, n - 1):
        if _check_w(w, m, True):
            return WordClass(Family.Wminus, m)
    for m in range(1, n - 1):
        if _check_w(w, m, False):
            return WordClass(Family.Wplus, m)
    return None


def is_kuratowski(w: Sequence, chain: PointedChain | None = None) -> bool:
    return classify(w, chain) is not None


def _arms(first_neg: bool, negs: Sequence, poss: Sequence) -> Iterator[tuple]:
    """All alternating arms read outward from the core.

    ``negs`` holds the usable negative letters (all above the pivot minimum)
    in increasing order, ``poss`` the usable positive letters (all below the
    pivot maximum) in decreasing order.  An arm of length t starting with a
    negative letter takes ceil(t/2) negatives and floor(t/2) positives.
    """
    t = 0
    while True:
        k_first, k_second = (t + 1) // 2, t // 2
        if first_neg:
            k_neg, k_pos = k_first, k_second
        else:
            k_neg, k_pos = k_second, k_first
        if k_neg > len(negs) or k_pos > len(poss):
            return
        for ns in combinations(negs, k_neg):
            for ps in combinations(poss, k_pos):
                arm = []
                ni = pi = 0
                for j in range(t):
                    if (j % 2 == 0) == first_neg:
                        arm.append(ns[ni])
                        ni += 1
                    else:
                        arm.append(ps[pi])
                        pi += 1
                yield tuple(arm)
        t += 1


def _family_words(chain: PointedChain, family: Family) -> Iterator[Word]:
    negs = chain.negatives
    poss = tuple(reversed(chain.positives))  # decreasing
    for p in negs:
        higher = tuple(x for x in negs if x > p)
        for q in poss:
            lower = tuple(x for x in poss if x < q)
            if family is Family.Vmp:
                core, left_neg, right_neg = (p, q), False, True
            elif family is Family.Vpm:
                core, left_neg, right_neg = (q, p), True, False
            elif family is Family.Wminus:
                core, left_neg, right_neg = (p, q, p), False, False
            else:
                core, left_neg, right_neg = (q, p, q), True, True
            lefts = list(_arms(left_neg, higher, lower))
            for right in _arms(right_neg, higher, lower):
                for left in lefts:
                    yield Word(tuple(reversed(left)) + core + right)


def word_sort_key(w):
    return (len(w), tuple(w))


def _check_cap(chain: PointedChain, cap: int | None):
    cap = DEFAULT_ENUM_CAP if cap is None else cap
    if chain.n_neg > cap or chain.n_pos > cap:
        raise ResourceError(
            f"enumeration cap exceeded: chain ({chain.n_neg}, {chain.n_pos}) but cap is {cap} per side",
            cap=cap,
        )


def enumerate_family(chain: PointedChain, family: Family) -> list[Word]:
    if family is Family.Single:
        return sorted((Word((x,)) for x in chain.letters), key=word_sort_key)
    return sorted(set(_family_words(chain, family)), key=word_sort_key)


def enumerate_kuratowski(chain: PointedChain, cap: int | None = None) -> list[Word]:
    _check_cap(chain, cap)
    words = set(Word((x,)) for x in chain.letters)
    for fam in (Family.Vmp, Family.Vpm, Family.Wminus, Family.Wplus):
        words.update(_family_words(chain, fam))
    return sorted(words, key=word_sort_key)


def enumerate_full(chain: PointedChain, cap: int | None = None) -> list[FullWord]:
    base = enumerate_kuratowski(chain, cap)
    return [FullWord(False, w) for w in base] + [FullWord(True, w) for w in base]


def all_words(chain: PointedChain, max_len: int, min_len: int = 1) -> Iterator[Word]:
    letters = chain.letters
    for n in range(min_len, max_len + 1):
        for w in product(letters, repeat=n):
            yield Word(w)


def alternating_words(chain: PointedChain, max_len: int) -> Iterator[Word]:
    """All alternating words up to ``max_len`` (brute force, for cross-checks)."""
    for x in chain.letters:
        yield Word((x,))
    negs, poss = chain.negatives, chain.positives
    frontier = [(x,) for x in negs + poss]
    for _ in range(2, max_len + 1):
        nxt = []
        for w in frontier:
            for y in (poss if w[-1] < 0 else negs):
                nxt.append(w + (y,))
        for w in nxt:
            yield Word(w)
        frontier = nxt


def brute_force_kuratowski(chain: PointedChain, max_len: int) -> list[Word]:
    return sorted((w for w in alternating_words(chain, max_len) if classify(w) is not None), key=word_sort_key)
