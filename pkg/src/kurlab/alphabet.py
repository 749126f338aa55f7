"""Pointed and star-involutive linearly ordered generator alphabets.

A letter is an ``int`` whose natural order is the order of the chain:

    Neg(i) = i - BOUND,   One = 0,   Pos(i) = BOUND - i

so every negative letter is below ``One``, every positive letter above it,
``Neg(0)`` is the minimum and ``Pos(0)`` the maximum.  The order-reversing
involution exchanging ``Neg(i)`` and ``Pos(i)`` is plain negation.

Index ``i`` refers to the ``i``-th topology of a chain ``t_0 < t_1 < ...``:
``Neg(i)`` is its interior operator and ``Pos(i)`` its closure operator.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Callable, Iterable, Mapping

from .errors import InputError

BOUND = 1 << 20

_TOKEN = re.compile(r"^(?:(i|k)(\d+)|1)$")


class Letter(int):
    __slots__ = ()

    def __new__(cls, code):
        code = int(code)
        if not -BOUND <= code <= BOUND:
            raise InputError(f"letter code out of range: {code}")
        return super().__new__(cls, code)

    @property
    def sign(self) -> int:
        return (self > 0) - (self < 0)

    @property
    def index(self) -> int:
        """Topology index of the letter (0 for One)."""
        if self < 0:
            return int(self) + BOUND
        if self > 0:
            return BOUND - int(self)
        return 0

    @property
    def is_neg(self) -> bool:
        return self < 0

    @property
    def is_pos(self) -> bool:
        return self > 0

    @property
    def is_one(self) -> bool:
        return self == 0

    def star(self) -> "Letter":
        return Letter(-int(self))

    def __str__(self):
        if self < 0:
            return f"i{self.index}"
        if self > 0:
            return f"k{self.index}"
        return "1"

    def __repr__(self):
        if self < 0:
            return f"Neg({self.index})"
        if self > 0:
            return f"Pos({self.index})"
        return "One"


def Neg(i: int) -> Letter:
    return Letter(i - BOUND)


def Pos(i: int) -> Letter:
    return Letter(BOUND - i)


ONE = Letter(0)


def parse_letter(token: str) -> Letter:
    m = _TOKEN.match(token)
    if m is None:
        raise InputError(f"malformed letter token: {token!r}")
    if m.group(1) is None:
        return ONE
    i = int(m.group(2))
    if i >= BOUND:
        raise InputError(f"letter index too large: {token!r}")
    return Neg(i) if m.group(1) == "i" else Pos(i)


@dataclass(frozen=True)
class PointedChain:
    n_neg: int
    n_pos: int

    def __post_init__(self):
        if self.n_neg < 0 or self.n_pos < 0:
            raise InputError(f"negative chain size: ({self.n_neg}, {self.n_pos})")

    @property
    def negatives(self) -> tuple[Letter, ...]:
        """Negative letters in increasing order."""
        return tuple(Neg(i) for i in range(self.n_neg))

    @property
    def positives(self) -> tuple[Letter, ...]:
        """Positive letters in increasing order (so ``Pos(0)`` comes last)."""
        return tuple(Pos(i) for i in reversed(range(self.n_pos)))

    @property
    def letters(self) -> tuple[Letter, ...]:
        return self.negatives + (ONE,) + self.positives

    def __len__(self):
        return self.n_neg + 1 + self.n_pos

    def __contains__(self, letter) -> bool:
        if not isinstance(letter, int):
            return False
        if letter < 0:
            return Letter(letter).index < self.n_neg
        if letter > 0:
            return Letter(letter).index < self.n_pos
        return True

    def rank(self, letter: Letter) -> int:
        """Position of ``letter`` in the chain, 0 for the minimum."""
        self.check(letter)
        if letter < 0:
            return letter.index
        if letter > 0:
            return self.n_neg + self.n_pos - letter.index
        return self.n_neg

    def check(self, letter) -> Letter:
        if letter not in self:
            raise InputError(f"letter {letter} does not belong to chain ({self.n_neg}, {self.n_pos})")
        return Letter(letter)

    def __str__(self):
        return " < ".join(str(x) for x in self.letters)


def make_chain(n_neg: int, n_pos: int) -> PointedChain:
    return PointedChain(n_neg, n_pos)


@dataclass(frozen=True)
class StarChain:
    """A pointed chain with the involution ``Neg(i) <-> Pos(i)``."""

    base: PointedChain

    def __post_init__(self):
        if self.base.n_neg != self.base.n_pos:
            raise InputError("a star chain needs as many negative as positive letters")

    @classmethod
    def of(cls, n: int) -> "StarChain":
        return cls(PointedChain(n, n))

    @property
    def n(self) -> int:
        return self.base.n_neg

    @property
    def letters(self):
        return self.base.letters

    @property
    def negatives(self):
        return self.base.negatives

    def __contains__(self, letter):
        return letter in self.base

    @staticmethod
    def star(letter: Letter) -> Letter:
        return Letter(letter).star()


@dataclass(frozen=True)
class Violation:
    reason: str
    pair: tuple = ()

    def __str__(self):
        if self.pair:
            return f"{self.reason}: " + ", ".join(str(x) for x in self.pair)
        return self.reason


@dataclass(frozen=True)
class ValidationReport:
    ok: bool
    violation: Violation | None = None

    def __bool__(self):
        return self.ok


@dataclass(frozen=True)
class ChainMorphism:
    src: PointedChain
    dst: PointedChain
    letter_map: Mapping[Letter, Letter] = field(hash=False)
    name: str = ""

    @classmethod
    def from_function(cls, src, dst, fn: Callable[[Letter], Letter], name=""):
        return cls(src, dst, {x: Letter(fn(x)) for x in src.letters}, name)

    def __call__(self, letter: Letter) -> Letter:
        try:
            return self.letter_map[letter]
        except KeyError:
            raise InputError(f"letter {letter} outside the domain of {self.name or 'morphism'}") from None

    def compose(self, other: "ChainMorphism") -> "ChainMorphism":
        """``other`` after ``self``."""
        return ChainMorphism(
            self.src, other.dst, {x: other(self(x)) for x in self.src.letters},
            f"{other.name}.{self.name}" if self.name or other.name else "",
        )


def validate_morphism(m: ChainMorphism, star: bool = False) -> ValidationReport:
    letters = m.src.letters
    for x in letters:
        if x not in m.letter_map:
            return ValidationReport(False, Violation("letter not mapped", (x,)))
        if m.letter_map[x] not in m.dst:
            return ValidationReport(False, Violation("image outside target chain", (x, m.letter_map[x])))
    if m.letter_map[ONE] != ONE:
        return ValidationReport(False, Violation("unit not preserved", (ONE, m.letter_map[ONE])))
    # letters are sorted, so checking neighbours suffices for monotonicity
    for x, y in zip(letters, letters[1:]):
        if m.letter_map[x] > m.letter_map[y]:
            return ValidationReport(False, Violation("not monotone", (x, y)))
    if star:
        for x in letters:
            if m.letter_map[x.star()] != m.letter_map[x].star():
                return ValidationReport(False, Violation("involution not preserved", (x, x.star())))
    return ValidationReport(True)


def identity_morphism(chain: PointedChain) -> ChainMorphism:
    return ChainMorphism(chain, chain, {x: x for x in chain.letters}, "id")


# The four surjections L(2,2) -> L(1,2), L(2,1) used to separate FK(2,2).
def _separating_morphisms():
    c22, c12, c21 = PointedChain(2, 2), PointedChain(1, 2), PointedChain(2, 1)

    def h12(x):
        return Neg(0) if x < 0 else x

    def h23(x):
        return ONE if x in (Neg(1), ONE) else x

    def h34(x):
        return ONE if x in (ONE, Pos(1)) else x

    def h45(x):
        return Pos(0) if x > 0 else x

    return {
        "h12": ChainMorphism.from_function(c22, c12, h12, "h12"),
        "h23": ChainMorphism.from_function(c22, c12, h23, "h23"),
        "h34": ChainMorphism.from_function(c22, c21, h34, "h34"),
        "h45": ChainMorphism.from_function(c22, c21, h45, "h45"),
    }


SEPARATING_MORPHISMS = _separating_morphisms()


def letters_of(tokens: Iterable[str]) -> list[Letter]:
    return [parse_letter(t) for t in tokens]
