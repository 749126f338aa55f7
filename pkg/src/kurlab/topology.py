"""Finite (poly)topological spaces and the operator monoids they generate.

Subsets of an ``n``-point ground set are bitmasks in ``range(2**n)``.  An
operator on the powerset is a tuple ``t`` of length ``2**n`` with ``t[A]``
the image of ``A``; composition ``(f o g)[A] = f[g[A]]``.

For a chain of topologies ``t_0 <= t_1 <= ...`` the letter ``Neg(i)`` acts as
the interior of ``t_i`` and ``Pos(i)`` as its closure, which makes the letter
order agree with the pointwise order of operators.
"""

from __future__ import annotations

import json
import os
import random
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations
from typing import Iterable, Sequence

from .alphabet import Letter, Neg, Pos
from .counting import K
from .errors import InputError, PreconditionError, ResourceError
from .words import FullWord, Word

DEFAULT_GROUND_CAP = 6
DEFAULT_MAX_MONOID = 100_000
DEFAULT_NAMES = ("x", "y", "z", "w", "u", "v", "s", "t")


def ground_cap() -> int:
    raw = os.environ.get("KURLAB_MAX_GROUND")
    if raw is None:
        return DEFAULT_GROUND_CAP
    try:
        cap = int(raw)
    except ValueError:
        raise InputError(f"KURLAB_MAX_GROUND must be an integer, got {raw!r}") from None
    if cap < 1:
        raise InputError("KURLAB_MAX_GROUND must be positive")
    return cap


@dataclass(frozen=True)
class GroundSet:
    size: int
    names: tuple[str, ...] = ()

    def __post_init__(self):
        if self.size < 1:
            raise InputError(f"ground set needs at least one point, got {self.size}")
        if self.size > ground_cap():
            raise ResourceError(f"ground set of size {self.size} exceeds the cap {ground_cap()}", cap=ground_cap())
        if not self.names:
            if self.size > len(DEFAULT_NAMES):
                names = tuple(f"p{i}" for i in range(self.size))
            else:
                names = DEFAULT_NAMES[: self.size]
            object.__setattr__(self, "names", names)
        if len(self.names) != self.size or len(set(self.names)) != self.size:
            raise InputError(f"need {self.size} distinct element names, got {list(self.names)}")

    @property
    def full(self) -> int:
        return (1 << self.size) - 1

    def mask(self, elements: Iterable[str]) -> int:
        m = 0
        for e in elements:
            try:
                m |= 1 << self.names.index(e)
            except ValueError:
                raise InputError(f"unknown point {e!r}; ground is {list(self.names)}") from None
        return m

    def members(self, mask: int) -> list[str]:
        return [n for i, n in enumerate(self.names) if mask >> i & 1]

    def show(self, mask: int) -> str:
        return "{" + ",".join(self.members(mask)) + "}"


def complement(A: int, size: int) -> int:
    return ((1 << size) - 1) & ~A


@dataclass(frozen=True)
class FiniteTopology:
    size: int
    opens: frozenset

    @cached_property
    def interior_table(self) -> tuple[int, ...]:
        table = []
        for A in range(1 << self.size):
            r = 0
            for U in self.opens:
                if U & ~A == 0:
                    r |= U
            table.append(r)
        return tuple(table)

    @cached_property
    def closure_table(self) -> tuple[int, ...]:
        full = (1 << self.size) - 1
        inner = self.interior_table
        return tuple(full & ~inner[full & ~A] for A in range(1 << self.size))

    def interior(self, A: int) -> int:
        return self.interior_table[A]

    def closure(self, A: int) -> int:
        return self.closure_table[A]

    def __le__(self, other: "FiniteTopology") -> bool:
        return self.size == other.size and self.opens <= other.opens

    def __lt__(self, other: "FiniteTopology") -> bool:
        return self.size == other.size and self.opens < other.opens

    def comparable(self, other: "FiniteTopology") -> bool:
        return self <= other or other <= self

    def sorted_opens(self) -> list[int]:
        return sorted(self.opens, key=lambda m: (bin(m).count("1"), m))


def closure(t: FiniteTopology, A: int) -> int:
    return t.closure(A)


def interior(t: FiniteTopology, A: int) -> int:
    return t.interior(A)


def validate_topology(ground: GroundSet | int, opens: Iterable[int]) -> FiniteTopology:
    size = ground.size if isinstance(ground, GroundSet) else ground
    full = (1 << size) - 1
    opens = frozenset(opens)
    for U in opens:
        if U < 0 or U > full:
            raise InputError(f"subset mask {U} has bits outside a ground set of size {size}")
    if 0 not in opens:
        raise InputError("not a topology: the empty set is missing")
    if full not in opens:
        raise InputError("not a topology: the whole ground set is missing")
    for U, V in combinations(sorted(opens), 2):
        if U | V not in opens:
            raise InputError(f"not a topology: union of {U:#b} and {V:#b} is missing")
        if U & V not in opens:
            raise InputError(f"not a topology: intersection of {U:#b} and {V:#b} is missing")
    return FiniteTopology(size, opens)


def discrete(size: int) -> FiniteTopology:
    return FiniteTopology(size, frozenset(range(1 << size)))


def antidiscrete(size: int) -> FiniteTopology:
    return FiniteTopology(size, frozenset((0, (1 << size) - 1)))


def identity_op(size: int) -> tuple[int, ...]:
    return tuple(range(1 << size))


def complement_op(size: int) -> tuple[int, ...]:
    full = (1 << size) - 1
    return tuple(full & ~A for A in range(1 << size))


def compose(f: Sequence[int], g: Sequence[int]) -> tuple[int, ...]:
    """f after g."""
    return tuple(f[a] for a in g)


@dataclass(frozen=True)
class PolySpace:
    ground: GroundSet
    chain: tuple[FiniteTopology, ...]

    def __post_init__(self):
        if not self.chain:
            raise InputError("a polytopological space needs at least one topology")
        for t in self.chain:
            if t.size != self.ground.size:
                raise InputError("topology and ground set sizes differ")
        for a, b in zip(self.chain, self.chain[1:]):
            if not a <= b:
                raise InputError("topologies must form a chain t_0 <= t_1 <= ...")

    @property
    def size(self) -> int:
        return self.ground.size

    def letter_op(self, letter: int) -> tuple[int, ...]:
        letter = Letter(letter)
        if letter.is_one:
            return identity_op(self.size)
        if letter.index >= len(self.chain):
            raise InputError(f"letter {letter} needs topology {letter.index}, space has {len(self.chain)}")
        t = self.chain[letter.index]
        return t.interior_table if letter.is_neg else t.closure_table

    def word_op(self, w: Sequence | FullWord) -> tuple[int, ...]:
        """Operator of a word; the rightmost letter acts first."""
        if isinstance(w, FullWord):
            op = self.word_op(w.word)
            return compose(complement_op(self.size), op) if w.complemented else op
        op = identity_op(self.size)
        for x in w:
            op = compose(op, self.letter_op(x))
        return op

    def generators(self, with_complement: bool = False) -> list[tuple[str, tuple[int, ...]]]:
        gens = []
        for i, t in enumerate(self.chain):
            gens.append((str(Neg(i)), t.interior_table))
        for i, t in reversed(list(enumerate(self.chain))):
            gens.append((str(Pos(i)), t.closure_table))
        if with_complement:
            gens.append(("c", complement_op(self.size)))
        return gens


def make_space(size: int, opens_chain: Iterable[Iterable[int]], names: Sequence[str] = ()) -> PolySpace:
    ground = GroundSet(size, tuple(names))
    return PolySpace(ground, tuple(validate_topology(ground, o) for o in opens_chain))


@dataclass(frozen=True)
class GeneratedMonoid:
    size: int
    elements: tuple[tuple[int, ...], ...]
    witness: dict = field(hash=False, repr=False)
    generators: tuple[str, ...] = ()

    def __len__(self):
        return len(self.elements)

    def __contains__(self, op):
        return tuple(op) in self.witness

    def word_of(self, op) -> tuple[str, ...]:
        return self.witness[tuple(op)]


def generate_monoid(space: PolySpace, with_complement: bool = False, max_size: int = DEFAULT_MAX_MONOID) -> GeneratedMonoid:
    """Breadth-first closure of the generators under composition.

    Each element keeps the first (hence shortest) word that reached it.
    """
    gens = space.generators(with_complement)
    one = identity_op(space.size)
    witness = {one: ("1",)}
    order = [one]
    queue = deque([(one, ())])
    while queue:
        op, word = queue.popleft()
        for name, g in gens:
            new = compose(g, op)
            if new in witness:
                continue
            witness[new] = (name,) + word
            order.append(new)
            if len(order) > max_size:
                raise ResourceError(
                    f"generated monoid exceeds max_size={max_size}",
                    cap=max_size, frontier=len(queue),
                )
            queue.append((new, (name,) + word))
    return GeneratedMonoid(space.size, tuple(order), witness, tuple(n for n, _ in gens))


@dataclass(frozen=True)
class BoundReport:
    ok: bool
    size: int
    bound: int
    kind: str = ""

    @property
    def margin(self) -> int:
        return self.bound - self.size

    def __bool__(self):
        return self.ok

    def to_json(self) -> dict:
        return {"ok": self.ok, "kind": self.kind, "size": self.size, "bound": self.bound, "margin": self.margin}


def verify_upper_bound(space: PolySpace, with_complement: bool = False, max_size: int = DEFAULT_MAX_MONOID) -> BoundReport:
    n = len(space.chain)
    bound = K(n) * (2 if with_complement else 1)
    size = len(generate_monoid(space, with_complement, max_size))
    return BoundReport(size <= bound, size, bound, "K2" if with_complement else "K")


def is_saturated(space: PolySpace) -> bool:
    for s in space.chain:
        for t in space.chain:
            if s is t:
                continue
            for U in s.opens:
                if U and not t.interior(U):
                    return False
    return True


def verify_saturated_bound(space: PolySpace, max_size: int = DEFAULT_MAX_MONOID) -> BoundReport:
    if not is_saturated(space):
        raise PreconditionError("space is not saturated")
    bound = 1 + 6 * len(space.chain)
    size = len(generate_monoid(space, False, max_size))
    return BoundReport(size <= bound, size, bound, "saturated")


def orbit(space: PolySpace, A: int, with_complement: bool = False) -> set[int]:
    """All images of ``A``, found by search on subsets rather than operators."""
    if not 0 <= A <= space.ground.full:
        raise InputError(f"subset mask {A} outside the ground set")
    gens = [g for _, g in space.generators(with_complement)]
    seen = {A}
    stack = [A]
    while stack:
        B = stack.pop()
        for g in gens:
            C = g[B]
            if C not in seen:
                seen.add(C)
                stack.append(C)
    return seen


# --- enumeration --------------------------------------------------------------


def enumerate_topologies(size: int) -> list[FiniteTopology]:
    """Every labeled topology on ``size`` points (exhaustive over families)."""
    if size > 4:
        raise ResourceError(f"exhaustive topology enumeration is limited to 4 points, got {size}", cap=4)
    full = (1 << size) - 1
    middle = list(range(1, full))
    out = []
    for bits in range(1 << len(middle)):
        opens = {0, full}
        opens.update(m for j, m in enumerate(middle) if bits >> j & 1)
        if all(U | V in opens and U & V in opens for U, V in combinations(opens, 2)):
            out.append(FiniteTopology(size, frozenset(opens)))
    return out


def comparable_chains(size: int, length: int = 2) -> list[tuple[FiniteTopology, ...]]:
    """All chains t_0 <= ... <= t_{length-1} of labeled topologies (repeats allowed)."""
    tops = enumerate_topologies(size)
    chains = [(t,) for t in tops]
    for _ in range(length - 1):
        chains = [c + (t,) for c in chains for t in tops if c[-1] <= t]
    return chains


def generated_topology(size: int, subbase: Iterable[int]) -> FiniteTopology:
    full = (1 << size) - 1
    opens = {0, full}
    # close the subbase under intersection, then under union
    base = {full}
    for s in subbase:
        base |= {b & s for b in base} | {s}
    opens |= base
    changed = True
    while changed:
        changed = False
        for U, V in combinations(list(opens), 2):
            if U | V not in opens:
                opens.add(U | V)
                changed = True
    return FiniteTopology(size, frozenset(opens))


def random_topology(size: int, rng: random.Random) -> FiniteTopology:
    full = (1 << size) - 1
    k = rng.randint(0, max(1, size))
    return generated_topology(size, (rng.randint(1, full) for _ in range(k)))


@dataclass(frozen=True)
class SearchResult:
    pair: tuple[FiniteTopology, FiniteTopology]
    test_set: int
    orbit_size: int
    pairs_examined: int
    exhaustive: bool

    def to_json(self, ground: GroundSet) -> dict:
        return {
            "ground": list(ground.names),
            "topologies": [[ground.members(U) for U in t.sorted_opens()] for t in self.pair],
            "test_set": ground.members(self.test_set),
            "orbit_size": self.orbit_size,
            "pairs_examined": self.pairs_examined,
            "exhaustive": self.exhaustive,
        }


def _closure_orbit(c0, c1, A):
    seen = {A}
    stack = [A]
    while stack:
        B = stack.pop()
        for C in (c0[B], c1[B]):
            if C not in seen:
                seen.add(C)
                stack.append(C)
    return len(seen)


def search_incomparable(ground_size: int, budget: int = 10_000, seed: int = 0) -> SearchResult | None:
    """Largest orbit of a set under the closures of two incomparable topologies.

    Exhaustive for ground sets of size <= 3, otherwise ``budget`` random
    pairs.  Ties keep the first maximizer found.  None if no pair exists.
    """
    if ground_size > ground_cap():
        raise ResourceError(f"ground size {ground_size} exceeds the cap {ground_cap()}", cap=ground_cap())
    if ground_size <= 3:
        tops = enumerate_topologies(ground_size)
        pairs = ((s, t) for s, t in combinations(tops, 2))
        exhaustive = True
    else:
        rng = random.Random(seed)
        pairs = ((random_topology(ground_size, rng), random_topology(ground_size, rng)) for _ in range(budget))
        exhaustive = False
    best = None
    examined = 0
    for s, t in pairs:
        if s.comparable(t):
            continue
        examined += 1
        c0, c1 = s.closure_table, t.closure_table
        for A in range(1 << ground_size):
            size = _closure_orbit(c0, c1, A)
            if best is None or size > best[2]:
                best = ((s, t), A, size)
    if best is None:
        return None
    return SearchResult(best[0], best[1], best[2], examined, exhaustive)


# --- space JSON -----------------------------------------------------------------


def load_space(data: dict | str) -> PolySpace:
    if isinstance(data, str):
        try:
            data = json.loads(data)
        except json.JSONDecodeError as exc:
            raise InputError(f"malformed space JSON: {exc}") from None
    try:
        names = tuple(str(n) for n in data["ground"])
        tops = data["topologies"]
    except (KeyError, TypeError):
        raise InputError('space JSON needs "ground" and "topologies"') from None
    ground = GroundSet(len(names), names)
    chain = tuple(validate_topology(ground, (ground.mask(U) for U in opens)) for opens in tops)
    return PolySpace(ground, chain)


def dump_space(space: PolySpace) -> dict:
    g = space.ground
    return {
        "ground": list(g.names),
        "topologies": [[g.members(U) for U in t.sorted_opens()] for t in space.chain],
    }


def read_space(path: str) -> PolySpace:
    try:
        with open(path) as fh:
            return load_space(fh.read())
    except OSError as exc:
        raise InputError(f"cannot read space file: {exc}") from None
