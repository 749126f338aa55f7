"""Small spaces on which distinct full Kuratowski words act differently.

For every ordered pair (u, v) of distinct full Kuratowski words over a star
chain we build a component: a 2- or 3-point space with two comparable
topologies, a star-morphism ``f`` sending each negative letter to the
interior of one of them (or to the identity), and a test set ``A`` with
``f(u)(A) != f(v)(A)``.  The construction follows a case analysis on the
last letters and the first differing position of the words.  Every
component is checked by direct evaluation; if the case analysis ever
yields a non-separating component, an exhaustive search over the catalog
replaces it and the discrepancy is logged.

Letter positions count from the right: ``u = u_p ... u_1 u_0``, with
``u_i = 1`` outside ``0..p``.
"""

from __future__ import annotations

import json
import logging
from collections import Counter
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from itertools import product
from typing import Iterator, Sequence

from .alphabet import ONE, Letter, Neg, StarChain
from .counting import K
from .errors import ConsistencyError, InputError, ResourceError
from .topology import FiniteTopology, GroundSet, PolySpace, complement_op, identity_op
from .words import FullWord, Word, enumerate_full, is_kuratowski

log = logging.getLogger(__name__)

DEFAULT_CERTIFY_CAP = 3
DEFAULT_WITNESS_CAP = 20_000


def _top(size, *opens):
    return FiniteTopology(size, frozenset(opens))


# Bits: x = 1, y = 2, z = 4.
CATALOG: dict[str, FiniteTopology] = {
    "a": _top(2, 0, 3),
    "d": _top(2, 0, 1, 2, 3),
    "x": _top(2, 0, 1, 3),
    "y": _top(2, 0, 2, 3),
    "xz": _top(3, 0, 1, 4, 5, 7),
    "xz,yz": _top(3, 0, 1, 4, 6, 5, 7),
    "xz,xy": _top(3, 0, 1, 4, 3, 5, 7),
}

# comparable pairs (coarser, finer) drawn from the catalog
CATALOG_CHAINS = tuple(
    (s, t) for s in CATALOG for t in CATALOG
    if s != t and CATALOG[s].size == CATALOG[t].size and CATALOG[s] <= CATALOG[t]
)

_X = 1  # the set {x}


@dataclass(frozen=True)
class WitnessComponent:
    """Assignment value ``j`` for ``Neg(i)``: 0 or 1 picks a chain topology, 2 the identity."""

    chain: tuple[str, str]
    assignment: tuple[int, ...]
    test_set: int
    case: str = ""

    @property
    def size(self) -> int:
        return CATALOG[self.chain[0]].size

    @property
    def topologies(self) -> tuple[FiniteTopology, FiniteTopology]:
        return CATALOG[self.chain[0]], CATALOG[self.chain[1]]

    def tables(self) -> dict:
        return _letter_tables(self.chain, self.assignment)

    def evaluate(self, w: FullWord | Sequence) -> int:
        return _evaluate(self.tables(), self.size, w, self.test_set)

    def separates(self, u, v) -> bool:
        return self.evaluate(u) != self.evaluate(v)

    def check_star_morphism(self) -> bool:
        """Monotone into the operator chain and f(l*) = c f(l) c."""
        if any(a > b for a, b in zip(self.assignment, self.assignment[1:])):
            return False
        tabs = self.tables()
        c = complement_op(self.size)
        for i in range(len(self.assignment)):
            neg, pos = tabs[Neg(i)], tabs[Neg(i).star()]
            if tuple(c[pos[c[A]]] for A in range(len(c))) != neg:
                return False
        return True

    def as_space(self) -> PolySpace:
        ground = GroundSet(self.size)
        return PolySpace(ground, self.topologies)

    def to_json(self) -> dict:
        ground = GroundSet(self.size)
        return {
            "ground": list(ground.names),
            "topologies": [[ground.members(U) for U in t.sorted_opens()] for t in self.topologies],
            "assignment": {str(Neg(i)): (["t0", "t1", "1"][j]) for i, j in enumerate(self.assignment)},
            "test_set": ground.members(self.test_set),
            "case": self.case,
        }


@lru_cache(maxsize=None)
def _letter_tables(chain, assignment) -> dict:
    s, t = CATALOG[chain[0]], CATALOG[chain[1]]
    size = s.size
    one = identity_op(size)
    tabs = {ONE: one}
    for i, j in enumerate(assignment):
        if j == 2:
            tabs[Neg(i)] = tabs[Neg(i).star()] = one
        else:
            top = (s, t)[j]
            tabs[Neg(i)] = top.interior_table
            tabs[Neg(i).star()] = top.closure_table
    return tabs


def _evaluate(tabs, size, w, A) -> int:
    if isinstance(w, FullWord):
        compl, letters = w.complemented, w.word
    else:
        compl, letters = False, w
    for x in reversed(letters):
        A = tabs[x][A]
    if compl:
        A = ((1 << size) - 1) & ~A
    return A


# --- case analysis ----------------------------------------------------------------


def _thresholds(n: int, *cuts) -> tuple[int, ...]:
    """Assignment from ascending (bound, value) cuts: Neg(i) <= bound gets value."""
    out = []
    for i in range(n):
        letter = Neg(i)
        for bound, value in cuts:
            if letter <= bound:
                out.append(value)
                break
        else:
            out.append(2)
    return tuple(out)


def _at(w: Sequence, i: int) -> Letter:
    """Letter at position i counted from the right, 1 when out of range."""
    return w[len(w) - 1 - i] if 0 <= i < len(w) else ONE


def _star(w: Sequence) -> tuple:
    return tuple(-x for x in w)


def _flip(comp: WitnessComponent, case: str) -> WitnessComponent:
    # f(w*) = c f(w) c, so testing the dual pair on A equals testing on X \ A
    full = (1 << comp.size) - 1
    return WitnessComponent(comp.chain, comp.assignment, full & ~comp.test_set, case)


def _case3(u: tuple, v: tuple, n: int) -> WitnessComponent:
    u0, v0 = u[-1], v[-1]
    if u0 != v0:
        if u0 > v0:
            u, v, u0, v0 = v, u, v0, u0
        if u0 > 0:
            return _flip(_case3(_star(u), _star(v), n), "3ae")
        if u0 < 0 and v0 < 0:
            return WitnessComponent(("a", "x"), _thresholds(n, (u0, 0), (0, 1)), _X, "3ad")
        label = "3aa" if u0 == 0 else ("3ab" if v0 == 0 else "3ac")
        return WitnessComponent(("a", "d"), (0,) * n, _X, label)

    k = 0
    while _at(u, k) == _at(v, k):
        k += 1
    if _at(u, k - 1) < 0:
        comp = _case3(_star(u), _star(v), n)
        return _flip(comp, comp.case + "*")
    if _at(u, k) > _at(v, k):
        u, v = v, u
    uk, ukm2 = _at(u, k), _at(u, k - 2)
    if uk < ukm2:
        vk1, vkm1 = _at(v, k + 1), _at(v, k - 1)
        if vk1 > vkm1:
            s = -vk1
            if s <= uk:
                return WitnessComponent(("a", "y"), _thresholds(n, (s, 0), (uk, 1)), _X, "3baaa")
            return WitnessComponent(("a", "x"), _thresholds(n, (uk, 0), (s, 1)), _X, "3baab")
        label = "3bab" if vk1 == vkm1 else "3bac"
        return WitnessComponent(("a", "y"), _thresholds(n, (uk, 1)), _X, label)
    ukm1s = -_at(u, k - 1)
    if ukm1s <= uk:
        return WitnessComponent(("xz", "xz,yz"), _thresholds(n, (ukm1s, 0), (uk, 1)), _X, "3bba")
    return WitnessComponent(("xz", "xz,xy"), _thresholds(n, (uk, 0), (ukm1s, 1)), _X, "3bbb")


def _dispatch(u: FullWord, v: FullWord, n: int) -> WitnessComponent:
    if u.complemented != v.complemented:
        return WitnessComponent(("a", "d"), (2,) * n, _X, "1" if not u.complemented else "2")
    comp = _case3(tuple(u.word), tuple(v.word), n)
    if u.complemented:
        return WitnessComponent(comp.chain, comp.assignment, comp.test_set, "4/" + comp.case)
    return comp


def catalog_components(n: int) -> Iterator[WitnessComponent]:
    """Every component over the catalog: chain, monotone assignment, test set."""
    for chain in CATALOG_CHAINS:
        size = CATALOG[chain[0]].size
        for assignment in product(range(3), repeat=n):
            if any(a > b for a, b in zip(assignment, assignment[1:])):
                continue
            for A in range(1 << size):
                yield WitnessComponent(chain, assignment, A, "search")


def _search(u, v, n) -> WitnessComponent | None:
    for comp in catalog_components(n):
        if comp.separates(u, v):
            return comp
    return None


def _as_full(w) -> FullWord:
    if isinstance(w, FullWord):
        return w
    if isinstance(w, str):
        return FullWord.parse(w)
    return FullWord(False, Word(w))


def _check_full(w: FullWord, n: int):
    for x in w.word:
        if x < 0 and x.index >= n or x > 0 and x.index >= n:
            raise InputError(f"letter {x} outside the star chain of size {n}")
    if not is_kuratowski(w.word):
        raise InputError(f"{w} is not a full Kuratowski word")


def separating_component(u, v, L: StarChain | int) -> WitnessComponent:
    n = L.n if isinstance(L, StarChain) else L
    u, v = _as_full(u), _as_full(v)
    _check_full(u, n)
    _check_full(v, n)
    if u == v:
        raise InputError(f"cannot separate a word from itself: {u}")
    comp = _dispatch(u, v, n)
    if comp.separates(u, v):
        return comp
    log.warning("case %s does not separate %s / %s; searching the catalog", comp.case, u, v)
    found = _search(u, v, n)
    if found is None:
        raise ConsistencyError(f"no catalog component separates {u} and {v} (case {comp.case})")
    return WitnessComponent(found.chain, found.assignment, found.test_set, f"fallback:{comp.case}")


@dataclass(frozen=True)
class WitnessSpace:
    n: int
    words: tuple[FullWord, ...]
    components: dict = field(repr=False)

    def __len__(self):
        return len(self.components)

    def component(self, u, v) -> WitnessComponent:
        return self.components[(_as_full(u), _as_full(v))]

    @cached_property
    def _distinct(self) -> tuple[WitnessComponent, ...]:
        seen = {}
        for comp in self.components.values():
            seen.setdefault((comp.chain, comp.assignment, comp.test_set), comp)
        return tuple(seen.values())

    def distinct_components(self) -> list[WitnessComponent]:
        return list(self._distinct)

    def signature(self, w) -> tuple[int, ...]:
        """Values of ``w`` on every distinct component; equal iff equal on the whole space."""
        w = _as_full(w)
        return tuple(c.evaluate(w) for c in self._distinct)


def build_witness(L: StarChain | int, cap: int = DEFAULT_WITNESS_CAP) -> WitnessSpace:
    n = L.n if isinstance(L, StarChain) else L
    full = 2 * K(n)
    pairs = full * (full - 1)
    if pairs > cap:
        raise ResourceError(f"witness needs {pairs} components, above the cap {cap}", cap=cap)
    words = tuple(enumerate_full(StarChain.of(n).base))
    comps = {}
    for u in words:
        for v in words:
            if u != v:
                comps[(u, v)] = separating_component(u, v, n)
    return WitnessSpace(n, words, comps)


def eval_on_witness(w, W: WitnessSpace, pair) -> int:
    """Image of the test set of component ``pair`` (a (u, v) key or an int index)."""
    if isinstance(pair, int):
        pair = list(W.components)[pair]
    comp = W.components[(_as_full(pair[0]), _as_full(pair[1]))]
    return comp.evaluate(_as_full(w))


# --- certification ------------------------------------------------------------------


@dataclass
class CertificationReport:
    n: int
    kuratowski_count: int
    full_count: int
    pairs_checked: int
    case_histogram: dict
    fallbacks: int = 0

    @property
    def counts(self) -> tuple[int, int]:
        return self.kuratowski_count, self.full_count

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "kuratowski_count": self.kuratowski_count,
            "full_count": self.full_count,
            "pairs_checked": self.pairs_checked,
            "case_histogram": dict(sorted(self.case_histogram.items())),
            "fallbacks": self.fallbacks,
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)


def certify_exactness(n: int, cap: int = DEFAULT_CERTIFY_CAP) -> CertificationReport:
    """Separate every ordered pair of distinct full Kuratowski words.

    Each pair is evaluated only on its own component, so no operator table
    of the whole witness space is ever built.
    """
    if n < 0:
        raise InputError(f"n must be >= 0, got {n}")
    if n > cap:
        raise ResourceError(f"certification is capped at n={cap}", cap=cap)
    words = enumerate_full(StarChain.of(n).base)
    hist: Counter = Counter()
    fallbacks = 0
    checked = 0
    for u in words:
        for v in words:
            if u is v:
                continue
            comp = _dispatch(u, v, n)
            tabs = _letter_tables(comp.chain, comp.assignment)
            if _evaluate(tabs, comp.size, u, comp.test_set) == _evaluate(tabs, comp.size, v, comp.test_set):
                comp = separating_component(u, v, n)
                fallbacks += 1
            hist[comp.case] += 1
            checked += 1
    plain = sum(1 for w in words if not w.complemented)
    return CertificationReport(n, plain, len(words), checked, dict(hist), fallbacks)
