"""Normal forms in free Kuratowski monoids.

Rewrite rules (each one shortens the word):

* ``UnitDrop``         delete a ``1`` unless the word is just ``1``
* ``IdemMergeNeg``     two adjacent negative letters -> their minimum
* ``IdemMergePos``     two adjacent positive letters -> their maximum
* ``FourBlockNegPos``  ``x1 x2 x3 x4 -> x1 x4`` for x1 <= x3 negative, x2 <= x4 positive
* ``FourBlockPosNeg``  ``x1 x2 x3 x4 -> x1 x4`` for x1 >= x3 positive, x2 >= x4 negative

Irreducible words are exactly the Kuratowski words, and distinct Kuratowski
words are distinct elements of the free monoid, so equality of normal forms
decides equality.
"""

from __future__ import annotations

import enum
import json
import random
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from importlib import resources
from itertools import product
from typing import Iterable, Sequence

from .alphabet import ONE, SEPARATING_MORPHISMS, ChainMorphism, Letter, PointedChain, validate_morphism
from .errors import ConsistencyError, InputError, ResourceError
from .words import UNIT, Word, check_word, enumerate_kuratowski, word_sort_key

DEFAULT_MONOID_CAP = 10_000
DEFAULT_ORACLE_CAP = 2_000_000


class Rule(enum.Enum):
    UnitDrop = "UnitDrop"
    IdemMergeNeg = "IdemMergeNeg"
    IdemMergePos = "IdemMergePos"
    FourBlockNegPos = "FourBlockNegPos"
    FourBlockPosNeg = "FourBlockPosNeg"


@dataclass(frozen=True)
class RewriteRuleApplication:
    rule: Rule
    position: int


def _is_four_block(x1, x2, x3, x4) -> bool:
    if x1 < 0 and x3 < 0 and x2 > 0 and x4 > 0:
        return x1 <= x3 and x2 <= x4
    if x1 > 0 and x3 > 0 and x2 < 0 and x4 < 0:
        return x1 >= x3 and x2 >= x4
    return False


def redexes(w: Sequence[int]) -> list[RewriteRuleApplication]:
    """Every rule application available on ``w``."""
    out = []
    n = len(w)
    for i, x in enumerate(w):
        if x == 0 and n > 1:
            out.append(RewriteRuleApplication(Rule.UnitDrop, i))
        if i + 1 < n:
            y = w[i + 1]
            if x < 0 and y < 0:
                out.append(RewriteRuleApplication(Rule.IdemMergeNeg, i))
            elif x > 0 and y > 0:
                out.append(RewriteRuleApplication(Rule.IdemMergePos, i))
        if i + 3 < n and _is_four_block(x, w[i + 1], w[i + 2], w[i + 3]):
            rule = Rule.FourBlockNegPos if x < 0 else Rule.FourBlockPosNeg
            out.append(RewriteRuleApplication(rule, i))
    return out


def apply_rule(w: Sequence[int], app: RewriteRuleApplication) -> tuple:
    w = tuple(w)
    i = app.position
    if app.rule is Rule.UnitDrop:
        if w[i] != 0 or len(w) == 1:
            raise InputError(f"UnitDrop does not apply at {i}")
        return w[:i] + w[i + 1:]
    if app.rule is Rule.IdemMergeNeg:
        if not (w[i] < 0 and w[i + 1] < 0):
            raise InputError(f"IdemMergeNeg does not apply at {i}")
        return w[:i] + (min(w[i], w[i + 1]),) + w[i + 2:]
    if app.rule is Rule.IdemMergePos:
        if not (w[i] > 0 and w[i + 1] > 0):
            raise InputError(f"IdemMergePos does not apply at {i}")
        return w[:i] + (max(w[i], w[i + 1]),) + w[i + 2:]
    if not _is_four_block(*w[i:i + 4]):
        raise InputError(f"{app.rule.value} does not apply at {i}")
    return w[:i + 1] + w[i + 3:]


def _normal_codes(w: Sequence[int]) -> tuple:
    # pass 1: drop units and merge same-sign neighbours, left to right
    st = []
    for x in w:
        if x == 0:
            continue
        if st and (x < 0) == (st[-1] < 0):
            if x < 0:
                if x < st[-1]:
                    st[-1] = x
            elif x > st[-1]:
                st[-1] = x
            continue
        st.append(x)
    if not st:
        return (0,)
    # pass 2: leftmost four-block first; the stack never holds a redex
    out = []
    for x in st:
        out.append(x)
        while len(out) >= 4 and _is_four_block(out[-4], out[-3], out[-2], out[-1]):
            del out[-3:-1]
    return tuple(out)


def normalize(w: Sequence, chain: PointedChain | None = None, rng: random.Random | None = None) -> Word:
    """Kuratowski normal form of ``w``.

    With ``rng`` the redex to contract is drawn at random at every step
    instead of following the deterministic strategy.
    """
    if chain is not None:
        w = check_word(w, chain)
    elif not isinstance(w, Word):
        w = Word(w)
    if rng is None:
        return Word(_normal_codes(w))
    cur = tuple(w)
    while True:
        apps = redexes(cur)
        if not apps:
            return Word(cur)
        cur = apply_rule(cur, rng.choice(apps))


def rewrite_trace(w: Sequence, rng: random.Random | None = None) -> list[tuple[RewriteRuleApplication, Word]]:
    """One maximal rewrite sequence as (application, resulting word) steps."""
    cur = tuple(Word(w))
    steps = []
    while True:
        apps = redexes(cur)
        if not apps:
            return steps
        app = rng.choice(apps) if rng is not None else apps[0]
        cur = apply_rule(cur, app)
        steps.append((app, Word(cur)))


@lru_cache(maxsize=None)
def _terminal_forms(w: tuple) -> frozenset:
    apps = redexes(w)
    if not apps:
        return frozenset((w,))
    out = set()
    for app in apps:
        out |= _terminal_forms(apply_rule(w, app))
    return frozenset(out)


def terminal_forms(w: Sequence) -> set[Word]:
    """Endpoints of every maximal rewrite sequence from ``w`` (all orders)."""
    return {Word(x) for x in _terminal_forms(tuple(Word(w)))}


def clear_terminal_cache():
    _terminal_forms.cache_clear()


def words_equal(u: Sequence, v: Sequence, chain: PointedChain | None = None) -> bool:
    return normalize(u, chain) == normalize(v, chain)


def multiply(u: Sequence, v: Sequence, chain: PointedChain | None = None) -> Word:
    return normalize(tuple(u) + tuple(v), chain)


def induced_hom(m: ChainMorphism, w: Sequence) -> Word:
    report = validate_morphism(m)
    if not report:
        raise InputError(f"invalid morphism {m.name}: {report.violation}")
    w = check_word(w, m.src)
    return normalize(Word(m(x) for x in w))


# --- free monoid -----------------------------------------------------------


@dataclass(frozen=True)
class FreeKuratowskiMonoid:
    chain: PointedChain
    elements: tuple[Word, ...]
    mult_table: tuple[tuple[int, ...], ...] | None
    order: frozenset = field(repr=False)

    @cached_property
    def index(self) -> dict[Word, int]:
        return {w: i for i, w in enumerate(self.elements)}

    @property
    def unit(self) -> int:
        return self.index[UNIT]

    def __len__(self):
        return len(self.elements)

    def mul(self, i: int, j: int) -> int:
        if self.mult_table is not None:
            return self.mult_table[i][j]
        return self.index[multiply(self.elements[i], self.elements[j])]

    def leq(self, u: Sequence, v: Sequence) -> bool:
        idx = self.index
        return (idx[normalize(u)], idx[normalize(v)]) in self.order

    def to_json(self) -> dict:
        return {
            "chain": [self.chain.n_neg, self.chain.n_pos],
            "elements": [str(w) for w in self.elements],
            "mult_table": [list(r) for r in self.mult_table] if self.mult_table is not None else None,
            "order_pairs": sorted([i, j] for i, j in self.order),
        }


def _one_step_order(chain, elements, index):
    letters = chain.letters
    contexts = [()] + [tuple(w) for w in elements]
    steps = set()
    pairs = [(a, b) for a in letters for b in letters if a < b]
    for left in contexts:
        for right in contexts:
            for a, b in pairs:
                lo = index[Word(_normal_codes(left + (a,) + right))]
                hi = index[Word(_normal_codes(left + (b,) + right))]
                if lo != hi:
                    steps.add((lo, hi))
    return steps


def _reflexive_transitive_closure(size, steps):
    up = [[] for _ in range(size)]
    for i, j in steps:
        up[i].append(j)
    closure = set()
    for s in range(size):
        seen = {s}
        stack = [s]
        while stack:
            x = stack.pop()
            for y in up[x]:
                if y not in seen:
                    seen.add(y)
                    stack.append(y)
        closure.update((s, t) for t in seen)
    return closure


def build_free_monoid(chain: PointedChain, cap: int = DEFAULT_MONOID_CAP, with_order: bool = True) -> FreeKuratowskiMonoid:
    from .counting import K

    size = K(chain.n_neg, chain.n_pos)
    if size > cap:
        raise ResourceError(f"free monoid has {size} elements, above the cap {cap}", cap=cap)
    elements = tuple(enumerate_kuratowski(chain, cap=max(chain.n_neg, chain.n_pos)))
    if len(elements) != size:
        raise ConsistencyError(f"enumerated {len(elements)} normal forms, expected {size}")
    index = {w: i for i, w in enumerate(elements)}
    table = tuple(
        tuple(index[Word(_normal_codes(tuple(u) + tuple(v)))] for v in elements) for u in elements
    )
    order = frozenset()
    if with_order:
        order = frozenset(_reflexive_transitive_closure(size, _one_step_order(chain, elements, index)))
        for i, j in order:
            if i != j and (j, i) in order:
                raise ConsistencyError(f"order is not antisymmetric: {elements[i]} ~ {elements[j]}")
    return FreeKuratowskiMonoid(chain, elements, table, order)


def hasse_edges(M: FreeKuratowskiMonoid) -> list[tuple[Word, Word]]:
    n = len(M.elements)
    above = [set() for _ in range(n)]
    for i, j in M.order:
        if i != j:
            above[i].add(j)
    edges = []
    for i in range(n):
        strict = above[i]
        covered = set()
        for k in strict:
            covered |= above[k]
        for j in sorted(strict - covered):
            edges.append((i, j))
    edges.sort()
    return [(M.elements[i], M.elements[j]) for i, j in edges]


def hasse_dot(M: FreeKuratowskiMonoid, name: str | None = None) -> str:
    name = name or f"FK_{M.chain.n_neg}_{M.chain.n_pos}"
    index = M.index
    lines = [f"digraph {name} {{", "  rankdir=BT;"]
    for i, w in enumerate(M.elements):
        lines.append(f'  n{i} [label="{w}"];')
    for u, v in hasse_edges(M):
        lines.append(f"  n{index[u]} -> n{index[v]};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def check_idempotency(M: FreeKuratowskiMonoid) -> bool:
    return all(M.mul(i, i) == i for i in range(len(M.elements)))


# --- separation of FK(2,2) by four morphisms ---------------------------------


@dataclass
class QuadrupleReport:
    ok: bool
    distinct: int
    total: int
    quadruples: dict = field(repr=False)
    pair_collisions: dict = field(repr=False)
    reference_mismatches: dict = field(default_factory=dict)

    def __bool__(self):
        return self.ok


def image_table(names=("h12", "h45", "h23", "h34")) -> dict[Word, tuple[Word, ...]]:
    chain = PointedChain(2, 2)
    return {
        w: tuple(induced_hom(SEPARATING_MORPHISMS[h], w) for h in names)
        for w in enumerate_kuratowski(chain)
    }


def reference_images() -> dict[Word, tuple[tuple[Word, Word], tuple[Word, Word]]]:
    """Hand-computed (h12, h45) and (h23, h34) image pairs for the 63 words.

    Entries are kept verbatim, including one pair that is not in normal form.
    """
    raw = json.loads(resources.files("kurlab.data").joinpath("fk22_images.json").read_text())
    out = {}
    for w, p1, p2 in zip(raw["words"], raw["h12_h45"], raw["h23_h34"]):
        out[Word.parse(w)] = (tuple(Word.parse(x) for x in p1), tuple(Word.parse(x) for x in p2))
    return out


def quadruple_separation_check(reference: dict | None = None) -> QuadrupleReport:
    """Check that (h12, h45, h23, h34) separates the 63 elements of FK(2,2).

    ``reference`` maps a word to expected (h12, h45) and (h23, h34) image
    pairs; disagreements are recorded per morphism pair.
    """
    table = image_table()
    distinct = len(set(table.values()))
    collisions = {}
    for label, sl in (("h12,h45", slice(0, 2)), ("h23,h34", slice(2, 4))):
        seen: dict = {}
        for w, imgs in table.items():
            seen.setdefault(imgs[sl], []).append(w)
        collisions[label] = {k: v for k, v in seen.items() if len(v) > 1}
    if reference is None:
        reference = reference_images()
    mismatches = {}
    if reference:
        for w, (p1, p2) in reference.items():
            got = table[w]
            if p1 is not None and tuple(got[0:2]) != tuple(p1):
                mismatches.setdefault("h12,h45", []).append((w, tuple(p1), got[0:2]))
            if p2 is not None and tuple(got[2:4]) != tuple(p2):
                mismatches.setdefault("h23,h34", []).append((w, tuple(p2), got[2:4]))
    return QuadrupleReport(distinct == len(table), distinct, len(table), table, collisions, mismatches)


# --- congruence closure oracle -----------------------------------------------


class _UnionFind:
    def __init__(self):
        self.parent = {}

    def find(self, x):
        parent = self.parent
        root = x
        while parent.get(root, root) != root:
            root = parent[root]
        while parent.get(x, x) != root:
            parent[x], x = root, parent[x]
        return root

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[max(ra, rb)] = min(ra, rb)


def generating_pairs(chain: PointedChain) -> list[tuple[tuple, tuple]]:
    """(longer, shorter) word pairs generating the defining congruence."""
    L = chain.letters
    pairs = []
    for x in L:
        pairs.append(((x, ONE), (x,)))
        pairs.append(((ONE, x), (x,)))
        pairs.append(((x, x), (x,)))
    lows = [x for x in L if x <= ONE]
    highs = [y for y in L if y >= ONE]
    for x1 in lows:
        for x2 in lows:
            if x1 > x2:
                continue
            for y1 in highs:
                for y2 in highs:
                    if y1 > y2:
                        continue
                    pairs.append(((x1, y1, x2, y2), (x1, y2)))
                    pairs.append(((y2, x2, y1, x1), (y2, x1)))
    return sorted(set(pairs))


def congruence_closure_oracle(chain: PointedChain, max_len: int, slack: int = 2, cap: int = DEFAULT_ORACLE_CAP) -> list[list[Word]]:
    """Classes of words of length <= ``max_len`` under the defining congruence.

    The closure is computed on all words of length <= ``max_len + slack`` and
    then restricted; the slack lets two short words be joined through a
    slightly longer intermediate word.
    """
    window = max_len + slack
    size = sum(len(chain) ** k for k in range(1, window + 1))
    if size > cap:
        raise ResourceError(f"oracle window holds {size} words, above the cap {cap}", cap=cap)
    by_first: dict = {}
    for lhs, rhs in generating_pairs(chain):
        by_first.setdefault(lhs[0], []).append((lhs, rhs))
    uf = _UnionFind()
    letters = chain.letters
    for n in range(1, window + 1):
        for w in product(letters, repeat=n):
            for i, x in enumerate(w):
                for lhs, rhs in by_first.get(x, ()):
                    k = len(lhs)
                    if w[i:i + k] == lhs:
                        uf.union(w, w[:i] + rhs + w[i + k:])
    classes: dict = {}
    for n in range(1, max_len + 1):
        for w in product(letters, repeat=n):
            classes.setdefault(uf.find(w), []).append(Word(w))
    out = [sorted(c, key=word_sort_key) for c in classes.values()]
    out.sort(key=lambda c: word_sort_key(c[0]))
    return out


def normal_form_partition(chain: PointedChain, max_len: int) -> list[list[Word]]:
    classes: dict = {}
    for n in range(1, max_len + 1):
        for w in product(chain.letters, repeat=n):
            classes.setdefault(normalize(w), []).append(Word(w))
    out = [sorted(c, key=word_sort_key) for c in classes.values()]
    out.sort(key=lambda c: word_sort_key(c[0]))
    return out


def monoid_json(M: FreeKuratowskiMonoid) -> str:
    return json.dumps(M.to_json(), separators=(",", ":"))


def parse_words(texts: Iterable[str]) -> list[Word]:
    return [Word.parse(t) for t in texts]
