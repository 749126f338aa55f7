"""Acceptance criteria 1-10.

Each test records a PASS/FAIL line with its runtime; the lines are printed
in the pytest terminal summary (see conftest.py), or directly when this
file is run as a script.
"""

import csv
import io
import random
import time
from fractions import Fraction
from pathlib import Path

import pytest

from kurlab import cli
from kurlab.alphabet import PointedChain
from kurlab.counting import K, family_counts, k_ratio, pi_enclosure, stirling_ratio, verify_sup_bound
from kurlab.rewrite import (
    build_free_monoid, check_idempotency, congruence_closure_oracle, hasse_edges, normal_form_partition,
    normalize, quadruple_separation_check,
)
from kurlab.topology import (
    GroundSet, PolySpace, comparable_chains, compose, enumerate_topologies, generate_monoid,
    identity_op, is_saturated, search_incomparable,
)
from kurlab.witness import certify_exactness
from kurlab.words import Family, Word, all_words, classify, enumerate_kuratowski

DATA = Path(__file__).parent / "data"
RESULTS: dict[int, str] = {}


class criterion:
    """Time a block and record one summary line for criterion ``num``."""

    def __init__(self, num, title, limit=None):
        self.num, self.title, self.limit = num, title, limit

    def __enter__(self):
        self.start = time.perf_counter()
        return self

    def __exit__(self, exc_type, exc, tb):
        elapsed = time.perf_counter() - self.start
        ok = exc_type is None and (self.limit is None or elapsed < self.limit)
        limit = f" (limit {self.limit:g} s)" if self.limit else ""
        RESULTS[self.num] = f"criterion {self.num:>2} {'PASS' if ok else 'FAIL'}  {self.title}  [{elapsed:.2f} s{limit}]"
        print(RESULTS[self.num])
        if exc_type is None and not ok:
            raise AssertionError(f"criterion {self.num} exceeded {self.limit} s ({elapsed:.1f} s)")
        return False


def _read(name):
    with open(DATA / name) as fh:
        return list(csv.reader(fh))


def _cli(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = cli.run([str(a) for a in argv], out, err)
    assert code == 0, err.getvalue()
    return out.getvalue()


def test_criterion_01_counting_tables():
    grid_table = _read("k_grid.csv")
    row_table = _read("k_row.csv")[1:]
    with criterion(1, "K(n,p) grid 0..9 and K(n), 2K(n) row", limit=1):
        printed = list(csv.reader(io.StringIO(_cli("count", "--grid", "--format", "csv"))))
        assert printed == grid_table
        for n_str, k_str, k2_str in row_table:
            n = int(n_str)
            assert int(_cli("count", "--n", n)) == K(n) == int(k_str)
            assert int(printed[n + 1][n + 1]) == K(n)
            if n == 6:
                # the printed double 2991359 is off by 5 from 2 * 1495677
                assert int(k2_str) == 2991359 and 2 * K(6) == 2991354
            else:
                assert 2 * K(n) == int(k2_str)


def test_criterion_02_enumeration_matches_formula():
    keys = (Family.Vmp, Family.Vpm, Family.Wplus, Family.Wminus)
    with criterion(2, "enumeration size and family counts for n,p <= 4", limit=30):
        for n in range(5):
            for p in range(5):
                words = enumerate_kuratowski(PointedChain(n, p))
                assert len(words) == K(n, p)
                tags = [classify(w).tag for w in words]
                assert tuple(tags.count(k) for k in keys) == family_counts(n, p)


def test_criterion_03_normal_forms():
    chain = PointedChain(2, 2)
    with criterion(3, "normal forms of all words of length <= 8 over (2,2)", limit=300):
        words = list(all_words(chain, 8))
        assert len(words) == sum(5 ** k for k in range(1, 9))
        forms = {}
        for w in words:
            nf = normalize(w)
            assert classify(nf) is not None
            forms[w] = nf
        for nf in set(forms.values()):
            assert normalize(nf) == nf
        rng = random.Random(2024)
        for w in rng.sample(words, len(words) // 100):
            for _ in range(100):
                assert normalize(w, rng=rng) == forms[w]


def test_criterion_04_oracle_equivalence():
    with criterion(4, "congruence closure oracle = normal-form partition", limit=120):
        for chain in (PointedChain(1, 1), PointedChain(2, 1)):
            assert congruence_closure_oracle(chain, 6) == normal_form_partition(chain, 6)


def test_criterion_05_free_monoids():
    def W(t):
        return Word.parse(" ".join({"a": "i0", "b": "i1", "x": "k0", "1": "1"}[c] for c in t))

    fk11 = {(W(a), W(b)) for a, b in (s.split() for s in
            ["a axa", "axa ax", "axa xa", "ax xax", "xa xax", "xax x", "a 1", "1 x"])}
    fk21 = {(W(a), W(b)) for a, b in (s.split() for s in [
        "ax bxax", "bxax bx", "bxax xax", "axb bxaxb", "axb ax", "bx xbx", "axa axb", "axa bxa",
        "bxaxb bxb", "bxaxb bxax", "bxaxb xaxb", "bxb bx", "bxb xb", "xbx x", "xax xbx",
        "bxa bxaxb", "bxa xa", "xb xbx", "xa xaxb", "xaxb xb", "xaxb xax",
        "a axa", "a b", "b bxb", "b 1", "1 x"])}
    with criterion(5, "FK(1,1), FK(2,1) diagrams, idempotency, quadruple separation"):
        M11, M21 = build_free_monoid(PointedChain(1, 1)), build_free_monoid(PointedChain(2, 1))
        assert len(M11) == 7 and set(hasse_edges(M11)) == fk11 and len(fk11) == 8
        assert len(M21) == 17 and set(hasse_edges(M21)) == fk21
        for n in range(3):
            for p in range(3):
                assert check_idempotency(build_free_monoid(PointedChain(n, p)))
        rep = quadruple_separation_check()
        assert rep and rep.distinct == 63


def _sweep():
    """Sizes of K and K2 for every single topology and comparable pair on <= 3 points."""
    out = []
    for size in (1, 2, 3):
        ground = GroundSet(size)
        for t in enumerate_topologies(size):
            space = PolySpace(ground, (t,))
            out.append((space, len(generate_monoid(space)), len(generate_monoid(space, True))))
        for chain in comparable_chains(size):
            space = PolySpace(ground, chain)
            out.append((space, len(generate_monoid(space)), len(generate_monoid(space, True))))
    return out


@pytest.fixture(scope="module")
def sweep():
    return _sweep()


def test_criterion_06_bounds():
    with criterion(6, "exhaustive |K| <= K(n), |K2| <= 2K(n) on <= 3 points", limit=120):
        sweep = _sweep()
        assert len(enumerate_topologies(3)) == 29
        singles = pairs = 0
        for space, k, k2 in sweep:
            if len(space.chain) == 1:
                singles += 1
                assert k <= 7 and k2 <= 14
            else:
                pairs += 1
                assert k <= 63 and k2 <= 126
            assert k2 <= 2 * k
        assert singles == 1 + 4 + 29 and pairs > singles


def test_criterion_07_saturated(sweep):
    with criterion(7, "saturated 2-chains satisfy |K| <= 13"):
        found = [(space, k) for space, k, _ in sweep if len(space.chain) == 2 and is_saturated(space)]
        assert found
        assert all(k <= 13 for _, k in found)


def test_criterion_08_exactness():
    with criterion(8, "certify_exactness n = 1, 2, 3 (n = 3 under 60 s)"):
        for n, expected in [(1, (7, 14)), (2, (63, 126))]:
            rep = certify_exactness(n)
            assert rep.counts == expected and rep.fallbacks == 0
        start = time.perf_counter()
        rep = certify_exactness(3)
        assert time.perf_counter() - start < 60
        assert rep.counts == (697, 1394) == (K(3), 2 * K(3))
        assert rep.pairs_checked == 1394 * 1393 and rep.fallbacks == 0


def test_criterion_09_asymptotics():
    with criterion(9, "sup bound to 500, exact k(n), Stirling enclosures", limit=120):
        assert verify_sup_bound(500) == (True, None)
        assert k_ratio(1) == Fraction(7, 4)
        assert k_ratio(3) == Fraction(697, 400)
        assert k_ratio(4) == Fraction(8549, 4900)
        lo, hi = pi_enclosure(stirling_ratio(9))
        assert Fraction(90, 100) <= lo and hi <= 1
        lo, hi = pi_enclosure(stirling_ratio(50))
        assert Fraction(97, 100) <= lo and hi <= Fraction(101, 100)


def test_criterion_10_semantic_soundness():
    chain = PointedChain(2, 2)
    with criterion(10, "operator of w = operator of normalize(w), |w| <= 6, all 2-chains on 3 points", limit=300):
        layers = [[()]]
        for _ in range(6):
            layers.append([w + (x,) for w in layers[-1] for x in chain.letters])
        words = [w for layer in layers[1:] for w in layer]
        nf = {w: tuple(normalize(Word(w))) for w in words}
        chains = comparable_chains(3)
        assert len(chains) == 192
        for tops in chains:
            space = PolySpace(GroundSet(3), tops)
            letter = {x: space.letter_op(x) for x in chain.letters}
            ops = {(): identity_op(3)}
            for w in words:
                ops[w] = compose(ops[w[:-1]], letter[w[-1]])
            for w in words:
                assert ops[w] == ops[nf[w]]


def test_exploratory_search_reports_maximizer():
    res = search_incomparable(3)
    assert res is not None and res.exhaustive
    assert not res.pair[0].comparable(res.pair[1])
    assert res.orbit_size >= 1


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-q", "-p", "no:cacheprovider"]))
