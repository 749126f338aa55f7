import json

import pytest

from kurlab.alphabet import PointedChain
from kurlab.errors import InputError, PreconditionError, ResourceError
from kurlab.rewrite import normalize
from kurlab.topology import (
    FiniteTopology, GroundSet, PolySpace, antidiscrete, closure, comparable_chains, complement,
    complement_op, compose, discrete, dump_space, enumerate_topologies, generate_monoid,
    generated_topology, interior, is_saturated, load_space, make_space, orbit, read_space,
    search_incomparable, validate_topology, verify_saturated_bound, verify_upper_bound,
)
from kurlab.words import all_words
from oracle import all_topologies, naive_closure, naive_interior, operator_monoid_size, powerset

X, Y, Z = 1, 2, 4
SIERP = validate_topology(2, [0, X, X | Y])


def as_sets(t: FiniteTopology):
    names = list(range(t.size))
    return [frozenset(i for i in names if U >> i & 1) for U in t.opens]


def single(t):
    return PolySpace(GroundSet(t.size), (t,))


def test_ground_set():
    g = GroundSet(3)
    assert g.names == ("x", "y", "z")
    assert g.mask(["x", "z"]) == 5 and g.show(5) == "{x,z}"
    with pytest.raises(InputError):
        g.mask(["q"])
    with pytest.raises(InputError):
        GroundSet(2, ("a", "a"))
    with pytest.raises(ResourceError):
        GroundSet(7)


def test_ground_cap_env(monkeypatch):
    monkeypatch.setenv("KURLAB_MAX_GROUND", "2")
    with pytest.raises(ResourceError):
        GroundSet(3)
    monkeypatch.setenv("KURLAB_MAX_GROUND", "8")
    assert GroundSet(8).full == 255
    monkeypatch.setenv("KURLAB_MAX_GROUND", "lots")
    with pytest.raises(InputError):
        GroundSet(1)


def test_validate_examples():
    assert SIERP.opens == {0, X, X | Y}
    with pytest.raises(InputError, match="whole"):
        validate_topology(2, [0, X, Y])
    with pytest.raises(InputError, match="union"):
        validate_topology(3, [0, X, Y, 7])
    with pytest.raises(InputError, match="empty"):
        validate_topology(2, [X, X | Y])
    with pytest.raises(InputError, match="intersection"):
        validate_topology(3, [0, X | Y, Y | Z, X | Y | Z])
    with pytest.raises(InputError):
        validate_topology(2, [0, 3, 4])
    t = validate_topology(3, [0, X, Z, Y | Z, X | Z, 7])
    assert len(t.opens) == 6


def test_operator_examples():
    assert closure(SIERP, X) == X | Y
    assert interior(SIERP, Y) == 0
    d = discrete(3)
    assert all(closure(d, A) == A == interior(d, A) for A in range(8))
    assert closure(antidiscrete(2), X) == 3
    assert complement(X, 2) == Y


def test_operators_against_naive():
    pts = range(3)
    for t in enumerate_topologies(3):
        opens = as_sets(t)
        for A in range(8):
            S = frozenset(i for i in pts if A >> i & 1)
            assert t.interior(A) == sum(1 << i for i in naive_interior(opens, S))
            assert t.closure(A) == sum(1 << i for i in naive_closure(pts, opens, S))


def test_closure_axioms_and_duality():
    for t in enumerate_topologies(3):
        full = 7
        for A in range(8):
            assert t.interior(A) & ~A == 0 and A & ~t.closure(A) == 0
            assert t.interior(t.interior(A)) == t.interior(A)
            assert t.closure(t.closure(A)) == t.closure(A)
            assert t.interior(A) == full & ~t.closure(full & ~A)
            for B in range(8):
                if A & ~B == 0:
                    assert t.closure(A) & ~t.closure(B) == 0
                    assert t.interior(A) & ~t.interior(B) == 0
        c = complement_op(3)
        assert compose(c, compose(t.closure_table, c)) == t.interior_table


def test_chain_monotonicity():
    for a, b in comparable_chains(3):
        for A in range(8):
            assert a.interior(A) & ~b.interior(A) == 0
            assert b.closure(A) & ~a.closure(A) == 0


def test_enumeration_counts():
    assert [len(enumerate_topologies(n)) for n in (1, 2, 3, 4)] == [1, 4, 29, 355]
    assert {t.opens for t in enumerate_topologies(3)} == {
        frozenset(sum(1 << i for i in U) for U in fam) for fam in all_topologies(range(3))
    }
    with pytest.raises(ResourceError):
        enumerate_topologies(5)


def test_generate_examples():
    assert len(generate_monoid(single(SIERP))) == 4
    assert len(generate_monoid(single(SIERP), with_complement=True)) == 8
    # on two points with the trivial topology cl int = int and int cl = cl
    assert len(generate_monoid(single(antidiscrete(2)))) == 3
    assert len(generate_monoid(single(discrete(2)), with_complement=True)) == 2
    m = generate_monoid(single(SIERP))
    assert m.word_of(SIERP.closure_table) == ("k0",)
    assert m.word_of(tuple(range(4))) == ("1",)


def test_generate_cap():
    space = make_space(3, [[0, X, 7], [0, X, Z, X | Z, 7]])
    with pytest.raises(ResourceError) as exc:
        generate_monoid(space, max_size=3)
    assert exc.value.cap == 3 and exc.value.frontier >= 0


def test_monoid_sizes_match_naive_bfs():
    pts = range(3)
    for chain in comparable_chains(3)[::7]:
        space = PolySpace(GroundSet(3), chain)
        tops = [as_sets(t) for t in chain]
        for comp in (False, True):
            assert len(generate_monoid(space, comp)) == operator_monoid_size(pts, tops, comp)


def test_upper_bound_exhaustive():
    for size in (1, 2, 3):
        for t in enumerate_topologies(size):
            assert verify_upper_bound(single(t))
            r = verify_upper_bound(single(t), with_complement=True)
            assert r and r.bound == 14
        for chain in comparable_chains(size):
            space = PolySpace(GroundSet(size), chain)
            k = verify_upper_bound(space)
            k2 = verify_upper_bound(space, with_complement=True)
            assert k and k.bound == 63
            assert k2 and k2.bound == 126
            assert k2.size <= 2 * k.size


def test_single_topology_four_points():
    for t in enumerate_topologies(4):
        assert verify_upper_bound(single(t), with_complement=True).size <= 14


def test_bound_report():
    r = verify_upper_bound(make_space(2, [[0, 3], [0, 1, 2, 3]]))
    assert r.size <= 7 and r.bound == 63 and r.margin == 63 - r.size
    assert r.to_json()["kind"] == "K"


def test_saturation_examples():
    dup = PolySpace(GroundSet(2), (SIERP, SIERP))
    assert is_saturated(dup)
    assert verify_saturated_bound(dup).size <= 7
    assert not is_saturated(PolySpace(GroundSet(2), (antidiscrete(2), SIERP)))
    with pytest.raises(PreconditionError):
        verify_saturated_bound(PolySpace(GroundSet(2), (antidiscrete(2), SIERP)))
    sat = make_space(3, [[0, X, 7], [0, X, X | Y, 7]])
    assert is_saturated(sat)
    r = verify_saturated_bound(sat)
    assert r and r.bound == 13
    assert verify_saturated_bound(single(SIERP)).size <= 7


def test_saturated_bound_exhaustive():
    for size in (2, 3):
        for chain in comparable_chains(size):
            space = PolySpace(GroundSet(size), chain)
            if is_saturated(space):
                assert verify_saturated_bound(space)


def test_orbit_examples():
    # int and cl send {x} to {x} or X only
    assert orbit(single(SIERP), X) == {X, 3}
    assert orbit(single(SIERP), X, with_complement=True) == {0, 1, 2, 3}
    assert all(orbit(single(discrete(3)), A) == {A} for A in range(8))
    with pytest.raises(InputError):
        orbit(single(SIERP), 9)


def test_orbit_agrees_with_monoid():
    space = make_space(3, [[0, X, 7], [0, X, Z, X | Z, 7]])
    ops = generate_monoid(space, True).elements
    for A in range(8):
        assert orbit(space, A, True) == {op[A] for op in ops}


def test_semantic_soundness_of_rewriting():
    words = list(all_words(PointedChain(2, 2), 6))
    chains = comparable_chains(3)[::45]
    for chain in chains:
        space = PolySpace(GroundSet(3), chain)
        for w in words:
            assert space.word_op(w) == space.word_op(normalize(w))


def test_generated_topology():
    t = generated_topology(3, [X | Y, Y | Z])
    assert t.opens == {0, Y, X | Y, Y | Z, 7}
    validate_topology(3, t.opens)


def test_search_small():
    r2 = search_incomparable(2)
    assert r2.exhaustive and r2.orbit_size == 2
    r3 = search_incomparable(3)
    assert r3.orbit_size == 4 and r3.pairs_examined == 243
    s, t = r3.pair
    assert not s.comparable(t)
    assert search_incomparable(1) is None
    assert search_incomparable(3) == r3


def test_search_random():
    r = search_incomparable(4, budget=200, seed=3)
    assert not r.exhaustive and r.orbit_size >= 2
    assert r == search_incomparable(4, budget=200, seed=3)


def test_space_json_round_trip(tmp_path):
    doc = {"ground": ["x", "y", "z"], "topologies": [[[], ["x"], ["x", "y", "z"]], [[], ["x"], ["x", "y"], ["x", "y", "z"]]]}
    space = load_space(doc)
    assert dump_space(space) == doc
    assert load_space(json.dumps(doc)) == space
    p = tmp_path / "s.json"
    p.write_text(json.dumps(doc))
    assert read_space(str(p)) == space
    with pytest.raises(InputError):
        load_space("{bad")
    with pytest.raises(InputError):
        load_space({"ground": ["x"]})
    with pytest.raises(InputError):
        load_space({"ground": ["x", "y"], "topologies": [[[], ["x", "y"]], [[], ["y"], ["x", "y"]], [[], ["x"], ["x", "y"]]]})


def test_chain_must_be_increasing():
    with pytest.raises(InputError):
        PolySpace(GroundSet(2), (SIERP, antidiscrete(2)))
    with pytest.raises(InputError):
        PolySpace(GroundSet(2), ())
