"""Slow reference implementations used to freeze derived values.

Nothing here imports the package: subsets are frozensets of point names,
operators are dicts, counts come from factorials.
"""

from itertools import chain, combinations
from math import factorial


def powerset(points):
    pts = sorted(points)
    return [frozenset(c) for c in chain.from_iterable(combinations(pts, r) for r in range(len(pts) + 1))]


def naive_interior(opens, A):
    out = frozenset()
    for U in opens:
        if U <= A:
            out |= U
    return out


def naive_closure(points, opens, A):
    X = frozenset(points)
    out = X
    for U in opens:
        F = X - U
        if A <= F:
            out &= F
    return out


def operator_monoid_size(points, topologies, with_complement=False):
    """Breadth-first closure of {int_t, cl_t (, c)} with operators as dicts."""
    X = frozenset(points)
    subsets = powerset(points)
    gens = []
    for opens in topologies:
        gens.append({A: naive_interior(opens, A) for A in subsets})
        gens.append({A: naive_closure(points, opens, A) for A in subsets})
    if with_complement:
        gens.append({A: X - A for A in subsets})

    def key(op):
        return tuple(sorted((tuple(sorted(a)), tuple(sorted(b))) for a, b in op.items()))

    ident = {A: A for A in subsets}
    seen = {key(ident)}
    frontier = [ident]
    while frontier:
        nxt = []
        for op in frontier:
            for g in gens:
                new = {A: g[op[A]] for A in subsets}
                k = key(new)
                if k not in seen:
                    seen.add(k)
                    nxt.append(new)
        frontier = nxt
    return len(seen)


def is_topology(points, opens):
    X = frozenset(points)
    opens = set(opens)
    if frozenset() not in opens or X not in opens:
        return False
    return all(U | V in opens and U & V in opens for U in opens for V in opens)


def all_topologies(points):
    X = frozenset(points)
    middle = [A for A in powerset(points) if A and A != X]
    out = []
    for r in range(len(middle) + 1):
        for fam in combinations(middle, r):
            opens = {frozenset(), X, *fam}
            if is_topology(points, opens):
                out.append(frozenset(opens))
    return out


def binom(n, r):
    if r < 0 or r > n:
        return 0
    return factorial(n) // (factorial(r) * factorial(n - r))


def K_factorial(n, p):
    return sum(binom(i + j, i) * binom(i + j, j) for i in range(n + 1) for j in range(p + 1))
