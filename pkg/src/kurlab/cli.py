"""Command-line interface.

Exit codes: 0 success, 1 verification failure, 2 input error, 3 resource cap.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from fractions import Fraction

from . import counting, rewrite, topology, witness
from .alphabet import PointedChain
from .errors import InputError, KurlabError
from .words import Word, classify, enumerate_full, enumerate_kuratowski

FORMATS = ("text", "json", "csv", "dot")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise InputError(message)


def _dec(q: Fraction, digits: int = 12) -> str:
    return f"{float(q):.{digits}f}"


def _json(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def _csv(rows) -> str:
    buf = io.StringIO()
    csv.writer(buf, lineterminator="\n").writerows(rows)
    return buf.getvalue()


def _chain(args) -> PointedChain:
    p = args.n if args.p is None else args.p
    return PointedChain(args.n, p)


def _word(text: str, chain: PointedChain) -> Word:
    w = Word.parse(text)
    for x in w:
        chain.check(x)
    return w


# --- subcommands ------------------------------------------------------------------


def cmd_count(args):
    if args.grid:
        n = 9 if args.n is None else args.n
        p = n if args.p is None else args.p
        grid = counting.K_grid(n, p)
        if args.format == "json":
            return 0, _json({"n_max": n, "p_max": p, "grid": grid})
        if args.format == "csv":
            return 0, _csv([["n\\p"] + list(range(p + 1))] + [[i] + row for i, row in enumerate(grid)])
        width = len(str(grid[-1][-1]))
        lines = ["n\\p " + " ".join(f"{j:>{width}}" for j in range(p + 1))]
        lines += [f"{i:>3} " + " ".join(f"{x:>{width}}" for x in row) for i, row in enumerate(grid)]
        return 0, "\n".join(lines) + "\n"
    if args.n is None:
        raise InputError("count needs --n (or --grid)")
    chain = _chain(args)
    value = counting.K(chain.n_neg, chain.n_pos)
    if args.format == "json":
        fams = dict(zip(("Vmp", "Vpm", "Wplus", "Wminus"), counting.family_counts(chain.n_neg, chain.n_pos)))
        return 0, _json({"n": chain.n_neg, "p": chain.n_pos, "K": value, "families": fams})
    if args.format == "csv":
        return 0, _csv([["n", "p", "K"], [chain.n_neg, chain.n_pos, value]])
    return 0, f"{value}\n"


def cmd_enumerate(args):
    chain = _chain(args)
    words = enumerate_full(chain, args.cap) if args.full else enumerate_kuratowski(chain, args.cap)
    if args.format == "json":
        return 0, _json([str(w) for w in words])
    if args.format == "csv":
        rows = [["word", "family", "pivot"]]
        for w in words:
            base = w.word if args.full else w
            cls = classify(base)
            rows.append([str(w), cls.tag.value, "" if cls.pivot is None else cls.pivot])
        return 0, _csv(rows)
    return 0, "".join(f"{w}\n" for w in words)


def cmd_normalize(args):
    chain = _chain(args)
    w = _word(args.word, chain)
    nf = rewrite.normalize(w, chain)
    if args.format == "json":
        cls = classify(nf)
        return 0, _json({"input": str(w), "normal_form": str(nf), "family": cls.tag.value, "pivot": cls.pivot})
    return 0, f"{nf}\n"


def cmd_equal(args):
    chain = _chain(args)
    u, v = _word(args.u, chain), _word(args.v, chain)
    nu, nv = rewrite.normalize(u, chain), rewrite.normalize(v, chain)
    eq = nu == nv
    if args.format == "json":
        return 0, _json({"equal": eq, "normal_forms": [str(nu), str(nv)]})
    return 0, f"{'true' if eq else 'false'}\n"


def cmd_free(args):
    chain = _chain(args)
    M = rewrite.build_free_monoid(chain, cap=args.max_size)
    edges = rewrite.hasse_edges(M)
    code = 0
    idem = None
    if args.check_idempotent:
        idem = rewrite.check_idempotency(M)
        code = 0 if idem else 1
    if args.hasse:
        with open(args.hasse, "w") as fh:
            fh.write(rewrite.hasse_dot(M))
    if args.format == "dot":
        return code, rewrite.hasse_dot(M)
    if args.format == "json":
        data = M.to_json()
        data["hasse"] = [[str(a), str(b)] for a, b in edges]
        if idem is not None:
            data["idempotent"] = idem
        return code, _json(data)
    if args.format == "csv":
        return code, _csv([["lower", "upper"]] + [[str(a), str(b)] for a, b in edges])
    lines = [f"elements: {len(M)}", f"covers: {len(edges)}"]
    if idem is not None:
        lines.append(f"idempotent: {'true' if idem else 'false'}")
    lines += [f"{a} -> {b}" for a, b in edges]
    return code, "\n".join(lines) + "\n"


def cmd_monoid(args):
    space = topology.read_space(args.space)
    G = topology.generate_monoid(space, args.complement, args.max_size)
    words = [" ".join(G.word_of(op)) for op in G.elements]
    if args.format == "json":
        return 0, _json({
            "size": len(G),
            "elements": [{"word": w, "table": [space.ground.members(A) for A in op]} for w, op in zip(words, G.elements)],
        })
    if args.format == "csv":
        return 0, _csv([["word"] + [space.ground.show(A) for A in range(1 << space.size)]]
                       + [[w] + [space.ground.show(A) for A in op] for w, op in zip(words, G.elements)])
    return 0, f"size: {len(G)}\n" + "".join(f"{w}\n" for w in words)


def cmd_verify_bound(args):
    space = topology.read_space(args.space)
    plain = topology.verify_upper_bound(space, False, args.max_size)
    full = topology.verify_upper_bound(space, True, args.max_size)
    code = 0 if plain and full else 1
    if args.format == "json":
        return code, _json({"topologies": len(space.chain), "K": plain.to_json(), "K2": full.to_json()})
    lines = [
        f"topologies: {len(space.chain)}",
        f"|K|  = {plain.size} <= {plain.bound}: {'ok' if plain else 'VIOLATED'}",
        f"|K2| = {full.size} <= {full.bound}: {'ok' if full else 'VIOLATED'}",
    ]
    return code, "\n".join(lines) + "\n"


def cmd_saturated(args):
    space = topology.read_space(args.space)
    sat = topology.is_saturated(space)
    report = topology.verify_saturated_bound(space, args.max_size) if sat else None
    code = 1 if report is not None and not report else 0
    if args.format == "json":
        return code, _json({"saturated": sat, "bound": report.to_json() if report else None})
    lines = [f"saturated: {'true' if sat else 'false'}"]
    if report is not None:
        lines.append(f"|K| = {report.size} <= {report.bound}: {'ok' if report else 'VIOLATED'}")
    return code, "\n".join(lines) + "\n"


def cmd_witness(args):
    if args.certify:
        rep = witness.certify_exactness(args.n, cap=args.cap)
        ok = rep.counts == (counting.K(args.n), 2 * counting.K(args.n))
        code = 0 if ok else 1
        if args.format == "json":
            return code, _json(rep.to_json())
        lines = [f"{rep.kuratowski_count} {rep.full_count}", f"pairs checked: {rep.pairs_checked}",
                 f"fallbacks: {rep.fallbacks}"]
        lines += [f"  {case}: {count}" for case, count in sorted(rep.case_histogram.items())]
        return code, "\n".join(lines) + "\n"
    W = witness.build_witness(args.n)
    comps = W.distinct_components()
    if args.format == "json":
        return 0, _json({"n": args.n, "components": len(W), "distinct": [c.to_json() for c in comps]})
    return 0, f"components: {len(W)}\ndistinct: {len(comps)}\n"


def _sample_points(n_max):
    pts = set(range(1, min(n_max, 9) + 1))
    k = 10
    while k <= n_max:
        pts.update((k, 2 * k, 5 * k))
        k *= 10
    pts.add(n_max)
    return sorted(p for p in pts if 1 <= p <= n_max)


def cmd_asympt(args):
    ok, bad = counting.verify_sup_bound(args.max)
    code = 0 if ok else 1
    rows = []
    for n in _sample_points(args.max):
        row = {"n": n, "k": counting.k_ratio(n)}
        if args.stirling:
            lo, hi = counting.pi_enclosure(counting.stirling_ratio(n))
            row["pi_lo"], row["pi_hi"] = lo, hi
        rows.append(row)
    if args.format == "json":
        out = []
        for r in rows:
            item = {key: _dec(val) if isinstance(val, Fraction) else val for key, val in r.items()}
            if r["n"] <= 9:
                item["k_exact"] = str(r["k"])
            out.append(item)
        return code, _json({"max": args.max, "sup_bound_holds": ok, "first_violation": bad, "rows": out})
    if args.format == "csv":
        head = ["n", "k"] + (["stirling_pi_lo", "stirling_pi_hi"] if args.stirling else [])
        keys = ["k"] + (["pi_lo", "pi_hi"] if args.stirling else [])
        return code, _csv([head] + [[r["n"]] + [_dec(r[k]) for k in keys] for r in rows])
    lines = [f"9 K(n) <= 16 C(2n,n)^2 for all n <= {args.max}: {'holds' if ok else f'fails at n={bad}'}"]
    for r in rows:
        line = f"n={r['n']:<5} k(n)={_dec(r['k'])}"
        if args.stirling:
            line += f"  pi*K(n)*9n/16^(n+1) in [{_dec(r['pi_lo'])}, {_dec(r['pi_hi'])}]"
        lines.append(line)
    return code, "\n".join(lines) + "\n"


def cmd_search(args):
    res = topology.search_incomparable(args.ground, args.budget, args.seed)
    if res is None:
        if args.format == "json":
            return 0, _json({"ground": args.ground, "result": None})
        return 0, "no incomparable pair of topologies\n"
    ground = topology.GroundSet(args.ground)
    data = res.to_json(ground)
    if args.format == "json":
        return 0, _json(data)
    lines = [
        f"max orbit size: {res.orbit_size}",
        f"pairs examined: {res.pairs_examined} ({'exhaustive' if res.exhaustive else 'random'})",
        f"test set: {ground.show(res.test_set)}",
    ]
    for i, t in enumerate(res.pair):
        lines.append(f"t{i}: " + " ".join(ground.show(U) for U in t.sorted_opens()))
    return 0, "\n".join(lines) + "\n"


def cmd_quadruples(args):
    rep = rewrite.quadruple_separation_check()
    code = 0 if rep else 1
    mism = {k: [[str(w), [str(x) for x in want], [str(x) for x in got]] for w, want, got in v]
            for k, v in rep.reference_mismatches.items()}
    if args.format == "json":
        return code, _json({
            "ok": rep.ok, "distinct": rep.distinct, "total": rep.total,
            "pair_collisions": {k: len(v) for k, v in rep.pair_collisions.items()},
            "reference_mismatches": mism,
        })
    lines = [f"distinct quadruples: {rep.distinct} of {rep.total}: {'separated' if rep else 'NOT separated'}"]
    for k, v in rep.pair_collisions.items():
        lines.append(f"({k}) alone: {len(v)} colliding images")
    for k, v in mism.items():
        for w, want, got in v:
            lines.append(f"reference ({k}) for {w}: listed ({', '.join(want)}), computed ({', '.join(got)})")
    return code, "\n".join(lines) + "\n"


# --- parser -------------------------------------------------------------------------


def _chain_args(p, required=True):
    p.add_argument("--n", type=int, required=required, help="number of negative letters")
    p.add_argument("--p", type=int, default=None, help="number of positive letters (default: n)")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=FORMATS, default="text")
    common.add_argument("--max-ground", type=int, default=None, help="ground-set cap (overrides KURLAB_MAX_GROUND)")

    parser = _Parser(prog="kurlab", description="Kuratowski monoids of polytopological spaces.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("count", parents=[common], help="K(n, p) and the K(n, p) grid")
    _chain_args(p, required=False)
    p.add_argument("--grid", action="store_true", help="table for 0..n x 0..p (default 9 x 9)")
    p.set_defaults(func=cmd_count)

    p = sub.add_parser("enumerate", parents=[common], help="list Kuratowski words")
    _chain_args(p)
    p.add_argument("--full", action="store_true", help="include complemented words")
    p.add_argument("--cap", type=int, default=None, help="max letters per sign")
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("normalize", parents=[common], help="normal form of a word")
    _chain_args(p)
    p.add_argument("word")
    p.set_defaults(func=cmd_normalize)

    p = sub.add_parser("equal", parents=[common], help="decide equality in the free monoid")
    _chain_args(p)
    p.add_argument("u")
    p.add_argument("v")
    p.set_defaults(func=cmd_equal)

    p = sub.add_parser("free", parents=[common], help="free Kuratowski monoid and its Hasse diagram")
    _chain_args(p)
    p.add_argument("--hasse", metavar="FILE.dot")
    p.add_argument("--check-idempotent", action="store_true")
    p.add_argument("--max-size", type=int, default=rewrite.DEFAULT_MONOID_CAP)
    p.set_defaults(func=cmd_free)

    for name, func, help_ in (
        ("monoid", cmd_monoid, "operator monoid of a space"),
        ("verify-bound", cmd_verify_bound, "check |K| <= K(n) and |K2| <= 2K(n)"),
        ("saturated", cmd_saturated, "saturation test and the 1 + 6|T| bound"),
    ):
        p = sub.add_parser(name, parents=[common], help=help_)
        p.add_argument("--space", required=True, metavar="FILE.json")
        p.add_argument("--max-size", type=int, default=topology.DEFAULT_MAX_MONOID)
        if name == "monoid":
            p.add_argument("--complement", action="store_true")
        p.set_defaults(func=func)

    p = sub.add_parser("witness", parents=[common], help="separating witness spaces")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--certify", action="store_true", help="separate every pair of distinct full words")
    p.add_argument("--cap", type=int, default=witness.DEFAULT_CERTIFY_CAP)
    p.set_defaults(func=cmd_witness)

    p = sub.add_parser("asympt", parents=[common], help="growth of K(n)")
    p.add_argument("--max", type=int, required=True)
    p.add_argument("--stirling", action="store_true")
    p.set_defaults(func=cmd_asympt)

    p = sub.add_parser("search", parents=[common], help="largest orbit under two incomparable closures")
    p.add_argument("--ground", type=int, required=True)
    p.add_argument("--budget", type=int, default=10_000)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("quadruples", parents=[common], help="separate FK(2,2) by four morphisms")
    p.set_defaults(func=cmd_quadruples)
    return parser


def run(argv=None, out=None, err=None) -> int:
    out = sys.stdout if out is None else out
    err = sys.stderr if err is None else err
    saved = os.environ.get("KURLAB_MAX_GROUND")
    try:
        args = build_parser().parse_args(argv)
        if args.max_ground is not None:
            if args.max_ground < 1:
                raise InputError("--max-ground must be positive")
            os.environ["KURLAB_MAX_GROUND"] = str(args.max_ground)
        code, text = args.func(args)
    except KurlabError as exc:
        err.write(f"error: {exc}\n")
        return exc.exit_code
    except OSError as exc:
        err.write(f"error: {exc}\n")
        return 2
    finally:
        # the override lasts for this call only
        if saved is None:
            os.environ.pop("KURLAB_MAX_GROUND", None)
        else:
            os.environ["KURLAB_MAX_GROUND"] = saved
    out.write(text)
    return code


def main(argv=None):
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
