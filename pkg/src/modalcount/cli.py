"""Command-line workbench: ``modalcount {census,frame,game,numbers,sample}``.

Exit status 0 on success, 2 for invalid input, 3 when a size or budget limit
is hit, 4 when two computations that must agree do not.  Payload goes to
stdout, diagnostics to stderr.  In JSON output every integer is written as
a decimal string so large counts survive any JSON reader.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from fractions import Fraction

from modalcount import census as census_mod
from modalcount import games, modal, partitions
from modalcount.errors import InputError, LimitError, ModalCountError
from modalcount.relations import Frame, RelationClass, all_frames, has_property

AUDITS = (
    "euclidean-implies-transitive",
    "t-and-5-equals-equivalence",
    "reflexive-euclidean-implies-equivalence",
)


class Real(float):
    """A float printed with 12 significant digits."""

    def __str__(self):
        return f"{float(self):.12g}"


# -- output ------------------------------------------------------------------


def _jsonable(x, ints_as_text=True):
    if isinstance(x, bool) or x is None:
        return x
    if isinstance(x, int):
        return str(x) if ints_as_text else x
    if isinstance(x, Real):
        return float(str(x))
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, dict):
        return {str(k): _jsonable(v, ints_as_text) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v, ints_as_text) for v in x]
    return x


def _flat(x) -> str:
    if isinstance(x, bool):
        return "true" if x else "false"
    if x is None:
        return "none"
    if isinstance(x, (dict, list, tuple)):
        return json.dumps(_jsonable(x, ints_as_text=False), separators=(",", ":"))
    return str(x)


def render(payload: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(_jsonable(payload), indent=2) + "\n"
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(payload.keys())
        w.writerow(_flat(v) for v in payload.values())
        return buf.getvalue()
    return "".join(f"{k}: {_flat(v)}\n" for k, v in payload.items())


# -- commands ----------------------------------------------------------------


def cmd_census(args) -> dict:
    labeled, unlabeled = args.labeled, args.unlabeled
    if not labeled and not unlabeled:
        labeled = unlabeled = True
    rep = census_mod.census(args.n, args.cls, labeled, unlabeled, args.both, args.budget)
    out = {"n": rep.n, "class": rep.cls.value}
    if labeled:
        out["labeled"] = rep.labeled
    if unlabeled:
        out["unlabeled"] = rep.unlabeled
    out["method"] = rep.method
    return out


def _load_json(path: str):
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as e:
        raise InputError(f"cannot read {path}: {e.strerror}") from None
    except json.JSONDecodeError as e:
        raise InputError(f"{path} is not valid JSON: {e}") from None


def _audit(name: str, n: int, budget: int) -> dict:
    total = 1 << (n * n)
    if total > budget:
        raise LimitError(f"audit over all frames on {n} worlds needs {total} frames, budget is {budget}")
    ax = modal.AXIOMS
    if name == "euclidean-implies-transitive":
        statement = "every frame validating 5 also validates 4"

        def refutes(f):
            return modal.frame_validates(f, ax["5"]) and not modal.frame_validates(f, ax["4"])

    elif name == "t-and-5-equals-equivalence":
        statement = "a frame validates T and 5 exactly when its relation is an equivalence"

        def refutes(f):
            both = modal.frame_validates(f, ax["T"]) and modal.frame_validates(f, ax["5"])
            return both != has_property(f, RelationClass.EQUIVALENCE)

    else:
        statement = "every reflexive euclidean frame is an equivalence"

        def refutes(f):
            return (
                has_property(f, "reflexive")
                and has_property(f, "euclidean")
                and not has_property(f, "equivalence")
            )

    found = None
    checked = 0
    for f in all_frames(n):
        checked += 1
        if refutes(f):
            found = f
            break
    out = {
        "audit": name,
        "statement": statement,
        "n": n,
        "frames_checked": checked,
        "holds": found is None,
        "counterexample": None if found is None else [list(e) for e in found.edges()],
    }
    if found is not None:
        out["counterexample_properties"] = {c.value: has_property(found, c) for c in RelationClass}
    return out


def cmd_frame(args) -> dict:
    if args.audit:
        return _audit(args.audit, args.n, args.budget)
    if not args.file:
        raise InputError("frame: give a frame JSON file or --audit NAME")
    f = Frame.from_json(_load_json(args.file))
    out = {"worlds": f.n, "edges": [list(e) for e in f.edges()]}
    out["properties"] = {c.value: has_property(f, c) for c in RelationClass}
    out["axioms"] = {name: modal.frame_validates(f, phi) for name, phi in modal.AXIOMS.items()}
    for text in args.formula or ():
        out.setdefault("formulas", {})[text] = modal.frame_validates(f, modal.parse_formula(text))
    out["is_s5"] = modal.is_s5(f)
    return out


def cmd_game(args) -> dict:
    if args.nim is not None:
        g = games.nim(args.nim)
    elif args.file:
        g = games.game_from_json(_load_json(args.file))
    else:
        raise InputError("game: give a game JSON file or --nim TOKENS")
    if g.points == 1:
        print("warning: single-point game; its lone point counts as a win for player "
              f"{games.winner_at(g, 0)}", file=sys.stderr)
    out = {
        "points": g.points,
        "players": g.players,
        "histories": len(games.histories(g)),
        "instants": len(games.instants(g)),
        "tree_like": games.is_tree_like(g),
    }
    if g.root is not None:
        out["length"] = games.game_length(g)
    if args.solve:
        res = games.solve(g)
        out["outcome"] = res.outcome
        out["strategy"] = {g.labels[t]: g.labels[c] for t, c in sorted(res.strategy.items())}
        if res.winner is not None:
            owned = {t: c for t, c in res.strategy.items() if g.mover(t) == res.winner}
            out["strategy_certified"] = games.check_winning_strategy(g, res.winner, owned)
    if args.dot:
        with open(args.dot, "w", newline="\n") as fh:
            fh.write(games.to_dot(g))
        out["dot"] = args.dot
    return out


def cmd_numbers(args) -> dict:
    what = args.what
    if what == "partition":
        out = {"n": args.n, "exact": partitions.p_exact(args.n)}
        if args.all_methods:
            if args.n < 1:
                raise InputError("--all-methods needs n >= 1")
            out["rademacher"] = Real(partitions.rademacher_p(args.n))
            out["hardy_ramanujan"] = Real(partitions.hardy_ramanujan(args.n))
        return out
    if what == "rademacher":
        K = args.K if args.K is not None else partitions.default_truncation(args.n)
        value = partitions.rademacher_p(args.n, K)
        return {"n": args.n, "K": K, "value": Real(value), "rounded": round(value)}
    if what == "hr":
        return {"n": args.n, "value": Real(partitions.hardy_ramanujan(args.n))}
    if what == "poset-asymptotic":
        return {"n": args.n, "value": partitions.poset_asymptotic(args.n)}
    if what == "ratio":
        return {
            "n": args.n,
            "p": partitions.p_exact(args.n),
            "a": partitions.a_exact(args.n),
            "ratio": Real(partitions.s5_ratio(args.n)),
        }
    if what == "dedekind":
        return {"h": args.h, "k": args.k, "value": partitions.dedekind_sum(args.h, args.k)}
    raise AssertionError(what)


def cmd_sample(args) -> dict:
    est = census_mod.sample_s5_probability(args.n, args.trials, args.seed)
    out = {
        "n": args.n,
        "trials": est.trials,
        "seed": args.seed,
        "hits": est.hits,
        "ratio": Real(est.ratio),
    }
    if args.n <= 3:
        exact = census_mod.exact_s5_probability(args.n)
        out["exact"] = exact
        out["deviation"] = Real(est.ratio - float(exact))
    return out


# -- parser ------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "json", "csv"), default=argparse.SUPPRESS)
    common.add_argument("--budget", type=int, default=argparse.SUPPRESS,
                        help="cap on candidates scanned by brute-force enumeration")

    parser = argparse.ArgumentParser(prog="modalcount", parents=[common], description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("census", parents=[common], help="count relations, orders, equivalences")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--class", dest="cls", required=True, choices=[c.value for c in census_mod.StructureClass])
    p.add_argument("--labeled", action="store_true")
    p.add_argument("--unlabeled", action="store_true")
    p.add_argument("--both", action="store_true", help="run a second independent route and compare")
    p.set_defaults(func=cmd_census)

    p = sub.add_parser("frame", parents=[common], help="check a frame or run an audit sweep")
    p.add_argument("file", nargs="?")
    p.add_argument("--formula", action="append", help="extra formula to test for frame validity")
    p.add_argument("--audit", choices=AUDITS)
    p.add_argument("--n", type=int, default=3)
    p.set_defaults(func=cmd_frame)

    p = sub.add_parser("game", parents=[common], help="analyse, solve or export a game")
    p.add_argument("file", nargs="?")
    p.add_argument("--nim", type=int)
    p.add_argument("--solve", action="store_true")
    p.add_argument("--dot")
    p.set_defaults(func=cmd_game)

    p = sub.add_parser("numbers", parents=[common], help="partition numbers and friends")
    nsub = p.add_subparsers(dest="what", required=True)
    for name in ("partition", "rademacher", "hr", "poset-asymptotic", "ratio"):
        q = nsub.add_parser(name, parents=[common])
        q.add_argument("--n", type=int, required=True)
        if name == "partition":
            q.add_argument("--all-methods", action="store_true")
        if name == "rademacher":
            q.add_argument("--K", type=int)
    q = nsub.add_parser("dedekind", parents=[common])
    q.add_argument("--h", type=int, required=True)
    q.add_argument("--k", type=int, required=True)
    p.set_defaults(func=cmd_numbers)

    p = sub.add_parser("sample", parents=[common], help="Monte Carlo share of equivalence relations")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--trials", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.set_defaults(func=cmd_sample)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    args.format = getattr(args, "format", "text")
    args.budget = getattr(args, "budget", census_mod.ENUMERATION_BUDGET)
    try:
        payload = args.func(args)
    except ModalCountError as e:
        print(f"error: {e}", file=sys.stderr)
        return e.exit_status
    sys.stdout.write(render(payload, args.format))
    return 0


if __name__ == "__main__":
    sys.exit(main())
