"""Command line interface.

Exit codes: 0 success, 1 a checked property failed or a search came up
empty, 2 bad input, 3 a size cap was hit.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import replace
from pathlib import Path

from .algebra import Algebra, Element
from .config import DEFAULT_CAPS, Caps
from .errors import (
    CoheytingError,
    FormatError,
    LimitsDiffer,
    NotCauchyAtDepth,
    NotMonotone,
    NotSqueezed,
    SizeCap,
    UnboundVariable,
)
from .kripke import (
    bisim_reduce,
    d_equivalent,
    enumerate_reduced_models,
    forces,
    free_epsilon,
    free_quotient,
    globally_true,
    make_model,
    projection,
    universal_frame,
)
from .metric import cauchy_limit, make_tower, precompactness_census
from .posets import parse_point_list, parse_poset_text, poset_to_text
from .search import fmp_search
from .suites import SuiteContext, run_suites, suite_names
from .terms import dualize, eval_term, parse_formula, parse_term, print_term


def _caps(args) -> Caps:
    caps = DEFAULT_CAPS
    if getattr(args, "max_nodes", None):
        caps = replace(caps, max_frame_nodes=args.max_nodes)
    return caps


def _emit(args, key: str, value) -> None:
    if args.format == "records":
        print(f"{key}={value}")
    else:
        print(value)


def _emit_pair(args, key: str, value) -> None:
    if args.format == "records":
        print(f"{key}={value}")
    else:
        print(f"{key}: {value}")


def _load_poset(path: str):
    return parse_poset_text(Path(path).read_text())


def _load_algebra(path: str) -> Algebra:
    poset, _ = _load_poset(path)
    return Algebra(poset)


def _element(algebra: Algebra, literal: str) -> Element:
    return algebra.element(parse_point_list(literal, algebra.spec))


def _model_from_file(path: str, extra_vars=()):
    frame, colors = _load_poset(path)
    mentioned: set[str] = set()
    if colors:
        for vs in colors.values():
            mentioned |= set(vs)
    mentioned |= set(extra_vars)
    vars = tuple(sorted(mentioned))
    return make_model(frame, vars, colors or {})


# ---------------------------------------------------------------------------
# poset


def cmd_poset_check(args) -> int:
    poset, colors = _load_poset(args.file)
    _emit_pair(args, "points", poset.n)
    _emit_pair(args, "height", poset.height())
    _emit_pair(args, "downsets", poset.count_downsets())
    if colors is not None:
        _emit_pair(args, "colored", "yes")
    return 0


def cmd_poset_show(args) -> int:
    poset, colors = _load_poset(args.file)
    print(poset_to_text(poset, colors), end="")
    for p in range(poset.n):
        _emit_pair(
            args,
            poset.names[p],
            f"rank={poset.ranks[p]} corank={poset.coranks[p]}",
        )
    return 0


# ---------------------------------------------------------------------------
# alg


def cmd_alg(args) -> int:
    algebra = _load_algebra(args.file)
    op = args.op
    if op == "dim":
        _emit(args, "dim", algebra.dim_algebra())
    elif op == "codim":
        _emit(args, "codim", algebra.codim(_element(algebra, args.element)))
    elif op == "dim-elt":
        _emit(args, "dim", algebra.dim_elt(_element(algebra, args.element)))
    elif op == "epsilon":
        _emit(args, "epsilon", algebra.epsilon(args.d))
    elif op == "irr":
        _emit_pair(args, "join", " ".join(str(x) for x in algebra.join_irreducibles()))
        _emit_pair(args, "meet", " ".join(str(x) for x in algebra.meet_irreducibles()))
    elif op == "jsupp":
        elem = _element(algebra, args.element)
        _emit(args, "jsupp", " ".join(str(x) for x in algebra.jsupp(elem)))
    elif op == "msupp":
        elem = _element(algebra, args.element)
        _emit(args, "msupp", " ".join(str(x) for x in algebra.msupp(elem)))
    elif op == "quotient":
        quotient, proj = algebra.quotient_by(algebra.epsilon(args.d))
        _emit_pair(args, "size", quotient.size())
        _emit_pair(args, "kernel", algebra.epsilon(args.d))
        print(poset_to_text(quotient.spec), end="")
    else:
        raise AssertionError(op)
    return 0


def cmd_alg_conj(args) -> int:
    algebra = _load_algebra(args.file)
    elem = _element(algebra, args.element)
    if args.direction == "up":
        _emit(args, "conj", algebra.conj_up(elem))
    else:
        _emit(args, "conj", algebra.conj_down(elem))
    return 0


# ---------------------------------------------------------------------------
# terms


def cmd_terms_parse(args) -> int:
    _emit(args, "term", print_term(parse_term(args.term)))
    return 0


def cmd_terms_dual(args) -> int:
    _emit(args, "dual", print_term(dualize(parse_term(args.term))))
    return 0


def cmd_terms_eval(args) -> int:
    algebra = _load_algebra(args.file)
    term = parse_term(args.term)
    env = {}
    for binding in args.let or []:
        if "=" not in binding:
            raise FormatError(f"bad binding {binding!r}; use name={{p,q}}")
        name, literal = binding.split("=", 1)
        env[name] = _element(algebra, literal)
    _emit(args, "value", eval_term(term, algebra, env))
    return 0


# ---------------------------------------------------------------------------
# kripke


def cmd_kripke_force(args) -> int:
    term = parse_term(args.term)
    model = _model_from_file(args.file, term.variables())
    if args.point == "*":
        verdict = globally_true(model, term)
    else:
        verdict = forces(model, args.point, term)
    _emit(args, "forces", "true" if verdict else "false")
    return 0 if verdict else 1


def cmd_kripke_reduce(args) -> int:
    model = _model_from_file(args.file)
    reduced, to_class = bisim_reduce(model)
    print(reduced.to_text(), end="")
    for p, cls in enumerate(to_class):
        _emit_pair(args, model.frame.names[p], reduced.frame.names[cls])
    return 0


def cmd_kripke_universal(args) -> int:
    uf = universal_frame(args.n, args.d, _caps(args))
    _emit_pair(args, "census", " ".join(str(c) for c in uf.census))
    _emit_pair(args, "points", uf.model.frame.n)
    if args.show:
        print(uf.model.to_text(), end="")
    return 0


def cmd_kripke_models(args) -> int:
    count = 0
    for model in enumerate_reduced_models(args.n, args.d, args.max_points, _caps(args)):
        count += 1
        if args.show:
            print(model.to_text())
    _emit_pair(args, "models", count)
    return 0


# ---------------------------------------------------------------------------
# free


def cmd_free_size(args) -> int:
    fq = free_quotient(args.n, args.d, _caps(args))
    _emit(args, "size", fq.algebra.size())
    return 0


def cmd_free_epsilon(args) -> int:
    _emit(args, "epsilon", free_epsilon(args.n, args.d, args.e, _caps(args)))
    return 0


def cmd_free_project(args) -> int:
    if args.d < 1:
        raise FormatError("projection needs d >= 1")
    phi = projection(args.n, args.d - 1, _caps(args))
    lower = free_quotient(args.n, args.d - 1, _caps(args))
    upper = free_quotient(args.n, args.d, _caps(args))
    _emit_pair(args, "from", upper.algebra.size())
    _emit_pair(args, "to", lower.algebra.size())
    ok = all(
        phi.apply(g_hi) == g_lo for g_hi, g_lo in zip(upper.gens, lower.gens)
    )
    _emit_pair(args, "generators-preserved", "yes" if ok else "no")
    return 0 if ok else 1


def cmd_equiv(args) -> int:
    same = d_equivalent(
        parse_term(args.term1), parse_term(args.term2), args.n, args.d, _caps(args)
    )
    _emit(args, "equivalent", "equivalent" if same else "distinct")
    return 0 if same else 1


# ---------------------------------------------------------------------------
# tower


def _tower_from_args(args):
    caps = _caps(args)
    return make_tower(args.n, args.depth, caps), caps


def _lift_of_term(args, tower, caps, text: str):
    # the top level of a free tower is the cached free quotient, so its
    # generators bind the variables x1..xn
    fq = free_quotient(args.n, args.depth, caps)
    term = parse_term(text)
    gens = {f"x{i + 1}": g for i, g in enumerate(fq.gens)}
    env = {}
    for nm in sorted(term.variables()):
        if nm not in gens:
            raise UnboundVariable(f"no generator named {nm!r} for n={args.n}")
        env[nm] = gens[nm]
    return tower.lift(eval_term(term, fq.algebra, env))


def cmd_tower_census(args) -> int:
    sizes = precompactness_census(args.n, args.depth, _caps(args))
    _emit(args, "census", " ".join(str(s) for s in sizes))
    return 0


def cmd_tower_lift(args) -> int:
    tower, caps = _tower_from_args(args)
    family = _lift_of_term(args, tower, caps, args.term)
    for d, comp in enumerate(family.components):
        _emit_pair(args, f"level{d}", comp)
    return 0


def cmd_tower_limit(args) -> int:
    tower, caps = _tower_from_args(args)
    families = [_lift_of_term(args, tower, caps, t) for t in args.terms]
    try:
        limit = cauchy_limit(families)
    except (NotCauchyAtDepth, NotMonotone, NotSqueezed, LimitsDiffer) as exc:
        print(f"no limit: {exc}", file=sys.stderr)
        return 1
    for d, comp in enumerate(limit.components):
        _emit_pair(args, f"level{d}", comp)
    return 0


# ---------------------------------------------------------------------------
# search and verify


def cmd_fmp_search(args) -> int:
    formula = parse_formula(args.formula)
    witness = fmp_search(formula, args.max_points, args.max_assignments, _caps(args))
    if witness is None:
        _emit(args, "witness", f"no witness up to {args.max_points} points")
        return 1
    print(witness.describe())
    return 0


def cmd_verify(args) -> int:
    if args.list:
        for name in suite_names():
            print(name)
        return 0
    ctx = SuiteContext(seed=args.seed, budget=args.budget, max_points=args.max_points)
    names = args.suites or None
    reports = run_suites(names, ctx)
    bad = False
    for report in reports:
        print(report.describe())
        if not report.ok:
            bad = True
    return 1 if bad else 0


def cmd_export_dot(args) -> int:
    poset, colors = _load_poset(args.file)
    lines = ["digraph {", "  rankdir=BT;"]
    for p in range(poset.n):
        label = poset.names[p]
        if colors and colors.get(label):
            label += ":{" + ",".join(sorted(colors[label])) + "}"
        lines.append(f'  "{poset.names[p]}" [label="{label}"];')
    for a, b in poset.covers:
        lines.append(f'  "{poset.names[a]}" -> "{poset.names[b]}";')
    lines.append("}")
    print("\n".join(lines))
    return 0


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="coheyting",
        description="Dimension, codimension and quotient towers of finite "
        "co-Heyting algebras presented as downsets of posets.",
    )
    parser.add_argument(
        "--format", choices=["text", "records"], default="text",
        help="output style: human text or key=value records",
    )
    parser.add_argument(
        "--max-nodes", type=int, default=None,
        help="override the frame size cap",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("poset", help="inspect poset files")
    psub = p.add_subparsers(dest="sub", required=True)
    q = psub.add_parser("check", help="validate a poset file")
    q.add_argument("file")
    q.set_defaults(func=cmd_poset_check)
    q = psub.add_parser("show", help="normalized text plus rank data")
    q.add_argument("file")
    q.set_defaults(func=cmd_poset_show)

    p = sub.add_parser("alg", help="downset algebra of a poset file")
    asub = p.add_subparsers(dest="op2", required=True)
    for op, with_elem, with_d in [
        ("dim", False, False),
        ("codim", True, False),
        ("dim-elt", True, False),
        ("epsilon", False, True),
        ("irr", False, False),
        ("jsupp", True, False),
        ("msupp", True, False),
        ("quotient", False, True),
    ]:
        q = asub.add_parser(op)
        q.add_argument("file")
        if with_elem:
            q.add_argument("element", help="element literal, e.g. {p0,p1}")
        if with_d:
            q.add_argument("d", type=int)
        q.set_defaults(func=cmd_alg, op=op)
    q = asub.add_parser("conj")
    q.add_argument("direction", choices=["up", "down"])
    q.add_argument("file")
    q.add_argument("element")
    q.set_defaults(func=cmd_alg_conj)

    p = sub.add_parser("terms", help="parse, dualize and evaluate terms")
    tsub = p.add_subparsers(dest="sub", required=True)
    q = tsub.add_parser("parse")
    q.add_argument("term")
    q.set_defaults(func=cmd_terms_parse)
    q = tsub.add_parser("dual")
    q.add_argument("term")
    q.set_defaults(func=cmd_terms_dual)
    q = tsub.add_parser("eval")
    q.add_argument("term")
    q.add_argument("file")
    q.add_argument("--let", action="append", help="binding name={p,q}")
    q.set_defaults(func=cmd_terms_eval)

    p = sub.add_parser("kripke", help="models over frames")
    ksub = p.add_subparsers(dest="sub", required=True)
    q = ksub.add_parser("force")
    q.add_argument("file")
    q.add_argument("point", help="point name, or * for all points")
    q.add_argument("term")
    q.set_defaults(func=cmd_kripke_force)
    q = ksub.add_parser("reduce")
    q.add_argument("file")
    q.set_defaults(func=cmd_kripke_reduce)
    q = ksub.add_parser("universal")
    q.add_argument("n", type=int)
    q.add_argument("d", type=int)
    q.add_argument("--show", action="store_true")
    q.set_defaults(func=cmd_kripke_universal)
    q = ksub.add_parser("models")
    q.add_argument("n", type=int)
    q.add_argument("d", type=int)
    q.add_argument("--max-points", type=int, default=None)
    q.add_argument("--show", action="store_true")
    q.set_defaults(func=cmd_kripke_models)

    p = sub.add_parser("free", help="finite stages of free algebras")
    fsub = p.add_subparsers(dest="sub", required=True)
    q = fsub.add_parser("size")
    q.add_argument("n", type=int)
    q.add_argument("d", type=int)
    q.set_defaults(func=cmd_free_size)
    q = fsub.add_parser("epsilon")
    q.add_argument("n", type=int)
    q.add_argument("d", type=int)
    q.add_argument("e", type=int)
    q.set_defaults(func=cmd_free_epsilon)
    q = fsub.add_parser("project")
    q.add_argument("n", type=int)
    q.add_argument("d", type=int)
    q.set_defaults(func=cmd_free_project)

    p = sub.add_parser("equiv", help="depth-bounded equivalence of terms")
    p.add_argument("n", type=int)
    p.add_argument("d", type=int)
    p.add_argument("term1")
    p.add_argument("term2")
    p.set_defaults(func=cmd_equiv)

    p = sub.add_parser("tower", help="quotient towers of free algebras")
    wsub = p.add_subparsers(dest="sub", required=True)
    q = wsub.add_parser("census")
    q.add_argument("n", type=int)
    q.add_argument("depth", type=int)
    q.set_defaults(func=cmd_tower_census)
    q = wsub.add_parser("lift")
    q.add_argument("n", type=int)
    q.add_argument("depth", type=int)
    q.add_argument("term")
    q.set_defaults(func=cmd_tower_lift)
    q = wsub.add_parser("limit")
    q.add_argument("n", type=int)
    q.add_argument("depth", type=int)
    q.add_argument("terms", nargs="+")
    q.set_defaults(func=cmd_tower_limit)

    p = sub.add_parser("fmp-search", help="search small posets for a formula witness")
    p.add_argument("formula")
    p.add_argument("--max-points", type=int, default=5)
    p.add_argument("--max-assignments", type=int, default=100000)
    p.set_defaults(func=cmd_fmp_search)

    p = sub.add_parser("verify", help="run the law-checking suites")
    p.add_argument("suites", nargs="*")
    p.add_argument("--list", action="store_true")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--budget", type=int, default=300)
    p.add_argument("--max-points", type=int, default=5)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("export", help="export a poset file")
    esub = p.add_subparsers(dest="sub", required=True)
    q = esub.add_parser("dot")
    q.add_argument("file")
    q.set_defaults(func=cmd_export_dot)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except SizeCap as exc:
        print(f"cap exceeded: {exc}", file=sys.stderr)
        return 3
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except CoheytingError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
