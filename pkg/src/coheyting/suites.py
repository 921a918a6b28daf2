"""Randomized and exhaustive law-checking suites with counterexample shrinking.

Each suite checks one family of laws over a pool of small algebras.  A case
is always reducible to (carrier poset, named downset masks, extra strings),
so failures carry a text payload that replays without any live objects.
"""

from __future__ import annotations

import itertools
import random
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from .algebra import Algebra, Element, check_dL_preserved, fiber_max, fiber_min
from .config import DEFAULT_CAPS, Caps
from .fixtures import load_fixture
from .kripke import (
    KripkeModel,
    bisim_reduce,
    enumerate_reduced_models,
    frame_to_spec,
    globally_true,
    is_reduced,
    make_model,
    model_of_algebra,
    truth_set,
    universal_frame,
)
from .metric import distance, make_tower
from .posets import (
    Poset,
    bits,
    enumerate_posets,
    mask_of,
    parse_point_list,
    parse_poset_text,
    poset_to_text,
)
from .terms import (
    ONE,
    ZERO,
    Diff,
    Impl,
    Join,
    Meet,
    Term,
    Var,
    dualize,
    eval_term,
    parse_term,
    print_term,
    slice_term,
)


@dataclass(frozen=True)
class Failure:
    """One shrunk counterexample with a self-contained replay payload."""

    suite: str
    law: str
    poset_text: str
    masks: dict[str, str]
    extra: dict[str, str]

    def describe(self) -> str:
        parts = [f"[{self.suite}] law violated: {self.law}"]
        if self.poset_text:
            parts.append(self.poset_text.rstrip("\n"))
        for name in sorted(self.masks):
            parts.append(f"  {name} = {self.masks[name]}")
        for key in sorted(self.extra):
            parts.append(f"  {key}: {self.extra[key]}")
        return "\n".join(parts)


@dataclass(frozen=True)
class SuiteReport:
    suite: str
    cases: int
    failures: tuple[Failure, ...]
    seconds: float

    @property
    def ok(self) -> bool:
        return not self.failures

    def describe(self) -> str:
        status = "ok" if self.ok else f"{len(self.failures)} failure(s)"
        head = f"{self.suite}: {status} ({self.cases} cases, {self.seconds:.2f}s)"
        if self.ok:
            return head
        return "\n".join([head] + [f.describe() for f in self.failures])


@dataclass
class SuiteContext:
    seed: int = 0
    budget: int = 300
    max_points: int = 5
    caps: Caps = field(default_factory=lambda: DEFAULT_CAPS)


# A case checker sees the rebuilt algebra, the named downsets, and the extra
# payload; it returns the name of the first violated law, or None.
Checker = Callable[[Algebra, "dict[str, Element]", "dict[str, str]"], "str | None"]

CHECKERS: dict[str, Checker] = {}
SUITES: dict[str, Callable[[SuiteContext], SuiteReport]] = {}


def _checker(name: str):
    def register(fn: Checker) -> Checker:
        CHECKERS[name] = fn
        return fn

    return register


def _suite(name: str):
    def register(fn):
        def timed(ctx: SuiteContext) -> SuiteReport:
            start = time.perf_counter()
            cases, failures = fn(ctx)
            return SuiteReport(
                suite=name,
                cases=cases,
                failures=tuple(failures),
                seconds=time.perf_counter() - start,
            )

        SUITES[name] = timed
        return timed

    return register


_POOLS: dict[tuple[int, Caps], list[tuple[Poset, Algebra, tuple[Element, ...]]]] = {}


def _pool(ctx: SuiteContext) -> list[tuple[Poset, Algebra, tuple[Element, ...]]]:
    key = (ctx.max_points, ctx.caps)
    if key not in _POOLS:
        entries = []
        for poset in enumerate_posets(ctx.max_points, ctx.caps):
            algebra = Algebra(poset)
            entries.append((poset, algebra, algebra.elements(ctx.caps)))
        _POOLS[key] = entries
    return _POOLS[key]


def _shrink(
    name: str, poset: Poset, masks: dict[str, int], extra: dict[str, str]
) -> tuple[Poset, dict[str, int]]:
    """Greedy minimization: drop maximal carrier points, then peel masks."""
    checker = CHECKERS[name]

    def still_fails(p: Poset, ms: dict[str, int]) -> bool:
        algebra = Algebra(p)
        try:
            elems = {k: algebra.element(v) for k, v in ms.items()}
            return checker(algebra, elems, extra) is not None
        except Exception:
            # A shrink step that breaks a precondition is not a counterexample.
            return False

    changed = True
    while changed:
        changed = False
        if poset.n > 1:
            for b in sorted(bits(poset.maximal_points(poset.full)), reverse=True):
                keep = poset.full & ~(1 << b)
                old_to_new = {old: new for new, old in enumerate(bits(keep))}
                cand_poset = poset.induced(keep)
                cand_masks = {
                    k: mask_of(old_to_new[x] for x in bits(v & keep))
                    for k, v in masks.items()
                }
                if still_fails(cand_poset, cand_masks):
                    poset, masks = cand_poset, cand_masks
                    changed = True
                    break
        if changed:
            continue
        for k in sorted(masks):
            for b in sorted(bits(poset.maximal_points(masks[k])), reverse=True):
                cand_masks = dict(masks)
                cand_masks[k] = masks[k] & ~(1 << b)
                if still_fails(poset, cand_masks):
                    masks = cand_masks
                    changed = True
                    break
            if changed:
                break
    return poset, masks


def _fail(
    name: str, law: str, poset: Poset, masks: dict[str, int], extra: dict[str, str]
) -> Failure:
    poset, masks = _shrink(name, poset, masks, extra)
    return Failure(
        suite=name,
        law=law,
        poset_text=poset_to_text(poset),
        masks={k: poset.format_points(v) for k, v in sorted(masks.items())},
        extra=dict(extra),
    )


def _run_case(
    name: str,
    poset: Poset,
    algebra: Algebra,
    masks: dict[str, int],
    extra: dict[str, str],
    failures: list[Failure],
) -> None:
    elems = {k: algebra.element(v) for k, v in masks.items()}
    law = CHECKERS[name](algebra, elems, extra)
    if law is not None:
        failures.append(_fail(name, law, poset, masks, extra))


def replay_failure(failure: Failure) -> bool:
    """Rebuild a failure from its payload; True when it still fails."""
    poset, _ = parse_poset_text(failure.poset_text)
    algebra = Algebra(poset)
    elems = {
        k: algebra.element(parse_point_list(v, poset))
        for k, v in failure.masks.items()
    }
    return CHECKERS[failure.suite](algebra, elems, failure.extra) is not None


def _pick(rng: random.Random, elems: tuple[Element, ...], k: int) -> list[Element]:
    return [elems[rng.randrange(len(elems))] for _ in range(k)]


def _model_from_masks(
    algebra: Algebra, names: list[str], per_var: dict[str, int]
) -> KripkeModel:
    """Build a model on the dual frame from per-variable truth downsets."""
    frame = algebra.spec
    colors = []
    for p in range(frame.n):
        cm = 0
        for i, nm in enumerate(names):
            if per_var.get(nm, 0) >> p & 1:
                cm |= 1 << i
        colors.append(cm)
    return make_model(frame, names, colors)


# ---------------------------------------------------------------------------
# Difference identities


@_checker("s2-identities")
def _check_s2(algebra, e, extra):
    a, b, c = e["a"], e["b"], e["c"]
    if a != (a - b) | (a & b):
        return "a = (a - b) | (a & b)"
    if (a | b) - c != (a - c) | (b - c):
        return "(a | b) - c = (a - c) | (b - c)"
    if a - (b | c) != (a - b) - c:
        return "a - (b | c) = (a - b) - c"
    if a - (a - b) != (a & b) - (a - b):
        return "a - (a - b) = (a & b) - (a - b)"
    if not algebra.strongly_below((a - b) & b, a):
        return "(a - b) & b strongly below a"
    if (b <= a) != (b - a).is_bottom():
        return "b <= a iff b - a = 0"
    if not a - (a - b) <= b:
        return "a - (a - b) <= b"
    return None


@_suite("s2-identities")
def _suite_s2(ctx: SuiteContext):
    rng = random.Random(ctx.seed)
    pool = _pool(ctx)
    failures: list[Failure] = []
    for _ in range(ctx.budget):
        poset, algebra, elems = pool[rng.randrange(len(pool))]
        a, b, c = _pick(rng, elems, 3)
        _run_case(
            "s2-identities", poset, algebra,
            {"a": a.pts, "b": b.pts, "c": c.pts}, {}, failures,
        )
    return ctx.budget, failures


@_checker("delta-triangle")
def _check_delta(algebra, e, extra):
    a, b, c = e["a"], e["b"], e["c"]
    if not (a ^ c) <= (a ^ b) | (b ^ c):
        return "a ^ c <= (a ^ b) | (b ^ c)"
    if (a ^ b).is_bottom() != (a == b):
        return "a ^ b = 0 iff a = b"
    if a ^ b != b ^ a:
        return "a ^ b = b ^ a"
    return None


@_suite("delta-triangle")
def _suite_delta(ctx: SuiteContext):
    rng = random.Random(ctx.seed + 1)
    pool = _pool(ctx)
    failures: list[Failure] = []
    for _ in range(ctx.budget):
        poset, algebra, elems = pool[rng.randrange(len(pool))]
        a, b, c = _pick(rng, elems, 3)
        _run_case(
            "delta-triangle", poset, algebra,
            {"a": a.pts, "b": b.pts, "c": c.pts}, {}, failures,
        )
    return ctx.budget, failures


@_checker("ultrametric")
def _check_ultra(algebra, e, extra):
    a, b, c = e["a"], e["b"], e["c"]
    if distance(a, c) > max(distance(a, b), distance(b, c)):
        return "d(a, c) <= max(d(a, b), d(b, c))"
    if distance(a, b) != distance(b, a):
        return "d(a, b) = d(b, a)"
    if (distance(a, b) == 0) != (a == b):
        return "d(a, b) = 0 iff a = b"
    return None


@_suite("ultrametric")
def _suite_ultra(ctx: SuiteContext):
    rng = random.Random(ctx.seed + 2)
    pool = _pool(ctx)
    failures: list[Failure] = []
    for _ in range(ctx.budget):
        poset, algebra, elems = pool[rng.randrange(len(pool))]
        a, b, c = _pick(rng, elems, 3)
        _run_case(
            "ultrametric", poset, algebra,
            {"a": a.pts, "b": b.pts, "c": c.pts}, {}, failures,
        )
    return ctx.budget, failures


@_checker("codim-join")
def _check_codim_join(algebra, e, extra):
    a, b = e["a"], e["b"]
    if algebra.codim(a | b) != min(algebra.codim(a), algebra.codim(b)):
        return "codim(a | b) = min(codim a, codim b)"
    if algebra.dim_elt(a | b) != max(algebra.dim_elt(a), algebra.dim_elt(b)):
        return "dim(a | b) = max(dim a, dim b)"
    return None


@_suite("codim-join")
def _suite_codim_join(ctx: SuiteContext):
    rng = random.Random(ctx.seed + 3)
    pool = _pool(ctx)
    failures: list[Failure] = []
    for _ in range(ctx.budget):
        poset, algebra, elems = pool[rng.randrange(len(pool))]
        a, b = _pick(rng, elems, 2)
        _run_case(
            "codim-join", poset, algebra,
            {"a": a.pts, "b": b.pts}, {}, failures,
        )
    return ctx.budget, failures


# ---------------------------------------------------------------------------
# Dimension routes


def _strong_pairs(algebra: Algebra, elems) -> dict[int, list[int]]:
    """For each nonzero mask, the nonzero masks strictly strongly below it."""
    below: dict[int, list[int]] = {}
    for upper in elems:
        if upper.is_bottom():
            continue
        rows = []
        for lower in elems:
            if lower.is_bottom() or lower == upper:
                continue
            if algebra.strongly_below(lower, upper):
                rows.append(lower.pts)
        below[upper.pts] = rows
    return below


def codim_by_chains(algebra: Algebra, a: Element, elems=None):
    """Codimension as the longest ascending strong chain starting at a."""
    elems = elems if elems is not None else algebra.elements()
    if a.is_bottom():
        return algebra.codim(algebra.bottom())
    below = _strong_pairs(algebra, elems)
    above: dict[int, list[int]] = {m: [] for m in below}
    for upper, lowers in below.items():
        for lower in lowers:
            above[lower].append(upper)
    depth: dict[int, int] = {}

    def chain(m: int) -> int:
        if m not in depth:
            depth[m] = 0
            depth[m] = max((1 + chain(x) for x in above[m]), default=0)
        return depth[m]

    return chain(a.pts)


def dim_by_chains(algebra: Algebra, a: Element, elems=None):
    """Dimension as the longest descending strong chain starting at a."""
    elems = elems if elems is not None else algebra.elements()
    if a.is_bottom():
        return algebra.dim_elt(algebra.bottom())
    below = _strong_pairs(algebra, elems)
    height: dict[int, int] = {}

    def chain(m: int) -> int:
        if m not in height:
            height[m] = 0
            height[m] = max((1 + chain(x) for x in below[m]), default=0)
        return height[m]

    return chain(a.pts)


def prime_filters(algebra: Algebra, elems=None) -> list[tuple[int, frozenset[int]]]:
    """All prime filters as (generator mask, member-mask set), definitionally."""
    elems = elems if elems is not None else algebra.elements()
    members = [x.pts for x in elems]
    primes = []
    for gen in elems:
        if gen.is_bottom():
            continue
        filt = frozenset(m for m in members if gen.pts & m == gen.pts)
        prime = True
        for i, a in enumerate(members):
            for b in members[: i + 1]:
                if (a | b) in filt and a not in filt and b not in filt:
                    prime = False
                    break
            if not prime:
                break
        if prime:
            primes.append((gen.pts, filt))
    return primes


def codim_by_primes(algebra: Algebra, a: Element, elems=None):
    """Codimension via longest chains of prime filters under inclusion."""
    elems = elems if elems is not None else algebra.elements()
    if a.is_bottom():
        return algebra.codim(algebra.bottom())
    primes = prime_filters(algebra, elems)
    sets = [f for _, f in primes]
    depth: dict[frozenset[int], int] = {}

    def below(f) -> int:
        if f not in depth:
            depth[f] = 0
            depth[f] = max((1 + below(g) for g in sets if g < f), default=0)
        return depth[f]

    return min(below(f) for _, f in primes if a.pts in f)


def dim_by_primes(algebra: Algebra, a: Element, elems=None):
    """Dimension via longest chains of prime filters above, under inclusion."""
    elems = elems if elems is not None else algebra.elements()
    if a.is_bottom():
        return algebra.dim_elt(algebra.bottom())
    primes = prime_filters(algebra, elems)
    sets = [f for _, f in primes]
    height: dict[frozenset[int], int] = {}

    def above(f) -> int:
        if f not in height:
            height[f] = 0
            height[f] = max((1 + above(g) for g in sets if g > f), default=0)
        return height[f]

    return max(above(f) for _, f in primes if a.pts in f)


@_checker("dim-rank")
def _check_dim_rank(algebra, e, extra):
    a = e["a"]
    elems = algebra.elements()
    if algebra.codim(a) != codim_by_chains(algebra, a, elems):
        return "codim by coranks = codim by strong chains"
    if algebra.codim(a) != codim_by_primes(algebra, a, elems):
        return "codim by coranks = codim by prime-filter chains"
    if algebra.dim_elt(a) != dim_by_chains(algebra, a, elems):
        return "dim by ranks = dim by strong chains"
    if algebra.dim_elt(a) != dim_by_primes(algebra, a, elems):
        return "dim by ranks = dim by prime-filter chains"
    return None


@_suite("dim-rank")
def _suite_dim_rank(ctx: SuiteContext):
    rng = random.Random(ctx.seed + 4)
    pool = _pool(ctx)
    failures: list[Failure] = []
    for _ in range(ctx.budget):
        poset, algebra, elems = pool[rng.randrange(len(pool))]
        (a,) = _pick(rng, elems, 1)
        _run_case("dim-rank", poset, algebra, {"a": a.pts}, {}, failures)
    return ctx.budget, failures


@_checker("mf-identity")
def _check_mf(algebra, e, extra):
    a, b = e["a"], e["b"]
    diff = a - b
    lhs = 0 if diff.is_bottom() else algebra.minimal_primes(diff)
    rhs = 0 if a.is_bottom() else algebra.minimal_primes(a) & ~b.pts
    if lhs != rhs:
        return "minimal primes of a - b are those of a outside b"
    return None


@_suite("mf-identity")
def _suite_mf(ctx: SuiteContext):
    rng = random.Random(ctx.seed + 5)
    pool = _pool(ctx)
    failures: list[Failure] = []
    for _ in range(ctx.budget):
        poset, algebra, elems = pool[rng.randrange(len(pool))]
        a, b = _pick(rng, elems, 2)
        _run_case("mf-identity", poset, algebra, {"a": a.pts, "b": b.pts}, {}, failures)
    return ctx.budget, failures


@_checker("epsilon-chain")
def _check_eps(algebra, e, extra):
    height = algebra.spec.height()
    prev = algebra.top()
    for d in range(height + 2):
        eps = algebra.epsilon(d)
        if not eps <= prev:
            return "epsilon chain decreasing"
        if d >= 1 and not algebra.strongly_below(eps, algebra.epsilon(d - 1)):
            return "epsilon(d) strongly below epsilon(d - 1)"
        quotient, _ = algebra.quotient_by(eps)
        if not quotient.dim_algebra() < d:
            return "dim of quotient by epsilon(d) below d"
        prev = eps
    return None


@_suite("epsilon-chain")
def _suite_eps(ctx: SuiteContext):
    pool = _pool(ctx)
    failures: list[Failure] = []
    cases = 0
    for poset, algebra, _ in pool:
        cases += 1
        _run_case("epsilon-chain", poset, algebra, {}, {}, failures)
    return cases, failures


@_checker("join-irr-strong")
def _check_jis(algebra, e, extra):
    for x in algebra.join_irreducibles():
        for y in algebra.elements():
            if not x <= y and x - y != x:
                return "join irreducible x with x not <= y has x - y = x"
    return None


@_suite("join-irr-strong")
def _suite_jis(ctx: SuiteContext):
    pool = _pool(ctx)
    failures: list[Failure] = []
    cases = 0
    for poset, algebra, _ in pool:
        cases += 1
        _run_case("join-irr-strong", poset, algebra, {}, {}, failures)
    return cases, failures


def _is_meet_irreducible(algebra: Algebra, a: Element, elems) -> bool:
    if a == algebra.top():
        return False
    for y in elems:
        for z in elems:
            if (y & z) == a and y != a and z != a:
                return False
    return True


def _is_join_irreducible(algebra: Algebra, a: Element, elems) -> bool:
    if a.is_bottom():
        return False
    for y in elems:
        for z in elems:
            if (y | z) == a and y != a and z != a:
                return False
    return True


@_checker("irr-supports")
def _check_supports(algebra, e, extra):
    elems = algebra.elements()
    jirr = algebra.join_irreducibles()
    mirr = algebra.meet_irreducibles()
    if set(jirr) != {x for x in elems if _is_join_irreducible(algebra, x, elems)}:
        return "join irreducibles match the definitional set"
    if set(mirr) != {x for x in elems if _is_meet_irreducible(algebra, x, elems)}:
        return "meet irreducibles match the definitional set"
    for a in elems:
        parts = algebra.jsupp(a)
        joined = algebra.bottom()
        for x in parts:
            joined = joined | x
        if joined != a:
            return "a is the join of jsupp(a)"
        if any(not _is_join_irreducible(algebra, x, elems) for x in parts):
            return "jsupp(a) consists of join irreducibles"
        met = algebra.top()
        for x in algebra.msupp(a):
            met = met & x
        if met != a:
            return "a is the meet of msupp(a)"
        if any(not _is_meet_irreducible(algebra, x, elems) for x in algebra.msupp(a)):
            return "msupp(a) consists of meet irreducibles"
    for j in jirr:
        if not _is_meet_irreducible(algebra, algebra.conj_up(j), elems):
            return "conj_up maps join irreducibles to meet irreducibles"
        if algebra.conj_down(algebra.conj_up(j)) != j:
            return "conj_down(conj_up(x)) = x on join irreducibles"
    for m in mirr:
        if not _is_join_irreducible(algebra, algebra.conj_down(m), elems):
            return "conj_down maps meet irreducibles to join irreducibles"
        if algebra.conj_up(algebra.conj_down(m)) != m:
            return "conj_up(conj_down(x)) = x on meet irreducibles"
    for i, j1 in enumerate(jirr):
        for j2 in jirr[i:]:
            if (j1 <= j2) != (algebra.conj_up(j1) <= algebra.conj_up(j2)):
                return "conj_up is an order embedding on join irreducibles"
    return None


@_suite("irr-supports")
def _suite_supports(ctx: SuiteContext):
    pool = _pool(ctx)
    failures: list[Failure] = []
    cases = 0
    for poset, algebra, elems in pool:
        if len(elems) > 40:
            continue
        cases += 1
        _run_case("irr-supports", poset, algebra, {}, {}, failures)
    return cases, failures


# ---------------------------------------------------------------------------
# Quotients and fibers


@_checker("quotient-fini")
def _check_quotient(algebra, e, extra):
    d = int(extra["d"])
    eps = algebra.epsilon(d)
    quotient, proj = algebra.quotient_by(eps)
    elems = algebra.elements()
    for a in elems:
        image = proj.apply(a)
        fiber = [x for x in elems if proj.apply(x) == image]
        lo = fiber_min(proj, a)
        hi = fiber_max(proj, a)
        if proj.apply(lo) != image or any(not lo <= x for x in fiber):
            return "fiber_min is the least fiber element"
        if proj.apply(hi) != image or any(not x <= hi for x in fiber):
            return "fiber_max is the greatest fiber element"
    for a in elems:
        for b in elems:
            same = proj.apply(a) == proj.apply(b)
            if same != ((a ^ b) <= eps):
                return "pi(a) = pi(b) iff a ^ b <= epsilon(d)"
    qj = set(quotient.join_irreducibles())
    lifted = {proj.apply(j) for j in algebra.join_irreducibles() if not j <= eps}
    if qj != lifted:
        return "join irreducibles not below epsilon(d) biject with quotient's"
    survivors = [j for j in algebra.join_irreducibles() if not j <= eps]
    if len(survivors) != len(lifted):
        return "projection is injective on surviving join irreducibles"
    qm = set(quotient.meet_irreducibles())
    lifted_m = {proj.apply(m) for m in algebra.meet_irreducibles() if eps <= m}
    if qm != lifted_m:
        return "meet irreducibles above epsilon(d) biject with quotient's"
    return None


@_suite("quotient-fini")
def _suite_quotient(ctx: SuiteContext):
    pool = _pool(ctx)
    failures: list[Failure] = []
    cases = 0
    for poset, algebra, elems in pool:
        if len(elems) > 40:
            continue
        for d in range(poset.height() + 2):
            cases += 1
            _run_case("quotient-fini", poset, algebra, {}, {"d": str(d)}, failures)
    return cases, failures


@_checker("dim-quotient")
def _check_dim_quotient(algebra, e, extra):
    d = int(extra["d"])
    quotient, proj = algebra.quotient_by(algebra.epsilon(d))
    report = check_dL_preserved(proj, d)
    if not report.contained:
        return "image of epsilon(d) lands in target epsilon(d)"
    if not report.equal:
        return "quotient map carries epsilon(d) onto target epsilon(d)"
    if not quotient.dim_algebra() < d:
        return "dim of quotient by epsilon(d) below d"
    return None


@_suite("dim-quotient")
def _suite_dim_quotient(ctx: SuiteContext):
    pool = _pool(ctx)
    failures: list[Failure] = []
    cases = 0
    for poset, algebra, _ in pool:
        for d in range(poset.height() + 2):
            cases += 1
            _run_case("dim-quotient", poset, algebra, {}, {"d": str(d)}, failures)
    return cases, failures


# ---------------------------------------------------------------------------
# Terms


def random_term(rng: random.Random, names: list[str], depth: int, kind: str) -> Term:
    """Random term in one signature: kind is 'diff', 'impl' or 'lattice'."""
    if depth == 0 or rng.random() < 0.3:
        roll = rng.random()
        if roll < 0.15:
            return ZERO
        if roll < 0.3:
            return ONE
        return Var(rng.choice(names))
    ops = [Join, Meet]
    if kind == "diff":
        ops.append(Diff)
    elif kind == "impl":
        ops.append(Impl)
    op = rng.choice(ops)
    return op(
        random_term(rng, names, depth - 1, kind),
        random_term(rng, names, depth - 1, kind),
    )


@_checker("slice")
def _check_slice(algebra, e, extra):
    d = int(extra["d"])
    term = slice_term(d + 1)
    names = sorted(term.variables())
    elems = algebra.elements()
    small = algebra.dim_algebra() <= d

    def vanishes() -> bool:
        for combo in itertools.product(elems, repeat=len(names)):
            env = dict(zip(names, combo))
            if not eval_term(term, algebra, env).is_bottom():
                return False
        return True

    if small != vanishes():
        return "dim <= d iff the (d+1)-slice term vanishes identically"
    return None


@_suite("slice")
def _suite_slice(ctx: SuiteContext):
    pool = _pool(ctx)
    failures: list[Failure] = []
    cases = 0
    for poset, algebra, elems in pool:
        if len(elems) > 8:
            continue
        height = poset.height()
        for d in sorted({max(0, height - 1), height, min(height + 1, 3)}):
            if d > 3:
                continue
            cases += 1
            _run_case("slice", poset, algebra, {}, {"d": str(d)}, failures)
    return cases, failures


@_checker("term-lipschitz")
def _check_lipschitz(algebra, e, extra):
    term = parse_term(extra["term"])
    names = sorted(term.variables())
    env_u = {n: e[f"u_{n}"] for n in names}
    env_v = {n: e[f"v_{n}"] for n in names}
    bound = Fraction(0)
    for n in names:
        bound = max(bound, distance(env_u[n], env_v[n]))
    lhs = distance(eval_term(term, algebra, env_u), eval_term(term, algebra, env_v))
    if lhs > bound:
        return "term maps are nonexpansive in the sup metric"
    return None


@_suite("term-lipschitz")
def _suite_lipschitz(ctx: SuiteContext):
    rng = random.Random(ctx.seed + 6)
    pool = _pool(ctx)
    failures: list[Failure] = []
    names = ["x1", "x2", "x3"]
    for _ in range(ctx.budget):
        poset, algebra, elems = pool[rng.randrange(len(pool))]
        term = random_term(rng, names, 3, "diff")
        masks = {}
        for n in sorted(term.variables()):
            masks[f"u_{n}"] = elems[rng.randrange(len(elems))].pts
            masks[f"v_{n}"] = elems[rng.randrange(len(elems))].pts
        _run_case(
            "term-lipschitz", poset, algebra, masks,
            {"term": print_term(term)}, failures,
        )
    return ctx.budget, failures


@_checker("eval-morphism")
def _check_eval_morphism(algebra, e, extra):
    d = int(extra["d"])
    term = parse_term(extra["term"])
    _, proj = algebra.quotient_by(algebra.epsilon(d))
    names = sorted(term.variables())
    env = {n: e[f"u_{n}"] for n in names}
    pushed = {n: proj.apply(v) for n, v in env.items()}
    lhs = proj.apply(eval_term(term, algebra, env))
    rhs = eval_term(term, proj.dst, pushed)
    if lhs != rhs:
        return "quotient maps commute with term evaluation"
    return None


@_suite("eval-morphism")
def _suite_eval_morphism(ctx: SuiteContext):
    rng = random.Random(ctx.seed + 7)
    pool = _pool(ctx)
    failures: list[Failure] = []
    names = ["x1", "x2"]
    for _ in range(ctx.budget):
        poset, algebra, elems = pool[rng.randrange(len(pool))]
        term = random_term(rng, names, 3, "diff")
        masks = {
            f"u_{n}": elems[rng.randrange(len(elems))].pts
            for n in sorted(term.variables())
        }
        d = rng.randrange(poset.height() + 2)
        _run_case(
            "eval-morphism", poset, algebra, masks,
            {"term": print_term(term), "d": str(d)}, failures,
        )
    return ctx.budget, failures


@_checker("morphism-metrics")
def _check_morphism_metrics(algebra, e, extra):
    d = int(extra["d"])
    a, b = e["a"], e["b"]
    _, proj = algebra.quotient_by(algebra.epsilon(d))
    if distance(proj.apply(a), proj.apply(b)) > distance(a, b):
        return "quotient maps are nonexpansive"
    for k in range(d + 2):
        report = check_dL_preserved(proj, k)
        if not report.contained:
            return "quotient maps send epsilon(k) into epsilon(k)"
        if proj.dual_injective() and not report.equal:
            return "point-surjective quotients carry epsilon(k) onto epsilon(k)"
    return None


@_suite("morphism-metrics")
def _suite_morphism_metrics(ctx: SuiteContext):
    rng = random.Random(ctx.seed + 8)
    pool = _pool(ctx)
    failures: list[Failure] = []
    for _ in range(ctx.budget):
        poset, algebra, elems = pool[rng.randrange(len(pool))]
        a, b = _pick(rng, elems, 2)
        d = rng.randrange(poset.height() + 2)
        _run_case(
            "morphism-metrics", poset, algebra,
            {"a": a.pts, "b": b.pts}, {"d": str(d)}, failures,
        )
    return ctx.budget, failures


# ---------------------------------------------------------------------------
# Semantics over frames


@_checker("persistence")
def _check_persistence(algebra, e, extra):
    term = parse_term(extra["term"])
    names = sorted(term.variables())
    model = _model_from_masks(algebra, names, {n: e[f"v_{n}"].pts for n in names})
    frame = model.frame
    ts = truth_set(model, term)
    if not frame.is_downset(ts):
        return "truth sets are closed downward along accessibility"
    for p in bits(ts):
        for q in bits(frame.down[p]):
            if not ts >> q & 1:
                return "forcing persists to accessible points"
    return None


@_suite("persistence")
def _suite_persistence(ctx: SuiteContext):
    rng = random.Random(ctx.seed + 9)
    pool = _pool(ctx)
    failures: list[Failure] = []
    names = ["x1", "x2"]
    for _ in range(ctx.budget):
        poset, algebra, elems = pool[rng.randrange(len(pool))]
        term = random_term(rng, names, 3, "impl")
        masks = {
            f"v_{n}": elems[rng.randrange(len(elems))].pts
            for n in sorted(term.variables())
        }
        _run_case(
            "persistence", poset, algebra, masks,
            {"term": print_term(term)}, failures,
        )
    return ctx.budget, failures


@_checker("duality-roundtrip")
def _check_duality(algebra, e, extra):
    term = parse_term(extra["term"])
    names = sorted(term.variables())
    gens = [e[f"g_{n}"] for n in names]
    env = dict(zip(names, gens))
    value = eval_term(term, algebra, env)
    model = model_of_algebra(algebra, gens, names)
    mirrored = truth_set(model, dualize(term))
    if mirrored != algebra.spec.full & ~value.pts:
        return "dual term truth set is the complement of the evaluation"
    if dualize(dualize(term)) != term:
        return "dualize is an involution"
    return None


@_suite("duality-roundtrip")
def _suite_duality(ctx: SuiteContext):
    rng = random.Random(ctx.seed + 10)
    pool = _pool(ctx)
    failures: list[Failure] = []
    names = ["x1", "x2"]
    for _ in range(ctx.budget):
        poset, algebra, elems = pool[rng.randrange(len(pool))]
        term = random_term(rng, names, 3, "diff")
        masks = {
            f"g_{n}": elems[rng.randrange(len(elems))].pts
            for n in sorted(term.variables())
        }
        _run_case(
            "duality-roundtrip", poset, algebra, masks,
            {"term": print_term(term)}, failures,
        )
    return ctx.budget, failures


@_checker("bisim-truth")
def _check_bisim(algebra, e, extra):
    term = parse_term(extra["term"])
    names = sorted(term.variables())
    model = _model_from_masks(algebra, names, {n: e[f"v_{n}"].pts for n in names})
    reduced, to_class = bisim_reduce(model)
    if not is_reduced(reduced):
        return "bisimulation quotient is reduced"
    again, _ = bisim_reduce(reduced)
    if again.frame.n != reduced.frame.n:
        return "reducing a reduced model changes nothing"
    if globally_true(model, term) != globally_true(reduced, term):
        return "global truth is bisimulation invariant"
    ts = truth_set(model, term)
    rts = truth_set(reduced, term)
    for p in range(model.frame.n):
        if bool(ts >> p & 1) != bool(rts >> to_class[p] & 1):
            return "pointwise forcing is bisimulation invariant"
    return None


@_suite("bisim-truth")
def _suite_bisim(ctx: SuiteContext):
    rng = random.Random(ctx.seed + 11)
    pool = _pool(ctx)
    failures: list[Failure] = []
    names = ["x1", "x2"]
    for _ in range(ctx.budget):
        poset, algebra, elems = pool[rng.randrange(len(pool))]
        term = random_term(rng, names, 3, "impl")
        masks = {
            f"v_{n}": elems[rng.randrange(len(elems))].pts
            for n in sorted(term.variables())
        }
        _run_case(
            "bisim-truth", poset, algebra, masks,
            {"term": print_term(term)}, failures,
        )
    return ctx.budget, failures


# ---------------------------------------------------------------------------
# Global suites without a per-case carrier


def _global_failures(name: str, problems: list[str]) -> list[Failure]:
    return [
        Failure(suite=name, law=p, poset_text="", masks={}, extra={})
        for p in problems
    ]


def _counting_problems(ctx: SuiteContext) -> list[str]:
    problems = []
    for n in range(0, 3):
        for d in range(1, 3):
            census = universal_frame(n, d, ctx.caps).census
            if census[0] != 2 ** n:
                problems.append(f"layer 1 of the ({n},{d}) universal frame has 2^n points")
            for j in range(1, len(census)):
                prev = universal_frame(n, j, ctx.caps).model.frame
                bound = (2 ** n) * (prev.count_downsets() - 1)
                if census[j] > bound:
                    problems.append(
                        f"layer {j + 1} of the ({n},{d}) universal frame exceeds 2^n * nu"
                    )
        for model in enumerate_reduced_models(n, 1, None, ctx.caps):
            if model.frame.n > 2 ** n:
                problems.append(
                    f"a height-1 reduced model over {n} letters has more than 2^n points"
                )
                break
    for n in range(0, 2):
        count = sum(1 for _ in enumerate_reduced_models(n, 1, None, ctx.caps))
        downsets = universal_frame(n, 1, ctx.caps).model.frame.count_downsets() - 1
        if count != downsets:
            problems.append(
                "height-1 reduced model count differs from nonempty universal downsets"
            )
    return problems


@_suite("counting-bounds")
def _suite_counting(ctx: SuiteContext):
    return 1, _global_failures("counting-bounds", _counting_problems(ctx))


def _tower_problems(ctx: SuiteContext) -> list[str]:
    problems = []
    towers = [make_tower(0, 2, ctx.caps), make_tower(1, 3, ctx.caps)]
    v3, _ = load_fixture("v3")
    towers.append(make_tower(Algebra(frame_to_spec(v3)), 3, ctx.caps))
    for tower in towers:
        top = tower.levels[-1]
        for a in top.elements(ctx.caps):
            family = tower.lift(a)
            for d in range(len(tower.levels) - 1):
                mapped = tower.maps[d].apply(family.components[d + 1])
                if mapped != family.components[d]:
                    problems.append("lifted families are coherent under the tower maps")
                    break
        for d in range(tower.depth + 1):
            eps_fam = tower.epsilon_family(d)
            for k, level in enumerate(tower.levels):
                if eps_fam.components[k] != level.epsilon(d):
                    problems.append("epsilon families restrict levelwise to epsilon(d)")
                    break
        for morphism in tower.maps:
            src_elems = morphism.src.elements(ctx.caps)
            limit = min(len(src_elems), 12)
            for a in src_elems[:limit]:
                for b in src_elems[:limit]:
                    if distance(morphism.apply(a), morphism.apply(b)) > distance(a, b):
                        problems.append("tower maps are nonexpansive")
                        break
    return problems


@_suite("tower-coherence")
def _suite_tower(ctx: SuiteContext):
    return 1, _global_failures("tower-coherence", _tower_problems(ctx))


def run_suites(
    names: list[str] | None = None, ctx: SuiteContext | None = None
) -> list[SuiteReport]:
    ctx = ctx or SuiteContext()
    chosen = names or sorted(SUITES)
    reports = []
    for name in chosen:
        if name not in SUITES:
            raise KeyError(f"unknown suite: {name}")
        reports.append(SUITES[name](ctx))
    return reports


def suite_names() -> list[str]:
    return sorted(SUITES)
