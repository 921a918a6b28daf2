"""Kripke models over finite frames, universal frames and free quotients.

Frames are posets whose accessibility runs downward: classical points are
minimal, forcing at a point quantifies over the points below it, and truth
sets of implication-signature terms are downsets of the frame.

The spectrum of the downset algebra attached to a model is the order dual
of the frame.  The two directions are wrapped in ``frame_to_spec`` and
``spec_to_frame`` so that no other code flips orders by hand.

Universal frames are built layer by layer: layer 1 holds one classical
point per color, and a point of layer k+1 is a pair (color, antichain of
lower points meeting layer k) whose color is contained in the colors of
all its covers, properly when there is a single cover.  The downset
algebra of the dual of the d-layer universal frame on n colors is the
n-generated free algebra cut at codimension d.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, Mapping, Sequence

from .algebra import Algebra, Element, Morphism, make_morphism
from .config import DEFAULT_CAPS, Caps
from .errors import (
    FrameMismatch,
    NotMonotone,
    SignatureMismatch,
    SizeCap,
    UnboundVariable,
)
from .posets import (
    PointSet,
    Poset,
    _from_down,
    bits,
    build_poset,
    canonical_form,
    mask_of,
    popcount,
    poset_to_text,
    set_key,
)
from .terms import Term, dualize, eval_term

log = logging.getLogger(__name__)


def frame_to_spec(frame: Poset) -> Poset:
    """Spectrum of the downset algebra attached to a frame."""
    return frame.dual()


def spec_to_frame(spec: Poset) -> Poset:
    """Frame whose truth sets mirror downsets of a spectrum."""
    return spec.dual()


@dataclass(frozen=True, eq=False)
class KripkeModel:
    """Finite model: frame plus a persistent valuation.

    ``colors[p]`` is the variable bitmask holding at point p; persistence
    means lower (more classical) points hold at least the variables of the
    points above them.
    """

    frame: Poset
    vars: tuple[str, ...]
    colors: tuple[int, ...]

    def color_set(self, p: int) -> frozenset[str]:
        return frozenset(
            self.vars[i] for i in range(len(self.vars)) if self.colors[p] >> i & 1
        )

    def color_map(self) -> dict[str, frozenset[str]]:
        return {self.frame.names[p]: self.color_set(p) for p in range(self.frame.n)}

    def to_text(self) -> str:
        return poset_to_text(self.frame, self.color_map())


def make_model(
    frame: Poset,
    vars: Sequence[str],
    colors: Mapping[str, frozenset[str]] | Sequence[int],
) -> KripkeModel:
    """Validate persistence and build a model.

    ``colors`` maps point names to variable sets, or gives one bitmask per
    point directly.
    """
    var_list = tuple(vars)
    var_index = {v: i for i, v in enumerate(var_list)}
    if isinstance(colors, Mapping):
        masks = []
        for nm in frame.names:
            mask = 0
            for v in colors.get(nm, frozenset()):
                if v not in var_index:
                    raise UnboundVariable(f"color variable {v!r} not declared")
                mask |= 1 << var_index[v]
            masks.append(mask)
    else:
        masks = list(colors)
    for lo, hi in frame.covers:
        if masks[lo] | masks[hi] != masks[lo]:
            raise NotMonotone(
                f"valuation not persistent across {frame.names[lo]} <="
                f" {frame.names[hi]}"
            )
    return KripkeModel(frame, var_list, tuple(masks))


# ---------------------------------------------------------------------------
# forcing

def truth_set(model: KripkeModel, t: Term) -> PointSet:
    """Points forcing an implication-signature term; always a frame downset."""
    if t.has_diff:
        raise SignatureMismatch("forcing evaluates implication-signature terms")
    frame = model.frame
    full = frame.full

    def go(t: Term) -> PointSet:
        if t.op == "zero":
            return 0
        if t.op == "one":
            return full
        if t.op == "var":
            if t.name not in model.vars:
                raise UnboundVariable(f"variable {t.name!r} not in the model")
            i = model.vars.index(t.name)
            return mask_of(
                p for p in range(frame.n) if model.colors[p] >> i & 1
            )
        a = go(t.args[0])
        b = go(t.args[1])
        if t.op == "join":
            return a | b
        if t.op == "meet":
            return a & b
        # implication: points whose entire past satisfies a -> b
        return full & ~frame.up_closure(a & ~b)

    return go(t)


def forces(model: KripkeModel, point: int | str, t: Term) -> bool:
    p = point if isinstance(point, int) else model.frame.index(point)
    return bool(truth_set(model, t) >> p & 1)


def globally_true(model: KripkeModel, t: Term) -> bool:
    return truth_set(model, t) == model.frame.full


# ---------------------------------------------------------------------------
# bisimulation

def _theory_classes(model: KripkeModel) -> list[int]:
    """Partition refinement: same class = same color and same classes met
    going down (reflexively)."""
    frame = model.frame
    n = frame.n
    palette = {c: i for i, c in enumerate(sorted(set(model.colors)))}
    cls = [palette[c] for c in model.colors]
    while True:
        sigs = []
        for p in range(n):
            seen = tuple(sorted(set(cls[q] for q in bits(frame.down[p]))))
            sigs.append((model.colors[p], seen))
        ranks = {s: r for r, s in enumerate(sorted(set(sigs)))}
        new = [ranks[s] for s in sigs]
        if new == cls:
            break
        cls = new
    # stable ids: order classes by their smallest member
    first = {}
    for p in range(n):
        first.setdefault(cls[p], p)
    order = sorted(first, key=lambda c: first[c])
    relabel = {c: i for i, c in enumerate(order)}
    return [relabel[c] for c in cls]


def bisim_reduce(model: KripkeModel) -> tuple[KripkeModel, tuple[int, ...]]:
    """Quotient by theory equivalence; returns the reduced model and the
    point-to-class map."""
    frame = model.frame
    cls = _theory_classes(model)
    k = max(cls, default=-1) + 1
    rep = [min(p for p in range(frame.n) if cls[p] == c) for c in range(k)]
    names = [frame.names[rep[c]] for c in range(k)]
    pairs = set()
    for q in range(frame.n):
        for p in bits(frame.down[q]):
            if cls[p] != cls[q]:
                pairs.add((names[cls[p]], names[cls[q]]))
    reduced_frame = build_poset(names, sorted(pairs))
    colors = [model.colors[rep[c]] for c in range(k)]
    # build_poset may reorder nothing (names list is authoritative), but map
    # colors through the name positions to stay safe
    by_name = {nm: colors[i] for i, nm in enumerate(names)}
    reduced = make_model(
        reduced_frame,
        model.vars,
        [by_name[nm] for nm in reduced_frame.names],
    )
    mapping = tuple(reduced_frame.index(names[c]) for c in cls)
    return reduced, mapping


def is_reduced(model: KripkeModel) -> bool:
    cls = _theory_classes(model)
    return len(set(cls)) == model.frame.n


def model_code(model: KripkeModel) -> str:
    """Canonical code equal exactly for isomorphic models."""
    labels = [model.color_set(p) for p in range(model.frame.n)]
    return canonical_form(model.frame, labels)


# ---------------------------------------------------------------------------
# duality with algebras

def model_of_algebra(
    algebra: Algebra, gens: Sequence[Element], var_names: Sequence[str] | None = None
) -> KripkeModel:
    """Canonical model on the dual of the spectrum: a point's color lists
    the generators it avoids."""
    if var_names is None:
        var_names = tuple(f"x{i + 1}" for i in range(len(gens)))
    if len(var_names) != len(gens):
        raise FrameMismatch("one variable name per generator required")
    frame = spec_to_frame(algebra.spec)
    colors = []
    for p in range(frame.n):
        mask = 0
        for i, g in enumerate(gens):
            if not algebra.element(g).pts >> p & 1:
                mask |= 1 << i
        colors.append(mask)
    return make_model(frame, tuple(var_names), colors)


def algebra_of_model(
    model: KripkeModel, caps: Caps = DEFAULT_CAPS
) -> tuple[PointSet, ...]:
    """Definable truth sets: closure of the variable truth sets under
    union, intersection and implication.  Returned as frame downsets."""
    frame = model.frame
    full = frame.full
    gens = [truth_set(model, Term("var", name=v)) for v in model.vars]
    masks: list[PointSet] = []
    seen: set[PointSet] = set()

    def add(m: PointSet) -> None:
        if m not in seen:
            if len(seen) >= caps.max_closure:
                raise SizeCap("definable truth sets exceed the closure cap")
            seen.add(m)
            masks.append(m)

    add(0)
    add(full)
    for g in gens:
        add(g)
    i = 0
    while i < len(masks):
        a = masks[i]
        for j in range(i + 1):
            b = masks[j]
            add(a | b)
            add(a & b)
            add(full & ~frame.up_closure(a & ~b))
            add(full & ~frame.up_closure(b & ~a))
        i += 1
    return tuple(sorted(seen, key=set_key))


# ---------------------------------------------------------------------------
# universal frames

@dataclass(frozen=True, eq=False)
class UniversalFrame:
    n: int
    d: int
    model: KripkeModel
    layers: tuple[tuple[int, ...], ...]

    @property
    def census(self) -> tuple[int, ...]:
        return tuple(len(layer) for layer in self.layers)


def universal_frame(n: int, d: int, caps: Caps = DEFAULT_CAPS) -> UniversalFrame:
    """Layered universal frame on n proposition letters and d layers.

    Deterministic: layer 1 is ordered by ascending color mask; later
    points are ordered by (antichain size, antichain indices, color mask).
    """
    if n < 0 or d < 0:
        raise FrameMismatch("need n >= 0 and d >= 0")
    vars = tuple(f"x{i + 1}" for i in range(n))
    names: list[str] = []
    colors: list[int] = []
    down: list[int] = []
    layers: list[tuple[int, ...]] = []
    if d >= 1:
        layer1 = []
        for c in range(1 << n):
            idx = len(names)
            names.append(f"u{idx}")
            colors.append(c)
            down.append(1 << idx)
            layer1.append(idx)
        layers.append(tuple(layer1))
    for _layer in range(2, d + 1):
        # incomparability from the running closure masks
        m = len(names)
        up = [0] * m
        for j in range(m):
            for i in bits(down[j]):
                up[i] |= 1 << j
        top_mask = mask_of(layers[-1])
        found: list[PointSet] = []

        def rec(start: int, chosen: PointSet, allowed: PointSet) -> None:
            for i in range(start, m):
                if not allowed >> i & 1:
                    continue
                cur = chosen | 1 << i
                if cur & top_mask:
                    found.append(cur)
                    if len(found) > caps.max_antichains:
                        raise SizeCap(
                            "universal frame antichain stream too large",
                            census=tuple(len(l) for l in layers),
                        )
                rec(i + 1, cur, allowed & ~(down[i] | up[i]))

        rec(0, 0, (1 << m) - 1)
        found.sort(key=set_key)
        new_layer = []
        for antichain in found:
            inter = (1 << n) - 1
            for w in bits(antichain):
                inter &= colors[w]
            single = popcount(antichain) == 1
            for c in range(inter + 1):
                if c & inter != c:
                    continue
                if single and c == inter:
                    continue  # a single cover must lose some variable
                idx = len(names)
                if idx >= caps.max_frame_nodes:
                    raise SizeCap(
                        f"universal frame exceeds {caps.max_frame_nodes} nodes",
                        census=tuple(len(l) for l in layers + [tuple(new_layer)]),
                    )
                names.append(f"u{idx}")
                colors.append(c)
                mask = 1 << idx
                for w in bits(antichain):
                    mask |= down[w]
                down.append(mask)
                new_layer.append(idx)
        if not new_layer:
            break
        layers.append(tuple(new_layer))
    frame = _from_down(names, down)
    model = make_model(frame, vars, colors)
    return UniversalFrame(n=n, d=d, model=model, layers=tuple(layers))


# ---------------------------------------------------------------------------
# free quotients

@dataclass(frozen=True, eq=False)
class FreeQuotient:
    """Downset algebra of the dual universal frame, with its generators.

    ``complete`` records the generated-subalgebra audit: True when the
    generators were verified to generate everything, None when the algebra
    was too large to audit under the caps.
    """

    n: int
    d: int
    frame: UniversalFrame
    algebra: Algebra
    gens: tuple[Element, ...]
    complete: bool | None


def free_quotient(n: int, d: int, caps: Caps = DEFAULT_CAPS) -> FreeQuotient:
    """Cached so repeated stages share one algebra object per (n, d, caps)."""
    return _free_quotient(n, d, caps)


@lru_cache(maxsize=None)
def _free_quotient(n: int, d: int, caps: Caps) -> FreeQuotient:
    uf = universal_frame(n, d, caps)
    algebra = Algebra(frame_to_spec(uf.model.frame))
    gens = []
    for i in range(n):
        mask = mask_of(
            p
            for p in range(uf.model.frame.n)
            if not uf.model.colors[p] >> i & 1
        )
        gens.append(algebra.element(mask))
    complete: bool | None = None
    size = algebra.size()
    if size <= caps.max_generation_check:
        generated = algebra.subalgebra_generated(gens, caps)
        complete = len(generated) == size
        if not complete:
            log.warning(
                "free quotient (%d, %d): generators span %d of %d elements",
                n, d, len(generated), size,
            )
    return FreeQuotient(
        n=n, d=d, frame=uf, algebra=algebra, gens=tuple(gens), complete=complete
    )


def free_epsilon(n: int, d: int, e: int, caps: Caps = DEFAULT_CAPS) -> Element:
    """Codimension >= e generator inside the (n, d) free quotient."""
    return free_quotient(n, d, caps).algebra.epsilon(e)


def projection(n: int, d: int, caps: Caps = DEFAULT_CAPS) -> Morphism:
    """Canonical map from the (n, d+1) free quotient onto the (n, d) one.

    The d-layer universal frame is a construction prefix of the d+1-layer
    one, so the dual map is the index inclusion.
    """
    src = free_quotient(n, d + 1, caps)
    dst = free_quotient(n, d, caps)
    k = dst.algebra.spec.n
    if (
        src.algebra.spec.names[:k] != dst.algebra.spec.names
        or src.frame.model.colors[:k] != dst.frame.model.colors
    ):
        raise FrameMismatch("universal frame layers are not nested")
    return make_morphism(src.algebra, dst.algebra, tuple(range(k)))


def d_equivalent(
    t1: Term, t2: Term, n: int, d: int, caps: Caps = DEFAULT_CAPS
) -> bool:
    """True when the two implication-signature terms cannot be told apart
    at codimension depth d: their duals agree on the free generators."""
    if t1.has_diff or t2.has_diff:
        raise SignatureMismatch("depth equivalence compares implication terms")
    names = sorted(t1.variables() | t2.variables())
    if len(names) > n:
        raise UnboundVariable(
            f"terms use {len(names)} variables but only {n} generators exist"
        )
    fq = free_quotient(n, d, caps)
    env = {nm: fq.gens[i] for i, nm in enumerate(names)}
    v1 = eval_term(dualize(t1), fq.algebra, env)
    v2 = eval_term(dualize(t2), fq.algebra, env)
    return v1.pts == v2.pts


def enumerate_reduced_models(
    n: int, d: int, max_points: int | None = None, caps: Caps = DEFAULT_CAPS
) -> Iterator[KripkeModel]:
    """All reduced models of depth at most d on n letters, up to
    isomorphism: the nonempty downsets of the universal frame, as induced
    submodels, deduplicated by canonical code."""
    uf = universal_frame(n, d, caps)
    frame = uf.model.frame
    downsets = []
    for antichain in frame.antichains(caps=caps):
        ds = frame.down_closure(antichain)
        if max_points is None or popcount(ds) <= max_points:
            downsets.append(ds)
    downsets.sort(key=set_key)
    seen: set[str] = set()
    for ds in downsets:
        sub = frame.induced(ds)
        colors = [uf.model.colors[p] for p in bits(ds)]
        model = make_model(sub, uf.model.vars, colors)
        code = model_code(model)
        if code in seen:
            continue
        seen.add(code)
        yield model
