"""Downset lattices of finite posets, with the difference operation.

Every finite distributive lattice is the lattice of downsets of a finite
poset (its spectrum); on downsets the difference a - b, the least c with
a <= b | c, is the down closure of the set difference.  This module keeps
the spectrum explicit and implements the order, the difference calculus,
the dimension and codimension filtration, quotients, morphisms (as dual
maps between spectra) and the irreducible-element machinery on top of it.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence, Union

from .config import DEFAULT_CAPS, Caps
from .errors import (
    EmptyElement,
    InfiniteArithmetic,
    NotADownset,
    NotMonotone,
    NotOpen,
    OwnerMismatch,
    SizeCap,
)
from .posets import PointSet, Poset, bits, mask_of, popcount, set_key


class Infinite:
    """Signed infinity used for codim(bottom) and dim(bottom).

    Comparisons against ints work; arithmetic is deliberately an error, an
    infinite codimension is a distinguished value and not a large number.
    """

    __slots__ = ("sign",)

    def __init__(self, sign: int):
        self.sign = sign

    def __repr__(self) -> str:
        return "+inf" if self.sign > 0 else "-inf"

    def __eq__(self, other) -> bool:
        return isinstance(other, Infinite) and other.sign == self.sign

    def __hash__(self) -> int:
        return hash(("Infinite", self.sign))

    def __lt__(self, other):
        if isinstance(other, Infinite):
            return self.sign < other.sign
        if isinstance(other, int):
            return self.sign < 0
        return NotImplemented

    def __le__(self, other):
        if isinstance(other, Infinite):
            return self.sign <= other.sign
        if isinstance(other, int):
            return self.sign < 0
        return NotImplemented

    def __gt__(self, other):
        if isinstance(other, Infinite):
            return self.sign > other.sign
        if isinstance(other, int):
            return self.sign > 0
        return NotImplemented

    def __ge__(self, other):
        if isinstance(other, Infinite):
            return self.sign >= other.sign
        if isinstance(other, int):
            return self.sign > 0
        return NotImplemented

    def _no_arith(self, *_args):
        raise InfiniteArithmetic("arithmetic with an infinite (co)dimension")

    __add__ = __radd__ = __sub__ = __rsub__ = _no_arith
    __mul__ = __rmul__ = __neg__ = _no_arith


PLUS_INFINITY = Infinite(1)
MINUS_INFINITY = Infinite(-1)

Codim = Union[int, Infinite]


@dataclass(frozen=True)
class Element:
    """A downset of the owner's spectrum, stored as a point bitmask."""

    owner: "Algebra"
    pts: PointSet

    def _check(self, other: "Element") -> None:
        if other.owner is not self.owner:
            raise OwnerMismatch("elements belong to different algebras")

    def __le__(self, other: "Element") -> bool:
        self._check(other)
        return self.pts & other.pts == self.pts

    def __ge__(self, other: "Element") -> bool:
        return other.__le__(self)

    def __or__(self, other: "Element") -> "Element":
        self._check(other)
        return Element(self.owner, self.pts | other.pts)

    def __and__(self, other: "Element") -> "Element":
        self._check(other)
        return Element(self.owner, self.pts & other.pts)

    def __sub__(self, other: "Element") -> "Element":
        """Difference: least c with self <= other | c."""
        self._check(other)
        spec = self.owner.spec
        return Element(self.owner, spec.down_closure(self.pts & ~other.pts))

    def __xor__(self, other: "Element") -> "Element":
        """Symmetric difference (self - other) | (other - self)."""
        return (self - other) | (other - self)

    def is_bottom(self) -> bool:
        return self.pts == 0

    def points(self) -> tuple[str, ...]:
        return tuple(self.owner.spec.names[i] for i in bits(self.pts))

    def sort_key(self) -> tuple:
        return set_key(self.pts)

    def __str__(self) -> str:
        return self.owner.spec.format_points(self.pts)

    def __repr__(self) -> str:
        return f"Element({self})"


@dataclass(frozen=True, eq=False)
class Algebra:
    """The lattice of downsets of ``spec`` under union, intersection and
    difference.  Elements carry their owner; algebras compare by identity.
    """

    spec: Poset

    def element(self, pts: PointSet | Element | Iterable) -> Element:
        if isinstance(pts, Element):
            if pts.owner is not self:
                raise OwnerMismatch("element belongs to a different algebra")
            return pts
        if isinstance(pts, int):
            mask = pts
        else:
            mask = 0
            for p in pts:
                mask |= 1 << (p if isinstance(p, int) else self.spec.index(p))
        if mask < 0 or mask > self.spec.full:
            raise NotADownset("point mask out of range")
        if not self.spec.is_downset(mask):
            raise NotADownset(
                f"{self.spec.format_points(mask)} is not down-closed"
            )
        return Element(self, mask)

    def bottom(self) -> Element:
        return Element(self, 0)

    def top(self) -> Element:
        return Element(self, self.spec.full)

    def size(self) -> int:
        return self.spec.count_downsets()

    def elements(self, caps: Caps = DEFAULT_CAPS) -> tuple[Element, ...]:
        return tuple(Element(self, m) for m in self.spec.all_downsets(caps))

    # -- order and difference ------------------------------------------------

    def join(self, a: Element, b: Element) -> Element:
        return self.element(a) | self.element(b)

    def meet(self, a: Element, b: Element) -> Element:
        return self.element(a) & self.element(b)

    def diff(self, a: Element, b: Element) -> Element:
        return self.element(a) - self.element(b)

    def sym_diff(self, a: Element, b: Element) -> Element:
        return self.element(a) ^ self.element(b)

    def strongly_below(self, b: Element, a: Element) -> bool:
        """True iff b <= a and a - b = a (b carries no weight inside a)."""
        b = self.element(b)
        a = self.element(a)
        return b <= a and (a - b).pts == a.pts

    # -- dimension and codimension --------------------------------------------

    def codim(self, a: Element) -> Codim:
        """Least corank of a point of a; +inf for bottom."""
        a = self.element(a)
        if a.pts == 0:
            return PLUS_INFINITY
        return min(self.spec.coranks[i] for i in bits(a.pts))

    def dim_elt(self, a: Element) -> Codim:
        """Greatest rank of a point of a; -inf for bottom."""
        a = self.element(a)
        if a.pts == 0:
            return MINUS_INFINITY
        return max(self.spec.ranks[i] for i in bits(a.pts))

    def dim_algebra(self) -> Codim:
        return self.dim_elt(self.top())

    def epsilon(self, d: int) -> Element:
        """Generator of the ideal of elements of codimension >= d."""
        return Element(
            self, mask_of(i for i in range(self.spec.n) if self.spec.coranks[i] >= d)
        )

    def ideal_dL(self, d: int) -> "Ideal":
        return Ideal(self, self.epsilon(d))

    def omega_ideal(self) -> "Ideal":
        # at finite scale the intersection of all dL collapses to {bottom}
        return Ideal(self, self.bottom())

    # -- spectrum-level views --------------------------------------------------

    def minimal_primes(self, a: Element) -> PointSet:
        """Points of a that are maximal in the spectrum order.

        These index the inclusion-minimal prime filters containing a.
        """
        a = self.element(a)
        if a.pts == 0:
            raise EmptyElement("bottom has no minimal primes")
        return self.spec.maximal_points(a.pts)

    def join_irreducibles(self) -> tuple[Element, ...]:
        out = [Element(self, self.spec.down[p]) for p in range(self.spec.n)]
        return tuple(sorted(out, key=Element.sort_key))

    def meet_irreducibles(self) -> tuple[Element, ...]:
        full = self.spec.full
        out = [Element(self, full & ~self.spec.up[p]) for p in range(self.spec.n)]
        return tuple(sorted(out, key=Element.sort_key))

    def jsupp(self, a: Element) -> tuple[Element, ...]:
        """Maximal join irreducibles below a; joins back to a."""
        a = self.element(a)
        out = [
            Element(self, self.spec.down[p])
            for p in bits(self.spec.maximal_points(a.pts))
        ]
        return tuple(sorted(out, key=Element.sort_key))

    def msupp(self, a: Element) -> tuple[Element, ...]:
        """Minimal meet irreducibles above a; meets back to a."""
        a = self.element(a)
        full = self.spec.full
        out = [
            Element(self, full & ~self.spec.up[p])
            for p in bits(self.spec.minimal_points(full & ~a.pts))
        ]
        return tuple(sorted(out, key=Element.sort_key))

    def conj_up(self, x: Element) -> Element:
        """Join of every element not above x."""
        x = self.element(x)
        inter = self.spec.full
        for p in bits(x.pts):
            inter &= self.spec.up[p]
        return Element(self, self.spec.full & ~inter)

    def conj_down(self, x: Element) -> Element:
        """Meet of every element not below x."""
        x = self.element(x)
        out = self.spec.full
        for q in bits(self.spec.minimal_points(self.spec.full & ~x.pts)):
            out &= self.spec.down[q]
        return Element(self, out)

    # -- quotients and generation ----------------------------------------------

    def quotient_by(self, e: Element) -> tuple["Algebra", "Morphism"]:
        """Quotient by the principal ideal on e: downsets of spec minus e."""
        e = self.element(e)
        keep = self.spec.full & ~e.pts
        sub = self.spec.induced(keep)
        quotient = Algebra(sub)
        dualmap = tuple(bits(keep))
        return quotient, make_morphism(self, quotient, dualmap)

    def subalgebra_generated(
        self, gens: Sequence[Element], caps: Caps = DEFAULT_CAPS
    ) -> tuple[Element, ...]:
        """Closure of gens (plus bounds) under join, meet and difference."""
        masks: list[PointSet] = []
        seen: set[PointSet] = set()

        def add(m: PointSet) -> None:
            if m not in seen:
                if len(seen) >= caps.max_closure:
                    raise SizeCap(
                        f"generated subalgebra exceeds {caps.max_closure} elements"
                    )
                seen.add(m)
                masks.append(m)

        add(0)
        add(self.spec.full)
        for g in gens:
            add(self.element(g).pts)
        i = 0
        while i < len(masks):
            a = masks[i]
            for j in range(i + 1):
                b = masks[j]
                add(a | b)
                add(a & b)
                add(self.spec.down_closure(a & ~b))
                add(self.spec.down_closure(b & ~a))
            i += 1
        return tuple(
            Element(self, m) for m in sorted(seen, key=set_key)
        )


@dataclass(frozen=True)
class Ideal:
    """Principal ideal: every element below ``gen``."""

    owner: Algebra
    gen: Element

    def contains(self, a: Element) -> bool:
        return self.owner.element(a) <= self.gen

    def __contains__(self, a: Element) -> bool:
        return self.contains(a)

    def members(self, caps: Caps = DEFAULT_CAPS) -> tuple[Element, ...]:
        return tuple(
            e for e in self.owner.elements(caps) if e.pts & self.gen.pts == e.pts
        )


@dataclass(frozen=True, eq=False)
class Morphism:
    """Algebra morphism presented by its dual map between spectra.

    ``dualmap[q]`` is the source spectrum point under the dst spectrum
    point q; the element map is preimage.  Monotonicity plus openness
    (principal up-sets map onto principal up-sets) make the element map
    preserve join, meet, bottom, top and difference.
    """

    src: Algebra
    dst: Algebra
    dualmap: tuple[int, ...]

    def apply(self, a: Element) -> Element:
        a = self.src.element(a)
        m = 0
        for q, p in enumerate(self.dualmap):
            if a.pts >> p & 1:
                m |= 1 << q
        return Element(self.dst, m)

    def __call__(self, a: Element) -> Element:
        return self.apply(a)

    @cached_property
    def image_mask(self) -> PointSet:
        return mask_of(self.dualmap)

    def kernel(self) -> Ideal:
        """Largest element sent to bottom, as a principal ideal."""
        spec = self.src.spec
        gen = mask_of(
            p for p in range(spec.n) if spec.down[p] & self.image_mask == 0
        )
        return Ideal(self.src, Element(self.src, gen))

    def dual_injective(self) -> bool:
        return len(set(self.dualmap)) == len(self.dualmap)

    def compose(self, earlier: "Morphism") -> "Morphism":
        """self after earlier: earlier.src -> self.dst."""
        if earlier.dst is not self.src:
            raise OwnerMismatch("morphisms do not compose")
        dm = tuple(earlier.dualmap[q] for q in self.dualmap)
        return make_morphism(earlier.src, self.dst, dm)


@dataclass(frozen=True)
class DimPreservationReport:
    d: int
    image: Element
    target: Element
    contained: bool
    equal: bool
    dual_injective: bool

    @property
    def ok(self) -> bool:
        return self.contained and (self.equal or not self.dual_injective)


def make_morphism(
    src: Algebra, dst: Algebra, dualmap: Sequence[int], validate: bool = True
) -> Morphism:
    """Validate and build a morphism from its dual map."""
    dm = tuple(dualmap)
    if len(dm) != dst.spec.n or any(
        not 0 <= p < src.spec.n for p in dm
    ):
        raise NotMonotone("dual map is not a total map into the source spectrum")
    phi = Morphism(src, dst, dm)
    if validate:
        for lo, hi in dst.spec.covers:
            if not src.spec.leq(dm[lo], dm[hi]):
                raise NotMonotone(
                    f"dual map inverts {dst.spec.names[lo]} <= {dst.spec.names[hi]}"
                )
        for q in range(dst.spec.n):
            image = mask_of(dm[r] for r in bits(dst.spec.up[q]))
            if image != src.spec.up[dm[q]]:
                raise NotOpen(
                    f"dual map does not carry the up-set of {dst.spec.names[q]}"
                    " onto a principal up-set"
                )
    return phi


def identity_morphism(a: Algebra) -> Morphism:
    return make_morphism(a, a, tuple(range(a.spec.n)), validate=False)


def fiber_min(phi: Morphism, a: Element) -> Element:
    """Least source element with the same image as a (quotient maps)."""
    return phi.src.element(a) - phi.kernel().gen


def fiber_max(phi: Morphism, a: Element) -> Element:
    """Greatest source element with the same image as a (quotient maps)."""
    return phi.src.element(a) | phi.kernel().gen


def check_dL_preserved(phi: Morphism, d: int) -> DimPreservationReport:
    """Report whether phi carries the codim >= d generator into (or onto)
    its counterpart downstream."""
    image = phi.apply(phi.src.epsilon(d))
    target = phi.dst.epsilon(d)
    return DimPreservationReport(
        d=d,
        image=image,
        target=target,
        contained=image <= target,
        equal=image.pts == target.pts,
        dual_injective=phi.dual_injective(),
    )


def make_algebra(spec: Poset) -> Algebra:
    return Algebra(spec)
