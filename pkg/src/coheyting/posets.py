"""Finite partial orders on index-addressed points.

Points are integers 0..n-1 with display names; subsets of points travel as
int bitmasks (bit i set = point i present).  Each poset stores the full
reachability closure per point, which keeps order queries, closures and
rank computations cheap at the sizes this package targets.

The module also provides a plain text format, a canonical form usable to
deduplicate posets up to (label-preserving) isomorphism, and an
isomorphism-class enumerator for small sizes.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Callable, Iterable, Iterator, Mapping, Sequence

from .config import DEFAULT_CAPS, Caps
from .errors import CycleDetected, DuplicateName, FormatError, SizeCap

PointSet = int  # bitmask of point indices


def bits(mask: PointSet) -> Iterator[int]:
    """Yield the indices set in ``mask`` in ascending order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def mask_of(indices: Iterable[int]) -> PointSet:
    out = 0
    for i in indices:
        out |= 1 << i
    return out


def popcount(mask: PointSet) -> int:
    return mask.bit_count()


def set_key(mask: PointSet) -> tuple:
    """Deterministic sort key: cardinality, then lexicographic indices."""
    return (mask.bit_count(), tuple(bits(mask)))


@dataclass(frozen=True)
class Poset:
    """Immutable finite poset.

    ``covers`` is the irredundant Hasse relation as (lower, upper) index
    pairs.  ``down[i]``/``up[i]`` are reflexive closure masks.
    """

    names: tuple[str, ...]
    covers: tuple[tuple[int, int], ...]
    down: tuple[int, ...]
    up: tuple[int, ...]

    @property
    def n(self) -> int:
        return len(self.names)

    @property
    def full(self) -> PointSet:
        return (1 << len(self.names)) - 1

    def index(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise FormatError(f"unknown point {name!r}") from None

    def leq(self, i: int, j: int) -> bool:
        return bool(self.down[j] >> i & 1)

    def lt(self, i: int, j: int) -> bool:
        return i != j and self.leq(i, j)

    def down_closure(self, s: PointSet) -> PointSet:
        out = 0
        for i in bits(s):
            out |= self.down[i]
        return out

    def up_closure(self, s: PointSet) -> PointSet:
        out = 0
        for i in bits(s):
            out |= self.up[i]
        return out

    def is_downset(self, s: PointSet) -> bool:
        return self.down_closure(s) == s

    def maximal_points(self, s: PointSet) -> PointSet:
        # p in s with nothing of s strictly above it
        return mask_of(i for i in bits(s) if self.up[i] & s == 1 << i)

    def minimal_points(self, s: PointSet) -> PointSet:
        return mask_of(i for i in bits(s) if self.down[i] & s == 1 << i)

    @cached_property
    def ranks(self) -> tuple[int, ...]:
        """rank[i] = length of the longest chain strictly below i."""
        rank = [0] * self.n
        for i in self._topo_order():
            below = [rank[j] + 1 for j in bits(self.down[i]) if j != i]
            rank[i] = max(below, default=0)
        return tuple(rank)

    @cached_property
    def coranks(self) -> tuple[int, ...]:
        """corank[i] = length of the longest chain strictly above i."""
        corank = [0] * self.n
        for i in reversed(self._topo_order()):
            above = [corank[j] + 1 for j in bits(self.up[i]) if j != i]
            corank[i] = max(above, default=0)
        return tuple(corank)

    def rank(self, i: int) -> int:
        return self.ranks[i]

    def corank(self, i: int) -> int:
        return self.coranks[i]

    def height(self) -> int:
        """Longest chain length (edges); -1 for the empty poset."""
        return max(self.ranks, default=-1)

    def _topo_order(self) -> list[int]:
        return sorted(range(self.n), key=lambda i: (popcount(self.down[i]), i))

    def dual(self) -> "Poset":
        """Same points, reversed order."""
        return Poset(
            names=self.names,
            covers=tuple(sorted((b, a) for a, b in self.covers)),
            down=self.up,
            up=self.down,
        )

    def induced(self, keep: PointSet) -> "Poset":
        """Subposet on the points of ``keep``, renumbered, names preserved."""
        kept = list(bits(keep))
        pos = {old: new for new, old in enumerate(kept)}
        names = tuple(self.names[i] for i in kept)
        down = []
        for old in kept:
            m = 0
            for j in bits(self.down[old] & keep):
                m |= 1 << pos[j]
            down.append(m)
        return _from_down(names, down)

    def antichains(
        self,
        keep: Callable[[PointSet], bool] | None = None,
        caps: Caps = DEFAULT_CAPS,
    ) -> list[PointSet]:
        """All nonempty antichains, sorted by size then lexicographic indices.

        ``keep`` filters candidates before they are stored.
        """
        n = self.n
        incomparable = [
            self.full & ~(self.down[i] | self.up[i]) for i in range(n)
        ]
        found: list[PointSet] = []

        def rec(start: int, chosen: PointSet, allowed: PointSet) -> None:
            for i in range(start, n):
                if not allowed >> i & 1:
                    continue
                cur = chosen | 1 << i
                if keep is None or keep(cur):
                    found.append(cur)
                    if len(found) > caps.max_antichains:
                        raise SizeCap(
                            f"more than {caps.max_antichains} antichains"
                        )
                rec(i + 1, cur, allowed & incomparable[i])

        rec(0, 0, self.full)
        found.sort(key=set_key)
        return found

    def all_downsets(self, caps: Caps = DEFAULT_CAPS) -> list[PointSet]:
        """Every downset, sorted by (size, indices).  Capped."""
        sets = {0}
        for i in self._topo_order():
            d = self.down[i]
            sets |= {s | d for s in sets}
            if len(sets) > caps.max_closure:
                raise SizeCap(f"more than {caps.max_closure} downsets")
        return sorted(sets, key=set_key)

    def count_downsets(self) -> int:
        """Number of downsets, computed without materializing them."""
        memo: dict[PointSet, int] = {0: 1}

        def count(sub: PointSet) -> int:
            if sub in memo:
                return memo[sub]
            x = (sub & -sub).bit_length() - 1
            out = count(sub & ~self.up[x]) + count(sub & ~self.down[x])
            memo[sub] = out
            return out

        return count(self.full)

    def format_points(self, s: PointSet) -> str:
        return "{" + ",".join(self.names[i] for i in bits(s)) + "}"

    def __repr__(self) -> str:
        rel = " ".join(
            f"{self.names[a]}<{self.names[b]}" for a, b in self.covers
        )
        return f"Poset({self.n} points{'; ' + rel if rel else ''})"


def _from_down(names: Sequence[str], down: Sequence[int]) -> Poset:
    """Build a Poset from reflexive down-closure masks."""
    n = len(names)
    up = [0] * n
    for j in range(n):
        for i in bits(down[j]):
            up[i] |= 1 << j
    covers = []
    for j in range(n):
        strict = down[j] & ~(1 << j)
        for i in bits(strict):
            # i is a lower cover of j iff nothing sits strictly between
            if not any(strict >> k & 1 and down[k] >> i & 1
                       for k in bits(strict) if k != i):
                covers.append((i, j))
    return Poset(tuple(names), tuple(sorted(covers)), tuple(down), tuple(up))


def build_poset(
    points: Sequence[str],
    covers: Iterable[tuple[str, str]] = (),
) -> Poset:
    """Construct a poset from point names and generating relation pairs.

    The pairs need not be irredundant; the Hasse relation is recomputed
    from the transitive closure.  Raises DuplicateName or CycleDetected.
    """
    names = tuple(points)
    if len(set(names)) != len(names):
        seen = set()
        for nm in names:
            if nm in seen:
                raise DuplicateName(f"point {nm!r} declared twice")
            seen.add(nm)
    idx = {nm: i for i, nm in enumerate(names)}
    n = len(names)
    edges: list[list[int]] = [[] for _ in range(n)]  # lower -> uppers
    indeg = [0] * n
    pairs = set()
    for lo, hi in covers:
        if lo not in idx:
            raise FormatError(f"unknown point {lo!r} in covers")
        if hi not in idx:
            raise FormatError(f"unknown point {hi!r} in covers")
        a, b = idx[lo], idx[hi]
        if a == b:
            raise CycleDetected(f"point {lo!r} related to itself")
        if (a, b) not in pairs:
            pairs.add((a, b))
            edges[a].append(b)
            indeg[b] += 1
    # Kahn: topological order doubles as the cycle check
    queue = [i for i in range(n) if indeg[i] == 0]
    order = []
    while queue:
        v = queue.pop()
        order.append(v)
        for w in edges[v]:
            indeg[w] -= 1
            if indeg[w] == 0:
                queue.append(w)
    if len(order) != n:
        raise CycleDetected("cover relation contains a cycle")
    down = [1 << i for i in range(n)]
    for v in order:
        for w in edges[v]:
            down[w] |= down[v]
    return _from_down(names, down)


# ---------------------------------------------------------------------------
# text format

def parse_poset_text(text: str) -> tuple[Poset, dict[str, frozenset[str]] | None]:
    """Parse the plain text poset format.

    Directives: ``points:``, ``covers:`` (tokens ``a<b``) and the optional
    ``colors:`` (tokens ``p:{x,y}``).  ``#`` starts a comment.  Returns the
    poset and the color map when one was given.
    """
    points: list[str] = []
    cover_pairs: list[tuple[str, str]] = []
    colors: dict[str, frozenset[str]] = {}
    saw_colors = False
    mode = None
    for raw_line in text.splitlines():
        line = raw_line.split("#", 1)[0].strip()
        if not line:
            continue
        for token in line.split():
            if token.endswith(":") and token[:-1] in ("points", "covers", "colors"):
                mode = token[:-1]
                continue
            if mode == "points":
                points.append(token)
            elif mode == "covers":
                if "<" not in token:
                    raise FormatError(f"bad cover token {token!r}")
                lo, hi = token.split("<", 1)
                cover_pairs.append((lo, hi))
            elif mode == "colors":
                saw_colors = True
                if ":" not in token:
                    raise FormatError(f"bad color token {token!r}")
                name, body = token.split(":", 1)
                if not (body.startswith("{") and body.endswith("}")):
                    raise FormatError(f"bad color token {token!r}")
                inner = body[1:-1]
                colors[name] = frozenset(v for v in inner.split(",") if v)
            else:
                raise FormatError(f"unexpected token {token!r}")
    poset = build_poset(points, cover_pairs)
    if saw_colors:
        for name in colors:
            if name not in poset.names:
                raise FormatError(f"color given for unknown point {name!r}")
        full = {nm: colors.get(nm, frozenset()) for nm in poset.names}
        return poset, full
    return poset, None


def poset_to_text(
    poset: Poset, colors: Mapping[str, frozenset[str]] | None = None
) -> str:
    lines = ["points: " + " ".join(poset.names)]
    if poset.covers:
        lines.append(
            "covers: "
            + " ".join(f"{poset.names[a]}<{poset.names[b]}" for a, b in poset.covers)
        )
    if colors is not None:
        toks = [
            f"{nm}:{{{','.join(sorted(colors.get(nm, frozenset())))}}}"
            for nm in poset.names
        ]
        lines.append("colors: " + " ".join(toks))
    return "\n".join(lines) + "\n"


def parse_point_list(text: str, poset: Poset) -> PointSet:
    """Parse an element literal like ``{p0,p1}`` against a poset."""
    body = text.strip()
    if not (body.startswith("{") and body.endswith("}")):
        raise FormatError(f"bad point set literal {text!r}")
    inner = body[1:-1].strip()
    if not inner:
        return 0
    out = 0
    for name in inner.split(","):
        out |= 1 << poset.index(name.strip())
    return out


# ---------------------------------------------------------------------------
# canonical form

def _label_key(label) -> tuple:
    if isinstance(label, (frozenset, set)):
        return ("set", tuple(sorted(str(v) for v in label)))
    if isinstance(label, tuple):
        return ("tuple",) + tuple(_label_key(v) for v in label)
    if label is None:
        return ("none",)
    return ("atom", type(label).__name__, repr(label))


def canonical_form(
    poset: Poset,
    labels: Sequence | Mapping[int, object] | None = None,
    caps: Caps = DEFAULT_CAPS,
) -> str:
    """Canonical code: equal exactly for label-preserving isomorphic posets.

    Refinement plus individualization; the code is the minimum encoding
    over all discrete orderings explored.
    """
    n = poset.n
    if n > caps.max_canonical_points:
        raise SizeCap(f"canonical form limited to {caps.max_canonical_points} points")
    if labels is None:
        keys = [("none",)] * n
    elif isinstance(labels, Mapping):
        keys = [_label_key(labels.get(i)) for i in range(n)]
    else:
        keys = [_label_key(labels[i]) for i in range(n)]
    uniq = sorted(set(keys))
    start = [uniq.index(k) for k in keys]

    def refine(color: list[int]) -> list[int]:
        while True:
            sigs = []
            for i in range(n):
                below = sorted(color[j] for j in bits(poset.down[i]) if j != i)
                above = sorted(color[j] for j in bits(poset.up[i]) if j != i)
                sigs.append((color[i], tuple(below), tuple(above)))
            ranks = {s: r for r, s in enumerate(sorted(set(sigs)))}
            new = [ranks[s] for s in sigs]
            if new == color:
                return new
            color = new

    best: list[str | None] = [None]
    budget = [caps.max_canonical_leaves]

    def encode(color: list[int]) -> str:
        order = sorted(range(n), key=lambda i: color[i])
        pos = {old: new for new, old in enumerate(order)}
        lab = tuple(keys[i] for i in order)
        cov = tuple(sorted((pos[a], pos[b]) for a, b in poset.covers))
        return repr((n, lab, cov))

    def rec(color: list[int]) -> None:
        color = refine(color)
        cells: dict[int, list[int]] = {}
        for i, c in enumerate(color):
            cells.setdefault(c, []).append(i)
        target = None
        for c in sorted(cells):
            if len(cells[c]) > 1:
                target = cells[c]
                break
        if target is None:
            budget[0] -= 1
            if budget[0] < 0:
                raise SizeCap("canonical form backtracking budget exhausted")
            code = encode(color)
            if best[0] is None or code < best[0]:
                best[0] = code
            return
        for i in target:
            child = list(color)
            child[i] = -1
            rec(child)

    if n == 0:
        return repr((0, (), ()))
    rec(start)
    assert best[0] is not None
    return best[0]


# ---------------------------------------------------------------------------
# enumeration up to isomorphism

@lru_cache(maxsize=None)
def _iso_classes(size: int, caps: Caps) -> tuple[Poset, ...]:
    if size <= 0:
        return ()
    if size == 1:
        return (build_poset(["p0"], []),)
    reps: dict[str, Poset] = {}
    for base in _iso_classes(size - 1, caps):
        k = base.n
        for downset in base.all_downsets(caps):
            down = list(base.down) + [downset | 1 << k]
            names = base.names + (f"p{k}",)
            cand = _from_down(names, down)
            code = canonical_form(cand, caps=caps)
            if code not in reps:
                reps[code] = cand
    return tuple(reps[c] for c in sorted(reps))


def enumerate_posets(
    max_points: int, caps: Caps = DEFAULT_CAPS
) -> Iterator[Poset]:
    """One representative per isomorphism class, sizes 1..max_points.

    Deterministic order: by size, then by canonical code.  Every poset of
    size k+1 arises from a size-k poset by attaching a new maximal point
    above one of its downsets, so the sweep is exhaustive.
    """
    if max_points > caps.max_enum_points:
        raise SizeCap(
            f"enumeration capped at {caps.max_enum_points} points"
            f" (asked for {max_points})"
        )
    for size in range(1, max_points + 1):
        yield from _iso_classes(size, caps)
