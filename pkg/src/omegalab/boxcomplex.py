"""Box complexes and generic two-shore simplicial complexes with a free swap.

Tokens of a complex are laid out as all white-shore copies first, then all
black-shore copies, so the involution is a half-shift: token t mirrors to
t +- h where h is the shore size.  Simplices are int bitmasks over tokens.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .bitset import bits, mask_of
from .errors import ContractError, ParameterError, ParseError, ResourceError
from .functors import Homomorphism
from .graphs import Graph, common_neighborhood

DEFAULT_SIMPLEX_BUDGET = 10**7


@dataclass
class Z2Complex:
    """Facet-presented simplicial complex with the shore-swap involution.

    ``base[p]`` names the object behind shore position p (a graph vertex id
    for box complexes, an arbitrary id for synthetic complexes); token p is
    its white copy and token p + h its black copy.
    """

    base: tuple[int, ...]
    facets: tuple[int, ...]
    free: bool
    _faces: set[int] | None = field(default=None, repr=False, compare=False)

    @property
    def h(self) -> int:
        return len(self.base)

    @property
    def token_count(self) -> int:
        return 2 * len(self.base)

    def token_name(self, t: int) -> tuple[int, str]:
        return (self.base[t % self.h], "+" if t < self.h else "-")

    def mirror(self, mask: int) -> int:
        h = self.h
        lower = mask & ((1 << h) - 1)
        return (mask >> h) | (lower << h)

    def membership(self, mask: int) -> bool:
        """True iff the nonempty token set is a face of some facet."""
        if mask == 0:
            return False
        return any(mask & ~f == 0 for f in self.facets)

    def simplices(self, budget: int = DEFAULT_SIMPLEX_BUDGET) -> set[int]:
        """All faces of all facets, materialized once and cached."""
        if self._faces is None:
            seen: set[int] = set()
            stack = list(self.facets)
            while stack:
                s = stack.pop()
                if s in seen:
                    continue
                seen.add(s)
                if len(seen) > budget:
                    raise ResourceError(f"simplex budget {budget} exceeded")
                m = s
                while m:
                    low = m & -m
                    m ^= low
                    child = s ^ low
                    if child and child not in seen:
                        stack.append(child)
            self._faces = seen
        return self._faces

    def validate(self) -> None:
        h = self.h
        full = (1 << (2 * h)) - 1
        for f in self.facets:
            if f & ~full:
                raise ParameterError("facet uses tokens beyond the vertex table")
        for i, f in enumerate(self.facets):
            for g in self.facets:
                if f != g and f & ~g == 0:
                    raise ParameterError("facet list is not an antichain")
        mirrored = sorted(self.mirror(f) for f in self.facets)
        if mirrored != sorted(self.facets):
            raise ParameterError("facet list is not swap-symmetric")
        really_free = all(f & self.mirror(f) == 0 for f in self.facets)
        if really_free != self.free:
            raise ContractError("free flag disagrees with the facet list")


def make_complex(base, facets) -> Z2Complex:
    """Build a Z2Complex from arbitrary facet masks: dedupe, maximalize,
    close under the mirror, sort canonically, and set the free flag."""
    closed = set()
    probe = Z2Complex(tuple(base), (), True)
    for f in facets:
        if f:
            closed.add(f)
            closed.add(probe.mirror(f))
    maximal = [f for f in closed if not any(f != g and f & ~g == 0 for g in closed)]
    maximal.sort(key=lambda m: tuple(bits(m)))
    free = all(f & probe.mirror(f) == 0 for f in maximal)
    out = Z2Complex(tuple(base), tuple(maximal), free)
    out.validate()
    return out


def build_box(g: Graph) -> Z2Complex:
    """Box complex: isolated vertices dropped, facets are the closed pairs
    (A, CN(A)) with both sides nonempty, white copy of A with black copy of
    CN(A).  The swap action is free exactly when g has no loops."""
    vlist = [v for v in range(g.n) if g.adj[v]]
    pos = {v: i for i, v in enumerate(vlist)}
    h = len(vlist)

    closed_sets = _closure_family(g, vlist)
    facets = []
    for a_mask in closed_sets:
        cn = common_neighborhood(g, a_mask)
        if a_mask and cn:
            white = mask_of(pos[v] for v in bits(a_mask))
            black = mask_of(h + pos[v] for v in bits(cn))
            facets.append(white | black)
    facets = sorted(set(facets), key=lambda m: tuple(bits(m)))
    free = not g.has_loops()
    out = Z2Complex(tuple(vlist), tuple(facets), free)
    out.validate()
    return out


def _closure_family(g: Graph, vlist) -> list[int]:
    """All Galois-closed vertex sets A = CN(CN(A)) reachable from singleton
    closures by join-and-close; every closed set arises this way."""

    def close(mask: int) -> int:
        return common_neighborhood(g, common_neighborhood(g, mask))

    seeds = []
    seen = set()
    for v in vlist:
        c = close(1 << v)
        if c not in seen:
            seen.add(c)
            seeds.append(c)
    frontier = list(seeds)
    while frontier:
        cur = frontier.pop()
        for s in seeds:
            joined = close(cur | s)
            if joined not in seen:
                seen.add(joined)
                frontier.append(joined)
    return sorted(seen)


@dataclass(frozen=True)
class SimplicialZ2Map:
    """Token map between complexes that is simplicial and swap-equivariant."""

    source: Z2Complex
    target: Z2Complex
    vertex_map: tuple[int, ...]

    def __post_init__(self):
        if len(self.vertex_map) != self.source.token_count:
            raise ContractError("vertex map must be total on source tokens")
        for t, img in enumerate(self.vertex_map):
            mt = self.source.h + t if t < self.source.h else t - self.source.h
            mi = (
                self.target.h + img
                if img < self.target.h
                else img - self.target.h
            )
            if self.vertex_map[mt] != mi:
                raise ContractError(f"map does not commute with the swap at token {t}")
        for f in self.source.facets:
            if not self.target.membership(self.image(f)):
                raise ContractError("a facet maps outside the target complex")

    def image(self, mask: int) -> int:
        out = 0
        for t in bits(mask):
            out |= 1 << self.vertex_map[t]
        return out

    def compose(self, first: "SimplicialZ2Map") -> "SimplicialZ2Map":
        return SimplicialZ2Map(
            first.source,
            self.target,
            tuple(self.vertex_map[t] for t in first.vertex_map),
        )


def induced_map(
    hom: Homomorphism,
    source: Z2Complex | None = None,
    target: Z2Complex | None = None,
) -> SimplicialZ2Map:
    """The shore-preserving token map (v, *) -> (h(v), *) on box complexes."""
    if source is None:
        source = build_box(hom.source)
    if target is None:
        target = build_box(hom.target)
    tpos = {v: i for i, v in enumerate(target.base)}
    vmap = []
    for t in range(source.token_count):
        v, shore = source.token_name(t)
        img = hom(v)
        if img not in tpos:
            raise ContractError(f"image vertex {img} is isolated in the target")
        vmap.append(tpos[img] if shore == "+" else target.h + tpos[img])
    return SimplicialZ2Map(source, target, tuple(vmap))


# -- text format ----------------------------------------------------------------
#
#   c <num_vertices>
#   n <id> <graph-vertex> <+|->     (one line per token, ids 0..2h-1)
#   f <id1> <id2> ...               (one line per facet, ids ascending)

def format_complex(k: Z2Complex) -> str:
    lines = [f"c {k.token_count}"]
    for t in range(k.token_count):
        v, shore = k.token_name(t)
        lines.append(f"n {t} {v} {shore}")
    for f in k.facets:
        lines.append("f " + " ".join(str(t) for t in bits(f)))
    return "\n".join(lines) + "\n"


def parse_complex(text: str) -> Z2Complex:
    count = None
    tokens: dict[int, tuple[int, str]] = {}
    facet_rows: list[tuple[list[int], int]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        parts = line.split()
        if parts[0] == "c":
            if count is not None:
                raise ParseError("duplicate c line", lineno)
            if len(parts) != 2:
                raise ParseError("c line must be 'c <num_vertices>'", lineno)
            try:
                count = int(parts[1])
            except ValueError:
                raise ParseError("vertex count must be an integer", lineno) from None
            if count < 0 or count % 2:
                raise ParseError("vertex count must be even and nonnegative", lineno)
        elif parts[0] == "n":
            if count is None:
                raise ParseError("n line before c line", lineno)
            if len(parts) != 4 or parts[3] not in ("+", "-"):
                raise ParseError("n line must be 'n <id> <graph-vertex> <+|->'", lineno)
            try:
                tid, gv = int(parts[1]), int(parts[2])
            except ValueError:
                raise ParseError("n line fields must be integers", lineno) from None
            if not 0 <= tid < count:
                raise ParseError(f"token id {tid} out of range", lineno)
            if tid in tokens:
                raise ParseError(f"duplicate token id {tid}", lineno)
            tokens[tid] = (gv, parts[3])
        elif parts[0] == "f":
            if count is None:
                raise ParseError("f line before c line", lineno)
            try:
                ids = [int(x) for x in parts[1:]]
            except ValueError:
                raise ParseError("facet ids must be integers", lineno) from None
            if not ids:
                raise ParseError("facet line must list at least one token", lineno)
            if any(not 0 <= t < count for t in ids):
                raise ParseError("facet token id out of range", lineno)
            facet_rows.append((ids, lineno))
        else:
            raise ParseError(f"unknown line kind {parts[0]!r}", lineno)
    if count is None:
        raise ParseError("missing c line")
    if len(tokens) != count:
        raise ParseError(f"expected {count} n lines, found {len(tokens)}")

    # normalize to the half-shift layout: white tokens sorted by graph vertex
    whites = sorted(gv for gv, shore in tokens.values() if shore == "+")
    blacks = sorted(gv for gv, shore in tokens.values() if shore == "-")
    if whites != blacks:
        raise ParseError("tokens do not pair into an involution")
    if len(set(whites)) != len(whites):
        raise ParseError("duplicate (graph-vertex, shore) token")
    h = len(whites)
    new_pos = {}
    for tid, (gv, shore) in tokens.items():
        idx = whites.index(gv)
        new_pos[tid] = idx if shore == "+" else h + idx
    facets = []
    for ids, lineno in facet_rows:
        facets.append(mask_of(new_pos[t] for t in ids))
    return make_complex(tuple(whites), facets)
