"""Equivariant discrete Morse matchings and collapses on box complexes.

The generic engine (``is_acyclic``, ``collapse``) works on any free
two-shore complex.  The specific matchings are the two collapse recipes for
the shortcut complex of the right-adjoint graph: ``saturation_matching``
retracts it onto the saturated-image subcomplex, and ``removal_phases``
peels the added simplices in three phases until exactly the unmodified
box complex remains.  Both parameterize by the half index k, acting on
the functor of odd index 2k+1.

Every construction is self-checking: matchings verify that they are
involutions, stay within their phase domain, respect the shore swap, and
pass the acyclicity test before any collapse is attempted.  A failure is a
falsification signal, not an expected runtime event.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass

from .bitset import bits
from .boxcomplex import Z2Complex, build_box
from .errors import ContractError, ParameterError
from .functors import FunctorResult, omega, omega_prime, saturation_indices
from .graphs import Graph, common_neighborhood
from .homology import betti_mod2


@dataclass(frozen=True)
class MorseMatching:
    """Vertex-disjoint face/cofacet pairs on the simplices outside a subcomplex."""

    pairs: tuple[tuple[int, int], ...]  # (face, cofacet), |cofacet \ face| = 1

    def matched(self) -> set[int]:
        out = set()
        for a, b in self.pairs:
            out.add(a)
            out.add(b)
        return out

    def partner(self) -> dict[int, int]:
        out: dict[int, int] = {}
        for a, b in self.pairs:
            if a in out or b in out:
                raise ContractError("a simplex appears in two matching pairs")
            out[a] = b
            out[b] = a
        return out


@dataclass(frozen=True)
class CollapseCertificate:
    """Ordered elementary collapses; mirror removals appear as their own steps."""

    steps: tuple[tuple[int, int], ...]
    remaining: frozenset[int]


def _check_matching(simplices: set[int], sub: set[int], matching: MorseMatching) -> None:
    partner = matching.partner()
    for a, b in matching.pairs:
        if a.bit_count() + 1 != b.bit_count() or a & ~b:
            raise ContractError("matching pair is not a face/cofacet pair")
        if a not in simplices or b not in simplices:
            raise ContractError("matching pair uses unknown simplices")
        if a in sub or b in sub:
            raise ContractError("matching touches the protected subcomplex")
    if set(partner) != simplices - sub:
        raise ContractError("matching does not cover the simplices outside the subcomplex")


def is_acyclic(matching: MorseMatching) -> bool:
    """Check for directed cycles through alternating face/cofacet steps.

    A step goes up from a matched face to its cofacet and back down to a
    different matched face of the same size; a cycle among those steps is
    exactly the forbidden pattern.
    """
    partner = matching.partner()
    lowers = [a for a, b in matching.pairs]
    lower_set = set(lowers)

    def downsteps(low: int):
        up = partner[low]
        m = up
        while m:
            bit = m & -m
            m ^= bit
            nxt = up ^ bit
            if nxt != low and nxt in lower_set:
                yield nxt

    WHITE, GRAY, BLACK = 0, 1, 2
    color = dict.fromkeys(lowers, WHITE)
    for root in lowers:
        if color[root] != WHITE:
            continue
        stack = [(root, downsteps(root))]
        color[root] = GRAY
        while stack:
            node, it = stack[-1]
            advanced = False
            for nxt in it:
                c = color[nxt]
                if c == GRAY:
                    return False
                if c == WHITE:
                    color[nxt] = GRAY
                    stack.append((nxt, downsteps(nxt)))
                    advanced = True
                    break
            if not advanced:
                color[node] = BLACK
                stack.pop()
    return True


def collapse(
    complex_: Z2Complex,
    simplices: set[int],
    sub: set[int],
    matching: MorseMatching,
) -> CollapseCertificate:
    """Run the matching as a sequence of equivariant elementary collapses.

    At every step the removed cofacet is the unique simplex properly
    containing its face in the current complex; the mirror pair is removed
    in the same step.  Ends exactly at ``sub`` or raises.
    """
    _check_matching(simplices, sub, matching)
    if not is_acyclic(matching):
        raise ContractError("matching has a directed cycle; collapse refused")

    partner = matching.partner()
    lower_set = {a for a, _ in matching.pairs}
    alive = set(simplices)

    counts: dict[int, int] = dict.fromkeys(lower_set, 0)
    for s in alive:
        m = s
        while m:
            bit = m & -m
            m ^= bit
            face = s ^ bit
            if face in counts:
                counts[face] += 1

    heap = [low for low, c in counts.items() if c == 1]
    heapq.heapify(heap)
    steps: list[tuple[int, int]] = []

    def remove(s: int) -> None:
        alive.discard(s)
        m = s
        while m:
            bit = m & -m
            m ^= bit
            face = s ^ bit
            c = counts.get(face)
            if c is not None:
                counts[face] = c - 1
                if c - 1 == 1 and face in alive:
                    heapq.heappush(heap, face)

    while heap:
        low = heapq.heappop(heap)
        if low not in alive or counts[low] != 1:
            continue
        up = partner[low]
        mlow = complex_.mirror(low)
        mup = complex_.mirror(up)
        for s in (low, up, mlow, mup):
            remove(s)
        steps.append((low, up))
        steps.append((mlow, mup))

    if alive != sub:
        raise ContractError(
            f"collapse stuck: {len(alive) - len(sub)} matched simplices remain"
        )
    return CollapseCertificate(tuple(steps), frozenset(alive))


# -- the shortcut-complex machinery -------------------------------------------


class ShortcutComplex:
    """Bundles the right-adjoint graph of index 2k+1, its shortcut extension,
    the box complex of the extension, and the per-position data the matchings
    consume (tail masks, saturation flags, pairwise join tables)."""

    def __init__(self, g: Graph, k: int, vertex_budget=None, simplex_budget=None):
        if k < 1:
            raise ParameterError("half index must be >= 1")
        if g.has_loops():
            raise ParameterError("shortcut collapses need a loopless base graph")
        self.g = g
        self.k = k
        kw = {} if vertex_budget is None else {"vertex_budget": vertex_budget}
        self.omega: FunctorResult = omega(g, 2 * k + 1, **kw)
        self.prime: FunctorResult = omega_prime(g, 2 * k + 1, **kw)
        self.box: Z2Complex = build_box(self.prime.graph)
        bkw = {} if simplex_budget is None else {"budget": simplex_budget}
        self.simplices: set[int] = self.box.simplices(**bkw)

        base = self.box.base  # positions -> vertex ids of the adjoint graph
        self.h = self.box.h
        pos_of = {v: p for p, v in enumerate(base)}
        sat = saturation_indices(g, self.omega)
        tuples = self.omega.tuples

        self.tail = [tuples[v][-1] for v in base]
        self.subtail = [tuples[v][-2] for v in base]
        self.saturated_pos = 0
        self.sat_token = []  # position of the saturated partner, per position
        for p, v in enumerate(base):
            if sat[v] == v:
                self.saturated_pos |= 1 << p
            target = sat[v]
            if target not in pos_of:
                raise ContractError("saturated partner is isolated; cannot happen")
            self.sat_token.append(pos_of[target])
        self.pos_of = pos_of

        full = (1 << self.h) - 1
        # join tables over positions: tails vs tails, tails vs subtails
        self.join_tail_tail = []
        self.join_tail_subtail = []
        for p in range(self.h):
            cn = common_neighborhood(g, self.tail[p])
            row_tt = 0
            row_ts = 0
            for q in range(self.h):
                if self.tail[q] & ~cn == 0:
                    row_tt |= 1 << q
                if self.subtail[q] & ~cn == 0:
                    row_ts |= 1 << q
            self.join_tail_tail.append(row_tt)
            self.join_tail_subtail.append(row_ts)
        # adjacency of the unmodified adjoint graph, re-indexed to positions
        self.omega_adj_pos = []
        for p, v in enumerate(base):
            row = 0
            vrow = self.omega.graph.adj[v]
            for q, w in enumerate(base):
                if vrow >> w & 1:
                    row |= 1 << q
            self.omega_adj_pos.append(row)
        self.full_pos = full

    # shore helpers -----------------------------------------------------------

    def split(self, mask: int) -> tuple[int, int]:
        return mask & self.full_pos, mask >> self.h

    def in_plain_box(self, mask: int) -> bool:
        """Membership of a shortcut-complex simplex in the unmodified box
        complex, decided by adjacency in the unmodified adjoint graph."""
        lo, hi = self.split(mask)
        cn_lo = self.full_pos
        for p in bits(lo):
            cn_lo &= self.omega_adj_pos[p]
        if hi & ~cn_lo or cn_lo == 0:
            return False
        cn_hi = self.full_pos
        for q in bits(hi):
            cn_hi &= self.omega_adj_pos[q]
        return cn_hi != 0

    def plain_box_simplices(self) -> set[int]:
        return {s for s in self.simplices if self.in_plain_box(s)}

    def saturated_subcomplex(self) -> set[int]:
        keep = self.saturated_pos | self.saturated_pos << self.h
        return {s for s in self.simplices if s & ~keep == 0}

    # offending-simplex classification ----------------------------------------

    def cross_shore_offense(self, mask: int):
        """Minimal ordered pair (p, q, shore-of-p) with tails not joined
        across shores, or None."""
        lo, hi = self.split(mask)
        for p in bits(lo | hi):
            if lo >> p & 1:
                off = hi & ~self.join_tail_tail[p]
            else:
                off = lo & ~self.join_tail_tail[p]
            if off:
                q = (off & -off).bit_length() - 1
                return p, q, 0 if lo >> p & 1 else 1
        return None

    def same_shore_offense(self, mask: int, require_unsaturated: bool):
        """Minimal ordered same-shore pair (p, q, shore) whose tail fails to
        join the other's subtail; optionally only pairs whose first member
        is unsaturated."""
        lo, hi = self.split(mask)
        cand = lo | hi
        if require_unsaturated:
            cand &= ~self.saturated_pos
        for p in bits(cand):
            shore_mask = lo if lo >> p & 1 else hi
            off = shore_mask & ~self.join_tail_subtail[p]
            if off:
                q = (off & -off).bit_length() - 1
                return p, q, 0 if lo >> p & 1 else 1
        return None

    def classify_offending(self):
        """Partition of the simplices outside the unmodified box complex:
        returns (cross_shore, same_shore) sets; both flags can hold at once.
        Raises if some outside simplex matches neither pattern."""
        cross: set[int] = set()
        same: set[int] = set()
        for s in self.simplices:
            if self.in_plain_box(s):
                continue
            c = self.cross_shore_offense(s) is not None
            t = self.same_shore_offense(s, require_unsaturated=False) is not None
            if not c and not t:
                raise ContractError(f"unclassified extra simplex {s:#x}")
            if c:
                cross.add(s)
            if t:
                same.add(s)
        return cross, same


def saturation_matching(sc: ShortcutComplex) -> tuple[MorseMatching, set[int]]:
    """Match every simplex containing an unsaturated vertex with its toggle
    by the saturated partner of the least such vertex.  Returns the matching
    and the protected subcomplex (simplices purely on saturated vertices)."""
    sub = sc.saturated_subcomplex()
    unsat = ~sc.saturated_pos & sc.full_pos
    pairs = []
    for s in sorted(sc.simplices - sub):
        lo, hi = sc.split(s)
        union = (lo | hi) & unsat
        # least unsaturated vertex over both shores, in canonical order
        p = (union & -union).bit_length() - 1
        shore_shift = 0 if lo >> p & 1 else sc.h
        toggle = 1 << (sc.sat_token[p] + shore_shift)
        other = s ^ toggle
        if other not in sc.simplices:
            raise ContractError("saturation toggle left the complex")
        if s < other:
            pairs.append((s, other) if s.bit_count() < other.bit_count() else (other, s))
    matching = MorseMatching(tuple(pairs))
    _verify_involution(sc, matching, sc.simplices - sub)
    return matching, sub


def removal_phases(sc: ShortcutComplex):
    """The three-phase matching peeling the shortcut-only simplices.

    Phase 1: same-shore offenses whose lead vertex is unsaturated.
    Phase 2: remaining same-shore offenses (lead vertex saturated).
    Phase 3: cross-shore offenses (tails not joined across the shores).

    Returns a list of (matching, domain) in collapse order; the domains
    partition the simplices outside the unmodified box complex.
    """
    plain = sc.plain_box_simplices()
    d1: set[int] = set()
    d2: set[int] = set()
    d3: set[int] = set()
    for s in sc.simplices:
        if s in plain:
            continue
        if sc.same_shore_offense(s, require_unsaturated=True) is not None:
            d1.add(s)
        elif sc.same_shore_offense(s, require_unsaturated=False) is not None:
            d2.add(s)
        else:
            if sc.cross_shore_offense(s) is None:
                raise ContractError(f"extra simplex {s:#x} matches no phase")
            d3.add(s)

    phases = []
    for domain, chooser, builder in (
        (d1, lambda s: sc.same_shore_offense(s, True), _build_capped),
        (d2, lambda s: sc.same_shore_offense(s, False), _build_capped),
        (d3, sc.cross_shore_offense, _build_pooled),
    ):
        pairs = []
        for s in sorted(domain):
            choice = chooser(s)
            if choice is None:
                raise ContractError("phase domain disagrees with its chooser")
            other = builder(sc, s, choice)
            if other not in domain:
                raise ContractError("matching left its phase domain")
            if s < other:
                pairs.append(
                    (s, other) if s.bit_count() < other.bit_count() else (other, s)
                )
        matching = MorseMatching(tuple(pairs))
        _verify_involution(sc, matching, domain)
        phases.append((matching, domain))
    return phases


def _build_capped(sc: ShortcutComplex, s: int, choice) -> int:
    """Toggle by the tuple whose tail is the common neighborhood of the pooled
    shore sets (phases 1 and 2)."""
    p, _q, shore = choice
    lo, hi = sc.split(s)
    mine, other = (lo, hi) if shore == 0 else (hi, lo)
    pooled = 0
    for r in bits(mine):
        pooled |= sc.subtail[r]
    for r in bits(other & ~sc.saturated_pos):
        pooled |= sc.tail[r]
    prefix = sc.omega.tuples[sc.box.base[p]][:-1]
    star = prefix + (common_neighborhood(sc.g, pooled),)
    return _toggle(sc, s, star, shore)


def _build_pooled(sc: ShortcutComplex, s: int, choice) -> int:
    """Toggle by the tuple whose tail is the union of the other shore's
    subtails (phase 3)."""
    p, _q, shore = choice
    lo, hi = sc.split(s)
    other = hi if shore == 0 else lo
    pooled = 0
    for r in bits(other):
        pooled |= sc.subtail[r]
    prefix = sc.omega.tuples[sc.box.base[p]][:-1]
    star = prefix + (pooled,)
    return _toggle(sc, s, star, shore)


def _toggle(sc: ShortcutComplex, s: int, star, shore: int) -> int:
    try:
        vertex = sc.omega.index_of(star)
    except KeyError:
        raise ContractError("replacement tuple is not a vertex of the adjoint graph")
    pos = sc.pos_of.get(vertex)
    if pos is None:
        raise ContractError("replacement tuple is isolated")
    token = pos if shore == 0 else pos + sc.h
    other = s ^ (1 << token)
    if other == 0 or other not in sc.simplices:
        raise ContractError("toggle left the shortcut complex")
    return other


def _verify_involution(sc: ShortcutComplex, matching: MorseMatching, domain: set[int]) -> None:
    partner = matching.partner()
    if set(partner) != domain:
        raise ContractError("matching does not cover its domain exactly")
    for a, b in matching.pairs:
        if partner.get(complex_mirror(sc, a)) != complex_mirror(sc, b):
            raise ContractError("matching is not equivariant")


def complex_mirror(sc: ShortcutComplex, mask: int) -> int:
    return sc.box.mirror(mask)


def pipeline(g: Graph, k: int, vertex_budget=None, simplex_budget=None) -> dict:
    """Full collapse pipeline at half index k: build the shortcut complex,
    run both collapses, and certify that all three box complexes share one
    mod-2 Betti vector.  Returns a report dict; raises on any falsification.
    """
    sc = ShortcutComplex(g, k, vertex_budget, simplex_budget)

    sat_matching, sat_sub = saturation_matching(sc)
    if not is_acyclic(sat_matching):
        raise ContractError("saturation matching is cyclic")
    cert52 = collapse(sc.box, set(sc.simplices), sat_sub, sat_matching)

    phases = removal_phases(sc)
    current = set(sc.simplices)
    certs = []
    for matching, domain in phases:
        if not is_acyclic(matching):
            raise ContractError("phase matching is cyclic")
        target = current - domain
        cert = collapse(sc.box, current, target, matching)
        certs.append(cert)
        current = target
    plain = sc.plain_box_simplices()
    if current != plain:
        raise ContractError("three-phase collapse missed the unmodified box complex")

    betti_shortcut = betti_mod2(sc.simplices)
    betti_plain = betti_mod2(plain)
    betti_saturated = betti_mod2(sat_sub)
    lower = omega(g, 2 * k - 1)
    betti_lower = betti_mod2(build_box(lower.graph).simplices())

    report = {
        "base": {"n": g.n, "m": g.edge_count()},
        "half_index": k,
        "adjoint_vertices": sc.omega.graph.n,
        "simplices": len(sc.simplices),
        "collapse_steps": {
            "saturation": len(cert52.steps),
            "phases": [len(c.steps) for c in certs],
        },
        "betti": {
            "shortcut": list(betti_shortcut),
            "plain": list(betti_plain),
            "saturated_image": list(betti_saturated),
            "lower_index": list(betti_lower),
        },
        "betti_agree": betti_shortcut
        == betti_plain
        == betti_saturated
        == betti_lower,
    }
    if not report["betti_agree"]:
        raise ContractError(f"Betti vectors disagree: {report['betti']}")
    return report
