"""Star graphs of relative presentations and admissible-cycle machinery.

The star graph has vertex set x union x^-1.  Its oriented edges are the
cyclic rotations of the relators and their inverses that begin with an
x-letter: a rotation written S*g (S starting and ending in x-letters,
g a coefficient) runs from the first symbol of S to the inverse of its
last symbol and carries the label g^-1.  Rotations are indexed by
(relator, position, sign), so a proper-power relator contributes one edge
per rotation even when rotations repeat as words.

A non-empty cyclically reduced closed path is admissible when its label
product is trivial in the coefficient group.  For finite coefficient
groups the exact minimum weight of an admissible cycle is computed on the
product of the star graph with the group's regular representation.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .words import (
    RelativePresentation,
    TriState,
    Word,
    cyclically_reduce,
    invert_letter_form,
    letter_form,
    winv,
    wmul,
    word_str,
)


@dataclass(frozen=True)
class StarEdge:
    eid: int
    source: tuple  # (letter, +1 | -1)
    target: tuple
    label: Word  # lambda = g^-1 for the rotation S g
    origin: tuple  # (relator index, rotation, sign)
    partner: int  # eid of the inverse edge


@dataclass(frozen=True)
class StarGraph:
    presentation: RelativePresentation
    vertices: tuple  # all (letter, +-1), the full set x union x^-1
    edges: tuple  # StarEdge, oriented; involution pairs via .partner

    def pair_id(self, eid: int) -> int:
        return min(eid, self.edges[eid].partner)

    def pair_ids(self) -> list:
        return sorted({self.pair_id(e.eid) for e in self.edges})

    def edges_from(self, vertex) -> list:
        return [e for e in self.edges if e.source == vertex]

    def rotation_edges(self, relator_index: int) -> list:
        """The positively-oriented rotation edges of one relator, in
        rotation order; condition (I) sums over exactly these."""
        return [e for e in self.edges
                if e.origin[0] == relator_index and e.origin[2] == 1]


@dataclass(frozen=True)
class AdmissibleCycle:
    edge_ids: tuple
    label: Word
    status: str  # 'admissible' | 'possibly-admissible'
    weight: Optional[Fraction] = None


def build_star_graph(p: RelativePresentation) -> StarGraph:
    """Star graph with one oriented edge per relator rotation and sign.

    Relators are cyclically reduced syntactically, keeping their written
    shape even when a coefficient letter happens to be trivial in G (the
    graph's labels are still G-elements for admissibility purposes).  A
    relator lying inside the coefficient group is rejected: such a
    presentation is non-orientable and carries no star graph of interest.
    """
    vertices = tuple((x, s) for x in p.x_gens for s in (1, -1))
    edges = []
    for ri, rel in enumerate(p.relators):
        red = cyclically_reduce(rel, None)
        if not any(s[0] == "x" for s in red.syllables):
            raise ValueError(
                f"relator {ri} lies in the coefficient group; "
                "presentation is non-orientable")
        letters = letter_form(red)
        n = len(letters)
        inv = invert_letter_form(letters)
        base = len(edges)
        for rot in range(n):
            # rotation starting at letter `rot`: S ends with letter rot-1
            first = letters[rot]
            last = letters[(rot - 1) % n]
            edges.append({
                "source": (first[0], first[1]),
                "target": (last[0], -last[1]),
                "label": winv(last[2]),
                "origin": (ri, rot, 1),
            })
        for rot in range(n):
            first = inv[rot]
            last = inv[(rot - 1) % n]
            edges.append({
                "source": (first[0], first[1]),
                "target": (last[0], -last[1]),
                "label": winv(last[2]),
                "origin": (ri, rot, -1),
            })
        # rotation r of the relator pairs with the rotation of the inverse
        # that starts with the inverse of letter r-1 (S g <-> S^-1 g^-1);
        # in inverse-letter indexing that is position n-r mod n
        for rot in range(n):
            j = (n - rot) % n
            edges[base + rot]["partner"] = base + n + j
            edges[base + n + j]["partner"] = base + rot
    out = tuple(
        StarEdge(eid, d["source"], d["target"], d["label"], d["origin"], d["partner"])
        for eid, d in enumerate(edges))
    for e in out:
        q = out[e.partner]
        assert q.partner == e.eid and q.source == e.target and q.target == e.source
    return StarGraph(p, vertices, out)


def _canonical_cycle(edge_ids: tuple, graph: StarGraph) -> tuple:
    """Lexicographically minimal rotation, minimised against inversion."""
    n = len(edge_ids)
    best = None
    for ids in (edge_ids,
                tuple(graph.edges[e].partner for e in reversed(edge_ids))):
        for r in range(n):
            rot = ids[r:] + ids[:r]
            if best is None or rot < best:
                best = rot
    return best


def admissible_cycles(graph: StarGraph, ctx, max_len: int) -> list:
    """All admissibility-checked cyclically reduced closed paths of length
    <= max_len, up to rotation and inversion.

    Labels the oracle cannot settle are reported as possibly admissible.
    """
    if max_len < 1:
        raise ValueError("max_len must be >= 1")
    edges = graph.edges
    seen = set()
    found = []

    def extend(path, vertex, start_edge):
        if len(path) >= 1 and vertex == edges[start_edge].source:
            # wrap condition: last edge must not be the partner of the first
            if edges[path[-1]].partner != start_edge:
                key = _canonical_cycle(tuple(path), graph)
                if key not in seen:
                    seen.add(key)
                    label = ()
                    for eid in path:
                        label = wmul(label, edges[eid].label)
                    triv = ctx.is_trivial_word(label)
                    if triv == TriState.YES:
                        found.append(AdmissibleCycle(key, label, "admissible"))
                    elif triv == TriState.UNKNOWN:
                        found.append(AdmissibleCycle(key, label, "possibly-admissible"))
        if len(path) == max_len:
            return
        last = path[-1]
        for e in edges:
            if e.source == vertex and e.eid != edges[last].partner:
                path.append(e.eid)
                extend(path, e.target, start_edge)
                path.pop()

    for e in edges:
        # loops of length 1 close immediately; longer paths continue
        extend([e.eid], e.target, e.eid)
    found.sort(key=lambda c: (len(c.edge_ids), c.edge_ids))
    return found


class NegativeCycleError(ValueError):
    """A cyclically reduced closed cycle of negative weight exists, so the
    minimum admissible weight is unbounded below."""


def min_admissible_cycle_weight(graph: StarGraph, theta: dict, ctx,
                                max_len: Optional[int] = None):
    """Exact minimum weight over all admissible cycles (finite groups).

    `theta` maps edge-pair ids to Fractions.  With `max_len` the minimum is
    taken only over cycles of at most that many edges (used to cross-check
    against brute-force enumeration).  Returns (weight, cycle edge ids) or
    None when no admissible cycle exists.  Raises NegativeCycleError when
    some cyclically reduced closed cycle has negative weight, since then
    admissible weights are unbounded below.
    """
    table = ctx.regular_table()
    if table is None:
        raise ValueError("coefficient group is not enumerable within budget; "
                         "fall back to bounded admissible_cycles")
    n_elems = table.n
    edges = graph.edges

    def w(e):
        return theta[min(e.eid, e.partner)]

    # negative-cycle detection over all cyclically reduced cycles (labels
    # ignored): Bellman-Ford on last-edge states with a virtual source
    verts = {}
    for e in edges:
        verts.setdefault(e.source, []).append(e)
    dist = {e.eid: Fraction(0) for e in edges}
    for _ in range(len(edges) + 1):
        changed = False
        for e in edges:
            de = dist[e.eid]
            for f in verts.get(e.target, ()):
                if f.eid == e.partner:
                    continue
                nd = de + w(f)
                if nd < dist[f.eid]:
                    dist[f.eid] = nd
                    changed = True
        if not changed:
            break
    else:
        raise NegativeCycleError("negative cyclically reduced cycle detected")

    best = None
    best_cycle = None
    # cycles are rooted at each start edge with coset 1
    for start in edges:
        # shortest-walk relaxation over (vertex, coset, last-edge) states
        # from the start edge's head; wrap rules: the first step out of the
        # initial state excludes the start's partner automatically, the
        # closing step must not be the start's partner either.  The length
        # cap, when given, restricts to cycles of at most max_len edges.
        c0 = table.trace(1, start.label)
        init = (start.target, c0, start.eid)
        dist2 = {init: Fraction(0)}
        pred = {init: None}
        frontier = [init]
        steps = 0
        limit = (max_len - 1) if max_len is not None else None
        while frontier:
            if limit is not None and steps >= limit:
                break
            steps += 1
            new_frontier = []
            for st in frontier:
                v, c, last = st
                d = dist2[st]
                for f in verts.get(v, ()):
                    if f.eid == edges[last].partner:
                        continue
                    c2 = table.trace(c, f.label)
                    st2 = (f.target, c2, f.eid)
                    nd = d + w(f)
                    if st2 not in dist2 or nd < dist2[st2]:
                        dist2[st2] = nd
                        pred[st2] = st
                        new_frontier.append(st2)
            frontier = new_frontier
        # close the cycle at the start edge's tail with trivial total label;
        # the initial state alone covers single-edge loop cycles
        for st, d in dist2.items():
            v, c, last = st
            if v == start.source and c == 1 and last != start.partner:
                total = d + w(start)
                if best is None or total < best:
                    ids = []
                    cur = st
                    while cur is not None:
                        ids.append(cur[2])
                        cur = pred[cur]
                        if len(ids) > len(dist2) + 1:
                            raise RuntimeError("predecessor chain loops")
                    ids.reverse()
                    best = total
                    best_cycle = tuple(ids)
    if best is None:
        return None
    return best, _canonical_cycle(best_cycle, graph)


def to_dot(graph: StarGraph, theta: Optional[dict] = None) -> str:
    """DOT export; one undirected edge per involution pair."""

    def vname(v):
        return v[0] if v[1] == 1 else f"{v[0]}_bar"

    lines = ["graph stargraph {"]
    for v in graph.vertices:
        lines.append(f'  {vname(v)};')
    for e in graph.edges:
        if e.eid > e.partner:
            continue
        attrs = [f'label="{word_str(e.label)}"']
        if theta is not None:
            attrs.append(f'weight="{theta[e.eid]}"')
        lines.append(
            f'  {vname(e.source)} -- {vname(e.target)} [{", ".join(attrs)}];')
    lines.append("}")
    return "\n".join(lines) + "\n"
