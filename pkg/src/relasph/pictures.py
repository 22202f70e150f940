"""Pictures over relative presentations: validation, dipoles, curvature.

A picture is stored as a combinatorial map, not a geometric embedding:
each disc carries its clockwise cyclic boundary, alternating arc-ends and
corners; arcs carry an x-label and a normal orientation; arcs may also
end on the boundary circle, whose cyclic order of arc-ends is the `outer`
list.  Planarity is certified by Euler's formula on the traced map, so a
rotation system of higher genus is rejected rather than silently accepted.

Reading conventions: travelling clockwise around a disc, an arc-end is
read as the arc's label to the power +1 or -1; end 0 of an arc reads the
arc's `orient`, end 1 reads its negative, which encodes the fact that the
two ends of an arc always cross the normal orientation oppositely.  The
`outer` list is the rotation of a virtual disc capping the boundary
circle; like every rotation it is clockwise as seen from its own disc,
which is the reverse of the order in which the ends appear along the
boundary of a conventional drawing.

Region labels are products of corner labels; triviality of a label does
not depend on the traversal direction, so faces are reported in trace
order with triviality decided by the coefficient-group oracle.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .words import (
    TriState,
    Word,
    cyclically_reduce,
    free_reduce,
    invert_letter_form,
    letter_form,
    letters_equal,
    parse_presentation,
    rotate_letters,
    wmul,
    word_str,
)

ARC = "arc"
CORNER = "corner"


@dataclass(frozen=True)
class Arc:
    label: str
    orient: int  # +1 or -1

    def end_sign(self, end: int) -> int:
        return self.orient if end == 0 else -self.orient


@dataclass(frozen=True)
class Disc:
    boundary: tuple  # (ARC, arc_id, end) and (CORNER, word) items, clockwise


@dataclass(frozen=True)
class Picture:
    discs: tuple
    arcs: tuple
    outer: tuple = ()  # (ARC, arc_id, end) items on the boundary circle

    @property
    def spherical(self) -> bool:
        return len(self.discs) >= 1 and not self.outer


@dataclass(frozen=True)
class Region:
    index: int
    items: tuple  # alternating (dart, corners) groups; dart = (arc_id, dir)
    corners: tuple  # ((disc, position, word), ...) in trace order
    degree: int  # number of arcs in the boundary
    touches_boundary: bool
    label: Word
    label_trivial: TriState


@dataclass(frozen=True)
class Dipole:
    arc: int
    region: int
    corner_a: tuple  # (disc, position, word)
    corner_b: tuple


OUTER_DISC = -1


def _end_locations(pic: Picture) -> dict:
    """(arc, end) -> (disc index or OUTER_DISC, boundary position)."""
    locs = {}
    for di, disc in enumerate(pic.discs):
        for pos, item in enumerate(disc.boundary):
            if item[0] == ARC:
                key = (item[1], item[2])
                if key in locs:
                    raise ValueError(f"arc end {key} attached twice")
                locs[key] = (di, pos)
    for pos, item in enumerate(pic.outer):
        key = (item[1], item[2])
        if key in locs:
            raise ValueError(f"arc end {key} attached twice")
        locs[key] = (OUTER_DISC, pos)
    return locs


def _check_structure(pic: Picture) -> dict:
    locs = _end_locations(pic)
    for ai in range(len(pic.arcs)):
        for end in (0, 1):
            if (ai, end) not in locs:
                raise ValueError(f"arc {ai} end {end} is unattached")
    for di, disc in enumerate(pic.discs):
        b = disc.boundary
        n_arcs = sum(1 for it in b if it[0] == ARC)
        n_corner = len(b) - n_arcs
        if n_arcs == 0:
            raise ValueError(f"disc {di} has no arc ends")
        if n_arcs != n_corner:
            raise ValueError(f"disc {di} does not alternate arcs and corners")
        for pos, item in enumerate(b):
            nxt = b[(pos + 1) % len(b)]
            if item[0] == nxt[0]:
                raise ValueError(f"disc {di} does not alternate arcs and corners")
    for item in pic.outer:
        if item[0] != ARC:
            raise ValueError("outer boundary may only carry arc ends")
    return locs


def _boundary_rotation(pic: Picture, disc: int) -> tuple:
    return pic.outer if disc == OUTER_DISC else pic.discs[disc].boundary


def trace_regions(pic: Picture) -> list:
    """Faces of the map; corners are collected walking clockwise from the
    arrival end to the departure end on each disc."""
    if not pic.discs and not pic.arcs:
        return []
    locs = _check_structure(pic)
    darts = [(ai, d) for ai in range(len(pic.arcs)) for d in (0, 1)]
    seen = set()
    regions = []
    for start in darts:
        if start in seen:
            continue
        items = []
        corners = []
        touches = False
        dart = start
        while True:
            seen.add(dart)
            ai, dr = dart
            head_end = 1 if dr == 0 else 0
            disc, pos = locs[(ai, head_end)]
            group = []
            if disc == OUTER_DISC:
                touches = True
            rot = _boundary_rotation(pic, disc)
            j = pos
            while True:
                j = (j + 1) % len(rot)
                item = rot[j]
                if item[0] == ARC:
                    break
                group.append((disc, j, item[1]))
            corners.extend(group)
            items.append((dart, tuple(group)))
            out_arc, out_end = item[1], item[2]
            dart = (out_arc, 0 if out_end == 0 else 1)
            if dart == start:
                break
        ri = len(regions)
        label = ()
        for _, _, wd in corners:
            label = wmul(label, wd)
        regions.append(Region(ri, tuple(items), tuple(corners), len(items),
                              touches, label, TriState.UNKNOWN))
    return regions


def euler_check(pic: Picture, regions: list) -> bool:
    v = len(pic.discs) + (1 if pic.outer else 0)
    e = len(pic.arcs)
    f = len(regions)
    return v - e + f == 2


def _connected(pic: Picture) -> bool:
    if not pic.discs:
        return True
    locs = _end_locations(pic)
    adj = {i: set() for i in range(len(pic.discs))}
    if pic.outer:
        adj[OUTER_DISC] = set()
    for ai in range(len(pic.arcs)):
        d0 = locs[(ai, 0)][0]
        d1 = locs[(ai, 1)][0]
        adj[d0].add(d1)
        adj[d1].add(d0)
    seen = {0}
    stack = [0]
    while stack:
        for n in adj[stack.pop()]:
            if n not in seen:
                seen.add(n)
                stack.append(n)
    return len(seen) == len(adj)


def disc_letter_form(pic: Picture, disc_index: int) -> list:
    """Clockwise reading of a disc as letter form, starting at its first
    arc end: [(letter, sign, following corner word), ...]."""
    b = pic.discs[disc_index].boundary
    start = next(i for i, it in enumerate(b) if it[0] == ARC)
    letters = []
    n = len(b)
    for off in range(0, n, 2):
        item = b[(start + off) % n]
        corner = b[(start + off + 1) % n]
        arc = pic.arcs[item[1]]
        letters.append((arc.label, arc.end_sign(item[2]), corner[1]))
    return letters


@dataclass(frozen=True)
class DiscCheck:
    disc: int
    ok: TriState
    detail: str = ""


@dataclass(frozen=True)
class ValidationReport:
    ok: bool
    problems: tuple
    discs: tuple  # DiscCheck per disc
    regions: tuple  # Region with label_trivial filled in
    connected: bool
    spherical: bool
    strictly_spherical: TriState
    distinguished_region: Optional[int]

    def lines(self) -> list:
        out = []
        if self.problems:
            out.extend(f"problem: {p}" for p in self.problems)
        out.append(f"discs: {len(self.discs)}, regions: {len(self.regions)}, "
                   f"connected: {self.connected}, spherical: {self.spherical}")
        for d in self.discs:
            if d.ok != TriState.YES:
                out.append(f"disc {d.disc}: {d.ok.value} {d.detail}")
        for r in self.regions:
            out.append(f"region {r.index}: degree {r.degree}, "
                       f"label {word_str(r.label)} trivial: {r.label_trivial.value}"
                       + (" (boundary)" if r.touches_boundary else ""))
        out.append(f"valid: {'yes' if self.ok else 'NO'}; strictly spherical: "
                   f"{self.strictly_spherical.value}")
        return out


def _relator_letterforms(p, ctx) -> list:
    # relators keep their written shape: reduction here is syntactic only
    # (a coefficient letter that happens to be trivial in G still counts),
    # while coefficient comparisons against corners go through the oracle
    forms = []
    for rel in p.relators:
        red = cyclically_reduce(rel, None)
        lf = letter_form(red)
        forms.append(lf)
        forms.append(invert_letter_form(lf))
    return forms


def _matches_some_rotation(lf, forms, ctx) -> TriState:
    saw_unknown = False
    for form in forms:
        if len(form) != len(lf):
            continue
        for r in range(len(form)):
            eq = letters_equal(lf, rotate_letters(form, r), ctx)
            if eq == TriState.YES:
                return TriState.YES
            if eq == TriState.UNKNOWN:
                saw_unknown = True
    return TriState.UNKNOWN if saw_unknown else TriState.NO


def validate_picture(pic: Picture, p, ctx) -> ValidationReport:
    """Check a labelled picture against a relative presentation.

    Verifies the combinatorial structure, planarity via Euler's formula,
    that every disc reads a rotation of a relator or an inverse, and that
    region labels away from the boundary are trivial in G.  For spherical
    pictures at most one region may carry a non-trivial label; that region
    is the distinguished one and the picture is strictly spherical when
    even it is trivial.
    """
    problems = []
    try:
        regions = trace_regions(pic)
    except ValueError as err:
        return ValidationReport(False, (str(err),), (), (), False, False,
                                TriState.NO, None)
    if not _connected(pic):
        problems.append("picture is not connected")
    if (pic.discs or pic.arcs) and not euler_check(pic, regions):
        problems.append("rotation system is not planar (Euler check failed)")
    forms = _relator_letterforms(p, ctx)
    disc_checks = []
    for di in range(len(pic.discs)):
        lf = disc_letter_form(pic, di)
        ok = _matches_some_rotation(lf, forms, ctx)
        detail = "" if ok == TriState.YES else (
            "corner word matches no relator rotation" if ok == TriState.NO
            else "corner word match undecided")
        disc_checks.append(DiscCheck(di, ok, detail))
        if ok == TriState.NO:
            problems.append(f"disc {di}: corner word matches no relator rotation")
    checked_regions = []
    nontrivial = []
    undecided_regions = []
    for r in regions:
        triv = ctx.is_trivial_word(r.label)
        checked_regions.append(Region(r.index, r.items, r.corners, r.degree,
                                      r.touches_boundary, r.label, triv))
        if not r.touches_boundary or pic.spherical:
            if triv == TriState.NO:
                nontrivial.append(r.index)
            elif triv == TriState.UNKNOWN:
                undecided_regions.append(r.index)
    spherical = pic.spherical
    distinguished = None
    strictly = TriState.NO
    if spherical:
        if len(nontrivial) > 1:
            problems.append(
                f"regions {nontrivial} all have non-trivial labels; at most "
                "one (the distinguished region) is allowed")
        elif len(nontrivial) == 1:
            distinguished = nontrivial[0]
            strictly = TriState.NO
        else:
            distinguished = checked_regions[0].index if checked_regions else None
            strictly = TriState.UNKNOWN if undecided_regions else TriState.YES
    else:
        for ri in nontrivial:
            problems.append(f"inner region {ri} has non-trivial label")
    ok = not problems and all(d.ok == TriState.YES for d in disc_checks)
    return ValidationReport(ok, tuple(problems), tuple(disc_checks),
                            tuple(checked_regions), _connected(pic),
                            spherical, strictly, distinguished)


def _corner_word_at(pic: Picture, disc: int, pos: int) -> list:
    """W(corner): the disc reading that starts just after the corner and
    ends with the corner's own label, as letter form."""
    b = pic.discs[disc].boundary
    n = len(b)
    assert b[pos][0] == CORNER
    letters = []
    j = pos
    for _ in range(n // 2):
        j = (j + 1) % n
        item = b[j]
        assert item[0] == ARC
        arc = pic.arcs[item[1]]
        j = (j + 1) % n
        corner = b[j]
        letters.append((arc.label, arc.end_sign(item[2]), corner[1]))
    assert j == pos
    return letters


def find_dipole(pic: Picture, p, ctx) -> Optional[Dipole]:
    """First dipole in deterministic region-trace order, or None.

    A dipole is an arc between two distinct discs whose flanking corners
    within one region read mutually inverse disc words.
    """
    locs = _end_locations(pic)
    regions = trace_regions(pic)
    for region in regions:
        groups = region.items
        k = len(groups)
        for i in range(k):
            dart, corners_after = groups[i]
            corners_before = groups[(i - 1) % k][1]
            if not corners_before or not corners_after:
                continue
            ai, dr = dart
            tail_disc = locs[(ai, 0 if dr == 0 else 1)][0]
            head_disc = locs[(ai, 1 if dr == 0 else 0)][0]
            if tail_disc == OUTER_DISC or head_disc == OUTER_DISC:
                continue
            if tail_disc == head_disc:
                continue
            ka = corners_before[-1]
            kb = corners_after[0]
            wa = _corner_word_at(pic, ka[0], ka[1])
            wb = _corner_word_at(pic, kb[0], kb[1])
            if letters_equal(invert_letter_form(wa), wb, ctx) == TriState.YES:
                return Dipole(ai, region.index, ka, kb)
    return None


def cancel_dipole(pic: Picture, d: Dipole) -> Picture:
    """Remove the dipole's two discs and connecting arc, splicing the freed
    arc ends in mirrored order.  Splices that close up entirely become
    floating circles and are dropped.  Disc count decreases by exactly 2."""
    locs = _end_locations(pic)
    disc_a = d.corner_a[0]
    disc_b = d.corner_b[0]
    assert disc_a != disc_b

    def ends_after_connector(disc):
        b = pic.discs[disc].boundary
        n = len(b)
        start = next(pos for pos, it in enumerate(b)
                     if it[0] == ARC and it[1] == d.arc)
        out = []
        j = start
        for _ in range(n // 2 - 1):
            j = (j + 2) % n
            out.append((b[j][1], b[j][2]))
        return out

    ea = ends_after_connector(disc_a)
    eb = ends_after_connector(disc_b)
    assert len(ea) == len(eb)
    splice = {}
    for i, end_a in enumerate(ea):
        end_b = eb[len(eb) - 1 - i]
        splice[end_a] = end_b
        splice[end_b] = end_a
        sa = pic.arcs[end_a[0]].end_sign(end_a[1])
        sb = pic.arcs[end_b[0]].end_sign(end_b[1])
        assert pic.arcs[end_a[0]].label == pic.arcs[end_b[0]].label
        assert sa == -sb, "spliced ends must cross the normal oppositely"

    # walk chains of spliced segments; chains with two free ports become
    # arcs of the new picture, fully spliced chains become dropped circles
    removed_arcs = {d.arc}
    port_of = {}
    new_arcs = []
    seen_arc = set()
    for ai in range(len(pic.arcs)):
        if ai in removed_arcs or ai in seen_arc:
            continue
        involved = (ai, 0) in splice or (ai, 1) in splice
        if not involved:
            seen_arc.add(ai)
            nid = len(new_arcs)
            new_arcs.append(pic.arcs[ai])
            port_of[(ai, 0)] = (nid, 0)
            port_of[(ai, 1)] = (nid, 1)
            continue
        # find a free port of this chain, if any
        chain_ends = []
        visited = set()
        stack = [ai]
        while stack:
            a = stack.pop()
            if a in visited:
                continue
            visited.add(a)
            for e in (0, 1):
                if (a, e) in splice:
                    stack.append(splice[(a, e)][0])
                else:
                    chain_ends.append((a, e))
        seen_arc.update(visited)
        if not chain_ends:
            continue  # closed circle: dropped
        assert len(chain_ends) == 2
        p0, p1 = chain_ends
        label = pic.arcs[p0[0]].label
        s0 = pic.arcs[p0[0]].end_sign(p0[1])
        nid = len(new_arcs)
        new_arcs.append(Arc(label, s0))
        port_of[p0] = (nid, 0)
        port_of[p1] = (nid, 1)
        s1 = pic.arcs[p1[0]].end_sign(p1[1])
        assert s1 == -s0

    def remap_boundary(items):
        out = []
        for it in items:
            if it[0] == ARC:
                key = (it[1], it[2])
                if key not in port_of:
                    raise AssertionError("dangling arc end after splice")
                nid, ne = port_of[key]
                out.append((ARC, nid, ne))
            else:
                out.append(it)
        return tuple(out)

    new_discs = []
    for di, disc in enumerate(pic.discs):
        if di in (disc_a, disc_b):
            continue
        new_discs.append(Disc(remap_boundary(disc.boundary)))
    new_outer = remap_boundary(pic.outer)
    return Picture(tuple(new_discs), tuple(new_arcs), new_outer)


# ---------------------------------------------------------------------------
# angles and curvature
# ---------------------------------------------------------------------------

class AngleFunction:
    """Corner angles as exact multiples of pi, summing to 2*pi per disc."""

    def __init__(self, angles: dict):
        self.angles = {k: Fraction(v) for k, v in angles.items()}

    def at(self, disc: int, pos: int) -> Fraction:
        return self.angles[(disc, pos)]

    def validate(self, pic: Picture) -> None:
        for di, disc in enumerate(pic.discs):
            total = Fraction(0)
            for pos, item in enumerate(disc.boundary):
                if item[0] == CORNER:
                    total += self.angles[(di, pos)]
            if total != 2:
                raise ValueError(
                    f"angles at disc {di} sum to {total} pi, need 2 pi")


def standard_angles(pic: Picture) -> AngleFunction:
    """Corners in degree-2 regions get 0; each disc's remaining corners
    share 2*pi equally."""
    regions = trace_regions(pic)
    zero = set()
    for r in regions:
        if r.degree == 2 and not r.touches_boundary:
            for disc, pos, _ in r.corners:
                zero.add((disc, pos))
    angles = {}
    for di, disc in enumerate(pic.discs):
        corner_pos = [pos for pos, it in enumerate(disc.boundary)
                      if it[0] == CORNER]
        live = [pos for pos in corner_pos if (di, pos) not in zero]
        if not live:
            raise ValueError(
                f"disc {di}: every corner lies in a degree-2 region; no "
                "angle assignment can sum to 2 pi")
        share = Fraction(2, len(live))
        for pos in corner_pos:
            angles[(di, pos)] = share if (di, pos) not in zero else Fraction(0)
    return AngleFunction(angles)


def curvature(pic: Picture, angles: AngleFunction):
    """Region curvatures c = 2*pi - sum(pi - angle) as multiples of pi.

    Requires a connected spherical picture (the boundary circle already
    contracted away); the total over all regions is exactly 4*pi.
    """
    if not pic.spherical:
        raise ValueError("curvature requires a spherical picture")
    if not _connected(pic):
        raise ValueError("curvature requires a connected picture")
    angles.validate(pic)
    regions = trace_regions(pic)
    per_region = {}
    total = Fraction(0)
    for r in regions:
        c = Fraction(2)
        for disc, pos, _ in r.corners:
            c -= 1 - angles.at(disc, pos)
        per_region[r.index] = c
        total += c
    return per_region, total


def curvature_formula(degrees) -> Fraction:
    """c(d_1, ..., d_k) in multiples of pi for a k-gonal region whose
    vertices have the given effective degrees under standard angles."""
    k = len(degrees)
    return Fraction(2 - k) + sum(Fraction(2, d) for d in degrees)


@dataclass(frozen=True)
class TransferRule:
    source: int
    sink: int
    amount: Fraction


def apply_distribution(per_region: dict, rules) -> dict:
    """Bookkeeping for curvature distribution schemes: move the stated
    amounts and return the adjusted region curvatures.  The total is
    conserved, so a scheme can only redistribute, never destroy, the 4*pi."""
    out = dict(per_region)
    for rule in rules:
        out[rule.source] -= Fraction(rule.amount)
        out[rule.sink] += Fraction(rule.amount)
    return out


# ---------------------------------------------------------------------------
# JSON interchange
# ---------------------------------------------------------------------------

def picture_to_json(pic: Picture, presentation_text: Optional[str] = None) -> str:
    discs = []
    for disc in pic.discs:
        b = []
        for item in disc.boundary:
            if item[0] == ARC:
                b.append({"arc": item[1], "end": item[2]})
            else:
                b.append({"corner": word_str(item[1])})
        discs.append({"boundary": b})
    data = {
        "discs": discs,
        "arcs": [{"label": a.label, "orient": a.orient} for a in pic.arcs],
        "outer": [{"arc": it[1], "end": it[2]} for it in pic.outer],
    }
    if presentation_text is not None:
        data["presentation"] = presentation_text
    return json.dumps(data, indent=2, sort_keys=True) + "\n"


def _parse_corner_word(text: str) -> Word:
    text = text.strip()
    if text in ("", "1"):
        return ()
    syls = []
    for token in text.split():
        if "^" in token:
            name, exp = token.split("^", 1)
            syls.append((name, int(exp)))
        else:
            syls.append((token, 1))
    return free_reduce(syls)


def picture_from_json(text: str):
    """Returns (Picture, presentation or None)."""
    data = json.loads(text)
    arcs = tuple(Arc(a["label"], a["orient"]) for a in data["arcs"])
    discs = []
    for d in data["discs"]:
        items = []
        for item in d["boundary"]:
            if "arc" in item:
                items.append((ARC, item["arc"], item["end"]))
            else:
                items.append((CORNER, _parse_corner_word(item["corner"])))
        discs.append(Disc(tuple(items)))
    outer = tuple((ARC, it["arc"], it["end"]) for it in data.get("outer", ()))
    pres = None
    if "presentation" in data:
        pres = parse_presentation(data["presentation"])
    return Picture(tuple(discs), arcs, outer), pres
