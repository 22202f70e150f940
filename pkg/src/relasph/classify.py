"""Classifier for one-relator relative presentations <G, x | x^l g x^k h>.

Decides diagrammatic reducibility and asphericity (or reports the case as
open) for relators of free product length four, by combining:

  * relator sanity rules (proper powers, orientability),
  * the equal/opposite exponent rules,
  * the torsion-free coefficient shortcut,
  * the named coincidence cases Z, M, J4, J6, K5, K6+, K6-, L6 and the
    Platonic case P,
  * the per-exponent-family classification theorems with their
    exceptional families, and
  * hard finite-order and torsion facts for the resolved table entries,

in a fixed precedence order.  Every verdict names the rule that produced
it.  Conditions an oracle cannot settle within budget surface as an open
verdict naming the blocking query, never as a guess, and raising the
budget can only resolve open verdicts, not flip decided ones.

In the region l != +-k the relator is orientable and not a proper power,
so diagrammatic reducibility implies asphericity; contrapositively every
non-aspherical verdict there forces dr=no, and positive dr verdicts come
only from theorems that actually prove reducibility.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .coset import (
    DEFAULT_CAP,
    LiftedPresentation,
    context_for,
    enumerate_cosets,
    lift,
    order_via_cyclic_subgroup,
)
from .words import (
    C,
    CoefficientGroup,
    FreeProductWord,
    OrderResult,
    RelativePresentation,
    TriState,
    Word,
    X,
    csyl,
    cyclically_reduce,
    fpw,
    mu,
    winv,
    wmul,
    word_str,
    xsyl,
)

YES, NO, UNKNOWN = TriState.YES, TriState.NO, TriState.UNKNOWN

CASE_NAMES = ("P", "Z", "M", "J4", "J6", "K5", "K6+", "K6-", "L6")
EXCEPTIONAL_NAMES = ("BBP-E4", "BBP-E5", "HM-E", "AEJ-E", "E-E1", "E-E2",
                     "E-E3", "AAE-E", "AAE-E4", "D-E1", "D-E2", "D-E4")


def tri_and(*ts) -> TriState:
    if any(t == NO for t in ts):
        return NO
    if any(t == UNKNOWN for t in ts):
        return UNKNOWN
    return YES


def tri_or(*ts) -> TriState:
    if any(t == YES for t in ts):
        return YES
    if any(t == UNKNOWN for t in ts):
        return UNKNOWN
    return NO


def tri_not(t: TriState) -> TriState:
    if t == YES:
        return NO
    if t == NO:
        return YES
    return UNKNOWN


def tri_bool(b: bool) -> TriState:
    return YES if b else NO


def order_is(o: OrderResult, n: int) -> TriState:
    if o.is_finite:
        return tri_bool(o.value == n)
    if o.is_infinite:
        return NO
    return UNKNOWN


def order_at_least(o: OrderResult, n: int) -> TriState:
    if o.is_finite:
        return tri_bool(o.value >= n)
    if o.is_infinite:
        return YES
    return UNKNOWN


def order_finite(o: OrderResult) -> TriState:
    if o.is_finite:
        return YES
    if o.is_infinite:
        return NO
    return UNKNOWN


def order_in_open_range(o: OrderResult, low: int) -> TriState:
    """low < order < infinity"""
    if o.is_finite:
        return tri_bool(o.value > low)
    return NO if o.is_infinite else UNKNOWN


# ---------------------------------------------------------------------------
# instances
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class LengthFourInstance:
    """<G, x | x^l g x^k h> with g, h nontrivial, l > 0, k != 0.

    `normalized()` rewrites to an equivalent instance with l >= |k| using
    the rotation (l,k,g,h) -> (k,l,h,g) for k > 0 and the inversion
    substitution (l,k,g,h) -> (-k,-l,h,g) for k < 0; both preserve the
    defined group and the asphericity/reducibility status.
    """

    G: CoefficientGroup
    g: Word
    h: Word
    l: int
    k: int
    x: str = "x"

    def __post_init__(self):
        if self.l <= 0 or self.k == 0:
            raise ValueError("need l > 0 and k != 0")
        object.__setattr__(self, "g", tuple(self.g))
        object.__setattr__(self, "h", tuple(self.h))

    def relator(self) -> FreeProductWord:
        return fpw(xsyl(self.x, self.l), csyl(self.g),
                   xsyl(self.x, self.k), csyl(self.h))

    def presentation(self) -> RelativePresentation:
        return RelativePresentation(self.G, (self.x,), (self.relator(),))

    def lifted(self) -> LiftedPresentation:
        return lift(self.presentation())

    def normalized(self) -> "LengthFourInstance":
        l, k, g, h = self.l, self.k, self.g, self.h
        if k > 0 and k > l:
            l, k, g, h = k, l, h, g
        elif k < 0 and -k > l:
            l, k, g, h = -k, -l, h, g
        if (l, k, g, h) == (self.l, self.k, self.g, self.h):
            return self
        return LengthFourInstance(self.G, g, h, l, k, self.x)

    def describe(self) -> str:
        return (f"<G, x | x^{self.l} {word_str(self.g)} "
                f"x^{self.k} {word_str(self.h)}>")


def instance_from_presentation(p: RelativePresentation,
                               cap: int = DEFAULT_CAP) -> LengthFourInstance:
    """Extract the length-four shape from a one-relator presentation."""
    if len(p.relators) != 1:
        raise ValueError("classifier needs exactly one relator")
    if len(p.x_gens) != 1:
        raise ValueError("classifier needs exactly one x-generator")
    ctx = context_for(p.coeff, cap)
    red = cyclically_reduce(p.relators[0], ctx)
    syls = red.syllables
    if len(syls) != 4 or [s[0] for s in syls] != [X, C, X, C]:
        raise ValueError(
            f"relator {red} does not have free product length four "
            "(x-power, coefficient, x-power, coefficient)")
    l, g, k, h = syls[0][2], syls[1][1], syls[2][2], syls[3][1]
    if l < 0:
        l, k = -l, -k  # substitute x -> x^-1
    if l <= 0 or k == 0:
        raise ValueError("degenerate exponents after reduction")
    return LengthFourInstance(p.coeff, g, h, l, k, syls[0][1])


# ---------------------------------------------------------------------------
# case flags
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CaseFlags:
    values: dict  # name -> TriState, over CASE_NAMES + EXCEPTIONAL_NAMES
    og: OrderResult
    oh: OrderResult
    ogh: OrderResult  # |g h^-1|
    mu: MuValue
    blockers: tuple

    def __getitem__(self, name: str) -> TriState:
        return self.values[name]

    def holding(self) -> tuple:
        return tuple(n for n in (*CASE_NAMES, *EXCEPTIONAL_NAMES)
                     if self.values[n] == YES)


def case_flags(inst: LengthFourInstance, cap: int = DEFAULT_CAP) -> CaseFlags:
    """Evaluate every named case and exceptional family for the instance.

    Flags may overlap, and each is tri-state: an order or word-problem
    query that exhausts its budget leaves the flag undecided rather than
    guessed.
    """
    inst = inst.normalized()
    ctx = context_for(inst.G, cap)
    A, B = inst.g, inst.h
    l, k = inst.l, inst.k

    og = ctx.element_order(A)
    oh = ctx.element_order(B)
    m = mu(ctx, A, B)
    ogh = m.orders[2]

    eq = ctx.equal(A, B)
    eq_inv = ctx.equal(A, winv(B))
    A_B2 = ctx.equal(A, wmul(B, B))
    B_A2 = ctx.equal(B, wmul(A, A))
    A_Bm2 = ctx.equal(A, winv(wmul(B, B)))
    B_Am2 = ctx.equal(B, winv(wmul(A, A)))
    A_B3 = ctx.equal(A, wmul(B, B, B))
    B_A3 = ctx.equal(B, wmul(A, A, A))
    A_Bm3 = ctx.equal(A, winv(wmul(B, B, B)))
    B_Am3 = ctx.equal(B, winv(wmul(A, A, A)))
    A_B4 = ctx.equal(A, wmul(B, B, B, B))
    B_A4 = ctx.equal(B, wmul(A, A, A, A))
    commute = ctx.equal(wmul(A, B), wmul(B, A))

    # (P): mu > 1 and g != h; a lower bound above 1 already decides it
    if m.value > 1 and not m.lower_bound_only:
        p_mu = YES
    elif m.value > 1 and m.lower_bound_only:
        p_mu = YES  # true mu >= computed value > 1
    elif not m.lower_bound_only:
        p_mu = NO
    else:
        p_mu = UNKNOWN
    flag_P = tri_and(p_mu, tri_not(eq))

    def orders_are(na: int, nb: int) -> TriState:
        return tri_or(tri_and(order_is(og, na), order_is(oh, nb)),
                      tri_and(order_is(og, nb), order_is(oh, na)))

    values = {
        "P": flag_P,
        "Z": tri_and(eq, order_finite(og)),
        "M": tri_and(eq_inv, order_finite(og)),
        "J4": tri_or(tri_and(A_B2, order_is(oh, 4)),
                     tri_and(B_A2, order_is(og, 4))),
        "J6": tri_and(orders_are(2, 3), commute),
        "K5": tri_or(tri_and(A_B2, order_is(oh, 5)),
                     tri_and(B_A2, order_is(og, 5))),
        "K6+": tri_or(tri_and(A_B2, order_is(oh, 6)),
                      tri_and(B_A2, order_is(og, 6))),
        "K6-": tri_or(tri_and(A_Bm2, order_is(oh, 6)),
                      tri_and(B_Am2, order_is(og, 6))),
        "L6": tri_or(tri_and(A_B3, order_is(oh, 6)),
                     tri_and(B_A3, order_is(og, 6))),
    }

    def subgroup_is_2_x(n2: int) -> TriState:
        # gp{g,h} isomorphic to Z2 + Z_n2 for n2 in (4, 5): commuting
        # generators of the right orders with subgroup order 2*n2
        want = orders_are(2, n2)
        pre = tri_and(want, commute)
        if pre == NO:
            return NO
        sub = ctx.subgroup_order([A, B])
        return tri_and(pre, order_is(sub, 2 * n2))

    # AAE-E: gp{g,h} = Z2 + Z4 with no constraint tying g,h to each other;
    # an abelian order-8 group on two generators of exponent <= 4 is Z2+Z4
    def aae_e() -> TriState:
        small = tri_and(
            commute,
            tri_or(order_is(og, 2), order_is(og, 4)),
            tri_or(order_is(oh, 2), order_is(oh, 4)))
        if small == NO:
            return NO
        sub = ctx.subgroup_order([A, B])
        return tri_and(small, order_is(sub, 8))

    values.update({
        "BBP-E4": subgroup_is_2_x(4),
        "BBP-E5": subgroup_is_2_x(5),
        "HM-E": tri_or(tri_and(A_B2, order_in_open_range(oh, 6)),
                       tri_and(B_A2, order_in_open_range(og, 6))),
        "AEJ-E": tri_or(
            tri_and(A_B2, order_in_open_range(oh, 6), tri_bool(l < k < 2 * l)),
            tri_and(B_A2, order_in_open_range(og, 6), tri_bool(k < l < 2 * k)),
            tri_and(B_A2, order_in_open_range(og, 6), tri_bool(l < k < 2 * l)),
            tri_and(A_B2, order_in_open_range(oh, 6), tri_bool(k < l < 2 * k))),
        "E-E1": tri_or(tri_and(order_is(og, 9), order_is(oh, 3), B_A3),
                       tri_and(order_is(oh, 9), order_is(og, 3), A_B3)),
        "E-E2": tri_or(tri_and(order_is(og, 9), order_is(oh, 3), B_Am3),
                       tri_and(order_is(oh, 9), order_is(og, 3), A_Bm3)),
        "E-E3": tri_or(tri_and(order_is(og, 8), order_is(oh, 4), B_A2),
                       tri_and(order_is(oh, 8), order_is(og, 4), A_B2)),
        "AAE-E": aae_e(),
        "AAE-E4": tri_or(tri_and(order_is(oh, 8), A_B4),
                         tri_and(order_is(og, 8), B_A4)),
        "D-E1": tri_or(tri_and(A_B2, order_in_open_range(oh, 3)),
                       tri_and(B_A2, order_in_open_range(og, 3))),
        "D-E2": tri_or(tri_and(A_Bm2, order_in_open_range(oh, 3)),
                       tri_and(B_Am2, order_in_open_range(og, 3))),
        "D-E4": tri_or(tri_and(A_B3, order_is(oh, 9)),
                       tri_and(B_A3, order_is(og, 9))),
    })
    blockers = tuple(sorted(n for n, v in values.items() if v == UNKNOWN))
    return CaseFlags(values, og, oh, ogh, m, blockers)


# ---------------------------------------------------------------------------
# the resolved/unresolved table for cases K5, K6+, K6-, L6
# ---------------------------------------------------------------------------

THREE_MANIFOLD = "three-manifold"

# row key -> case -> order of the defined group over the cyclic core
# (None: asphericity status open)
CASE_TABLE = {
    ("2,1", "K5"): 165, ("2,1", "K6+"): 378, ("2,1", "K6-"): 342,
    ("2,1", "L6"): 342,
    ("3,1", "K5"): 1100, ("3,1", "K6+"): None, ("3,1", "K6-"): None,
    ("3,1", "L6"): 24530688,
    ("4,1", "K5"): 3775, ("4,1", "K6+"): None, ("4,1", "K6-"): None,
    ("4,1", "L6"): None,
    ("3,2", "K5"): 2525, ("3,2", "K6+"): None, ("3,2", "K6-"): None,
    ("3,2", "L6"): None,
    ("n,1", "K5"): None, ("n,1", "K6+"): None, ("n,1", "K6-"): None,
    ("n,1", "L6"): None,
    ("pos", "K5"): None, ("pos", "K6+"): None, ("pos", "K6-"): None,
    ("pos", "L6"): None,
    ("2,-1", "K5"): 55, ("2,-1", "K6+"): 336, ("2,-1", "K6-"): THREE_MANIFOLD,
    ("2,-1", "L6"): 54,
    ("3,-1", "K5"): 110, ("3,-1", "K6+"): None, ("3,-1", "K6-"): None,
    ("3,-1", "L6"): 9072,
}


def row_key(l: int, k: int) -> Optional[str]:
    """Table row for a normalized (l, k) with l >= |k|."""
    if k == 1:
        if l == 2:
            return "2,1"
        if l == 3:
            return "3,1"
        if l == 4:
            return "4,1"
        return "n,1"
    if k > 1:
        return "3,2" if (l, k) == (3, 2) else "pos"
    if k == -1:
        if l == 2:
            return "2,-1"
        if l == 3:
            return "3,-1"
    return None


# ---------------------------------------------------------------------------
# verdicts
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CaseVerdict:
    dr: TriState
    aspherical: TriState
    justification: str
    detail: str
    conjectural: bool = False
    flags: Optional[CaseFlags] = None
    expected_core_order: Optional[int] = None
    blockers: tuple = ()
    case_hits: tuple = ()

    def summary(self) -> str:
        def word(t):
            return {YES: "yes", NO: "no", UNKNOWN: "unknown"}[t]
        if self.aspherical == YES:
            head = "Aspherical"
        elif self.aspherical == NO:
            head = "NonAspherical"
        else:
            head = "OpenCase (conjectural)" if self.conjectural else "OpenCase"
        return (f"{head}; dr={word(self.dr)}; rule={self.justification}"
                + (f"; |G(Q)|={self.expected_core_order}"
                   if self.expected_core_order else ""))


def _verdict(dr, asp, rule, detail, *, conjectural=False, flags=None,
             expected=None, blockers=(), hits=()):
    return CaseVerdict(dr, asp, rule, detail, conjectural=conjectural,
                       flags=flags, expected_core_order=expected,
                       blockers=tuple(blockers), case_hits=tuple(hits))


def classify(inst: LengthFourInstance, cap: int = DEFAULT_CAP) -> CaseVerdict:
    """Tri-state classification with a fixed precedence of rules.

    Precedence: relator pre-checks (proper power, orientability folded
    into the equal/opposite exponent rules), l = k, l = -k, torsion-free
    coefficients, cases J4/J6, cases Z/M, case P, then the per-family
    theorems with their exceptional carve-outs and the resolved-order
    facts, and otherwise an open verdict.
    """
    norm = inst.normalized()
    ctx = context_for(norm.G, cap)
    A, B = norm.g, norm.h
    l, k = norm.l, norm.k

    for w, name in ((A, "g"), (B, "h")):
        t = ctx.is_trivial_word(w)
        if t == YES:
            raise ValueError(f"{name} = {word_str(w)} is trivial in G; "
                             "the relator does not have length four")
        if t == UNKNOWN:
            return _verdict(UNKNOWN, UNKNOWN, "open-blocked",
                            f"cannot certify {name} nontrivial within budget",
                            blockers=(f"triviality of {word_str(w)}",))

    eq = ctx.equal(A, B)

    # ---- l = k: reducible iff g = h or |g^-1 h| infinite; aspherical iff
    # the order is infinite (g = h makes the relator a proper power)
    if k == l:
        if eq == YES:
            return _verdict(YES, NO, "relator-proper-power",
                            "relator is (x^l g)^2, a proper power; "
                            "reducible by the equal-exponent rule")
        ogh_inv = ctx.element_order(wmul(winv(A), B))
        if eq == UNKNOWN and not ogh_inv.is_infinite:
            return _verdict(UNKNOWN, UNKNOWN, "open-blocked",
                            "g = h undecided within budget",
                            blockers=("equality of g and h",))
        if ogh_inv.is_infinite:
            return _verdict(YES, YES, "equal-exponents",
                            "|g^-1 h| infinite: reducible and aspherical")
        if ogh_inv.is_finite:
            return _verdict(NO, NO, "equal-exponents",
                            f"|g^-1 h| = {ogh_inv.value} finite with g != h: "
                            "neither reducible nor aspherical")
        return _verdict(UNKNOWN, UNKNOWN, "open-blocked",
                        "|g^-1 h| undecided within budget",
                        blockers=("order of g^-1 h",))

    # ---- l = -k: aspherical iff |g| = |h| = infinity
    if k == -l:
        og = ctx.element_order(A)
        oh = ctx.element_order(B)
        if og.is_infinite and oh.is_infinite:
            return _verdict(YES, YES, "opposite-exponents",
                            "|g| = |h| = infinity: reducible and aspherical")
        if og.is_finite or oh.is_finite:
            g2 = ctx.is_trivial_word(wmul(A, A))
            h2 = ctx.is_trivial_word(wmul(B, B))
            if g2 == YES and h2 == YES:
                return _verdict(UNKNOWN, NO, "relator-non-orientable",
                                "relator is conjugate to its inverse "
                                "(g^2 = h^2 = 1 with opposite exponents)")
            dr = NO if (g2 == NO or h2 == NO) else UNKNOWN
            return _verdict(dr, NO, "opposite-exponents",
                            "some coefficient has finite order")
        return _verdict(UNKNOWN, UNKNOWN, "open-blocked",
                        "coefficient orders undecided within budget",
                        blockers=("order of g", "order of h"))

    # ---- from here on l != +-k: orientable, no proper power, so
    # reducibility implies asphericity and non-asphericity forces dr = no
    if ctx.is_torsion_free() == YES:
        return _verdict(YES, YES, "torsion-free-coefficients",
                        "torsion-free coefficient group: reducible, "
                        "hence aspherical")

    flags = case_flags(norm, cap)
    hits = flags.holding()
    blockers = list(flags.blockers)

    def open_blocked(what):
        return _verdict(UNKNOWN, UNKNOWN, "open-blocked", what,
                        flags=flags, blockers=blockers, hits=hits)

    def negative(rule, detail, expected=None):
        return _verdict(NO, NO, rule, detail, flags=flags,
                        expected=expected, hits=hits)

    def positive(rule, detail, dr=YES):
        return _verdict(dr, YES, rule, detail, flags=flags, hits=hits)

    def open_case(rule, detail, conjectural=False, dr=UNKNOWN):
        return _verdict(dr, UNKNOWN, rule, detail, conjectural=conjectural,
                        flags=flags, blockers=blockers, hits=hits)

    # expected-order metadata is sound only when G is exactly the cyclic
    # group generated by the coefficients, which is when |G| matches the
    # case order and gp{g,h} has index 1
    def core_expected(case: str, value) -> Optional[int]:
        if value in (None, THREE_MANIFOLD):
            return None
        want = {"K5": 5, "K6+": 6, "K6-": 6, "L6": 6}[case]
        total = ctx.group_order()
        if not (total.is_finite and total.value == want):
            return None
        sub = ctx.subgroup_order([A, B])
        if sub.is_finite and sub.value == want:
            return value
        return None

    # ---- cases J4 / J6: aspherical exactly when the natural map is an
    # isomorphism, characterised by |l+k| = 1 with l or k divisible
    for case, n in (("J4", 4), ("J6", 6)):
        f = flags[case]
        if f == YES:
            crit = abs(l + k) == 1 and (l % n == 0 or k % n == 0)
            if crit:
                return _verdict(UNKNOWN, YES, f"case-{case}-isomorphism",
                                f"case {case} with |l+k| = 1 and an exponent "
                                f"divisible by {n}: G maps isomorphically "
                                "onto the defined group", flags=flags, hits=hits)
            return negative(f"case-{case}-isomorphism",
                            f"case {case} without the isomorphism criterion "
                            f"(|l+k| = 1 and l or k divisible by {n})")

    # ---- cases Z / M: aspherical only in degenerate exponent shapes that
    # cannot occur for l > 0, k != 0
    for case in ("Z", "M"):
        if flags[case] == YES:
            crit = abs(l + k) == 1 and (l == 0 or k == 0)
            if not crit:
                return negative(f"case-{case}-isomorphism",
                                f"case {case}: aspherical would force "
                                "|l+k| = 1 with a zero exponent")
            return _verdict(UNKNOWN, YES, f"case-{case}-isomorphism",
                            "degenerate exponents", flags=flags, hits=hits)

    # ---- case P: resolved negatively for the families below, otherwise
    # only conjecturally non-aspherical
    if flags["P"] == YES:
        non_dr = k > 0 or (l, k) in ((2, -1), (3, -1))
        og3 = order_at_least(flags.og, 3)
        oh3 = order_at_least(flags.oh, 3)
        non_weak = (l, k) in ((3, 1), (3, -1)) or \
            (k == -1 and l >= 2 and og3 == YES and oh3 == YES)
        if (l, k) in ((2, 1), (2, -1)) or non_weak:
            return negative("case-P-platonic",
                            "case P: spherical pictures from Platonic "
                            "tessellations; non-aspherical for this family")
        return open_case("case-P-conjecture",
                         "case P outside the families with a proof: "
                         "conjecturally non-aspherical",
                         conjectural=True, dr=NO if non_dr else UNKNOWN)
    if flags["P"] == UNKNOWN:
        blockers.append("case P undecided (order budget)")

    # ---- per-family theorems ------------------------------------------------
    row = row_key(l, k)

    def table_negative(case: str):
        entry = CASE_TABLE.get((row, case))
        if entry is None:
            return open_case("table-open",
                             f"case {case} at exponents ({l},{k}) is an "
                             "unresolved table cell")
        if entry == THREE_MANIFOLD:
            return negative("three-manifold-core",
                            f"case {case}: the defined group is an infinite "
                            "virtual three-manifold group, not isomorphic "
                            "to G; non-aspherical")
        return negative("finite-core-order",
                        f"case {case}: the defined group over the cyclic "
                        f"core is finite of order {entry} > |core|; "
                        "non-aspherical",
                        expected=core_expected(case, entry))

    def require_no(names, then):
        undecided = [n for n in names if flags[n] == UNKNOWN]
        hit = [n for n in names if flags[n] == YES]
        if hit:
            raise AssertionError(f"unhandled case hit {hit}")
        if undecided:
            return open_blocked(
                f"cases {', '.join(undecided)} undecided within budget")
        return then()

    klcases = ("K5", "K6+", "K6-", "L6")

    if row == "2,1":
        for case in klcases:
            if flags[case] == YES:
                return table_negative(case)
        sq = tri_or(
            tri_and(ctx.equal(A, wmul(B, B)), order_finite(flags.oh)),
            tri_and(ctx.equal(B, wmul(A, A)), order_finite(flags.og)))
        if sq == YES:
            return negative("lk-2-1-square",
                            "g = h^2 or h = g^2 with finite order at "
                            "exponents (2,1): non-reducible, non-aspherical")
        if sq == UNKNOWN:
            return open_blocked("square condition undecided at (2,1)")
        return require_no(CASE_NAMES, lambda: positive(
            "lk-2-1", "exponents (2,1) with no coincidence case and no "
            "finite square relation: reducible and aspherical"))

    if row == "2,-1":
        for name in ("E-E1", "E-E2"):
            if flags[name] == YES:
                return open_case(f"open-exceptional-{name}",
                                 f"exceptional family {name} at (2,-1): "
                                 "asphericity unresolved")
        for case in klcases:
            if flags[case] == YES:
                return table_negative(case)
        og, oh = flags.og, flags.oh
        commute = ctx.equal(wmul(A, B), wmul(B, A))
        c_i = tri_or(tri_and(ctx.equal(A, winv(wmul(B, B))), order_finite(oh)),
                     tri_and(ctx.equal(B, winv(wmul(A, A))), order_finite(og)))
        c_ii = tri_and(commute, tri_or(order_is(og, 2), order_is(oh, 2)))
        comm_word = wmul(A, B, A, B, winv(A), winv(B), winv(A), winv(B))
        c_iii = tri_and(
            tri_or(tri_and(order_is(og, 2), order_is(oh, 3)),
                   tri_and(order_is(og, 3), order_is(oh, 2))),
            ctx.is_trivial_word(comm_word))
        c_iv = tri_and(order_is(og, 3), order_is(oh, 3), commute)
        sq_any = tri_or(ctx.equal(A, wmul(B, B)), ctx.equal(B, wmul(A, A)))
        c_v = tri_and(order_is(og, 7), order_is(oh, 7), sq_any)
        c_vi = tri_and(order_is(og, 9), order_is(oh, 9), sq_any)
        subcases = {"i": c_i, "ii": c_ii, "iii": c_iii, "iv": c_iv,
                    "v": c_v, "vi": c_vi}
        for name, val in subcases.items():
            if val == YES:
                expected = None
                total = ctx.group_order()
                sub = ctx.subgroup_order([A, B])
                whole = (total.is_finite and sub.is_finite
                         and sub.value == total.value)
                if whole and name == "iii" and total.value == 18:
                    expected = 27216
                if whole and name == "iv" and total.value == 9:
                    expected = 13608
                return negative(
                    f"lk-2-neg1-{name}",
                    f"exponents (2,-1), obstruction ({name}): finite order "
                    "or torsion witness in the defined group",
                    expected=expected)
        if flags["E-E3"] == YES:
            expected = None
            total = ctx.group_order()
            sub = ctx.subgroup_order([A, B])
            if (total.is_finite and total.value == 8 and sub.is_finite
                    and sub.value == 8):
                expected = 2361960
            return negative("lk-2-neg1-E-E3",
                            "exceptional family E-E3 at (2,-1): the defined "
                            "group is finite and too large; non-aspherical",
                            expected=expected)
        pending = [n for n, v in subcases.items() if v == UNKNOWN]
        if pending:
            return open_blocked(
                f"(2,-1) obstructions {', '.join(pending)} undecided")
        return require_no((*CASE_NAMES, "E-E1", "E-E2", "E-E3"), lambda: positive(
            "lk-2-neg1", "exponents (2,-1) with every obstruction excluded: "
            "reducible and aspherical"))

    if row == "3,-1":
        for case in klcases:
            if flags[case] == YES:
                return table_negative(case)
        for name in ("AAE-E", "AAE-E4"):
            if flags[name] == YES:
                return open_case(f"open-exceptional-{name}",
                                 f"exceptional family {name} at (3,-1): "
                                 "asphericity unresolved")
        return require_no((*CASE_NAMES, "AAE-E", "AAE-E4"), lambda: positive(
            "lk-3-neg1", "exponents (3,-1) with no coincidence case and no "
            "exceptional family: reducible and aspherical"))

    if row in ("3,1", "4,1", "n,1"):
        for case in klcases:
            if flags[case] == YES:
                return table_negative(case)
        return require_no(CASE_NAMES, lambda: positive(
            "lk-n-1", f"exponents ({l},{k}) with no coincidence case: "
            "reducible and aspherical"))

    if row == "3,2":
        for case in klcases:
            if flags[case] == YES:
                return table_negative(case)
        if flags["HM-E"] == YES:
            return open_case("open-exceptional-HM-E",
                             "exceptional family HM-E at (3,2): asphericity "
                             "unresolved")
        return require_no((*CASE_NAMES, "HM-E"), lambda: positive(
            "lk-3-2", "exponents (3,2) with no coincidence case and no "
            "HM-E family: reducible and aspherical"))

    if row == "pos":
        for case in klcases:
            if flags[case] == YES:
                return table_negative(case)
        if flags["AEJ-E"] == YES:
            return open_case("conjecture-positive-exponents",
                             "exceptional family AEJ-E: conjecturally "
                             "reducible and aspherical, unproven",
                             conjectural=True)
        return require_no((*CASE_NAMES, "AEJ-E"), lambda: positive(
            "lk-positive", f"positive exponents ({l},{k}) with no "
            "coincidence case and no AEJ-E family: reducible and aspherical"))

    # ---- k < 0 families beyond (2,-1), (3,-1) -----------------------------
    if k == -1 and l >= 4:
        if flags["K5"] == YES and l >= 7:
            return positive("lk-K5-large-exponent",
                            f"case K5 with l = {l} >= 7, k = -1: reducible "
                            "and aspherical")
        og3 = order_at_least(flags.og, 3)
        oh3 = order_at_least(flags.oh, 3)
        family_ok = tri_and(og3, oh3,
                            tri_not(flags["D-E1"]), tri_not(flags["D-E2"]),
                            tri_not(flags["D-E4"]),
                            tri_not(flags["P"]), tri_not(flags["Z"]),
                            tri_not(flags["M"]))
        if family_ok == YES:
            return positive("lk-l-neg1",
                            f"exponents ({l},-1), squares of g and h "
                            "nontrivial, no case and no exceptional family: "
                            "reducible and aspherical")
    prish = _spread_exponent_case(ctx, A, B, flags, l, k)
    if prish == YES:
        return _verdict(UNKNOWN, YES, "spread-exponents",
                        f"exponents ({l},{k}) with l > 2|k| and coefficient "
                        "orders clear of the short relations: aspherical",
                        flags=flags, hits=hits)
    for name in ("D-E1", "D-E2", "D-E4"):
        if flags[name] == YES:
            return open_case(f"open-exceptional-{name}",
                             f"exceptional family {name} at ({l},{k}): "
                             "asphericity unresolved")
    if blockers:
        return open_blocked("; ".join(dict.fromkeys(blockers)))
    return open_case("open",
                     f"no classification theorem covers exponents ({l},{k}) "
                     "for this instance")


def _spread_exponent_case(ctx, A, B, flags, l, k) -> TriState:
    """Aspherical families for l > 2|k| (after normalization the case
    |k| > 2l has already been rewritten into this shape)."""
    if not (k < 0 and l > 2 * (-k)):
        return NO
    if flags["Z"] != NO or flags["M"] != NO:
        return UNKNOWN if (flags["Z"] == UNKNOWN or flags["M"] == UNKNOWN) else NO
    og, oh = flags.og, flags.oh
    neq = lambda u, v: tri_not(ctx.equal(u, v))
    A2, B2 = wmul(A, A), wmul(B, B)
    A3, B3 = wmul(A2, A), wmul(B2, B)
    c1 = tri_and(order_at_least(og, 6), order_at_least(oh, 3),
                 neq(B, A2), neq(B, winv(A2)), neq(B, winv(A3)),
                 neq(A, winv(B2)))
    c2 = tri_and(order_at_least(og, 3), order_at_least(oh, 6),
                 neq(A, B2), neq(A, winv(B2)), neq(A, winv(B3)),
                 neq(B, winv(A2)))
    c3 = tri_and(order_at_least(og, 4), order_at_least(oh, 4),
                 neq(A, winv(B2)), neq(B, winv(A2)))
    return tri_or(c1, c2, c3)


# ---------------------------------------------------------------------------
# verification
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class VerifyCheck:
    name: str
    status: str  # 'ok' | 'fatal' | 'skipped'
    detail: str


@dataclass(frozen=True)
class VerifyReport:
    checks: tuple

    @property
    def ok(self) -> bool:
        return all(c.status != "fatal" for c in self.checks)

    def lines(self) -> list:
        return [f"[{c.status:>7}] {c.name}: {c.detail}" for c in self.checks]


def verify_verdict(inst: LengthFourInstance, verdict: CaseVerdict,
                   cap: int = DEFAULT_CAP) -> VerifyReport:
    """Cross-check a verdict against coset enumeration.

    aspherical=yes demands that a finite defined group have exactly the
    order of G (the natural map must be injective with every finite
    subgroup conjugate into G); a finite-order justification for
    aspherical=no must reproduce the claimed order.
    """
    checks = []
    ctx = context_for(inst.G, cap)
    lifted = inst.lifted()
    if verdict.aspherical == YES and verdict.dr == NO:
        checks.append(VerifyCheck(
            "internal-consistency", "fatal",
            "aspherical verdicts may not assert non-reducibility"))
    if verdict.aspherical == YES:
        t = enumerate_cosets(lifted, [], cap)
        if not t.complete:
            checks.append(VerifyCheck(
                "order-vs-G", "skipped",
                f"defined group not enumerated within {cap} cosets"))
        else:
            total = ctx.group_order()
            if total.is_finite and t.n == total.value:
                checks.append(VerifyCheck(
                    "order-vs-G", "ok",
                    f"defined group has order {t.n} = |G|"))
            elif total.is_finite:
                checks.append(VerifyCheck(
                    "order-vs-G", "fatal",
                    f"defined group has order {t.n} but |G| = {total.value}; "
                    "contradicts asphericity"))
            elif total.is_infinite:
                checks.append(VerifyCheck(
                    "order-vs-G", "fatal",
                    f"defined group is finite ({t.n}) but G is infinite"))
            else:
                checks.append(VerifyCheck(
                    "order-vs-G", "skipped", "|G| not known within budget"))
    elif verdict.aspherical == NO and verdict.expected_core_order:
        expected = verdict.expected_core_order
        r = order_via_cyclic_subgroup(lifted, _single_gen_word(inst), cap) \
            if len(inst.G.generators) == 1 else None
        if r is None or not r.is_finite:
            t = enumerate_cosets(lifted, [], cap)
            r = OrderResult.finite(t.n) if t.complete else OrderResult.exceeds(cap)
        if r.is_finite and r.value == expected:
            gord = ctx.group_order()
            extra = (f"; order differs from |G| = {gord.value}"
                     if gord.is_finite and gord.value != expected else "")
            checks.append(VerifyCheck(
                "claimed-order", "ok",
                f"enumeration reproduces order {expected}{extra}"))
        elif r.is_finite:
            checks.append(VerifyCheck(
                "claimed-order", "fatal",
                f"enumerated order {r.value} != claimed {expected}"))
        else:
            checks.append(VerifyCheck(
                "claimed-order", "skipped",
                f"order not reproduced within {cap} cosets"))
    else:
        checks.append(VerifyCheck(
            "order-checks", "skipped",
            "verdict carries no enumeration-checkable claim"))
    return VerifyReport(tuple(checks))


def _single_gen_word(inst: LengthFourInstance) -> Word:
    return ((inst.G.generators[0], 1),)


# ---------------------------------------------------------------------------
# fixture catalog: the resolved table entries as concrete instances
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Fixture:
    name: str
    case: str
    n: int  # cyclic coefficient order
    a: int  # g = t^a
    b: int  # h = t^b
    l: int
    k: int
    expected_order: int

    def instance(self) -> LengthFourInstance:
        return LengthFourInstance(cyclic_group(self.n), (("h", self.a),),
                                  (("h", self.b),), self.l, self.k)


def cyclic_group(n: int) -> CoefficientGroup:
    return CoefficientGroup(("h",), ((("h", n),),))


TABLE1_FIXTURES = (
    Fixture("{2,1} K5", "K5", 5, 2, 1, 2, 1, 165),
    Fixture("{2,1} K6+", "K6+", 6, 2, 1, 2, 1, 378),
    Fixture("{2,1} K6-", "K6-", 6, 4, 1, 2, 1, 342),
    Fixture("{2,1} L6", "L6", 6, 3, 1, 2, 1, 342),
    Fixture("{3,1} K5", "K5", 5, 2, 1, 3, 1, 1100),
    Fixture("{4,1} K5", "K5", 5, 2, 1, 4, 1, 3775),
    Fixture("{3,2} K5", "K5", 5, 2, 1, 3, 2, 2525),
    Fixture("{2,-1} K5", "K5", 5, 2, 1, 2, -1, 55),
    Fixture("{2,-1} K6+", "K6+", 6, 2, 1, 2, -1, 336),
    Fixture("{2,-1} L6", "L6", 6, 3, 1, 2, -1, 54),
    Fixture("{3,-1} K5", "K5", 5, 2, 1, 3, -1, 110),
    Fixture("{3,-1} L6", "L6", 6, 3, 1, 3, -1, 9072),
)

EXTENDED_FIXTURE = Fixture("{3,1} L6 (extended)", "L6", 6, 3, 1, 3, 1, 24530688)


def fixture_order(fix: Fixture, cap: int = DEFAULT_CAP) -> OrderResult:
    """Order of the defined group for a catalog fixture.

    Prefers enumeration over the cyclic coefficient subgroup with the
    exact order multiplier (the abelianized order of the coefficient
    generator meets its power-relator bound on every catalog entry), and
    falls back to a trivial-subgroup enumeration.
    """
    lifted = fix.instance().lifted()
    r = order_via_cyclic_subgroup(lifted, (("h", 1),), cap)
    if r is not None:
        return r
    t = enumerate_cosets(lifted, [], cap)
    return OrderResult.finite(t.n) if t.complete else OrderResult.exceeds(cap)
