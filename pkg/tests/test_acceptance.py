"""Acceptance gate: one test per criterion, each printing a PASS/FAIL line.

Run with `pytest -s tests/test_acceptance.py` to see the per-criterion
lines.  The order-24530688 check runs under `-m extended` (minutes).
"""

from __future__ import annotations

import random
import time
from fractions import Fraction

import pytest

from relasph.classify import (
    EXTENDED_FIXTURE,
    TABLE1_FIXTURES,
    LengthFourInstance,
    classify,
    case_flags,
    cyclic_group,
    fixture_order,
    verify_verdict,
)
from relasph.coset import (
    context_for,
    enumerate_cosets,
    order_via_cyclic_subgroup,
)
from relasph.pictures import (
    cancel_dipole,
    curvature,
    curvature_formula,
    find_dipole,
    picture_from_json,
    standard_angles,
    trace_regions,
    validate_picture,
)
from relasph.stargraph import admissible_cycles, build_star_graph, min_admissible_cycle_weight
from relasph.weights import (
    NOT_CERTIFIED,
    VIOLATED,
    WeightFunction,
    check_condition_I,
    check_weight_function,
)
from relasph.words import (
    CoefficientGroup,
    RelativePresentation,
    TriState,
    csyl,
    cyclic,
    fpw,
    free_group,
    parse_presentation,
    xsyl,
)

YES, NO, UNKNOWN = TriState.YES, TriState.NO, TriState.UNKNOWN

CAP = 3 * 10 ** 6


def report(name: str, failures: list) -> None:
    status = "PASS" if not failures else "FAIL"
    print(f"\n[{status}] {name}" + (f" -- {failures}" if failures else ""))
    assert not failures, failures


S3xZ3 = CoefficientGroup(
    ("g", "h"), ((("g", 2),), (("h", 3),),
                 (("g", 1), ("h", 1)) * 2 + (("g", -1), ("h", -1)) * 2))
Z3Z3 = CoefficientGroup(("g", "h"), ((("g", 3),), (("h", 3),),
                                     (("g", 1), ("h", 1), ("g", -1), ("h", -1))))
Z2Z4 = CoefficientGroup(("a", "b"), ((("a", 2),), (("b", 4),),
                                     (("a", 1), ("b", 1), ("a", -1), ("b", -1))))

EXAMPLE_A = LengthFourInstance(S3xZ3, (("g", 1),), (("h", 1),), 2, -1)
EXAMPLE_B = LengthFourInstance(Z3Z3, (("g", 1),), (("h", 1),), 2, -1)
EXAMPLE_C = LengthFourInstance(cyclic_group(8), (("h", 2),), (("h", 1),), 2, -1)
EXAMPLE_24 = LengthFourInstance(cyclic_group(4), (("h", 1),), (("h", 2),), 4, -3)
BBP_E4 = LengthFourInstance(Z2Z4, (("a", 1),), (("b", 1),), 3, 1)


def test_criterion_1_order_battery():
    """Exact coset-enumeration orders for every resolved fixture."""
    failures = []
    for fix in TABLE1_FIXTURES:
        t0 = time.time()
        got = fixture_order(fix, CAP)
        dt = time.time() - t0
        if not (got.is_finite and got.value == fix.expected_order):
            failures.append((fix.name, str(got)))
        if dt > 60:
            failures.append((fix.name, f"took {dt:.0f}s > 60s"))
    for name, inst, expected in (
            ("example S3xZ3", EXAMPLE_A, 27216),
            ("example Z3xZ3", EXAMPLE_B, 13608)):
        t0 = time.time()
        t = enumerate_cosets(inst.lifted(), [], CAP)
        dt = time.time() - t0
        if not (t.complete and t.n == expected):
            failures.append((name, t.status))
        if dt > 60:
            failures.append((name, f"took {dt:.0f}s"))
    t0 = time.time()
    r = order_via_cyclic_subgroup(EXAMPLE_C.lifted(), (("h", 1),), CAP)
    dt = time.time() - t0
    if r is None or not r.is_finite or r.value != 2361960:
        failures.append(("example Z8", str(r)))
    if dt > 60:
        failures.append(("example Z8", f"took {dt:.0f}s"))
    report("order battery: resolved fixtures reproduce exactly", failures)


@pytest.mark.extended
def test_criterion_1_extended_order():
    got = fixture_order(EXTENDED_FIXTURE, 10 ** 7)
    failures = []
    if not (got.is_finite and got.value == 24530688):
        failures.append(str(got))
    report("order battery: extended 24530688 case", failures)


def test_criterion_2_classifier_regression():
    """Every resolved fixture classifies non-aspherical with a verified
    order; the isomorphism example classifies aspherical with order |G|;
    the Z2+Z4 instance at (3,1) is reducible and aspherical; every
    unresolved table cell returns an open verdict."""
    failures = []
    for fix in TABLE1_FIXTURES:
        inst = fix.instance()
        v = classify(inst, CAP)
        if v.aspherical != NO or not v.justification:
            failures.append((fix.name, v.summary()))
            continue
        rep = verify_verdict(inst, v, CAP)
        if not rep.ok:
            failures.append((fix.name, rep.lines()))
        if v.expected_core_order != fix.expected_order:
            failures.append((fix.name, v.expected_core_order))
    for name, inst, expected in (
            ("example S3xZ3", EXAMPLE_A, 27216),
            ("example Z3xZ3", EXAMPLE_B, 13608),
            ("example Z8", EXAMPLE_C, 2361960)):
        v = classify(inst, CAP)
        if v.aspherical != NO or v.expected_core_order != expected:
            failures.append((name, v.summary()))
        elif not verify_verdict(inst, v, CAP).ok:
            failures.append((name, "verification failed"))
    v = classify(EXAMPLE_24, CAP)
    if v.aspherical != YES:
        failures.append(("isomorphism example", v.summary()))
    else:
        t = enumerate_cosets(EXAMPLE_24.lifted(), [], CAP)
        if not (t.complete and t.n == 4):
            failures.append(("isomorphism example order", t.n))
        if not verify_verdict(EXAMPLE_24, v, CAP).ok:
            failures.append(("isomorphism example", "verification failed"))
    v = classify(BBP_E4, CAP)
    if not (v.dr == YES and v.aspherical == YES):
        failures.append(("Z2+Z4 at (3,1)", v.summary()))
    open_cells = [
        (6, 3, 1, 2, 1), (6, 3, 1, 4, 1),
        (6, 4, 1, 2, 1), (6, 4, 1, 4, 1), (6, 4, 1, 3, 1),
        (6, 3, 2, 2, 1), (6, 3, 2, 4, 1), (6, 3, 2, 3, 1),
        (5, 5, 1, 2, 1), (6, 5, 1, 2, 1), (6, 5, 1, 4, 1), (6, 5, 1, 3, 1),
        (5, 5, 3, 2, 1), (6, 5, 3, 2, 1), (6, 5, 3, 4, 1), (6, 5, 3, 3, 1),
        (6, 3, -1, 2, 1), (6, 3, -1, 4, 1),
    ]
    for n, l, k, a, b in open_cells:
        inst = LengthFourInstance(cyclic_group(n), (("h", a),), (("h", b),), l, k)
        v = classify(inst, CAP)
        if v.aspherical != UNKNOWN or v.justification != "table-open":
            failures.append((f"open cell {(n, l, k, a, b)}", v.summary()))
    report("classifier regression: resolved, isomorphism, and open cells",
           failures)


# ---------------------------------------------------------------------------
# criterion 3: theorem-level equivalences against enumerated isomorphism
# ---------------------------------------------------------------------------

ENUM_CAP = 10 ** 6


def _iso_oracle(inst: LengthFourInstance, n: int, suspected: bool) -> bool:
    """Does the defined group have order exactly n?

    For |l+k| != 1 the abelianization has order n*|l+k| != n (or is
    infinite), which rules the isomorphism out by exact integer
    arithmetic.  Otherwise the coefficient generator has order exactly n
    in the defined group (abelianized order n against the power-relator
    bound), so the order is n iff its cyclic subgroup has index 1; that
    index is enumerated at the stated cap.  Instances the relator-based
    strategy cannot finish are retried with the deduction-based strategy
    when the classifier suspects an isomorphism, so a positive claim is
    never lost to a hard enumeration; exhausted budgets count as
    non-isomorphic."""
    if abs(inst.l + inst.k) != 1:
        return False
    t = enumerate_cosets(inst.lifted(), [(("h", 1),)], ENUM_CAP,
                         lookahead=False)
    if t.complete:
        return t.n == 1
    if suspected:
        t = enumerate_cosets(inst.lifted(), [(("h", 1),)], ENUM_CAP,
                             strategy="felsch")
        if t.complete:
            return t.n == 1
    return False


def _equivalence_battery(make_inst, n_values) -> list:
    failures = []
    for n in n_values:
        for l in range(1, 7):
            for k in [k for k in range(-6, 7) if k]:
                inst = make_inst(n, l, k)
                if inst is None:
                    continue
                verdict = classify(inst, ENUM_CAP)
                claimed = verdict.aspherical == YES
                actual = _iso_oracle(inst, n, claimed)
                if claimed != actual:
                    failures.append((n, l, k, claimed, actual))
    return failures


def test_criterion_3_z_m_equivalence():
    def z_inst(n, l, k):
        return LengthFourInstance(cyclic_group(n), (("h", 1),), (("h", 1),), l, k)

    def m_inst(n, l, k):
        if n == 2:
            return None  # h^-1 = h collapses onto the g = h battery
        return LengthFourInstance(cyclic_group(n), (("h", 1),), (("h", -1),), l, k)

    failures = _equivalence_battery(z_inst, range(2, 13))
    failures += _equivalence_battery(m_inst, range(3, 13))
    report("g = h and g = h^-1 criteria match enumerated isomorphism "
           "over n <= 12, l <= 6, |k| <= 6", failures)


def test_criterion_3_j4_j6_equivalence():
    def j4_inst(n, l, k):
        q = n // 4
        return LengthFourInstance(cyclic_group(n), (("h", 2 * q),), (("h", q),), l, k)

    def j6_inst(n, l, k):
        return LengthFourInstance(cyclic_group(n), (("h", n // 2),),
                                  (("h", n // 3),), l, k)

    failures = _equivalence_battery(j4_inst, (4, 8, 12))
    failures += _equivalence_battery(j6_inst, (6, 12))
    report("J4/J6 divisibility criteria match enumerated isomorphism",
           failures)


# ---------------------------------------------------------------------------
# criterion 4: weight test
# ---------------------------------------------------------------------------

def test_criterion_4_weight_test():
    failures = []
    # root-adjunction weights: -1 on the marked pair, +1 elsewhere, sum 2
    for d in range(2, 7):
        G = free_group("y")
        w = fpw(csyl((("y", -1),)), xsyl("x", d))
        graph = build_star_graph(RelativePresentation(G, ("x",), (w,)))
        weights = {pid: Fraction(-1) if graph.edges[pid].label else Fraction(1)
                   for pid in graph.pair_ids()}
        res = check_condition_I(graph, WeightFunction(weights))
        if not (res[0].ok and res[0].total == 2):
            failures.append((f"marked weights d={d}", str(res[0].total)))
        rep = check_weight_function(graph, WeightFunction(weights),
                                    context_for(G, 1000), bound=6)
        if rep.condition_II.status != NOT_CERTIFIED:
            failures.append((f"d={d}", rep.condition_II.status))
    # uniform weight 1 fails condition I on every length-four relator
    for l, k in ((2, 1), (3, 1), (2, -1), (4, -3), (3, 2)):
        w = fpw(xsyl("x", l), csyl((("g", 1),)), xsyl("x", k), csyl((("h", 1),)))
        graph = build_star_graph(
            RelativePresentation(free_group("g", "h"), ("x",), (w,)))
        res = check_condition_I(graph, WeightFunction.uniform(graph, 1))
        if res[0].ok:
            failures.append((f"uniform 1 at ({l},{k})", "passed"))
    # x^3 g over Z2 with uniform 1/3: violated at 2/3 with a brute-force match
    G2 = cyclic(2)
    p = RelativePresentation(G2, ("x",), (fpw(xsyl("x", 3), csyl((("g", 1),))),))
    graph = build_star_graph(p)
    ctx = context_for(G2, 1000)
    theta = WeightFunction.uniform(graph, Fraction(1, 3))
    rep = check_weight_function(graph, theta, ctx)
    c2 = rep.condition_II
    if not (c2.status == VIOLATED and c2.min_weight == Fraction(2, 3)
            and c2.witness):
        failures.append(("x^3 g / Z2", rep.lines()))
    else:
        cycles = [c for c in admissible_cycles(graph, ctx, 6)
                  if c.status == "admissible"]
        brute = min(sum(theta.of_edge(graph, e) for e in c.edge_ids)
                    for c in cycles)
        if brute != Fraction(2, 3):
            failures.append(("brute-force oracle", str(brute)))
        witness_weight = sum(theta.of_edge(graph, e) for e in c2.witness)
        if witness_weight != Fraction(2, 3):
            failures.append(("witness weight", str(witness_weight)))
    report("weight test: marked weights, failing uniform weights, violation "
           "witness matches brute force", failures)


# ---------------------------------------------------------------------------
# criterion 5: picture calculus
# ---------------------------------------------------------------------------

def test_criterion_5_picture_calculus(fixtures_dir):
    failures = []
    pic2, pres2 = picture_from_json((fixtures_dir / "fig2.json").read_text())
    ctx2 = context_for(pres2.coeff, 10 ** 4)
    rep = validate_picture(pic2, pres2, ctx2)
    if not (rep.ok and rep.spherical and rep.strictly_spherical == YES):
        failures.append(("four-disc fixture", rep.problems))
    if find_dipole(pic2, pres2, ctx2) is not None:
        failures.append(("four-disc fixture", "unexpected dipole"))
    pic1, pres1 = picture_from_json((fixtures_dir / "fig1a.json").read_text())
    ctx1 = context_for(pres1.coeff, 10 ** 4)
    d = find_dipole(pic1, pres1, ctx1)
    if d is None:
        failures.append(("two-disc fixture", "no dipole"))
    else:
        out = cancel_dipole(pic1, d)
        rep1 = validate_picture(out, pres1, ctx1)
        if not rep1.ok or len(out.discs) != len(pic1.discs) - 2:
            failures.append(("cancellation", rep1.problems))
    # randomized spherical fixtures: total curvature exactly 4 pi
    from test_pictures import random_angles, random_spherical_picture
    from relasph.pictures import euler_check
    rng = random.Random(97)
    ctx = None
    accepted = 0
    attempts = 0
    while accepted < 100 and attempts < 8000:
        attempts += 1
        pic, pres = random_spherical_picture(
            rng, rng.choice([2, 3, 3, 4]), rng.choice([1, 2, 2, 3]))
        if ctx is None:
            ctx = context_for(pres.coeff, 100)
        if not euler_check(pic, trace_regions(pic)):
            continue
        rep = validate_picture(pic, pres, ctx)
        if not rep.ok:
            continue
        _, total = curvature(pic, random_angles(rng, pic))
        if total != 4:
            failures.append(("random fixture", str(total)))
            break
        accepted += 1
    if accepted < 100:
        failures.append(("random fixtures", f"only {accepted} accepted"))
    if curvature_formula([3] * 6) != 0:
        failures.append(("flat hexagon", curvature_formula([3] * 6)))
    # degree-2 regions have curvature 0 under standard angles
    angles = standard_angles(pic2)
    per, total = curvature(pic2, angles)
    for region in trace_regions(pic2):
        if region.degree == 2 and per[region.index] != 0:
            failures.append(("degree-2 region", str(per[region.index])))
    if total != 4:
        failures.append(("fixture total", str(total)))
    report("picture calculus: fixtures, cancellation, 4 pi on >= 100 random "
           "fixtures, flat cases", failures)


# ---------------------------------------------------------------------------
# criterion 6: oracle equivalences
# ---------------------------------------------------------------------------

def test_criterion_6_property_suites():
    failures = []
    # star-graph edge counts across the exponent grid
    for l in range(1, 6):
        for k in [k for k in range(-5, 6) if k]:
            w = fpw(xsyl("x", l), csyl((("g", 1),)), xsyl("x", k),
                    csyl((("h", 1),)))
            graph = build_star_graph(
                RelativePresentation(free_group("g", "h"), ("x",), (w,)))
            if len(graph.pair_ids()) != l + abs(k):
                failures.append((f"edges at ({l},{k})", len(graph.pair_ids())))
    # exact minimum weights match brute force on product graphs <= 200 nodes
    shapes = [(2, (1, 1), 1, 1), (3, (2, 1), 1, 2), (4, (2, -1), 2, 1),
              (5, (2, 1), 2, 1), (6, (2, -1), 3, 1), (8, (3, 1), 2, 1),
              (12, (2, -1), 4, 3)]
    for n, (l, k), a, b in shapes:
        G = cyclic(n)
        w = fpw(xsyl("x", l), csyl((("g", a),)), xsyl("x", k), csyl((("g", b),)))
        graph = build_star_graph(RelativePresentation(G, ("x",), (w,)))
        assert 2 * n <= 200
        ctx = context_for(G, 1000)
        for value in (Fraction(1, 3), Fraction(1, 2)):
            theta = {pid: value for pid in graph.pair_ids()}
            for bound in (4, 6):
                got = min_admissible_cycle_weight(graph, theta, ctx, max_len=bound)
                cycles = [c for c in admissible_cycles(graph, ctx, bound)
                          if c.status == "admissible"]
                brute = min((sum(theta[graph.pair_id(e)] for e in c.edge_ids)
                             for c in cycles), default=None)
                got_w = got[0] if got else None
                if got_w != brute:
                    failures.append(((n, l, k, str(value), bound),
                                     (str(got_w), str(brute))))
    # cyclic reduction idempotence and proper-power round trip, 1000 words
    from test_words import _random_word
    from relasph.words import (FreeProductWord, cyclically_reduce,
                               free_product_length, is_proper_power)
    rng = random.Random(20240817)
    for _ in range(1000):
        word = _random_word(rng)
        red = cyclically_reduce(word)
        if cyclically_reduce(red) != red:
            failures.append(("idempotence", str(word)))
            break
        pp = is_proper_power(red)
        if pp is not None:
            root, e = pp
            if cyclically_reduce(FreeProductWord(root.syllables * e)) != red:
                failures.append(("power round trip", str(word)))
                break
    report("property suites: edge counts, exact-vs-brute minima, reduction "
           "and power round trips", failures)
