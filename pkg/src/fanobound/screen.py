"""Classification engine: length filter, Euler windows for blow-ups, refined
exclusions and the bespoke arguments for primitive classes.

Imprimitive V = Bl_C W is screened with boundary classes D1 = H and
D2 = (r-1)H - E.  S1, S2 are their images on W and F = (S1 n S2)_red.  The
window compares

    eu(F) >= minEu(S1) + minEu(S2) + B3(W) + 2p_a(C) + 1 - 5
    eu(F) <= 1 + (S1^2 . S2)

where the ``+ 1`` is the minimum of N1 + N2 - N12 over feasible point counts.
"""
from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from typing import Dict, Iterable, Optional

from .catalog import Catalog, MMEntry, constructions_for, load_facts
from .certificate import Case, Certificate, cite, fact, step, validate
from .errors import CertificateError, InputError
from .lattice import (
    AMBIENTS,
    BLOWUP,
    AmbientData,
    CurveData,
    DivisorClass,
    TripleForm,
    anticanonical_class,
    check_length_filter,
    euler_ledger,
    half_integer_class_solve,
    solve_boundary_decomposition,
    triple_product,
)
from .surfaces import (
    SECTION,
    RuledClass,
    RuledSurface,
    class_c_conductor_check,
    cone_embedding_obstruction,
    elliptic_quintic_cone_exclusion,
    genus_equation_solutions,
    intersect,
    min_euler,
    no18_invariant_solver,
    section_contexts,
)

EU_FORMULA = cite("Euler formula for F", "eu(F) = eu(S1)+eu(S2)+B3(W)+2p_a(C)+N1+N2-N12-5")
EU_UPPER = cite("ampleness bound", "eu(F) <= B0(F) + B2(F) <= 1 + (S1^2.S2)")
LEDGER = cite("Euler ledger", "eu(D1 n D2) = eu(D1)+eu(D2)+B3(V)-5")
BETTI_F = cite("Betti numbers of F", "B1(F) = 0, B2(F) = B2(S2) + N1 + 2p_a(C) - 1")
DP_EULER = cite("Euler numbers of Gorenstein del Pezzo surfaces",
                "normal rational: eu = 2 + B2; normal irrational: eu = 1; non-normal: eu >= 2; not a cone: eu >= 3")
CONE = cite("cone obstruction", "a del Pezzo cone of degree d >= 4 has embedding dimension d")
DOUBLE_COVER = cite("double cover Euler formula", "eu(D) = 2 eu(g(D)) - eu(B|g(D))")
INTERSECTION_BOUND = cite("ampleness bound", "eu(D1 n D2) <= B0 + B2 <= 2(D1.D2.-K)")


# --- imprimitive setup -----------------------------------------------------


@dataclass(frozen=True)
class ImprimitiveSetup:
    W: AmbientData
    C: CurveData
    deg_S1: int
    deg_S2: int
    s1sq_s2: int
    complete_intersection: bool = False


def make_setup(W: AmbientData, C: CurveData, complete_intersection: bool = False) -> ImprimitiveSetup:
    """S1 in |O(1)|, S2 in |O(r-1)| on W.  -K_{S2} = S1|S2 and -K_{S1} = S2|S1,
    so the anticanonical degrees are (S1^2.S2) and (S2^2.S1)."""
    if C.degree < 1:
        raise InputError("curve degree must be at least 1")
    form = TripleForm(W.h_cubed, 0, 0, 0, BLOWUP)
    s1 = DivisorClass(1, 0, BLOWUP)
    s2 = DivisorClass(W.fano_index - 1, 0, BLOWUP)
    s1sq_s2 = triple_product(form, s1, s1, s2)
    return ImprimitiveSetup(
        W, C, triple_product(form, s2, s2, s1), s1sq_s2, s1sq_s2, complete_intersection
    )


@dataclass(frozen=True)
class WindowReport:
    lower: int
    upper: int
    feasible: bool
    min_s1: int
    min_s2: int


def imprimitive_window(setup: ImprimitiveSetup) -> WindowReport:
    k1, k2 = section_contexts(setup.W.name)
    m1, m2 = min_euler(k1), min_euler(k2)
    lower = m1 + m2 + setup.W.b3_ambient + 2 * setup.C.p_a + 1 - 5
    upper = 1 + setup.s1sq_s2
    return WindowReport(lower, upper, lower <= upper, m1, m2)


def feasible_counts(n1: int, n2: int, n12: int, strict: bool = True) -> bool:
    """N1 >= 1 always.  The curves counted by N12 are counted by both N1 and
    N2, so N12 <= min(N1, N2); with strict=False only max(N1, N2) >= N12 is
    imposed, which admits (1, 0, 1) and a minimum of 0."""
    if n1 < 1:
        return False
    return n12 <= (min(n1, n2) if strict else max(n1, n2))


def window_equality_cases(n_max: int = 10) -> set:
    """Point-count triples (N1, N2, N12) attaining the minimum 1 of
    N1 + N2 - N12 over feasible counts."""
    best, found = None, set()
    for n1, n2, n12 in itertools.product(range(n_max + 1), repeat=3):
        if not feasible_counts(n1, n2, n12):
            continue
        v = n1 + n2 - n12
        if best is None or v < best:
            best, found = v, set()
        if v == best:
            found.add((n1, n2, n12))
    if best != 1:
        raise CertificateError(f"minimum of N1 + N2 - N12 is {best}, expected 1")
    return found


def _genus2_cone_excluded() -> bool:
    S = RuledSurface(1, 3)
    sols = genus_equation_solutions(S, 2, 10, 10)
    return bool(sols) and all(intersect(S, RuledClass(a, b), SECTION) < 0 for a, b in sols)


def genus_bound(setup) -> int:
    """Largest p_a with a feasible window (-1 if none); on P3 the boundary
    value 2 is removed by the elliptic-cone argument."""
    W = setup.W if isinstance(setup, ImprimitiveSetup) else setup
    best = -1
    for p in range(0, 64):
        if imprimitive_window(make_setup(W, CurveData(p, 1))).feasible:
            best = p
        else:
            break
    if W.name == "P3" and best == 2 and _genus2_cone_excluded():
        best = 1
    return best


# --- imprimitive certificates -----------------------------------------------


def _label(W: AmbientData, C: CurveData) -> str:
    kind = {0: "rational", 1: "elliptic"}.get(C.p_a, f"genus {C.p_a}")
    return f"{W.name}, {kind} curve of degree {C.degree}"


def vd_certificate(W: AmbientData, entry: str = "") -> Certificate:
    """Exclusion of blow-ups of V_d, d <= 4, by the window with B3(V_d)."""
    d = W.h_cubed
    if W.name not in ("V1", "V2", "V3", "V4"):
        raise InputError("only V1..V4 are excluded by this argument")
    b3 = W.b3_ambient
    s = make_setup(W, CurveData(0, 1))
    upper = 1 + s.s1sq_s2
    b3_ref = fact("isk80-b3-vd")
    name = entry or f"{W.name} ambient"
    if 3 + d < b3:
        steps = (
            step(f"eu(F) <= 1 + (S1^2.S2) = 1 + {d}", "eu(F)", "<=", upper, EU_UPPER),
            step(f"eu(S_i) >= 1, p_a >= 0, N1+N2-N12 >= 1, B3(V{d}) = {b3}",
                 "eu(F)", ">=", 1 + 1 + b3 + 0 + 1 - 5, b3_ref),
            step("3 + d against B3(V_d)", 3 + d, "<", b3),
        )
        return Certificate(name, steps, "Excluded", (0, 1))
    lo = 3 + 3 + b3 + 0 + 1 - 5
    steps = (
        step(f"eu(F) <= 1 + (S1^2.S2) = 1 + {d}", "eu(F)", "<=", upper, EU_UPPER),
        step("coarse window does not close: 3 + d >= B3(V_d)", 3 + d, ">=", b3),
        step(f"cone obstruction applies in degree {d}", int(cone_embedding_obstruction(d)), "=", 1),
        step("S1 is not a cone, so eu(S1) >= 3", "eu(S1)", ">=", 3, DP_EULER, CONE),
        step("S2 is not a cone, so eu(S2) >= 3", "eu(S2)", ">=", 3, DP_EULER, CONE),
        step(f"eu(F) >= 3 + 3 + B3(V{d}) + 0 + 1 - 5", "eu(F)", ">=", lo, EU_FORMULA, b3_ref),
        step("1 + d against the refined lower bound", upper, "<", lo),
    )
    return Certificate(name, steps, "Excluded", (0, 5))


def window_certificate(setup: ImprimitiveSetup, entry: str = "") -> Certificate:
    rep = imprimitive_window(setup)
    if rep.feasible:
        raise InputError("window is feasible")
    steps = (
        step(f"eu(F) <= 1 + (S1^2.S2) = 1 + {setup.s1sq_s2}", "eu(F)", "<=", rep.upper, EU_UPPER),
        step(f"eu(F) >= {rep.min_s1} + {rep.min_s2} + {setup.W.b3_ambient} + 2*{setup.C.p_a} + 1 - 5",
             "eu(F)", ">=", rep.lower, EU_FORMULA),
        step("upper bound against lower bound", rep.upper, "<", rep.lower),
    )
    return Certificate(entry or _label(setup.W, setup.C), steps, "Excluded", (0, 1))


def p3_genus2_certificate(entry: str = "") -> Certificate:
    """p_a = 2 on P3: the window is tight, S2 is the elliptic cone and no
    irreducible genus-2 class lies on its resolution."""
    setup = make_setup(AMBIENTS["P3"], CurveData(2, 5))
    rep = imprimitive_window(setup)
    S = RuledSurface(1, 3)
    sols = genus_equation_solutions(S, 2, 10, 10)
    pairings = [intersect(S, RuledClass(a, b), SECTION) for a, b in sols]
    irreducible = sum(1 for p in pairings if p >= 0)
    steps = [
        step("eu(F) <= 1 + (S1^2.S2)", "eu(F)", "<=", rep.upper, EU_UPPER),
        step("eu(F) >= 2p_a(C)", "eu(F)", ">=", rep.lower, EU_FORMULA),
        step("slack of the window", rep.upper - rep.lower, "=", 0),
        step("tight window forces eu(S2) = 1: S2 is the elliptic cone", "eu(S2)", "=", 1, DP_EULER),
        step("genus formula (2b-3a)(a-1) = 2 has two solutions", len(sols), "=", 2,
             fact("hw81-elliptic-cone")),
    ]
    for (a, b), p in zip(sols, pairings):
        steps.append(step(f"({a}C0+{b}f).C0 is negative, so the class contains C0", p, "<", 0))
    steps += [
        step("irreducible genus-2 classes on the resolution", "#irreducible genus-2 classes", "=",
             irreducible, cite("negative pairing with C0", "(D.C0) < 0 => C0 < D")),
        step("C is irreducible of genus 2", "#irreducible genus-2 classes", ">=", 1,
             cite("irreducibility of C", "p_a(C) = 2")),
    ]
    n = len(steps)
    return Certificate(entry or "P3, genus 2", tuple(steps), "Excluded", (n - 2, n - 1))


def _shift(cert: Certificate, offset: int, label: str) -> Case:
    i, j = cert.contradiction
    return Case(label, cert.steps, (offset + i, offset + j))


def _quintic_cases(offset: int) -> list:
    """Cases of the elliptic quintic on P3; indices are relative to a parent
    with `offset` steps of which step 0 is eu(F) <= 4."""
    cases = []
    # S2 not a cone: eu(F) = 4, F is three concurrent lines on S1 = P2.
    common = [
        step("S2 is not a cone", "eu(S2)", ">=", 3, DP_EULER),
        step("eu(F) >= eu(S2) + 1", "eu(F)", ">=", 4, EU_FORMULA),
        step("equality: F is three lines through one point of S1 = P2", "#concurrent lines in F", "=", 3,
             cite("F in |O_P2(3)| with eu(F) = 4", "B1(F) = 0, B2(F) = 3")),
    ]
    normal = common + [
        step("those lines are (-1)-curves of S2 meeting in a point", "#concurrent (-1)-triples on S2", ">=", 1,
             cite("lines on a cubic surface", "(l . -K_S2) = 1")),
        step("no concurrent triple of (-1)-curves", "#concurrent (-1)-triples on S2", "=", 0,
             fact("qi02-cubic-no-concurrent-triple")),
    ]
    k = offset + len(normal)
    cases.append(Case("S2 normal, not a cone", tuple(normal), (k - 2, k - 1)))
    chk = class_c_conductor_check(3)
    nonnormal = common + [
        step("S2 is of class (C) with reducible conductor", "[S2 of class C]", "=", 1, fact("af83-classes")),
        step("degree-one classes against Sigma + 2f on F1", len(chk.degree_one_classes), "=", 2),
        step("the non-conductor one is the fibre", int(chk.conclusion), "=", 1),
        step("B2(D) < d for D in |-K| on class (C), d = 3", "B2(F)", "<=", 2,
             fact("af83-class-c-conductor")),
        step("F is three lines", "B2(F)", "=", 3, cite("F is three lines", "B2(F) = 3")),
    ]
    k = offset + len(nonnormal)
    cases.append(Case("S2 non-normal, not a cone", tuple(nonnormal), (k - 2, k - 1)))
    cone = elliptic_quintic_cone_exclusion("P3")
    cases.append(_shift(cone, offset, "S2 a cone"))
    return cases


def p3_quintic_certificate(entry: str = "") -> Certificate:
    rep = imprimitive_window(make_setup(AMBIENTS["P3"], CurveData(1, 5)))
    steps = (
        step("eu(F) <= 1 + (S1^2.S2)", "eu(F)", "<=", rep.upper, EU_UPPER),
        step("offset eu(S1) + B3 + 2p_a + 1 - 5 with S1 = P2", 3 + 0 + 2 + 1 - 5, "=", 1),
    )
    return Certificate(entry or "P3, elliptic quintic", steps, "Excluded", None,
                       tuple(_quintic_cases(len(steps))))


def q3_quintic_certificate(entry: str = "") -> Certificate:
    """Same class viewed from its blow-up of P3; the P3 argument is replayed."""
    rep = imprimitive_window(make_setup(AMBIENTS["P3"], CurveData(1, 5)))
    steps = (
        step("eu(F) <= 1 + (S1^2.S2) for the P3 contraction", "eu(F)", "<=", rep.upper, EU_UPPER),
        step("V is also the blow-up of P3 along an elliptic quintic", "[V = Bl P3]", "=", 1,
             fact("ma95-no17-p3")),
    )
    return Certificate(entry or "Q3, elliptic quintic", steps, "Excluded", None,
                       tuple(_quintic_cases(len(steps))))


def _ruling_cycle_b1() -> int:
    """Four rulings of |O(2,2)| on P1xP1, two from each family: cycle rank."""
    curves = [(1, 0), (1, 0), (0, 1), (0, 1)]
    edges = sum(1 for a, b in itertools.combinations(curves, 2) if a[0] * b[1] + a[1] * b[0] > 0)
    return edges - len(curves) + 1


def betti_cases(upper_b2f: int, genus: int, eu_s1: int):
    """(B2(F), B2(S2), N1) with B2(F) = B2(S2) + N1 + 2g - 1,
    1 + B2(F) <= 1 + upper and 1 + B2(F) >= eu_s1 + (2 + B2(S2)) + 2g - 4."""
    out = []
    for b2s in range(1, 10):
        for n1 in range(1, 10):
            b2f = b2s + n1 + 2 * genus - 1
            if b2f <= upper_b2f and 1 + b2f >= eu_s1 + 2 + b2s + 2 * genus - 4:
                out.append((b2f, b2s, n1))
    return out


def q3_quartic_certificate(entry: str = "") -> Certificate:
    setup = make_setup(AMBIENTS["Q3"], CurveData(1, 4))
    rep = imprimitive_window(setup)
    sols = betti_cases(setup.s1sq_s2, 1, 3)
    b2f_vals = sorted({s[0] for s in sols})
    max_b2s = {v: max(s[1] for s in sols if s[0] == v) for v in b2f_vals}
    steps = (
        step("eu(F) <= 1 + (S1^2.S2)", "eu(F)", "<=", rep.upper, EU_UPPER),
        step("S2 is normal and rational", "[S2 normal rational]", "=", 1, fact("hw81-rdp")),
        step("S1 is P1xP1 or the quadric cone", "#hyperplane section types", "=", 2,
             cite("hyperplane sections of Q3", "S1 in {P1xP1, Q2_0}")),
    )
    off = len(steps)
    b1 = _ruling_cycle_b1()
    f0 = (
        step("eu(S1) = eu(P1xP1)", "eu(S1)", "=", 4, DP_EULER),
        step("eu(F) >= eu(S1) + eu(S2) + 2p_a - 4 >= 4 + 3 - 2", "eu(F)", ">=", 5, EU_FORMULA),
        step("B1 of four rulings forming a cycle", b1, "=", 1),
        step("B2(F) = 4 forces B1(F) = 1, so eu(F) <= 1 + 4 - 1", "eu(F)", "<=", 4,
             cite("F in |O(2,2)| on P1xP1", "eu(F) = 1 - B1(F) + B2(F)")),
    )
    cases = [Case("S1 = P1xP1", f0, (off + 1, off + 3))]
    cone_pre = (
        step("Q3 minus the quadric cone is A3", "[W - S1 = A3]", "=", 1, fact("fur93-complement")),
        step("B2(F) values allowed by the Betti formula", len(b2f_vals), "=", 2),
    )
    c4 = cone_pre + (
        step("B2(S2) bound when B2(F) = 4", max_b2s.get(4, -1), "<=", 2),
        step("four lines of F through the vertex of Q2_0", "#concurrent (-1)-quadruples on S2", ">=", 1,
             fact("cone-lines-concurrent")),
        step("no four concurrent (-1)-curves when B2(S2) <= 2", "#concurrent (-1)-quadruples on S2", "=", 0,
             fact("qi02-quartic-no-concurrent-four")),
    )
    k = off + len(c4)
    cases.append(Case("S1 = Q2_0, B2(F) = 4", c4, (k - 2, k - 1)))
    c3 = cone_pre + (
        step("B2(S2) when B2(F) = 3", max_b2s.get(3, -1), "=", 1),
        step("F is three lines, each a (-1)-curve on S2", "#(-1)-curves on S2", ">=", 3,
             cite("lines of F", "(l . -K_S2) = 1")),
        step("at most two (-1)-curves when B2(S2) = 1", "#(-1)-curves on S2", "<=", 2,
             fact("qi02-quartic-two-curves")),
    )
    k = off + len(c3)
    cases.append(Case("S1 = Q2_0, B2(F) = 3", c3, (k - 2, k - 1)))
    return Certificate(entry or "Q3, elliptic quartic", steps, "Excluded", None, tuple(cases))


def v5_ci_certificate(entry: str = "") -> Certificate:
    setup = make_setup(AMBIENTS["V5"], CurveData(1, 5), True)
    d = setup.s1sq_s2
    sols = betti_cases(d, 1, 3)
    b2f_vals = sorted({s[0] for s in sols})
    steps = (
        step("1 + B2(F) <= 1 + (S1^2.S2)", "B2(F)", "<=", d, EU_UPPER),
        step("S2 is normal and rational", "[S2 normal rational]", "=", 1, fact("hw81-rdp")),
        step(f"no cones in degree {d}", int(cone_embedding_obstruction(d)), "=", 1),
    )
    off = len(steps)
    cases = []
    # eu(S1) >= 4 is impossible.
    lo = 4 + 3 - 3
    a = (
        step("1 + B2(F) >= eu(S1) + eu(S2) - 2 with eu(S1) >= 4, eu(S2) = 3", "B2(F)", ">=", lo, EU_FORMULA),
        step("components of degree sum 5, at least 2*4 - 5 of them lines", 2 * lo - d, "=", 3),
        step("F has at least three lines on S2", "#lines on S2", ">=", 3, cite("lines of F", "(l . S1) = 1")),
        step("eu(S2) = 3 gives one line", "#lines on S2", "=", 1, fact("qi02-quintic-one-line")),
    )
    k = off + len(a)
    cases.append(Case("eu(S1) >= 4, eu(S2) = 3", a, (k - 2, k - 1)))
    b = (
        step("1 + B2(F) >= 4 + 4 - 2", "B2(F)", ">=", 4 + 4 - 3, EU_FORMULA),
        step("B2(F) = 5 means five lines on S2", "#lines on S2", ">=", 5, cite("degree count", "5 = 1+1+1+1+1")),
        step("eu(S2) = 4 gives at most three lines", "#lines on S2", "<=", 3, fact("qi02-quintic-three-lines")),
    )
    k = off + len(b)
    cases.append(Case("eu(S1) >= 4, eu(S2) >= 4", b, (k - 2, k - 1)))
    eu3 = (
        step("eu(S1) = 3 from the two cases above", "eu(S1)", "=", 3, cite("claim", "eu(S1) = 3")),
        step("V5 minus S1 is A3", "[W - S1 = A3]", "=", 1, fact("fur93-complement")),
        step("B2(F) values allowed by the Betti formula", len(b2f_vals), "=", 3),
    )
    chk = class_c_conductor_check(5)
    c5n = eu3 + (
        step("B2(F) = 5: F is five lines on S1", "#lines on S1", ">=", 5, cite("degree count", "5 = 1+1+1+1+1")),
        step("normal S1 with eu = 3 has one line", "#lines on S1", "=", 1, fact("qi02-quintic-one-line")),
    )
    k = off + len(c5n)
    cases.append(Case("B2(F) = 5, S1 normal", c5n, (k - 2, k - 1)))
    c5c = eu3 + (
        step("non-normal S1 is of class (C)", "[S1 of class C]", "=", 1, fact("af83-classes")),
        step("the non-conductor degree-one class on F3 is the fibre", int(chk.conclusion), "=", 1),
        step("B2(D) < 5 for D in |-K| on class (C)", "B2(F)", "<=", 4, fact("af83-class-c-conductor")),
        step("case hypothesis", "B2(F)", "=", 5, cite("case", "B2(F) = 5")),
    )
    k = off + len(c5c)
    cases.append(Case("B2(F) = 5, S1 non-normal", c5c, (k - 2, k - 1)))
    c4n = eu3 + (
        step("four components of degree sum 5: three lines and a conic", 2 * 4 - d, "=", 3),
        step("F gives three lines on S1", "#lines on S1", ">=", 3, cite("lines of F", "(l . S2) = 1")),
        step("normal S1 with eu = 3 has one line", "#lines on S1", "=", 1, fact("qi02-quintic-one-line")),
    )
    k = off + len(c4n)
    cases.append(Case("B2(F) = 4, S1 normal", c4n, (k - 2, k - 1)))
    c4c = eu3 + (
        step("four components of degree sum 5: one is a conic", d - 3, "=", 2),
        step("F gives a conic on S1", "#conics on S1", ">=", 1, cite("conic of F", "(q . S2) = 2")),
        step("non-normal S1 contains no conic", "#conics on S1", "=", 0, fact("ki05-no-conic")),
    )
    k = off + len(c4c)
    cases.append(Case("B2(F) = 4, S1 non-normal", c4c, (k - 2, k - 1)))
    n1 = [s for s in sols if s[0] == 3]
    c3 = eu3 + (
        step("B2(F) = 3 forces B2(S2) = 1 and N1 = 1", len(n1), "=", 1),
        step("the unique (-1)-curve of S2 carries its A4 point p1", "#(-1)-curves on S2", "=", 1,
             fact("qi02-quintic-unique-curve")),
        step("N1 = 1, so C meets F in one point p2; B1(F) = 0 makes p2 the only point where "
             "components of F meet, hence p1 = p2 lies on C",
             "#singular points of S2 on C", ">=", 1, BETTI_F),
        step("smooth Cartier divisor C contains a singular point", "#singular points of S2 on C", "=", 0,
             cite("C is a smooth Cartier divisor on S2", "Sing(S2) n C = {}")),
    )
    k = off + len(c3)
    cases.append(Case("B2(F) = 3", c3, (k - 2, k - 1)))
    return Certificate(entry or "V5, complete intersection curve", steps, "Excluded", None, tuple(cases))


def refined_exclusions(setup: ImprimitiveSetup, entry: str = "") -> Optional[Certificate]:
    if not imprimitive_window(setup).feasible:
        raise InputError("refined exclusions only apply inside the window")
    W, C = setup.W.name, setup.C
    if (C.p_a, C.degree) == (1, 5) and W == "P3":
        return p3_quintic_certificate(entry)
    if (C.p_a, C.degree) == (1, 5) and W == "Q3":
        return q3_quintic_certificate(entry)
    if (C.p_a, C.degree) == (1, 4) and W == "Q3":
        return q3_quartic_certificate(entry)
    if W == "V5" and setup.complete_intersection:
        return v5_ci_certificate(entry)
    return None


def menu_certificate(setup: ImprimitiveSetup, entry: str = "") -> Certificate:
    steps = (
        step("blow-up centres on this ambient", f"[C in menu of {setup.W.name}]", "=", 0,
             fact("mm81-curve-menus")),
        step("the class is assumed to be a Fano 3-fold with B2 = 2", f"[C in menu of {setup.W.name}]",
             "=", 1, cite("catalog entry", "B2(V) = 2")),
    )
    return Certificate(entry or _label(setup.W, setup.C), steps, "Excluded", (0, 1))


def screen_blowup(setup: ImprimitiveSetup, menu=None, entry: str = "") -> Optional[Certificate]:
    """Exclusion certificate for V = Bl_C W, or None when the blow-up passes."""
    W, C = setup.W, setup.C
    if W.name in ("V1", "V2", "V3", "V4"):
        return vd_certificate(W, entry)
    if not imprimitive_window(setup).feasible:
        return window_certificate(setup, entry)
    if W.name == "P3" and C.p_a == 2:
        return p3_genus2_certificate(entry)
    refined = refined_exclusions(setup, entry)
    if refined is not None:
        return refined
    if menu is not None and (C.p_a, C.degree) not in menu:
        return menu_certificate(setup, entry)
    return None


def menu_sweep(catalog: Catalog, ambient: str) -> dict:
    """Screen every curve on the ambient's menu; map (p_a, d) -> verdict."""
    W = AMBIENTS[ambient]
    menu = catalog.menu(ambient) or set()
    out = {}
    for p, d in sorted(menu):
        s = make_setup(W, CurveData(p, d), ambient == "V5" and p == 1)
        out[(p, d)] = "Excluded" if screen_blowup(s) else "Admissible"
    return out


# --- primitive certificates ------------------------------------------------


def _boundary(entry: MMEntry):
    """(D1, D2, -K) in the extremal basis; D1 is the row containing H1 when a
    unit row exists."""
    mu1, mu2 = entry.lengths
    mats = solve_boundary_decomposition(mu1, mu2)
    if not mats:
        raise InputError(f"No.{entry.number}: no boundary decomposition")
    forced = [m for m in mats if [1, 0] in m] or mats
    m = forced[0]
    if m[0] != [1, 0] and [1, 0] in m:
        m = [m[1], m[0]]
    return DivisorClass(*m[0]), DivisorClass(*m[1]), anticanonical_class(mu1, mu2), len(mats)


def _ledger_steps(ed1: int, ed2: int, b3: int, upper: int, upper_step):
    led = euler_ledger(ed1, ed2, b3)
    return [
        upper_step,
        step(f"ledger {ed1} + {ed2} + {b3} - 5", "eu(D1 n D2)", ">=", led, LEDGER),
        step("final comparison", upper, "<", led),
    ]


def _no2(entry: MMEntry) -> Certificate:
    D1, D2, K, _ = _boundary(entry)
    tp = triple_product(entry.form, D1, D2, K)
    ed1, ed2 = 2 * 3 - 5, 2 * 4 - (1 + 2 + 4)
    steps = [
        step("2 eu(P2) - 5 for the plane quartic branch curve", ed1, "=", 1),
        step("eu(D1) >= 6 - 5", "eu(D1)", ">=", ed1, DOUBLE_COVER),
        step("2 eu(P1xP1) - (1 + 2 + 4) for the (2,4) branch curve", ed2, "=", 1),
        step("eu(D2) >= 8 - (1 + 2 + 4)", "eu(D2)", ">=", ed2, DOUBLE_COVER),
        step("(D1.D2.-K)", tp, "=", 2),
    ]
    up = step("eu(D1 n D2) <= 2(D1.D2.-K)", "eu(D1 n D2)", "<=", 2 * tp, INTERSECTION_BOUND)
    steps += _ledger_steps(ed1, ed2, entry.b3, 2 * tp, up)
    return Certificate(f"No.{entry.number}", tuple(steps), "Excluded", (5, 6))


def _no6(entry: MMEntry) -> Certificate:
    D1, D2, K, _ = _boundary(entry)
    tp = triple_product(entry.form, D1, D2, K)
    disc = entry.contractions[0].disc_degree or 6
    special = disc - 1
    degenerate = 3 * (2 - special) + 2 * special
    ed = min(2 * 2, degenerate)
    steps = [
        step("smooth general fibre: eu(P1) x eu(P1)", 2 * 2, "=", 4),
        step(f"degenerate case: 3 x (eu(P1) - {special}) + 2 x {special}", degenerate, "=", 1),
        step("eu(D1) >= 1", "eu(D1)", ">=", ed, cite("conic bundle Euler count",
                                                      "eu(D) >= 3(eu(P1) - s) + 2s, s <= disc - 1")),
        step("eu(D2) >= 1", "eu(D2)", ">=", ed, cite("conic bundle Euler count",
                                                      "eu(D) >= 3(eu(P1) - s) + 2s, s <= disc - 1")),
        step("(D1.D2.-K)", tp, "=", 4),
    ]
    up = step("eu(D1 n D2) <= 2(D1.D2.-K)", "eu(D1 n D2)", "<=", 2 * tp, INTERSECTION_BOUND)
    steps += _ledger_steps(ed, ed, entry.b3, 2 * tp, up)
    return Certificate(f"No.{entry.number}", tuple(steps), "Excluded", (5, 6))


def _no8(entry: MMEntry) -> Certificate:
    ed1, ed2, inter = 2 * 3 - 5, 2 * 4 - 6, 2 * 2
    steps = [
        step("2 eu(P2) - 5 for the plane quartic branch curve", ed1, "=", 1),
        step("eu(D1) >= 6 - 5", "eu(D1)", ">=", ed1, DOUBLE_COVER),
        step("2 eu(F1) - 6 for the branch curve in |2Sigma + 4f|", ed2, "=", 2),
        step("eu(D2) >= 8 - 6", "eu(D2)", ">=", ed2, DOUBLE_COVER),
        step("g(D1) n g(D2) = P1: 2 eu(P1)", inter, "=", 4),
    ]
    up = step("eu(D1 n D2) <= 2 eu(P1)", "eu(D1 n D2)", "<=", inter, DOUBLE_COVER)
    steps += _ledger_steps(ed1, ed2, entry.b3, inter, up)
    return Certificate(f"No.{entry.number}", tuple(steps), "Excluded", (5, 6))


def _no18(entry: MMEntry) -> Certificate:
    form = entry.form
    H1, H2 = DivisorClass(1, 0), DivisorClass(0, 1)
    D1, D2 = H1 + H2, H2
    K = anticanonical_class(*entry.lengths)
    if D1 + D2 != K:
        raise InputError("No.18 boundary classes do not add up to -K")
    A = H1 + H2
    tp = triple_product(form, D1, D2, A)
    up = 1 + tp
    b3 = entry.b3
    e_hi = up - 5 - b3 + 5  # eu(D2) >= 5 branch
    e_eq = 4 - 4 - b3 + 5  # eu(D2) = 4 branch
    steps = (
        step("(D1.D2.(H1+H2))", tp, "=", 4),
        step("eu(D1 n D2) <= 1 + B2 <= 1 + (D1.D2.(H1+H2))", "eu(D1 n D2)", "<=", up,
             cite("ampleness bound", "eu <= 1 + B2 <= 1 + (D1.D2.(H1+H2))")),
        step("(H1.H2.D2) is nonzero, so H1|D2 and H2|D2 differ", triple_product(form, H1, H2, D2), "=", 2),
        step("D2 is normal with eu >= 4, or of class (D) with eu = 4", "eu(D2)", ">=", 4,
             fact("af83-class-d")),
        step("eu(D2) = 4 rules out four (-1)-curves with B1 = 0", "eu(D1 n D2) when eu(D2) = 4", "<=", 4,
             fact("qi02-quartic-four-curves-b1")),
        step(f"eu(D2) >= 5: eu(D1) <= {up} - 5 - {b3} + 5", e_hi, "<=", 1),
        step(f"eu(D2) = 4: eu(D1) <= 4 - 4 - {b3} + 5", e_eq, "<=", 1),
        step("both branches of the ledger", "eu(D1)", "<=", max(e_hi, e_eq), LEDGER),
        step("normalization analysis (cases below)", "eu(D1)", ">=", 2,
             cite("case analysis", "min over cases of eu(D1) = 2")),
        step("(H1.H2.D1)", triple_product(form, H1, H2, D1), "=", 2),
        step("(H2^2.(H1+H2)) = (-sigma^*K)^2", triple_product(form, H2, H2, A), "=", 2),
        step("final comparison", max(e_hi, e_eq), "<", 2),
    )
    rep = no18_invariant_solver()
    normal = (
        step("conic bundle with smooth general fibre: eu(P1) x eu(P1)", 2 * 2, "=", 4),
        step("eu(D1) >= 4", "eu(D1)", ">=", 4, cite("conic bundle", "eu >= eu(P1) x eu(P1)")),
    )
    f0 = (
        step("F0: eu(F0) - eu(E_bar) + eu(E) with E_bar <= Sigma0 + f0", 4 - 3 + 2, "=", 3),
        step("eu(D1) >= 3", "eu(D1)", ">=", 3, fact("af83-classes")),
    )
    f2i = (
        step("F2, irreducible conductor: 4 - 2 + 2", 4 - 2 + 2, "=", 4),
        step("eu(D1) = 4", "eu(D1)", ">=", 4, cite("conductor maps birationally to P1", "E = P1")),
    )
    f2r = (
        step("F2, reducible conductor Sigma2 + C1 + C2: 4 - 4 + 3", 4 - 4 + 3, "=", 3),
        step("eu(D1) >= 3", "eu(D1)", ">=", 3, cite("image of the conductor", "eu(E) >= 3")),
    )
    ell = (
        step("base genus at most one", "g(Z)", "<=", 1, fact("mo82-nonnormal-wdp")),
        step("e >= -1 on an elliptic ruled surface", "e", ">=", -1, fact("har77-e-bound")),
        step("survivors of the invariant solver", len(rep.survivors), "=", 1),
        step("the surviving invariant", rep.survivors[0] if rep.survivors else -99, "=", 2),
        step("eu(D1_bar) - eu(C0) + eu(P1) = 0 - 0 + 2", 0 - 0 + 2, "=", 2),
        step("eu(D1) = 2", "eu(D1)", ">=", 2, cite("conductor image is a conic component", "E = P1")),
    )
    cases = (
        Case("D1 normal, or conductor . H1 = 0", normal),
        Case("Z rational, normalization F0", f0),
        Case("Z rational, normalization F2, irreducible conductor", f2i),
        Case("Z rational, normalization F2, reducible conductor", f2r),
        Case("Z elliptic", ell),
    )
    return Certificate(f"No.{entry.number}", steps, "Excluded", (7, 8), cases)


def _admissible_primitive(entry: MMEntry) -> Certificate:
    D1, D2, K, count = _boundary(entry)
    lat = entry.lattice()
    steps = [
        step("unimodular boundary decompositions", count, ">=", 1),
        step("(-K)^3", lat.degree, "=", entry.degree),
        step("D1 + D2 = -K", int(D1 + D2 == K), "=", 1),
    ]
    if entry.model == "proj-bundle-o-o2":
        # (H, E) basis with H = xi, E = xi - 2F; form (4, 0, 0, 4).
        he = TripleForm(4, 0, 0, 4, BLOWUP)
        a, b = half_integer_class_solve(he, 6, -2)
        steps += [
            step("D2 = aH + bE: coefficient of H", a, "=", "3/2"),
            step("D2 = aH + bE: coefficient of E", b, "=", "-1/2"),
            step("aH + bE = (a + b) xi - 2b F: xi coefficient", a + b, "=", 1),
            step("aH + bE = (a + b) xi - 2b F: F coefficient", -2 * b, "=", 1),
        ]
    return Certificate(f"No.{entry.number}", tuple(steps), "Admissible")


_PRIMITIVE = {
    "double-cover-p1p2-24": _no2,
    "divisor-p2p2-22": _no6,
    "double-cover-v7": _no8,
    "double-cover-p1p2-22": _no18,
}


def primitive_certificate(entry: MMEntry) -> Certificate:
    if not entry.primitive:
        raise InputError(f"No.{entry.number} is not primitive")
    v = check_length_filter(*entry.lengths, entry.p1xp2, f"No.{entry.number}")
    if v.status == "Exclude":
        return v.certificate
    fn = _PRIMITIVE.get(entry.model)
    if fn is not None:
        return fn(entry)
    return _admissible_primitive(entry)


# --- pipeline --------------------------------------------------------------


def _admissible_imprimitive(entry: MMEntry) -> Certificate:
    steps = []
    for c in entry.blowups:
        s = make_setup(c.ambient, c.curve, c.complete_intersection)
        rep = imprimitive_window(s)
        steps.append(step(f"window for {_label(c.ambient, c.curve)}: lower <= upper", rep.lower, "<=", rep.upper))
    return Certificate(f"No.{entry.number}", tuple(steps), "Admissible")


@dataclass
class ScreenResult:
    number: int
    verdict: str
    stage: str
    certificate: Certificate


def screen_entry(entry: MMEntry, catalog: Optional[Catalog] = None):
    """(verdict, certificate) for one catalog entry."""
    r = screen_result(entry, catalog)
    return r.verdict, r.certificate


def screen_result(entry: MMEntry, catalog: Optional[Catalog] = None) -> ScreenResult:
    n = entry.number
    name = f"No.{n}"
    v = check_length_filter(*entry.lengths, entry.p1xp2, name)
    if v.status == "Exclude":
        return _finish(n, v.certificate, "length filter", catalog)
    if entry.primitive:
        return _finish(n, primitive_certificate(entry), "primitive", catalog)
    for c in entry.blowups:
        s = make_setup(c.ambient, c.curve, c.complete_intersection)
        menu = catalog.menu(c.ambient.name) if catalog is not None else None
        cert = screen_blowup(s, menu, f"{name}: {_label(c.ambient, c.curve)}")
        if cert is not None:
            stage = "window" if cert.contradiction and not cert.cases else "refined"
            return _finish(n, cert, stage, catalog)
    return _finish(n, _admissible_imprimitive(entry), "admissible", catalog)


def _finish(n, cert, stage, catalog) -> ScreenResult:
    if cert.verdict == "Admissible" and catalog is not None:
        recs = tuple(r.to_dict() for r in constructions_for(n, catalog))
        cert = Certificate(cert.entry, cert.steps, cert.verdict, cert.contradiction, cert.cases, recs)
    return ScreenResult(n, cert.verdict, stage, cert)


@dataclass
class Report:
    results: Dict[int, ScreenResult]
    multiplicity: Dict[int, int] = field(default_factory=dict)
    construction_mismatch: tuple = ()

    @property
    def admissible(self) -> list:
        return sorted(n for n, r in self.results.items() if r.verdict == "Admissible")

    @property
    def excluded(self) -> list:
        return sorted(n for n, r in self.results.items() if r.verdict == "Excluded")

    def to_dict(self) -> dict:
        return {
            "admissible": self.admissible,
            "excluded": self.excluded,
            "stages": {str(n): self.results[n].stage for n in sorted(self.results)},
            "admissible_count": len(self.admissible),
            "multiplicity": {str(n): self.multiplicity[n] for n in sorted(self.multiplicity)},
            "construction_mismatch": list(self.construction_mismatch),
            "certificates": [self.results[n].certificate.to_dict() for n in sorted(self.results)],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, ensure_ascii=False)


def classify_all(catalog: Catalog, facts: Optional[Iterable[str]] = None,
                 entries: Optional[Iterable[int]] = None) -> Report:
    """Screen every entry (or the selected ones) and revalidate each
    certificate; the first invalid step raises."""
    if facts is None:
        facts = load_facts()
    known = set(facts)
    wanted = set(entries) if entries is not None else None
    results = {}
    for e in catalog:
        if wanted is not None and e.number not in wanted:
            continue
        r = screen_result(e, catalog)
        validate(r.certificate, known)
        results[e.number] = r
    mult = {}
    mismatch = []
    for n, r in results.items():
        recs = constructions_for(n, catalog)
        if r.verdict == "Admissible":
            mult[n] = len(constructions_for(n, catalog, supplementary=False))
        if (r.verdict == "Admissible") != bool(recs):
            mismatch.append(n)
    return Report(results, mult, tuple(sorted(mismatch)))
