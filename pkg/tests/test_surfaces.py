import pytest

from fanobound.certificate import validate
from fanobound.errors import InputError
from fanobound.surfaces import (
    FIBER,
    MIN_EULER,
    SECTION,
    DelPezzoInfo,
    RuledClass,
    RuledSurface,
    arithmetic_genus,
    canonical_class,
    class_c_conductor_check,
    cone_embedding_obstruction,
    elliptic_quintic_cone_exclusion,
    genus_equation_solutions,
    intersect,
    min_euler,
    no18_invariant_solver,
    section_contexts,
)

from oracles import elliptic_cone_genus, ruled_genus

F1, F2 = RuledSurface(0, 1), RuledSurface(0, 2)
CONE = RuledSurface(1, 3)


def test_intersect_examples():
    assert intersect(F2, SECTION, SECTION) == -2
    x = RuledClass(1, 2)
    assert intersect(F1, x, x) == 3
    assert intersect(CONE, RuledClass(1, 5), SECTION) == 2


@pytest.mark.parametrize("S, K", [(F1, (-2, -3)), (F2, (-2, -4)), (CONE, (-2, -3))])
def test_canonical_class(S, K):
    k = canonical_class(S)
    assert (k.a, k.b) == K
    assert intersect(S, k, FIBER) == -2
    assert intersect(S, k, k) == 8 * (1 - S.g)


def test_arithmetic_genus_examples():
    assert arithmetic_genus(F1, RuledClass(1, 2)) == 0
    assert arithmetic_genus(RuledSurface(0, 0), SECTION) == 0
    for a in range(0, 6):
        for b in range(0, 8):
            assert arithmetic_genus(CONE, RuledClass(a, b)) == elliptic_cone_genus(a, b)


@pytest.mark.parametrize("g, e", [(0, 0), (0, 1), (0, 3), (1, -1), (1, 0), (1, 3), (2, -2), (2, 4)])
def test_section_and_fibre_genus(g, e):
    S = RuledSurface(g, e)
    assert arithmetic_genus(S, SECTION) == g
    assert arithmetic_genus(S, FIBER) == 0
    assert arithmetic_genus(S, RuledClass(2, 3)) == ruled_genus(g, e, 2, 3)


def test_genus2_on_elliptic_cone():
    assert genus_equation_solutions(CONE, 2, 10, 10) == [(2, 4), (3, 5)]


def test_genus1_slice():
    sols = genus_equation_solutions(CONE, 1, 1, 12)
    assert sols == [(1, b) for b in range(13)]


def test_rational_classes_on_f1():
    sols = genus_equation_solutions(F1, 0, 3, 3)
    assert (1, 1) in sols and (1, 2) in sols


def test_genus_search_box_checked():
    with pytest.raises(InputError):
        genus_equation_solutions(CONE, 2, 0, 5)


def test_surface_invariants_checked():
    with pytest.raises(InputError):
        RuledSurface(0, -1)
    with pytest.raises(InputError):
        RuledSurface(1, -2)
    with pytest.raises(InputError):
        RuledSurface(-1, 0)


def test_min_euler_table():
    assert min_euler("P3-cubic") == 1
    assert min_euler("V4-hyperplane") == 3
    assert min_euler("Q3-O(1)") == 3
    assert min_euler("V5-hyperplane") == 3
    with pytest.raises(KeyError):
        min_euler("nowhere")
    assert set(section_contexts("P3")) <= set(MIN_EULER)
    with pytest.raises(KeyError):
        section_contexts("P4")


def test_cone_obstruction():
    assert cone_embedding_obstruction(4)
    assert not cone_embedding_obstruction(3)
    assert cone_embedding_obstruction(5)
    with pytest.raises(InputError):
        cone_embedding_obstruction(2)


@pytest.mark.parametrize("d", [3, 4])
def test_class_c_degree_one_classes(d):
    chk = class_c_conductor_check(d)
    assert set(chk.degree_one_classes) == {SECTION, FIBER}
    assert chk.forced == FIBER and chk.conclusion


def test_class_c_fibre_pairing_d5():
    chk = class_c_conductor_check(5)
    assert intersect(RuledSurface(0, 3), FIBER, RuledClass(1, 4)) == 1
    assert "is 1" in chk.notes[0]
    with pytest.raises(InputError):
        class_c_conductor_check(2)


def test_no18_solver():
    rep = no18_invariant_solver()
    assert rep.survivors == (2,)
    reasons = dict(rep.eliminated)
    assert "-1" in reasons[0]
    assert "odd" in reasons[1] and "odd" in reasons[3] and "odd" in reasons[-1]
    assert rep.classes[2]["conductor"] == SECTION


def test_elliptic_quintic_cone():
    cert = elliptic_quintic_cone_exclusion()
    validate(cert)
    assert cert.verdict == "Excluded"
    assert intersect(CONE, RuledClass(4, 5), RuledClass(1, 3)) == 5
    assert cert.steps[5].rhs == 2
    with pytest.raises(InputError):
        elliptic_quintic_cone_exclusion("Q3")


def test_del_pezzo_euler_rules():
    assert DelPezzoInfo(3, True, True, False, b2=7).euler_bound() == ("=", 9)
    assert DelPezzoInfo(3, True, False, True).euler_bound() == ("=", 1)
    assert DelPezzoInfo(4, False, True, True).euler_bound() == (">=", 2)
    assert DelPezzoInfo(4, False, True, False, af_class="C").euler_bound() == (">=", 3)
    with pytest.raises(InputError):
        DelPezzoInfo(2, True, True, False, b2=1)
    with pytest.raises(InputError):
        DelPezzoInfo(3, False, True, False, af_class="Z")
    with pytest.raises(InputError):
        DelPezzoInfo(3, True, True, False)
