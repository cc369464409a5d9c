import json

import pytest

from fanobound.certificate import validate
from fanobound.errors import CertificateError, FactError, InputError
from fanobound.lattice import AMBIENTS, CurveData
from fanobound.screen import (
    classify_all,
    feasible_counts,
    genus_bound,
    imprimitive_window,
    make_setup,
    menu_sweep,
    primitive_certificate,
    refined_exclusions,
    screen_entry,
    vd_certificate,
    window_equality_cases,
)

ADMISSIBLE = [20, 21, 22, 24, 25, 26, 27, 28, 29, 30, 31, 33, 34, 36]


def setup(name, p, d, ci=False):
    return make_setup(AMBIENTS[name], CurveData(p, d), ci)


@pytest.mark.parametrize("name, s1sq_s2", [("P3", 3), ("Q3", 4), ("V5", 5), ("V1", 1), ("V3", 3)])
def test_s1sq_s2(name, s1sq_s2):
    assert setup(name, 0, 1).s1sq_s2 == s1sq_s2


def test_window_examples():
    w = imprimitive_window(setup("P3", 1, 3))
    assert (w.lower, w.upper, w.feasible) == (2, 4, True)
    w = imprimitive_window(setup("V1", 0, 1))
    assert (w.lower, w.upper, w.feasible) == (40, 2, False)


def test_v4_refined_window():
    cert = vd_certificate(AMBIENTS["V4"])
    validate(cert)
    i, j = cert.contradiction
    assert cert.steps[i].rhs == 5 and cert.steps[j].rhs == 6


def test_window_monotone():
    for W in AMBIENTS.values():
        lows = [imprimitive_window(make_setup(W, CurveData(p, 1))).lower for p in range(4)]
        assert lows == sorted(lows)
    by_b3 = sorted(AMBIENTS.values(), key=lambda W: W.b3_ambient)
    for a, b in zip(by_b3, by_b3[1:]):
        if a.name.startswith("V") and b.name.startswith("V"):
            la = imprimitive_window(make_setup(a, CurveData(0, 1))).lower
            lb = imprimitive_window(make_setup(b, CurveData(0, 1))).lower
            assert la <= lb


def test_genus_bounds():
    assert genus_bound(AMBIENTS["P3"]) == 1
    assert genus_bound(setup("Q3", 0, 1)) == 1
    assert genus_bound(AMBIENTS["V5"]) == 2
    assert genus_bound(AMBIENTS["V4"]) == -1


def test_equality_cases():
    assert window_equality_cases() == {(1, 0, 0), (1, 1, 1)}
    assert not feasible_counts(0, 3, 0)
    assert feasible_counts(1, 0, 1, strict=False) and not feasible_counts(1, 0, 1)


@pytest.mark.parametrize("args", [("P3", 1, 5), ("Q3", 1, 5), ("Q3", 1, 4), ("V5", 1, 5, True)])
def test_refined_exclusions_close(args, facts):
    cert = refined_exclusions(setup(*args))
    assert cert is not None and cert.verdict == "Excluded"
    validate(cert, facts)


def test_v5_ci_final_step():
    cert = refined_exclusions(setup("V5", 1, 5, True))
    last = cert.cases[-1].steps[-1]
    assert last.desc == "smooth Cartier divisor C contains a singular point"


def test_refined_absent_elsewhere():
    assert refined_exclusions(setup("P3", 0, 3)) is None
    with pytest.raises(InputError):
        refined_exclusions(setup("V1", 0, 1))


def test_primitive_certificates(catalog, facts):
    finals = {2: (4, 37), 6: (8, 15), 8: (4, 16), 18: (1, 2)}
    for n, (a, b) in finals.items():
        cert = primitive_certificate(catalog.entry(n))
        validate(cert, facts)
        last = cert.steps[-1]
        assert (last.lhs, last.rel, last.rhs) == (a, "<", b)
    with pytest.raises(InputError):
        primitive_certificate(catalog.entry(25))


def test_no18_contradiction_is_on_eu_d1(catalog):
    cert = primitive_certificate(catalog.entry(18))
    i, j = cert.contradiction
    assert cert.steps[i].lhs == cert.steps[j].lhs == "eu(D1)"
    assert (cert.steps[i].rel, cert.steps[i].rhs) == ("<=", 1)
    assert (cert.steps[j].rel, cert.steps[j].rhs) == (">=", 2)


def test_screen_entry_examples(catalog):
    verdict, cert = screen_entry(catalog.entry(25), catalog)
    assert verdict == "Admissible"
    assert [c["type"] for c in cert.constructions] == ["A1"]
    assert screen_entry(catalog.entry(35), catalog)[0] == "Excluded"
    verdict, cert = screen_entry(catalog.entry(17), catalog)
    assert verdict == "Excluded" and cert.cases


def test_classify_all(catalog, facts):
    rep = classify_all(catalog, facts)
    assert rep.admissible == ADMISSIBLE
    assert len(rep.excluded) == 22
    assert {n for n, k in rep.multiplicity.items() if k == 2} == {22, 26}
    assert rep.construction_mismatch == ()


def test_classify_deterministic(catalog, facts):
    a = classify_all(catalog, facts).to_json()
    b = classify_all(catalog, facts).to_json()
    assert a == b
    json.loads(a)


def test_classify_missing_fact_aborts(catalog, facts):
    partial = {k: v for k, v in facts.items() if k != "qi02-quintic-one-line"}
    with pytest.raises(FactError):
        classify_all(catalog, partial)


def test_every_step_revalidates(catalog, facts):
    rep = classify_all(catalog, facts)
    for r in rep.results.values():
        for s in r.certificate.all_steps():
            s.check()


def test_menu_sweep(catalog):
    p3 = menu_sweep(catalog, "P3")
    assert p3[(1, 5)] == "Excluded"
    assert all(v == "Admissible" for k, v in p3.items() if k != (1, 5))
    q3 = menu_sweep(catalog, "Q3")
    assert q3[(1, 4)] == q3[(1, 5)] == "Excluded"


def test_tampered_certificate_detected(catalog):
    from dataclasses import replace

    _, cert = screen_entry(catalog.entry(2), catalog)
    bad = replace(cert, steps=cert.steps[:-1] + (replace(cert.steps[-1], lhs=40),))
    with pytest.raises(CertificateError):
        validate(bad)
