import itertools

from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from fanobound.lattice import DivisorClass, TripleForm, euler_ledger, triple_product
from fanobound.polyverify import Poly, jacobian, substitute
from fanobound.surfaces import RuledClass, RuledSurface, arithmetic_genus, canonical_class, intersect

from oracles import triple_product_27

small = st.integers(-10, 10)
classes = st.tuples(small, small)
forms = st.tuples(*(st.integers(-20, 20) for _ in range(4)))

SLOW = dict(deadline=None, suppress_health_check=[HealthCheck.too_slow])


@settings(max_examples=1000, **SLOW)
@given(forms, classes, classes, classes)
def test_triple_product_symmetric(f, a, b, c):
    form = TripleForm(*f)
    xs = [DivisorClass(*a), DivisorClass(*b), DivisorClass(*c)]
    want = triple_product_27(f, a, b, c)
    for p in itertools.permutations(xs):
        assert triple_product(form, *p) == want


@st.composite
def surfaces(draw):
    g = draw(st.integers(0, 2))
    e = draw(st.integers(0 if g == 0 else -g, 5))
    return RuledSurface(g, e)


@settings(max_examples=1000, **SLOW)
@given(surfaces(), st.integers(-20, 20), st.integers(-20, 20))
def test_genus_parity(S, a, b):
    c = RuledClass(a, b)
    assert intersect(S, c, c + canonical_class(S)) % 2 == 0
    assert arithmetic_genus(S, c).denominator == 1


@settings(max_examples=200, **SLOW)
@given(surfaces())
def test_canonical_invariants(S):
    K = canonical_class(S)
    assert intersect(S, K, RuledClass(0, 1)) == -2
    assert intersect(S, K, K) == 8 * (1 - S.g)


@settings(max_examples=500, **SLOW)
@given(st.integers(-100, 100), st.integers(-100, 100), st.integers(0, 100))
def test_euler_ledger_identity(a, b, c):
    assert euler_ledger(a, b, c) + 5 - a - b - c == 0


VARS = ("a", "b", "c", "d")


@st.composite
def polys(draw, max_terms=4):
    n = draw(st.integers(0, max_terms))
    terms = {}
    for _ in range(n):
        exps = draw(st.lists(st.integers(0, 2), min_size=4, max_size=4).filter(lambda v: sum(v) <= 5))
        mono = tuple((v, e) for v, e in zip(VARS, exps) if e)
        terms[mono] = draw(st.integers(-5, 5))
    return Poly(terms)


@st.composite
def substitutions(draw):
    return {v: draw(polys(max_terms=2)) for v in VARS}


@settings(max_examples=500, **SLOW)
@given(polys(), polys(), substitutions())
def test_substitution_homomorphism(p, q, s):
    assert substitute(p * q, s) == substitute(p, s) * substitute(q, s)
    assert substitute(p + q, s) == substitute(p, s) + substitute(q, s)


@settings(max_examples=500, **SLOW)
@given(polys(), polys())
def test_leibniz(p, q):
    jp, jq, jpq = (jacobian(x, VARS) for x in (p, q, p * q))
    for dpq, dp, dq in zip(jpq, jp, jq):
        assert dpq == p * dq + q * dp


@settings(max_examples=300, **SLOW)
@given(polys(), polys())
def test_canonical_form(p, q):
    for r in (p + q, p * q, p - p):
        assert all(c != 0 for c in r.terms.values())
