"""Exact multivariate polynomials over Q and triangular presentations.

Ideal membership is decided only for presentations in triangular solved
form: every relation either reads v - expr (solving v) or is the single
carried hypersurface relation.  Eliminating the solved variables turns the
question into divisibility by one polynomial, which the division algorithm
decides exactly.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterable, Mapping, Optional, Sequence

from .errors import FormatError, NameClash, ShapeError, SubstError


def _mono_mul(m1, m2):
    d = dict(m1)
    for v, e in m2:
        d[v] = d.get(v, 0) + e
    return tuple(sorted(d.items()))


class Poly:
    """Sparse polynomial: {monomial: Fraction}, monomial = sorted ((var, exp), ...)."""

    __slots__ = ("terms",)

    def __init__(self, terms: Optional[Mapping] = None):
        clean: Dict[tuple, Fraction] = {}
        for m, c in (terms or {}).items():
            key = tuple(sorted((v, e) for v, e in m if e))
            clean[key] = clean.get(key, 0) + Fraction(c)
        self.terms = {m: c for m, c in clean.items() if c}

    @classmethod
    def const(cls, c) -> "Poly":
        return cls({(): c})

    @classmethod
    def var(cls, name: str) -> "Poly":
        return cls({((name, 1),): 1})

    @staticmethod
    def _lift(x) -> "Poly":
        if isinstance(x, Poly):
            return x
        if isinstance(x, (int, Fraction)):
            return Poly.const(x)
        return NotImplemented

    def __add__(self, other):
        other = Poly._lift(other)
        if other is NotImplemented:
            return other
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = out.get(m, 0) + c
        return Poly(out)

    __radd__ = __add__

    def __neg__(self):
        return Poly({m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        other = Poly._lift(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return Poly._lift(other) - self

    def __mul__(self, other):
        other = Poly._lift(other)
        if other is NotImplemented:
            return other
        out: Dict[tuple, Fraction] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = _mono_mul(m1, m2)
                out[m] = out.get(m, 0) + c1 * c2
        return Poly(out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power")
        result, base = Poly.const(1), self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __eq__(self, other):
        other = Poly._lift(other)
        if other is NotImplemented:
            return False
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def is_zero(self) -> bool:
        return not self.terms

    def variables(self) -> tuple:
        return tuple(sorted({v for m in self.terms for v, _ in m}))

    def degree_in(self, v: str) -> int:
        return max((dict(m).get(v, 0) for m in self.terms), default=0)

    def total_degree(self) -> int:
        return max((sum(e for _, e in m) for m in self.terms), default=0)

    def coeff_of(self, v: str, k: int) -> "Poly":
        """Coefficient of v^k, as a polynomial in the other variables."""
        out = {}
        for m, c in self.terms.items():
            d = dict(m)
            if d.get(v, 0) == k:
                d.pop(v, None)
                out[tuple(sorted(d.items()))] = c
        return Poly(out)

    def _sorted_terms(self):
        names = self.variables()

        def key(item):
            d = dict(item[0])
            vec = tuple(d.get(v, 0) for v in names)
            return (sum(vec), vec)

        return sorted(self.terms.items(), key=key, reverse=True)

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for m, c in self._sorted_terms():
            mono = "*".join(v if e == 1 else f"{v}^{e}" for v, e in m)
            sign = "-" if c < 0 else "+"
            a = abs(c)
            coef = str(a) if a.denominator == 1 else f"({a})"
            if not mono:
                body = coef
            elif a == 1:
                body = mono
            else:
                body = f"{coef}*{mono}"
            parts.append((sign, body))
        first_sign, first = parts[0]
        out = ("-" if first_sign == "-" else "") + first
        for sign, body in parts[1:]:
            out += f" {sign} {body}"
        return out

    def __repr__(self):
        return f"Poly({str(self)!r})"


def derivative(p: Poly, v: str) -> Poly:
    out = {}
    for m, c in p.terms.items():
        d = dict(m)
        e = d.get(v, 0)
        if e:
            d[v] = e - 1
            out[tuple(sorted(d.items()))] = c * e
    return Poly(out)


def jacobian(p: Poly, variables: Optional[Sequence[str]] = None) -> list:
    names = list(variables) if variables is not None else list(p.variables())
    return [derivative(p, v) for v in names]


def evaluate(p: Poly, point: Mapping[str, object]) -> Fraction:
    total = Fraction(0)
    for m, c in p.terms.items():
        val = c
        for v, e in m:
            if v not in point:
                raise SubstError(f"no value for {v}")
            val *= Fraction(point[v]) ** e
        total += val
    return total


# --- text syntax -----------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z0-9_]*)|(.))")


def _tokenize(text: str):
    toks = []
    for num, name, op in _TOKEN.findall(text):
        if num:
            toks.append(("num", int(num)))
        elif name:
            toks.append(("var", name))
        elif op.strip():
            if op not in "+-*^()":
                raise FormatError(f"unexpected character {op!r} in {text!r}")
            toks.append(("op", op))
    return toks


class _Parser:
    # expr := term (('+'|'-') term)* ; term := unary ('*' unary)*
    # unary := '-' unary | power ; power := atom ('^' int)? ; atom := num | var | '(' expr ')'
    def __init__(self, text):
        self.text = text
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else (None, None)

    def take(self, kind=None, val=None):
        tok = self.peek()
        if tok[0] is None or (kind and tok[0] != kind) or (val and tok[1] != val):
            raise FormatError(f"parse error near token {self.i} in {self.text!r}")
        self.i += 1
        return tok

    def parse(self):
        if not self.toks:
            raise FormatError("empty polynomial")
        p = self.expr()
        if self.i != len(self.toks):
            raise FormatError(f"trailing input in {self.text!r}")
        return p

    def expr(self):
        p = self.term()
        while self.peek() in (("op", "+"), ("op", "-")):
            op = self.take()[1]
            q = self.term()
            p = p + q if op == "+" else p - q
        return p

    def term(self):
        p = self.unary()
        while self.peek() == ("op", "*"):
            self.take()
            p = p * self.unary()
        return p

    def unary(self):
        if self.peek() == ("op", "-"):
            self.take()
            return -self.unary()
        return self.power()

    def power(self):
        p = self.atom()
        if self.peek() == ("op", "^"):
            self.take()
            n = self.take("num")[1]
            p = p ** n
        return p

    def atom(self):
        kind, val = self.peek()
        if kind == "num":
            self.take()
            return Poly.const(val)
        if kind == "var":
            self.take()
            return Poly.var(val)
        self.take("op", "(")
        p = self.expr()
        self.take("op", ")")
        return p


def parse(text: str) -> Poly:
    return _Parser(text).parse()


# --- substitutions ---------------------------------------------------------


@dataclass(frozen=True)
class Substitution:
    images: Mapping[str, Poly]

    @classmethod
    def identity(cls, variables: Iterable[str]) -> "Substitution":
        return cls({v: Poly.var(v) for v in variables})

    @classmethod
    def from_text(cls, variables: Iterable[str], changes: Mapping[str, str]) -> "Substitution":
        """Identity on `variables` except for the given textual images."""
        images = {v: Poly.var(v) for v in variables}
        for v, text in changes.items():
            if v not in images:
                raise SubstError(f"{v} is not a variable of the source")
            images[v] = parse(text)
        return cls(images)

    def apply(self, p: Poly) -> Poly:
        return substitute(p, self)

    def then(self, other: "Substitution") -> "Substitution":
        """Composite ring map: first self, then other (v -> other(self(v)))."""
        return Substitution({v: substitute(img, other) for v, img in self.images.items()})


def substitute(p: Poly, s) -> Poly:
    images = s.images if isinstance(s, Substitution) else s
    out = Poly()
    cache: Dict[tuple, Poly] = {}
    for m, c in p.terms.items():
        term = Poly.const(c)
        for v, e in m:
            if v not in images:
                raise SubstError(f"substitution undefined on {v}")
            key = (v, e)
            if key not in cache:
                cache[key] = images[v] ** e
            term = term * cache[key]
        out = out + term
    return out


# --- presentations ---------------------------------------------------------


@dataclass(frozen=True)
class Presentation:
    variables: tuple
    relations: tuple
    triangular_solved: tuple = ()  # ((var, expr), ...)
    notes: tuple = field(default=())

    def ring_variables(self) -> tuple:
        return self.variables


def _linear_unit_solution(r: Poly, v: str) -> Optional[Poly]:
    """If r = c*v + rest with c a nonzero constant and v not in rest,
    return expr with v = expr."""
    if r.degree_in(v) != 1:
        return None
    c = r.coeff_of(v, 1)
    if c.variables() or c.is_zero():
        return None
    rest = r.coeff_of(v, 0)
    return rest * (Fraction(-1) / c.terms[()])


def _acyclic(solved: Mapping[str, Poly]) -> bool:
    state = {}

    def visit(v):
        if state.get(v) == 1:
            return False
        if state.get(v) == 2:
            return True
        state[v] = 1
        for w in solved[v].variables():
            if w in solved and not visit(w):
                return False
        state[v] = 2
        return True

    return all(visit(v) for v in solved)


def solved_form(pres: Presentation):
    """Return (solved dict, carried relation or None); ShapeError otherwise."""
    solved: Dict[str, Poly] = {}
    carried = []
    if pres.triangular_solved:
        for v, expr in pres.triangular_solved:
            if v in solved:
                raise ShapeError(f"{v} solved twice")
            solved[v] = expr
        explicit = {v: Poly.var(v) - e for v, e in pres.triangular_solved}
        for r in pres.relations:
            if r not in explicit.values() and (-r) not in explicit.values():
                carried.append(r)
    else:
        for r in pres.relations:
            for v in pres.variables:
                if v in solved:
                    continue
                expr = _linear_unit_solution(r, v)
                if expr is None:
                    continue
                trial = dict(solved)
                trial[v] = expr
                if _acyclic(trial):
                    solved = trial
                    break
            else:
                carried.append(r)
    if not _acyclic(solved):
        raise ShapeError("solved variables depend on each other cyclically")
    if len(carried) > 1:
        raise ShapeError(f"{len(carried)} relations are not in solved form")
    return solved, (carried[0] if carried else None)


def eliminate(p: Poly, solved: Mapping[str, Poly]) -> Poly:
    """Back-substitute solved variables until none remain."""
    for _ in range(len(solved) + 1):
        names = set(p.variables())
        if not names & set(solved):
            return p
        images = {v: solved.get(v, Poly.var(v)) for v in names}
        p = substitute(p, images)
    raise ShapeError("back-substitution did not terminate")


def _lex_key(m, order):
    d = dict(m)
    return tuple(d.get(v, 0) for v in order)


def divides(h: Poly, r: Poly) -> bool:
    """Exact test for r in the principal ideal (h) of Q[vars]."""
    if r.is_zero():
        return True
    if h.is_zero():
        return False
    order = sorted(set(h.variables()) | set(r.variables()))
    lm_h = max(h.terms, key=lambda m: _lex_key(m, order))
    lc_h = h.terms[lm_h]
    dh = dict(lm_h)
    while not r.is_zero():
        lm = max(r.terms, key=lambda m: _lex_key(m, order))
        dr = dict(lm)
        if any(dr.get(v, 0) < e for v, e in dh.items()):
            return False
        q = {tuple(sorted((v, dr.get(v, 0) - dh.get(v, 0)) for v in dr)): r.terms[lm] / lc_h}
        r = r - Poly(q) * h
    return True


def reduce_in(pres: Presentation, p: Poly) -> Poly:
    """Normal form of p in the presentation's ring, up to the carried relation."""
    solved, _ = solved_form(pres)
    return eliminate(p, solved)


def is_member(pres: Presentation, p: Poly) -> bool:
    solved, carried = solved_form(pres)
    r = eliminate(p, solved)
    if carried is None:
        return r.is_zero()
    return divides(eliminate(carried, solved), r)


def free_variables(pres: Presentation) -> tuple:
    solved, carried = solved_form(pres)
    free = [v for v in pres.variables if v not in solved]
    return tuple(free), carried


def affine_modification(pres: Presentation, f: Poly, g: Poly, new_var: str) -> Presentation:
    """Append new_var and the relation f*new_var - g.

    This is the hypersurface presentation of R[I/f] for I = (f, g); the two
    can differ by f-torsion, which is recorded but not checked.
    """
    if new_var in pres.variables:
        raise NameClash(f"{new_var} already names a variable")
    notes = ["R[I/f] presented as R[w]/(f*w - g); torsion not checked"]
    if g.is_zero():
        notes.append("g = 0: relation f*w only, the result need not be a domain")
    rel = f * Poly.var(new_var) - g
    return Presentation(
        tuple(pres.variables) + (new_var,),
        tuple(pres.relations) + (rel,),
        (),
        tuple(pres.notes) + tuple(notes),
    )


@dataclass
class LinkResult:
    index: int
    name: str
    passed: bool
    failures: list
    inverse_checked: bool
    note: str = ""


@dataclass
class ChainReport:
    links: list
    final_free: tuple

    @property
    def passed(self) -> bool:
        return all(l.passed for l in self.links)

    @property
    def free_count(self) -> int:
        return len(self.final_free)


@dataclass(frozen=True)
class ChainLink:
    name: str
    source: Presentation
    forward: Substitution
    inverse: Optional[Substitution] = None


def _check_map(src: Presentation, sub: Substitution, dst: Presentation) -> list:
    fails = []
    for v in src.variables:
        if v not in sub.images:
            raise SubstError(f"map undefined on {v}")
    for r in src.relations:
        img = substitute(r, sub)
        if not is_member(dst, img):
            fails.append(f"image of {r} is not in the target ideal")
    return fails


def _check_round_trip(pres: Presentation, there: Substitution, back: Substitution) -> list:
    fails = []
    for v in pres.variables:
        img = substitute(substitute(Poly.var(v), there), back)
        if not is_member(pres, img - Poly.var(v)):
            fails.append(f"round trip moves {v}")
    return fails


def verify_iso_chain(chain: Sequence, final: Presentation) -> ChainReport:
    """Check each link source --forward--> next source (the last target is
    `final`).  Forward maps must send relations into the target ideal.  When
    an inverse is given it is checked the same way, and both round trips must
    be the identity modulo the relations; the source side of that check needs
    a triangular source and is skipped (and reported) otherwise.
    """
    targets = [link.source for link in chain[1:]] + [final]
    for t in targets:
        solved_form(t)  # raises ShapeError for non-triangular targets
    results = []
    for i, (link, dst) in enumerate(zip(chain, targets)):
        fails = _check_map(link.source, link.forward, dst)
        inverse_checked = False
        note = ""
        if link.inverse is not None:
            fails += _check_round_trip(dst, link.inverse, link.forward)
            try:
                solved_form(link.source)
            except ShapeError:
                note = "source is not triangular; inverse checked on the target side only"
            else:
                fails += _check_map(dst, link.inverse, link.source)
                fails += _check_round_trip(link.source, link.forward, link.inverse)
                inverse_checked = True
        results.append(LinkResult(i, link.name, not fails, fails, inverse_checked, note))
    free, _ = free_variables(final)
    return ChainReport(results, free)


# --- golden identities -----------------------------------------------------


def load_chain(path=None):
    """Build (links, final) from a chain file; the packaged one by default."""
    from ._toml import load_toml

    data = load_toml(path, "affine_chain.toml")
    try:
        names = list(data["variables"])
        start = data["start"]
        base = Presentation(
            tuple(start["base_variables"]), tuple(parse(t) for t in start["base_relations"])
        )
        pres = affine_modification(base, parse(start["f"]), parse(start["g"]), start["new_var"])
        if list(pres.variables) != names:
            raise FormatError(f"variables {list(pres.variables)} do not match {names}")
        links = []
        for i, raw in enumerate(data["link"]):
            if i > 0:
                pres = Presentation(tuple(names), tuple(parse(t) for t in raw["source"]))
            fwd = Substitution.from_text(names, raw.get("forward", {}))
            inv = raw.get("inverse")
            inv = Substitution.from_text(names, inv) if inv is not None else None
            links.append(ChainLink(raw.get("name", f"link {i}"), pres, fwd, inv))
        final = Presentation(tuple(names), tuple(parse(t) for t in data["final"]["relations"]))
    except KeyError as exc:
        raise FormatError(f"chain file missing field {exc}") from exc
    return links, final


def verify_affine_chain(path=None) -> ChainReport:
    links, final = load_chain(path)
    return verify_iso_chain(links, final)


BETA = {"x1": "x1 - x2*x3*(x2 + x3)", "x2": "x2", "x3": "x3"}
ALPHA = {"x1": "-x1", "x2": "-x2", "x3": "-x3"}
BETA_SOURCE = "x1 + x2*x3*(x2 + x3)"


@dataclass
class IdentityReport:
    name: str
    passed: bool
    details: list


def beta_identity() -> IdentityReport:
    """beta straightens x1 + x2x3(x2+x3) to x1 and commutes with the
    sign involution alpha, which squares to the identity."""
    xs = ("x1", "x2", "x3")
    beta = Substitution.from_text(xs, BETA)
    alpha = Substitution.from_text(xs, ALPHA)
    p = parse(BETA_SOURCE)
    image = substitute(p, beta)
    checks = [
        (f"beta({p}) = {image}", image == Poly.var("x1")),
    ]
    for v in xs:
        x = Poly.var(v)
        ab = substitute(substitute(x, alpha), beta)
        ba = substitute(substitute(x, beta), alpha)
        checks.append((f"alpha, beta commute on {v}", ab == ba))
        checks.append((f"alpha^2 fixes {v}", substitute(substitute(x, alpha), alpha) == x))
    details = [f"{'ok' if ok else 'FAIL'}: {msg}" for msg, ok in checks]
    return IdentityReport("beta", all(ok for _, ok in checks), details)
