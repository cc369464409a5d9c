"""Replayable chains of exact (in)equalities.

A step is either arithmetic (both sides are numbers, re-checked on every
validation) or a bound on a named quantity such as ``eu(D1)``.  Bound steps
cannot be checked numerically, so they must carry at least one reference.
An exclusion closes with a contradiction: two bound steps on the same
quantity whose ranges do not meet.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional, Union

from .errors import CertificateError, FactError

RELATIONS = ("=", "<=", "<", ">=", ">")

Number = Union[int, Fraction]


def _as_fraction(x) -> Fraction:
    if isinstance(x, bool):
        raise CertificateError(f"boolean is not a number: {x!r}")
    if isinstance(x, (int, Fraction)):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise CertificateError(f"not an exact number: {x!r}")


def holds(lhs: Fraction, rel: str, rhs: Fraction) -> bool:
    if rel == "=":
        return lhs == rhs
    if rel == "<=":
        return lhs <= rhs
    if rel == "<":
        return lhs < rhs
    if rel == ">=":
        return lhs >= rhs
    if rel == ">":
        return lhs > rhs
    raise CertificateError(f"unknown relation {rel!r}")


@dataclass(frozen=True)
class Ref:
    """Either a labelled formula (cite + quote) or an external fact id."""

    cite: str = ""
    quote: str = ""
    fact_id: str = ""

    def __post_init__(self):
        if not self.fact_id and not self.cite:
            raise CertificateError("reference needs a cite label or a fact id")

    def to_dict(self) -> dict:
        if self.fact_id:
            return {"fact_id": self.fact_id}
        return {"cite": self.cite, "quote": self.quote}


def fact(fact_id: str) -> Ref:
    return Ref(fact_id=fact_id)


def cite(label: str, quote: str = "") -> Ref:
    return Ref(cite=label, quote=quote)


@dataclass(frozen=True)
class CertStep:
    desc: str
    lhs: Union[Fraction, str]
    rel: str
    rhs: Fraction
    refs: tuple = ()

    def __post_init__(self):
        if self.rel not in RELATIONS:
            raise CertificateError(f"unknown relation {self.rel!r}")
        object.__setattr__(self, "rhs", _as_fraction(self.rhs))
        if not isinstance(self.lhs, str):
            object.__setattr__(self, "lhs", _as_fraction(self.lhs))
        object.__setattr__(self, "refs", tuple(self.refs))

    @property
    def is_bound(self) -> bool:
        return isinstance(self.lhs, str)

    def check(self) -> None:
        if self.is_bound:
            if not self.refs:
                raise CertificateError(f"bound step without reference: {self.desc}")
            n_facts = sum(1 for r in self.refs if r.fact_id)
            if n_facts > 1:
                raise CertificateError(f"bound step cites {n_facts} facts: {self.desc}")
        elif not holds(self.lhs, self.rel, self.rhs):
            raise CertificateError(
                f"false step: {self.desc}: {self.lhs} {self.rel} {self.rhs}"
            )

    def render(self) -> str:
        return f"{_fmt(self.lhs)} {self.rel} {_fmt(self.rhs)}"

    def to_dict(self) -> dict:
        return {
            "desc": self.desc,
            "kind": "bound" if self.is_bound else "arith",
            "lhs": _fmt(self.lhs),
            "rel": self.rel,
            "rhs": _fmt(self.rhs),
            "refs": [r.to_dict() for r in self.refs],
        }


def step(desc, lhs, rel, rhs, *refs) -> CertStep:
    return CertStep(desc, lhs, rel, rhs, refs)


def _fmt(x) -> str:
    if isinstance(x, str):
        return x
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def _range(s: CertStep):
    lo = hi = None
    lo_strict = hi_strict = False
    if s.rel in ("=", ">=", ">"):
        lo, lo_strict = s.rhs, s.rel == ">"
    if s.rel in ("=", "<=", "<"):
        hi, hi_strict = s.rhs, s.rel == "<"
    return lo, lo_strict, hi, hi_strict


def bounds_conflict(a: CertStep, b: CertStep) -> bool:
    """True when two bound steps on the same quantity admit no common value."""
    if not (a.is_bound and b.is_bound) or a.lhs != b.lhs:
        return False
    lo1, ls1, hi1, hs1 = _range(a)
    lo2, ls2, hi2, hs2 = _range(b)
    for lo, ls, hi, hs in ((lo1, ls1, hi2, hs2), (lo2, ls2, hi1, hs1)):
        if lo is None or hi is None:
            continue
        if lo > hi or (lo == hi and (ls or hs)):
            return True
    return False


@dataclass(frozen=True)
class Case:
    """One branch of a case split.

    Without a top-level contradiction the cases must be exhaustive and each
    must close by itself; indices point into the parent's steps followed by
    the case's own steps.  With a top-level contradiction the cases are
    supporting derivations of one of its bounds and closing is optional.
    """

    label: str
    steps: tuple
    contradiction: Optional[tuple] = None

    def to_dict(self) -> dict:
        return {
            "label": self.label,
            "steps": [s.to_dict() for s in self.steps],
            "contradiction": list(self.contradiction) if self.contradiction else None,
        }


@dataclass(frozen=True)
class Certificate:
    entry: str
    steps: tuple
    verdict: str  # "Admissible" | "Excluded"
    contradiction: Optional[tuple] = None
    cases: tuple = ()
    constructions: tuple = field(default=())

    def all_steps(self):
        yield from self.steps
        for c in self.cases:
            yield from c.steps

    def fact_ids(self) -> set:
        return {r.fact_id for s in self.all_steps() for r in s.refs if r.fact_id}

    def to_dict(self) -> dict:
        return {
            "entry": self.entry,
            "verdict": self.verdict,
            "steps": [s.to_dict() for s in self.steps],
            "contradiction": list(self.contradiction) if self.contradiction else None,
            "cases": [c.to_dict() for c in self.cases],
            "constructions": [dict(c) for c in self.constructions],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, ensure_ascii=False)


def _check_pair(steps, pair, where):
    i, j = pair
    n = len(steps)
    if not (0 <= i < n and 0 <= j < n):
        raise CertificateError(f"{where}: contradiction index out of range {pair}")
    if not bounds_conflict(steps[i], steps[j]):
        raise CertificateError(
            f"{where}: steps {i} and {j} are not contradictory: "
            f"{steps[i].render()} / {steps[j].render()}"
        )


def validate(cert: Certificate, known_facts: Optional[Iterable[str]] = None) -> None:
    """Re-check every step; raise CertificateError on the first failure."""
    for s in cert.all_steps():
        s.check()
    if known_facts is not None:
        missing = cert.fact_ids() - set(known_facts)
        if missing:
            raise FactError(f"{cert.entry}: unknown fact ids {sorted(missing)}")
    if cert.verdict == "Admissible":
        if cert.contradiction or cert.cases:
            raise CertificateError(f"{cert.entry}: admissible certificate carries a contradiction")
        return
    if cert.verdict != "Excluded":
        raise CertificateError(f"{cert.entry}: unknown verdict {cert.verdict!r}")
    if cert.contradiction:
        _check_pair(cert.steps, cert.contradiction, cert.entry)
        for c in cert.cases:
            if c.contradiction:
                _check_pair(cert.steps + c.steps, c.contradiction, f"{cert.entry}/{c.label}")
    elif cert.cases:
        for c in cert.cases:
            if not c.contradiction:
                raise CertificateError(f"{cert.entry}: case {c.label!r} left open")
            _check_pair(cert.steps + c.steps, c.contradiction, f"{cert.entry}/{c.label}")
    else:
        raise CertificateError(f"{cert.entry}: exclusion without contradiction")
