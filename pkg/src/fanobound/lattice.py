"""Rank-2 Picard lattices of Fano 3-folds with B2 = 2.

Classes are integer pairs tagged with the basis they live in.  The cubic
intersection form stores one value per multidegree, so symmetry holds by
construction.  Two bases are in use: the extremal basis (H1, H2) of pullbacks
from the two contraction targets, and the blow-up basis (H, E).
"""
from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .certificate import Certificate, cite, fact, step
from .errors import BasisError, InputError, SolveError

EXTREMAL = "H1,H2"
BLOWUP = "H,E"


@dataclass(frozen=True)
class DivisorClass:
    c1: int
    c2: int
    basis_tag: str = EXTREMAL

    def _same(self, other: "DivisorClass"):
        if other.basis_tag != self.basis_tag:
            raise BasisError(f"cannot combine {self.basis_tag} with {other.basis_tag}")

    def __add__(self, other):
        self._same(other)
        return DivisorClass(self.c1 + other.c1, self.c2 + other.c2, self.basis_tag)

    def __sub__(self, other):
        self._same(other)
        return DivisorClass(self.c1 - other.c1, self.c2 - other.c2, self.basis_tag)

    def __neg__(self):
        return DivisorClass(-self.c1, -self.c2, self.basis_tag)

    def __rmul__(self, k: int):
        return DivisorClass(k * self.c1, k * self.c2, self.basis_tag)

    def __str__(self):
        b1, b2 = self.basis_tag.split(",")
        return f"{self.c1}*{b1} + {self.c2}*{b2}"


@dataclass(frozen=True)
class TripleForm:
    """(B1^3, B1^2.B2, B1.B2^2, B2^3) for the basis (B1, B2)."""

    t300: int
    t210: int
    t120: int
    t030: int
    basis_tag: str = EXTREMAL

    def value(self, n2: int) -> int:
        """Product of 3-n2 copies of B1 and n2 copies of B2."""
        return (self.t300, self.t210, self.t120, self.t030)[n2]


def triple_product(form: TripleForm, a: DivisorClass, b: DivisorClass, c: DivisorClass):
    for x in (a, b, c):
        if x.basis_tag != form.basis_tag:
            raise BasisError(f"class in {x.basis_tag} paired with form in {form.basis_tag}")
    total = 0
    for i, j, k in itertools.product((0, 1), repeat=3):
        coeff = (a.c1, a.c2)[i] * (b.c1, b.c2)[j] * (c.c1, c.c2)[k]
        if coeff:
            total += coeff * form.value(i + j + k)
    return total


def cube(form: TripleForm, d: DivisorClass) -> int:
    return triple_product(form, d, d, d)


class ContractionKind(enum.Enum):
    BlowupCurve = "BlowupCurve"
    BlowupPoint = "BlowupPoint"
    ConicBundle = "ConicBundle"
    DelPezzoFibration = "DelPezzoFibration"
    ProjBundle = "ProjBundle"
    DoubleCoverFactor = "DoubleCoverFactor"


@dataclass(frozen=True)
class ContractionData:
    length: int
    kind: ContractionKind

    def __post_init__(self):
        if self.length not in (1, 2, 3):
            raise InputError(f"extremal ray length must be 1, 2 or 3, got {self.length}")


@dataclass(frozen=True)
class AmbientData:
    name: str
    fano_index: int
    h_cubed: int
    b3_ambient: int

    def __post_init__(self):
        expected = _AMBIENT_SHAPE.get(self.name)
        if expected is None:
            raise InputError(f"unknown ambient {self.name!r}")
        if (self.fano_index, self.h_cubed) != expected:
            raise InputError(
                f"{self.name}: (r, H^3) = {(self.fano_index, self.h_cubed)}, expected {expected}"
            )
        if self.b3_ambient < 0:
            raise InputError("b3 must be nonnegative")

    @property
    def s1sq_s2(self) -> int:
        """(S1^2.S2) for S1 in |O(1)| and S2 in |O(r-1)|, i.e. (r-1)*H^3."""
        return (self.fano_index - 1) * self.h_cubed


_AMBIENT_SHAPE = {"P3": (4, 1), "Q3": (3, 2)}
_AMBIENT_SHAPE.update({f"V{d}": (2, d) for d in range(1, 6)})

# B3 of the del Pezzo 3-folds V_d: 42, 20, 10, 4, 0 for d = 1..5.
AMBIENTS = {
    "P3": AmbientData("P3", 4, 1, 0),
    "Q3": AmbientData("Q3", 3, 2, 0),
    "V1": AmbientData("V1", 2, 1, 42),
    "V2": AmbientData("V2", 2, 2, 20),
    "V3": AmbientData("V3", 2, 3, 10),
    "V4": AmbientData("V4", 2, 4, 4),
    "V5": AmbientData("V5", 2, 5, 0),
}


@dataclass(frozen=True)
class CurveData:
    p_a: int
    degree: int

    def __post_init__(self):
        if self.p_a < 0:
            raise InputError("arithmetic genus must be nonnegative")


def anticanonical_class(mu1: int, mu2: int) -> DivisorClass:
    """-K_V = mu1*H2 + mu2*H1 in the extremal basis."""
    return DivisorClass(mu2, mu1, EXTREMAL)


@dataclass(frozen=True)
class FanoLattice:
    triple: TripleForm
    mu1: int
    mu2: int
    b3: int
    minus_k: Optional[DivisorClass] = None
    contractions: tuple = field(default=())

    def __post_init__(self):
        if self.minus_k is None:
            if self.triple.basis_tag != EXTREMAL:
                raise BasisError("give -K explicitly for a non-extremal basis")
            object.__setattr__(self, "minus_k", anticanonical_class(self.mu1, self.mu2))
        if self.b3 < 0:
            raise InputError("b3 must be nonnegative")
        if self.degree <= 0:
            raise InputError(f"(-K)^3 = {self.degree} is not positive")

    @property
    def degree(self) -> int:
        return cube(self.triple, self.minus_k)


def blowup_lattice(W: AmbientData, C: CurveData, other_length: int = 1) -> FanoLattice:
    """Lattice of the blow-up of W along C in the basis (H, E).

    E^3 = -deg N_{C/W} = -(r*d + 2*p_a - 2).
    """
    if C.degree < 1:
        raise InputError("curve degree must be at least 1")
    d, r = C.degree, W.fano_index
    form = TripleForm(W.h_cubed, 0, -d, -(r * d + 2 * C.p_a - 2), BLOWUP)
    minus_k = DivisorClass(r, -1, BLOWUP)
    return FanoLattice(
        form,
        1,
        other_length,
        W.b3_ambient + 2 * C.p_a,
        minus_k,
        (ContractionData(1, ContractionKind.BlowupCurve),),
    )


def euler_ledger(eu_d1: int, eu_d2: int, b3: int) -> int:
    """eu(D1 n D2) = eu(D1) + eu(D2) + B3(V) - 5."""
    return eu_d1 + eu_d2 + b3 - 5


def _det(m):
    return m[0][0] * m[1][1] - m[0][1] * m[1][0]


def solve_boundary_decomposition(mu1: int, mu2: int) -> list:
    """All (m_ij) with D_i = m_i1*H1 + m_i2*H2, D1 + D2 = -K_V, m_ij >= 0,
    both rows nonzero and det = +-1.

    Column sums are fixed by -K_V = mu2*H1 + mu1*H2, so each entry is at most
    the matching column sum and the box search is complete.
    """
    if mu1 < 1 or mu2 < 1:
        raise InputError("lengths must be positive")
    col1, col2 = mu2, mu1
    out = []
    for a in range(col1 + 1):
        for b in range(col2 + 1):
            m = ((a, b), (col1 - a, col2 - b))
            if m[0] == (0, 0) or m[1] == (0, 0):
                continue
            if abs(_det(m)) == 1:
                out.append([list(m[0]), list(m[1])])
    return out


@dataclass(frozen=True)
class Verdict:
    status: str  # "Pass" | "ForcedHkEqualsDl" | "Exclude"
    forced_k: tuple = ()
    certificate: Optional[Certificate] = None


def check_length_filter(mu1: int, mu2: int, is_p1xp2: bool, entry: str = "") -> Verdict:
    """Length filter on boundary classes.

    A length-one contraction forces its H_k to be a boundary class.  When both
    lengths are at least two only P1 x P2 survives; for (2, 2) the exclusion is
    the empty enumeration, otherwise it rests on the classification of Fano
    3-folds with two length-two rays.
    """
    forced = tuple(k for k, mu in ((1, mu1), (2, mu2)) if mu == 1)
    if forced:
        return Verdict("ForcedHkEqualsDl", forced)
    if is_p1xp2:
        return Verdict("Pass")
    found = solve_boundary_decomposition(mu1, mu2)
    name = "#unimodular boundary decompositions"
    unimod = cite("boundary classes form a basis", "Pic V = Z[D1] + Z[D2]")
    if not found:
        steps = (
            step("boundary classes give a unimodular decomposition of -K_V", name, ">=", 1, unimod),
            step(
                f"exhaustive enumeration for lengths ({mu1},{mu2})",
                name,
                "=",
                0,
                cite("nonnegative coefficients", "m_ij >= 0"),
            ),
            step("no decomposition exists", 0, "<", 1),
        )
    else:
        steps = (
            step("V is P1 x P2 when both lengths are at least 2", "[V = P1 x P2]", ">=", 1, fact("mm83-two-length-two")),
            step("catalog: V is not P1 x P2", "[V = P1 x P2]", "=", 0, cite("catalog", "not P1 x P2")),
            step("indicator values disagree", 0, "<", 1),
        )
    cert = Certificate(entry or f"lengths {mu1},{mu2}", steps, "Excluded", (0, 1))
    return Verdict("Exclude", (), cert)


def half_integer_class_solve(form: TripleForm, target_h2: int, target_e2: int):
    """Solve (B1^2.D) = target_h2, (B2^2.D) = target_e2 for D = a*B1 + b*B2.

    Returns (a, b) as Fractions; used where a boundary class is only
    half-integral in the blow-up basis.
    """
    # (B1^2 . (a B1 + b B2)) = a t300 + b t210 ; (B2^2 . D) = a t120 + b t030
    p, q, r, s = form.t300, form.t210, form.t120, form.t030
    det = p * s - q * r
    if det == 0:
        raise SolveError("intersection system is singular")
    a = Fraction(target_h2 * s - q * target_e2, det)
    b = Fraction(p * target_e2 - r * target_h2, det)
    return a, b


@dataclass(frozen=True)
class BasisMap:
    """Change of basis: new classes expressed in the old basis (rational)."""

    name: str
    source: str
    target: str
    images: tuple  # ((a1, b1), (a2, b2)) : target basis vectors in source coords

    def transform_form(self, form: TripleForm) -> TripleForm:
        """Return the cubic form in the target basis; must be integral."""
        if form.basis_tag != self.source:
            raise BasisError(f"{self.name} expects {self.source}, got {form.basis_tag}")
        (a1, b1), (a2, b2) = self.images
        vals = []
        for n2 in range(4):
            vecs = [(a1, b1)] * (3 - n2) + [(a2, b2)] * n2
            tot = Fraction(0)
            for i, j, k in itertools.product((0, 1), repeat=3):
                coeff = Fraction(vecs[0][i]) * vecs[1][j] * vecs[2][k]
                tot += coeff * form.value(i + j + k)
            if tot.denominator != 1:
                raise BasisError(f"{self.name}: non-integral value {tot}")
            vals.append(int(tot))
        return TripleForm(*vals, basis_tag=self.target)
