"""Catalog of the 36 deformation classes with B2 = 2, construction records and
the external fact table.

Every entry records which of its fields come from the standard literature
table rather than from the screening argument itself (``external_fields``;
an ``External`` entry is external throughout).  ``randomize_external``
scrambles exactly those fields, so tests can show that no PaperStated
verdict leans on them.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field, replace
from typing import Dict, Optional

from ._toml import load_toml
from .errors import FormatError, ValidationError
from .lattice import (
    AMBIENTS,
    EXTREMAL,
    AmbientData,
    ContractionKind,
    CurveData,
    FanoLattice,
    TripleForm,
    blowup_lattice,
)
from .surfaces import ExternalFact

PROVENANCES = ("PaperStated", "External")
FIELDS = ("description", "mori_types", "b3", "degree", "lengths", "contractions", "primitive", "p1xp2")
TYPE_TAGS = ("A1", "A2", "A3", "A4", "B1", "B2", "B3")
A_CONDITIONS = frozenset({"I", "II", "III", "I'", "(1)"})
B12_CONDITIONS = frozenset({"0'", "1'", "2'"})
KALIMAN_CONDITIONS = frozenset({"0", "1", "2", "3"})
MODELS = (
    "double-cover-p1p2-24",
    "divisor-p2p2-22",
    "double-cover-v7",
    "double-cover-p1p2-22",
    "divisor-p2p2-12",
    "divisor-p2p2-11",
    "product-p1p2",
    "blowup-p3-point",
    "proj-bundle-o-o2",
)


@dataclass(frozen=True)
class ContractionDescriptor:
    kind: ContractionKind
    ambient: Optional[AmbientData] = None
    curve: Optional[CurveData] = None
    disc_degree: Optional[int] = None
    complete_intersection: bool = False

    def to_dict(self) -> dict:
        d = {"kind": self.kind.value}
        if self.ambient is not None:
            d["ambient"] = self.ambient.name
        if self.curve is not None:
            d["p_a"] = self.curve.p_a
            d["degree"] = self.curve.degree
        if self.disc_degree is not None:
            d["disc_degree"] = self.disc_degree
        if self.complete_intersection:
            d["complete_intersection"] = True
        return d


@dataclass(frozen=True)
class MMEntry:
    number: int
    b3: int
    lengths: tuple
    contractions: tuple
    primitive: bool
    provenance: str
    degree: int
    description: str = ""
    mori_types: tuple = ()
    p1xp2: bool = False
    model: str = ""
    form: Optional[TripleForm] = None
    branch: Optional[dict] = None
    quote: str = ""
    external_fields: tuple = ()

    @property
    def blowups(self) -> tuple:
        return tuple(c for c in self.contractions if c.kind is ContractionKind.BlowupCurve)

    def lattice(self) -> FanoLattice:
        mu1, mu2 = self.lengths
        if self.primitive:
            return FanoLattice(self.form, mu1, mu2, self.b3)
        c = self.blowups[0]
        return blowup_lattice(c.ambient, c.curve, mu2)

    def is_external(self, name: str) -> bool:
        return self.provenance == "External" or name in self.external_fields


@dataclass(frozen=True)
class ConstructionRecord:
    mm_number: int
    type_tag: str
    checklist: frozenset
    source: str
    identity: str = ""
    # extra triplets that do not add to the class's multiplicity
    supplementary: bool = False

    def to_dict(self) -> dict:
        d = {
            "number": self.mm_number,
            "type": self.type_tag,
            "checklist": sorted(self.checklist),
            "source": self.source,
        }
        if self.identity:
            d["identity"] = self.identity
        if self.supplementary:
            d["supplementary"] = True
        return d


@dataclass(frozen=True)
class Catalog:
    entries: Dict[int, MMEntry]
    constructions: tuple
    menus: Dict[str, dict] = field(default_factory=dict)
    source: str = "<packaged>"

    def __len__(self):
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries[n] for n in sorted(self.entries))

    def entry(self, number: int) -> MMEntry:
        try:
            return self.entries[number]
        except KeyError:
            raise ValidationError(f"no entry No.{number}") from None

    def menu(self, ambient: str):
        m = self.menus.get(ambient)
        return None if m is None else {tuple(x) for x in m["curves"]}


# --- parsing ---------------------------------------------------------------


def _need(raw: dict, key: str, where: str):
    if key not in raw:
        raise ValidationError(f"{where}: missing field {key!r}")
    return raw[key]


def _descriptor(raw: dict, where: str) -> ContractionDescriptor:
    try:
        kind = ContractionKind(_need(raw, "kind", where))
    except ValueError:
        raise ValidationError(f"{where}: unknown contraction kind {raw['kind']!r}") from None
    ambient = curve = None
    if kind is ContractionKind.BlowupCurve:
        name = _need(raw, "ambient", where)
        if name not in AMBIENTS:
            raise ValidationError(f"{where}: unknown ambient {name!r}")
        ambient = AMBIENTS[name]
        try:
            curve = CurveData(int(_need(raw, "p_a", where)), int(_need(raw, "degree", where)))
        except Exception as exc:  # InputError from CurveData
            raise ValidationError(f"{where}: {exc}") from exc
        if curve.degree < 1:
            raise ValidationError(f"{where}: curve degree must be positive")
    elif "ambient" in raw or "p_a" in raw:
        raise ValidationError(f"{where}: only blow-ups along curves carry a centre")
    disc = raw.get("disc_degree")
    if disc is not None and kind is not ContractionKind.ConicBundle:
        raise ValidationError(f"{where}: disc_degree only applies to conic bundles")
    return ContractionDescriptor(kind, ambient, curve, disc, bool(raw.get("complete_intersection", False)))


def _entry(raw: dict) -> MMEntry:
    n = _need(raw, "number", "entry")
    where = f"No.{n}"
    prov = _need(raw, "provenance", where)
    if prov not in PROVENANCES:
        raise ValidationError(f"{where}: provenance must be one of {PROVENANCES}")
    ext = tuple(raw.get("external_fields", ()))
    unknown = set(ext) - set(FIELDS)
    if unknown:
        raise ValidationError(f"{where}: unknown external fields {sorted(unknown)}")
    lengths = tuple(_need(raw, "lengths", where))
    if len(lengths) != 2 or any(m not in (1, 2, 3) for m in lengths):
        raise ValidationError(f"{where}: lengths must be two values in 1..3, got {lengths}")
    cons = tuple(_descriptor(c, f"{where} contraction {i + 1}")
                 for i, c in enumerate(_need(raw, "contractions", where)))
    if len(cons) != 2:
        raise ValidationError(f"{where}: need exactly two contractions")
    form = raw.get("form")
    if form is not None:
        if len(form) != 4:
            raise ValidationError(f"{where}: form needs four values")
        form = TripleForm(*map(int, form), basis_tag=EXTREMAL)
    return MMEntry(
        number=n,
        b3=int(_need(raw, "b3", where)),
        lengths=lengths,
        contractions=cons,
        primitive=bool(_need(raw, "primitive", where)),
        provenance=prov,
        degree=int(_need(raw, "degree", where)),
        description=raw.get("description", ""),
        mori_types=tuple(raw.get("mori_types", ())),
        p1xp2=bool(raw.get("p1xp2", False)),
        model=raw.get("model", ""),
        form=form,
        branch=raw.get("branch"),
        quote=raw.get("quote", ""),
        external_fields=ext,
    )


def validate_entry(e: MMEntry) -> None:
    where = f"No.{e.number}"
    if not 1 <= e.number <= 36:
        raise ValidationError(f"{where}: number out of range")
    if e.b3 < 0:
        raise ValidationError(f"{where}: b3 must be nonnegative")
    if e.provenance == "PaperStated" and not e.quote:
        raise ValidationError(f"{where}: PaperStated entries need a quote")
    if e.primitive:
        if e.blowups:
            raise ValidationError(f"{where}: primitive entries are not blow-ups along curves")
        if e.form is None or e.model not in MODELS:
            raise ValidationError(f"{where}: primitive entries need a form and a known model")
    else:
        if not e.blowups:
            raise ValidationError(f"{where}: imprimitive entry without a blow-up along a curve")
        if e.contractions[0].kind is not ContractionKind.BlowupCurve or e.lengths[0] != 1:
            raise ValidationError(f"{where}: the first contraction must be the blow-up, of length 1")
        if len(e.blowups) == 2 and e.lengths[1] != 1:
            raise ValidationError(f"{where}: a second blow-up along a curve has length 1")
        for c in e.blowups:
            expected = c.ambient.b3_ambient + 2 * c.curve.p_a
            if e.b3 != expected:
                raise ValidationError(
                    f"{where}: b3 = {e.b3} but B3({c.ambient.name}) + 2p_a = {expected}"
                )
            lat = blowup_lattice(c.ambient, c.curve)
            if lat.degree != e.degree:
                raise ValidationError(
                    f"{where}: (-K)^3 = {e.degree} but the blow-up of {c.ambient.name} gives {lat.degree}"
                )
    try:
        lat = e.lattice()
    except Exception as exc:
        raise ValidationError(f"{where}: {exc}") from exc
    if lat.degree != e.degree:
        raise ValidationError(f"{where}: (-K)^3 = {e.degree} but the form gives {lat.degree}")


def _construction(raw: dict) -> ConstructionRecord:
    n = _need(raw, "number", "construction")
    tag = _need(raw, "type", f"construction for No.{n}")
    if tag not in TYPE_TAGS:
        raise ValidationError(f"construction for No.{n}: unknown type {tag!r}")
    return ConstructionRecord(
        n, tag, frozenset(_need(raw, "checklist", f"construction for No.{n}")),
        raw.get("source", ""), raw.get("identity", ""), bool(raw.get("supplementary", False)),
    )


# Which (ambient, genus, degrees) each A-type covers, and which primitive
# model each B-type covers.
_A_TYPES = {
    "A1": ("P3", 1, (3, 4)),
    "A2": ("P3", 0, (1, 2, 3, 4)),
    "A3": ("Q3", 0, (1, 2, 3, 4)),
    "A4": ("V5", 0, (1, 2, 3)),
}
_B_TYPES = {"B1": "divisor-p2p2-12", "B2": "product-p1p2", "B3": "proj-bundle-o-o2"}


def validate_construction(rec: ConstructionRecord, entries: Dict[int, MMEntry]) -> None:
    where = f"construction {rec.type_tag} for No.{rec.mm_number}"
    if rec.mm_number not in entries:
        raise ValidationError(f"{where}: no such entry")
    e = entries[rec.mm_number]
    chk = rec.checklist
    if rec.type_tag in _A_TYPES:
        if not chk <= A_CONDITIONS:
            raise ValidationError(f"{where}: conditions {sorted(chk - A_CONDITIONS)} do not apply")
        # boundary condition holds iff (I) and (I') hold
        if not {"I", "I'"} <= chk:
            raise ValidationError(f"{where}: (I) and (I') are necessary")
        if "(1)" in chk and not {"II", "III"} <= chk:
            raise ValidationError(f"{where}: (1) is only meaningful under (II) and (III)")
        amb, genus, degs = _A_TYPES[rec.type_tag]
        if not any(c.ambient.name == amb and c.curve.p_a == genus and c.curve.degree in degs
                   for c in e.blowups):
            raise ValidationError(f"{where}: entry is not a blow-up of {amb} of the right kind")
    else:
        expected = KALIMAN_CONDITIONS if rec.type_tag == "B3" else B12_CONDITIONS
        if chk != expected:
            raise ValidationError(f"{where}: checklist must be {sorted(expected)}")
        if e.model != _B_TYPES[rec.type_tag]:
            raise ValidationError(f"{where}: entry model {e.model!r} does not match")


def _build(data: dict, source: str) -> Catalog:
    if data.get("schema") != 1:
        raise FormatError(f"{source}: unsupported schema {data.get('schema')!r}")
    raws = data.get("entry", [])
    entries: Dict[int, MMEntry] = {}
    for raw in raws:
        e = _entry(raw)
        if e.number in entries:
            raise ValidationError(f"No.{e.number}: duplicate entry")
        validate_entry(e)
        entries[e.number] = e
    missing = sorted(set(range(1, 37)) - set(entries))
    if missing:
        raise ValidationError(f"catalog is missing entries {missing}")
    recs = tuple(_construction(r) for r in data.get("construction", []))
    for r in recs:
        validate_construction(r, entries)
    menus = dict(data.get("menus", {}))
    for name, m in menus.items():
        if name not in AMBIENTS or "curves" not in m:
            raise ValidationError(f"menu {name!r} is malformed")
    return Catalog(entries, recs, menus, source)


def load_catalog(path=None) -> Catalog:
    data = load_toml(path, "catalog.toml")
    return _build(data, str(path) if path else "<packaged>")


def candidates_for_screening(catalog: Catalog) -> list:
    return list(catalog)


def constructions_for(mm_number: int, catalog: Optional[Catalog] = None,
                      supplementary: bool = True) -> list:
    catalog = catalog or default_catalog()
    return [r for r in catalog.constructions
            if r.mm_number == mm_number and (supplementary or not r.supplementary)]


_DEFAULT: Optional[Catalog] = None


def default_catalog() -> Catalog:
    global _DEFAULT
    if _DEFAULT is None:
        _DEFAULT = load_catalog()
    return _DEFAULT


# --- facts -----------------------------------------------------------------


def load_facts(path=None) -> Dict[str, ExternalFact]:
    data = load_toml(path, "facts.toml")
    if data.get("schema") != 1:
        raise FormatError(f"facts: unsupported schema {data.get('schema')!r}")
    facts: Dict[str, ExternalFact] = {}
    for raw in data.get("fact", []):
        try:
            f = ExternalFact(raw["id"], raw["statement"], raw["source"], raw["quote"])
        except KeyError as exc:
            raise ValidationError(f"fact {raw.get('id', '?')}: missing field {exc}") from None
        if not all((f.id, f.statement, f.source, f.quote)):
            raise ValidationError(f"fact {f.id!r}: empty field")
        if f.id in facts:
            raise ValidationError(f"fact {f.id!r}: duplicate id")
        facts[f.id] = f
    return facts


# --- provenance firewall ---------------------------------------------------


def _random_blowup(rng: random.Random):
    """A random blow-up along a curve with consistent b3 and positive degree."""
    while True:
        W = AMBIENTS[rng.choice(sorted(AMBIENTS))]
        C = CurveData(rng.randint(0, 6), rng.randint(1, 10))
        try:
            lat = blowup_lattice(W, C)
        except Exception:
            continue
        return W, C, lat


def randomize_external(catalog: Catalog, seed: int = 0) -> Catalog:
    """Copy of `catalog` with every external field replaced by random but
    internally consistent data."""
    rng = random.Random(seed)
    kinds = [k for k in ContractionKind if k is not ContractionKind.BlowupCurve]
    words = ["alpha", "beta", "gamma", "delta", "epsilon"]
    out = {}
    for e in catalog:
        new = e
        if e.is_external("description"):
            new = replace(new, description=" ".join(rng.choices(words, k=4)))
        if e.is_external("mori_types"):
            new = replace(new, mori_types=tuple(rng.choice(["E1", "C1", "D1", "E5"]) for _ in range(2)))
        if e.provenance == "External":
            W, C, lat = _random_blowup(rng)
            other = ContractionDescriptor(rng.choice(kinds))
            mu2 = rng.randint(1, 3)
            new = replace(
                new,
                contractions=(ContractionDescriptor(ContractionKind.BlowupCurve, W, C), other),
                lengths=(1, mu2),
                b3=lat.b3,
                degree=lat.degree,
                primitive=False,
                p1xp2=False,
            )
        elif e.primitive and e.is_external("b3"):
            new = replace(new, b3=rng.randint(0, 60))
        validate_entry(new)
        out[e.number] = new
    return Catalog(out, catalog.constructions, catalog.menus, catalog.source + " (randomized)")
