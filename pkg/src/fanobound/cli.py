"""Command-line front end.

Exit codes: 0 success, 1 certificate or identity failure, 2 input or parse
failure.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass
from typing import List, Optional

from . import catalog as cat
from . import lattice as lat
from . import polyverify as pv
from . import screen as scr
from . import surfaces as srf
from .certificate import validate
from .errors import CertificateError, FactError, FanoboundError

OK, FAILED, BAD_INPUT = 0, 1, 2


@dataclass
class CliConfig:
    catalog_path: Optional[str] = None
    facts_path: Optional[str] = None
    json: bool = False
    entry_filter: Optional[List[int]] = None

    def __post_init__(self):
        for p in (self.catalog_path, self.facts_path):
            if p is not None and not os.path.exists(p):
                raise UsageError(f"no such file: {p}")


class UsageError(Exception):
    pass


def _emit(cfg: CliConfig, payload, text: str) -> None:
    if cfg.json:
        print(json.dumps(payload, indent=2, ensure_ascii=False))
    else:
        print(text)


def _pair(text: str):
    try:
        a, b = (int(x) for x in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected two integers 'a,b', got {text!r}")
    return a, b


def _render_cert(cert, indent: str = "  ") -> str:
    lines = [f"{cert.entry}: {cert.verdict}"]
    for i, s in enumerate(cert.steps):
        lines.append(f"{indent}[{i}] {s.desc}: {s.render()}")
    if cert.contradiction:
        i, j = cert.contradiction
        lines.append(f"{indent}contradiction: [{i}] vs [{j}]")
    for c in cert.cases:
        lines.append(f"{indent}case {c.label}:")
        base = len(cert.steps)
        for k, s in enumerate(c.steps):
            lines.append(f"{indent}  [{base + k}] {s.desc}: {s.render()}")
        if c.contradiction:
            lines.append(f"{indent}  contradiction: [{c.contradiction[0]}] vs [{c.contradiction[1]}]")
    for r in cert.constructions:
        lines.append(f"{indent}construction {r['type']}: {', '.join(r['checklist'])} ({r['source']})")
    return "\n".join(lines)


# --- commands ---------------------------------------------------------------


def cmd_classify(cfg: CliConfig) -> int:
    catalog = cat.load_catalog(cfg.catalog_path)
    facts = cat.load_facts(cfg.facts_path)
    report = scr.classify_all(catalog, facts, cfg.entry_filter)
    if cfg.json:
        print(report.to_json())
        return OK
    if cfg.entry_filter:
        for n in sorted(report.results):
            print(_render_cert(report.results[n].certificate))
        return OK
    print(f"admissible classes: {len(report.admissible)}")
    print(f"{'No.':>4}  {'types':<8}  constructions")
    for n in report.admissible:
        recs = cat.constructions_for(n, catalog)
        tags = ",".join(sorted({r.type_tag for r in recs}))
        extra = sum(1 for r in recs if r.supplementary)
        note = f" (+{extra} supplementary)" if extra else ""
        print(f"{n:>4}  {tags:<8}  {report.multiplicity[n]}{note}")
    print()
    for n in sorted(report.results):
        r = report.results[n]
        last = r.certificate.steps[-1].render() if r.certificate.steps else ""
        print(f"No.{n:<3} {r.verdict:<10} {r.stage:<13} {last}")
    return OK


def cmd_screen(cfg: CliConfig, numbers) -> int:
    catalog = cat.load_catalog(cfg.catalog_path)
    facts = cat.load_facts(cfg.facts_path)
    wanted = list(numbers or []) + list(cfg.entry_filter or [])
    if not wanted:
        raise UsageError("screen needs an entry number")
    certs = []
    for n in wanted:
        try:
            e = catalog.entry(n)
        except KeyError:
            raise UsageError(f"no entry No.{n}")
        _, cert = scr.screen_entry(e, catalog)
        validate(cert, facts)
        certs.append(cert)
    if cfg.json:
        print(json.dumps([c.to_dict() for c in certs], indent=2, ensure_ascii=False))
    else:
        print("\n".join(_render_cert(c) for c in certs))
    return OK


def cmd_window(cfg: CliConfig, args) -> int:
    W = lat.AMBIENTS[args.ambient]
    setup = scr.make_setup(W, lat.CurveData(args.genus, args.degree), args.ci)
    rep = scr.imprimitive_window(setup)
    payload = {"ambient": W.name, "genus": args.genus, "degree": args.degree,
               "lower": rep.lower, "upper": rep.upper, "feasible": rep.feasible,
               "genus_bound": scr.genus_bound(W)}
    text = (f"{W.name}, p_a={args.genus}, d={args.degree}: lower {rep.lower}, upper {rep.upper}, "
            f"{'feasible' if rep.feasible else 'infeasible'} (genus bound {payload['genus_bound']})")
    _emit(cfg, payload, text)
    return OK


def cmd_lattice(cfg: CliConfig, args) -> int:
    if args.lattice_cmd == "solve-boundary":
        mats = lat.solve_boundary_decomposition(*args.mu)
        text = "\n".join(f"D1 = {m[0][0]}*H1 + {m[0][1]}*H2, D2 = {m[1][0]}*H1 + {m[1][1]}*H2"
                         for m in mats) or "no decomposition"
        _emit(cfg, {"mu": list(args.mu), "decompositions": mats}, text)
    elif args.lattice_cmd == "anticanonical":
        k = lat.anticanonical_class(*args.mu)
        _emit(cfg, {"mu": list(args.mu), "minus_k": [k.c1, k.c2]}, f"-K = {k}")
    else:
        W = lat.AMBIENTS[args.ambient]
        L = lat.blowup_lattice(W, lat.CurveData(args.genus, args.degree))
        t = L.triple
        payload = {"form": [t.t300, t.t210, t.t120, t.t030], "degree": L.degree, "b3": L.b3}
        text = (f"H^3={t.t300}, H^2.E={t.t210}, H.E^2={t.t120}, E^3={t.t030}\n"
                f"(-K)^3 = {L.degree}, B3 = {L.b3}")
        _emit(cfg, payload, text)
    return OK


def cmd_surface(cfg: CliConfig, args) -> int:
    S = srf.RuledSurface(*args.ruled)
    if args.surface_cmd == "solve-genus":
        sols = srf.genus_equation_solutions(S, args.target, *args.box)
        _emit(cfg, {"solutions": [list(s) for s in sols]}, " ".join(f"({a},{b})" for a, b in sols) or "none")
        return OK
    c = srf.RuledClass(*args.cls)
    if args.surface_cmd == "genus":
        val = srf.arithmetic_genus(S, c)
    else:
        if args.other is None:
            raise UsageError("intersect needs --with a,b")
        val = srf.intersect(S, c, srf.RuledClass(*args.other))
    _emit(cfg, {"value": str(val)}, str(val))
    return OK


def cmd_verify(cfg: CliConfig, args) -> int:
    if args.target == "beta":
        rep = pv.beta_identity()
        _emit(cfg, {"name": rep.name, "passed": rep.passed, "details": rep.details},
              "\n".join(rep.details + [f"beta: {'pass' if rep.passed else 'FAIL'}"]))
        return OK if rep.passed else FAILED
    rep = pv.verify_affine_chain(args.chain)
    links = [{"index": l.index, "name": l.name, "passed": l.passed, "failures": [str(f) for f in l.failures],
              "inverse_checked": l.inverse_checked, "note": l.note} for l in rep.links]
    lines = [f"link {l.index} {l.name}: {'pass' if l.passed else 'FAIL'}"
             + (f" ({l.note})" if l.note else "") for l in rep.links]
    lines.append(f"final ring: {rep.free_count} free variables ({', '.join(rep.final_free)})")
    lines.append(f"chain: {'pass' if rep.passed else 'FAIL'}")
    _emit(cfg, {"passed": rep.passed, "links": links, "free_variables": list(rep.final_free)}, "\n".join(lines))
    return OK if rep.passed and rep.free_count == 3 else FAILED


def cmd_facts(cfg: CliConfig) -> int:
    facts = cat.load_facts(cfg.facts_path)
    payload = [{"id": f.id, "statement": f.statement, "source": f.source} for f in facts.values()]
    _emit(cfg, payload, "\n".join(f"{f.id}: {f.statement} [{f.source}]" for f in facts.values()))
    return OK


# --- parser -----------------------------------------------------------------


def _common(suppress: bool) -> argparse.ArgumentParser:
    d = argparse.SUPPRESS if suppress else None
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--json", action="store_true", default=d if suppress else False)
    p.add_argument("--catalog", default=d, metavar="PATH")
    p.add_argument("--facts", default=d, metavar="PATH")
    p.add_argument("--entry", type=int, action="append", default=d, metavar="N")
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common(True)
    p = argparse.ArgumentParser(prog="fanobound", parents=[_common(False)],
                                description="Screen Fano 3-folds with B2 = 2 for boundary triplets.")
    sub = p.add_subparsers(dest="cmd", required=True)
    sub.add_parser("classify", parents=[common], help="screen the whole catalog")
    s = sub.add_parser("screen", parents=[common], help="certificate for single entries")
    s.add_argument("numbers", type=int, nargs="*")
    w = sub.add_parser("window", parents=[common], help="Euler window for a blow-up")
    w.add_argument("--ambient", choices=sorted(lat.AMBIENTS), required=True)
    w.add_argument("--genus", type=int, required=True)
    w.add_argument("--degree", type=int, required=True)
    w.add_argument("--ci", action="store_true", help="curve is a complete intersection")

    lp = sub.add_parser("lattice", parents=[common], help="Picard lattice calculators")
    lsub = lp.add_subparsers(dest="lattice_cmd", required=True)
    for name in ("solve-boundary", "anticanonical"):
        x = lsub.add_parser(name, parents=[common])
        x.add_argument("--mu", type=int, nargs=2, required=True, metavar=("MU1", "MU2"))
    x = lsub.add_parser("blowup", parents=[common])
    x.add_argument("--ambient", choices=sorted(lat.AMBIENTS), required=True)
    x.add_argument("--genus", type=int, required=True)
    x.add_argument("--degree", type=int, required=True)

    sp = sub.add_parser("surface", parents=[common], help="ruled surface calculators")
    ssub = sp.add_subparsers(dest="surface_cmd", required=True)
    for name in ("intersect", "genus", "solve-genus"):
        x = ssub.add_parser(name, parents=[common])
        x.add_argument("--ruled", type=_pair, required=True, metavar="G,E")
        if name == "solve-genus":
            x.add_argument("--target", type=int, required=True)
            x.add_argument("--box", type=int, nargs=2, default=[10, 10], metavar=("A", "B"))
        else:
            x.add_argument("--class", dest="cls", type=_pair, required=True, metavar="A,B")
        if name == "intersect":
            x.add_argument("--with", dest="other", type=_pair, metavar="A,B")

    v = sub.add_parser("verify", parents=[common], help="check construction identities")
    v.add_argument("target", choices=["beta", "example-4-11", "affine-chain"])
    v.add_argument("--chain", default=None, metavar="PATH", help="alternative chain file")
    sub.add_parser("facts", parents=[common], help="list the external fact table")
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return BAD_INPUT if e.code else OK
    try:
        cfg = CliConfig(args.catalog, args.facts, args.json, args.entry)
        if args.cmd == "classify":
            return cmd_classify(cfg)
        if args.cmd == "screen":
            return cmd_screen(cfg, args.numbers)
        if args.cmd == "window":
            return cmd_window(cfg, args)
        if args.cmd == "lattice":
            return cmd_lattice(cfg, args)
        if args.cmd == "surface":
            return cmd_surface(cfg, args)
        if args.cmd == "verify":
            return cmd_verify(cfg, args)
        return cmd_facts(cfg)
    except (CertificateError, FactError) as e:
        print(f"error: {type(e).__name__}: {e}", file=sys.stderr)
        return FAILED
    except (FanoboundError, UsageError, KeyError) as e:
        print(f"error: {type(e).__name__}: {e}", file=sys.stderr)
        return BAD_INPUT


if __name__ == "__main__":
    sys.exit(main())
