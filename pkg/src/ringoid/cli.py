"""Command-line front end: ``ringoid COMMAND FILE [options]``.

Exit status is 0 when the check passes, 1 when it fails or is inconclusive,
and 2 on usage or parse errors.
"""

from __future__ import annotations

import argparse
import json
import os
import random
import sys
from dataclasses import dataclass, field
from itertools import product

from . import __version__
from .addcat import AddCat, validate_category
from .complexes import WeightWindow, check_weight_axioms, kb_hom, random_complex
from .fileformat import Document, ParseError, parse_presentation, serialize
from .ideals import (DEFAULT_MAX_EXPONENT, check_exact_sequence, check_nilpotent_extension, kernel_ideal,
                     nilpotence_certificate, quotient_category)
from .karoubi import DEFAULT_BOUND, karoubi_envelope
from .kzero import k0_compare, k0_enumeration
from .sqzero import build_square_zero, kernel_matches_bimodule


class UsageError(Exception):
    pass


@dataclass
class Report:
    command: str
    verdict: str
    fields: list[tuple[str, object]] = field(default_factory=list)

    def add(self, key: str, value) -> None:
        self.fields.append((key, value))

    def exit_code(self) -> int:
        return 0 if self.verdict == "pass" else 1

    def render(self, fmt: str) -> str:
        if fmt == "structured":
            return json.dumps({"command": self.command, "verdict": self.verdict, **dict(self.fields)},
                              indent=2, default=str)
        lines = [f"{self.command}: {self.verdict.upper()}"]
        for key, value in self.fields:
            if isinstance(value, dict):
                lines.append(f"  {key}:")
                lines += [f"    {k}: {v}" for k, v in value.items()]
            elif isinstance(value, list):
                lines.append(f"  {key}: {', '.join(map(str, value)) if value else '(none)'}")
            else:
                lines.append(f"  {key}: {value}")
        return "\n".join(lines)


def _verdict(flag: bool | None) -> str:
    return {True: "pass", False: "fail"}.get(flag, "inconclusive")


def _homs(c: AddCat) -> dict[str, str]:
    return {f"hom({x},{y})": str(c.hom(x, y)) for x, y in product(c.objects, repeat=2)}


def _env_int(name: str, default: int) -> int:
    raw = os.environ.get(name)
    if raw is None or raw == "":
        return default
    try:
        value = int(raw)
    except ValueError:
        raise UsageError(f"{name} must be an integer, got {raw!r}") from None
    if value < 1:
        raise UsageError(f"{name} must be positive")
    return value


def _category(doc: Document, name: str | None) -> tuple[str, AddCat]:
    if name is None:
        if not doc.categories:
            raise UsageError("the file defines no category")
        name = next(iter(doc.categories))
    if name not in doc.categories:
        raise UsageError(f"no category named {name!r}")
    return name, doc.categories[name]


def _killed(doc: Document, a_name: str, a: AddCat, args) -> list[str]:
    kill: list[str] = []
    for item in args.kill or []:
        kill += [k for k in item.split(",") if k]
    if getattr(args, "subcategory", None):
        if args.subcategory not in doc.subcategories:
            raise UsageError(f"no subcategory named {args.subcategory!r}")
        parent, objs = doc.subcategories[args.subcategory]
        if parent != a_name:
            raise UsageError(f"subcategory {args.subcategory} lives in {parent}, not {a_name}")
        kill += list(objs)
    bad = [k for k in kill if k not in a.objects]
    if bad:
        raise UsageError(f"unknown objects {bad} in {a_name}")
    return list(dict.fromkeys(kill))


def _lookup(table: dict, kind: str, name: str | None):
    if name is None:
        if len(table) == 1:
            return next(iter(table.items()))
        raise UsageError(f"name a {kind} (the file has {len(table)})")
    if name not in table:
        raise UsageError(f"no {kind} named {name!r}")
    return name, table[name]


# ---------------------------------------------------------------------------
# commands


def cmd_check(doc: Document, args) -> Report:
    rep = Report("check", "pass")
    results = {}
    for name, c in doc.categories.items():
        v = validate_category(c)
        results[f"category {name}"] = "ok" if v else f"{v.axiom} at {v.witness}: {v.message}"
    for name, f in doc.functors.items():
        v = f.validate()
        results[f"functor {name}"] = "ok" if v else f"{v.axiom} at {v.witness}: {v.message}"
    for name, m in doc.bimodules.items():
        v = m.validate()
        results[f"bimodule {name}"] = "ok" if v else f"{v.axiom} at {v.witness}: {v.message}"
    for name in doc.subcategories:
        results[f"subcategory {name}"] = "ok"
    for name, x in doc.complexes.items():
        results[f"complex {name}"] = "ok" if x.is_valid() else "d o d != 0"
    rep.add("items", results)
    if any(v != "ok" for v in results.values()):
        rep.verdict = "fail"
    return rep


def cmd_quotient(doc: Document, args) -> Report:
    name, a = _category(doc, args.category)
    kill = _killed(doc, name, a, args)
    q = quotient_category(a, kill, name=f"{name}/<{','.join(kill)}>")
    rep = Report("quotient", "pass")
    rep.add("category", name)
    rep.add("killed", kill)
    rep.add("hom groups", _homs(q.category))
    if args.emit:
        out = Document()
        out.add_category(args.emit_name, q.category)
        with open(args.emit, "w") as fh:
            fh.write(serialize(out))
        rep.add("written", args.emit)
    return rep


def cmd_karoubi(doc: Document, args) -> Report:
    name, a = _category(doc, args.category)
    env = karoubi_envelope(a, bound=args.bound)
    rep = Report("karoubi", "pass" if env.complete else "inconclusive")
    rep.add("category", name)
    rep.add("bound", f"idempotents searched on sums of at most {env.bound} objects")
    rep.add("new objects", env.new_objects)
    rep.add("objects", {k: f"{list(p.carrier)} with idempotent {[list(r) for r in p.idempotent.entries]}"
                        for k, p in env.objects.items()})
    rep.add("hom groups", _homs(env.category))
    if env.notes:
        rep.add("notes", env.notes)
    return rep


def cmd_sqzero(doc: Document, args) -> Report:
    name, m = _lookup(doc.bimodules, "bimodule", args.bimodule)
    v = m.validate()
    if not v:
        rep = Report("sqzero", "fail")
        rep.add("bimodule", name)
        rep.add("invalid", f"{v.axiom} at {v.witness}: {v.message}")
        return rep
    s = build_square_zero(m.base, m)
    valid = bool(validate_category(s.category))
    ker = kernel_ideal(s.projection)
    cert = nilpotence_certificate(ker, args.max_exponent)
    matches = kernel_matches_bimodule(s, ker)
    expected = 1 if m.is_zero() else 2
    ok = valid and matches and cert.exponent == expected
    rep = Report("sqzero", _verdict(ok))
    rep.add("bimodule", name)
    rep.add("base", doc.category_name(m.base))
    rep.add("category valid", valid)
    rep.add("kernel equals bimodule", matches)
    rep.add("nilpotence", cert.status)
    rep.add("exponent", cert.exponent)
    rep.add("bound", f"max exponent {args.max_exponent}")
    rep.add("hom groups", _homs(s.category))
    return rep


def cmd_nilpotent_check(doc: Document, args) -> Report:
    name, f = _lookup(doc.functors, "functor", args.functor)
    v = f.validate()
    if not v:
        rep = Report("nilpotent-check", "fail")
        rep.add("functor", name)
        rep.add("invalid", f"{v.axiom} at {v.witness}: {v.message}")
        return rep
    r = check_nilpotent_extension(f, args.max_exponent, args.bound)
    cert = r.certificate
    rep = Report("nilpotent-check", _verdict(r.verdict))
    rep.add("functor", f"{name}: {doc.category_name(f.source)} -> {doc.category_name(f.target)}")
    rep.add("essentially surjective", r.essentially_surjective)
    if r.unreached:
        rep.add("unreached objects", r.unreached)
    rep.add("full", r.full)
    if r.failing_pair:
        rep.add("not surjective on", f"hom{r.failing_pair}")
    rep.add("injective on isomorphism classes", r.bijective_on_classes)
    rep.add("kernel nilpotence", cert.status)
    rep.add("exponent", cert.exponent)
    rep.add("reason", cert.reason)
    if cert.witness:
        rep.add("witness", [f"{x}->{y}:{list(e)}" for x, y, e in cert.witness])
    rep.add("kernel powers", {f"I^{k + 1}": ", ".join(f"{x}->{y} {g}" for (x, y), g in p.items())
                              for k, p in enumerate(cert.powers)})
    rep.add("bound", f"max exponent {args.max_exponent}; objects with at most {args.bound} summands")
    return rep


def cmd_exact_check(doc: Document, args) -> Report:
    name, a = _category(doc, args.category)
    kill = _killed(doc, name, a, args)
    if args.functor is None:
        q = quotient_category(a, kill)
        g, c_name = q.projection, f"{name}/<{','.join(kill)}>"
    else:
        fname, g = _lookup(doc.functors, "functor", args.functor)
        if g.source is not a:
            raise UsageError(f"functor {fname} does not start at {name}")
        c_name = doc.category_name(g.target)
    rep = Report("exact-check", "fail")
    rep.add("sequence", f"<{','.join(kill)}> -> {name} -> {c_name}")
    v = g.validate()
    if not v:
        rep.add("invalid functor", f"{v.axiom} at {v.witness}: {v.message}")
        return rep
    bad = [k for k in kill if any(g.map_elem(k, k, a.id(k)))]
    if bad:
        rep.add("killed objects not sent to zero", bad)
        return rep
    r = check_exact_sequence(kill, a, g.target, g, args.bound)
    eq = r.equivalence
    rep.verdict = _verdict(r.exact)
    rep.add("induced functor fully faithful", eq.fully_faithful)
    if eq.failing_pair:
        rep.add("failing pair", list(eq.failing_pair))
    rep.add("retracts", {y: ("none found" if w is None else f"of {list(w[0])}") for y, w in eq.retracts.items()})
    rep.add("bound", f"retracts searched on sums of at most {eq.bound} objects")
    return rep


def cmd_k0(doc: Document, args) -> Report:
    name, a = _category(doc, args.category)
    k = k0_enumeration(a, args.bound)
    rep = Report("k0", "pass" if k.complete else "inconclusive")
    rep.add("category", name)
    rep.add("K0", str(k.group))
    rep.add("indecomposables", k.labels)
    rep.add("classes", {lab: list(v) for lab, v in k.classes.items()})
    rep.add("bound", f"idempotents searched on sums of at most {k.bound} objects")
    if k.notes:
        rep.add("notes", k.notes)
    return rep


def cmd_k0_compare(doc: Document, args) -> Report:
    name, a = _category(doc, args.category)
    if not all(a.hom(x, y).is_finite() for x, y in product(a.objects, repeat=2)):
        raise UsageError("k0-compare needs finite hom groups")
    e, o, agree = k0_compare(a, args.bound)
    rep = Report("k0-compare", _verdict(agree if e.complete else (False if not agree else None)))
    rep.add("category", name)
    rep.add("K0 by enumeration", str(e.group))
    rep.add("K0 by radical", str(o.k0.group))
    rep.add("radical order", o.radical_order)
    rep.add("central idempotents mod radical", o.central_idempotents)
    rep.add("agree", agree)
    rep.add("bound", f"idempotents searched on sums of at most {e.bound} objects")
    return rep


def cmd_weights_check(doc: Document, args) -> Report:
    name, a = _category(doc, args.category)
    rng = random.Random(args.seed)
    sample = [x for x in doc.complexes.values() if x.category is a]
    sample += [random_complex(a, rng) for _ in range(args.samples)]
    window = WeightWindow(args.ge0_from, args.le0_upto)
    r = check_weight_axioms(a, sample, window, heart_size=args.heart_size)
    rep = Report("weights-check", _verdict(r.ok))
    rep.add("category", name)
    rep.add("complexes", len(sample))
    rep.add("checks", r.checked)
    if r.failure:
        rep.add("failure", r.failure)
    rep.add("bound", f"{len(sample)} complexes; heart objects with at most {args.heart_size} summands")
    return rep


def cmd_kb_hom(doc: Document, args) -> Report:
    sname, x = _lookup(doc.complexes, "complex", args.source)
    tname, y = _lookup(doc.complexes, "complex", args.target)
    if x.category is not y.category:
        raise UsageError("the complexes live over different categories")
    rep = Report("kb-hom", "pass")
    rep.add("source", sname)
    rep.add("target", tname)
    rep.add("hom in K^b", str(kb_hom(x, y)))
    return rep


# ---------------------------------------------------------------------------
# argument parsing


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("plain", "structured"), default=argparse.SUPPRESS,
                        help="output style (default plain)")
    common.add_argument("--bound", type=int, default=argparse.SUPPRESS,
                        help="search bound on the number of summands (env RINGOID_BOUND, default 4)")
    common.add_argument("--max-exponent", type=int, default=argparse.SUPPRESS,
                        help="largest ideal power tried (env RINGOID_MAX_EXPONENT, default 16)")

    p = argparse.ArgumentParser(prog="ringoid", parents=[common],
                                description="Exact computations with small additive categories.")
    p.add_argument("--version", action="version", version=f"ringoid {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    def command(name, fn, helptext):
        s = sub.add_parser(name, parents=[common], help=helptext)
        s.add_argument("file")
        s.set_defaults(fn=fn)
        return s

    command("check", cmd_check, "validate every section of a file")
    s = command("quotient", cmd_quotient, "quotient by the ideal of maps factoring through objects")
    s.add_argument("--category")
    s.add_argument("--kill", action="append", help="objects to kill (repeat or comma-separate)")
    s.add_argument("--subcategory", help="kill the objects of a subcategory section")
    s.add_argument("--emit", help="write the quotient category to this file")
    s.add_argument("--emit-name", default="Q", help="category name used with --emit")
    s = command("karoubi", cmd_karoubi, "idempotent completion")
    s.add_argument("--category")
    s = command("sqzero", cmd_sqzero, "square-zero extension by a bimodule")
    s.add_argument("--bimodule")
    s = command("nilpotent-check", cmd_nilpotent_check, "is a functor a nilpotent extension")
    s.add_argument("--functor")
    s = command("exact-check", cmd_exact_check, "exactness of B -> A -> C")
    s.add_argument("--category")
    s.add_argument("--kill", action="append")
    s.add_argument("--subcategory")
    s.add_argument("--functor", help="functor A -> C (default: projection to the quotient)")
    s = command("k0", cmd_k0, "split Grothendieck group")
    s.add_argument("--category")
    s = command("k0-compare", cmd_k0_compare, "K0 by enumeration and by the radical")
    s.add_argument("--category")
    s = command("weights-check", cmd_weights_check, "weight structure axioms on sampled complexes")
    s.add_argument("--category")
    s.add_argument("--samples", type=int, default=20)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--heart-size", type=int, default=1)
    s.add_argument("--ge0-from", type=int, default=0)
    s.add_argument("--le0-upto", type=int, default=0)
    s = command("kb-hom", cmd_kb_hom, "homotopy classes of chain maps")
    s.add_argument("--source")
    s.add_argument("--target")
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    fmt = getattr(args, "format", "plain")
    try:
        if not hasattr(args, "bound"):
            args.bound = _env_int("RINGOID_BOUND", DEFAULT_BOUND)
        if not hasattr(args, "max_exponent"):
            args.max_exponent = _env_int("RINGOID_MAX_EXPONENT", DEFAULT_MAX_EXPONENT)
        if args.bound < 1 or args.max_exponent < 1:
            raise UsageError("bounds must be positive")
        doc = parse_presentation(args.file, validate=args.command != "check")
        report = args.fn(doc, args)
    except (UsageError, ParseError, OSError) as exc:
        print(f"ringoid: error: {exc}", file=sys.stderr)
        return 2
    print(report.render(fmt))
    return report.exit_code()


if __name__ == "__main__":
    sys.exit(main())
