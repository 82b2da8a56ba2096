"""Command-line interface.

    ainfty check      SPEC | --fixture NAME     higher associativity (or morphism relations)
    ainfty transfer   SPEC | --fixture NAME     minimal model, inclusion and projection
    ainfty oracle-diff SPEC | --fixture NAME    recursions against the perturbation lemma
    ainfty compose    F G                       G after F, verified
    ainfty formality  SPEC | --fixture NAME     m'_n = 0 for n >= 3 and balancedness

Exit codes: 0 all checks pass, 1 a verification failed, 2 bad input.
"""
from __future__ import annotations

import argparse
import json
import os
import sys

from . import io as aio
from .algebra import (
    check_higher_associativity, check_morphism, compose, identity_morphism, morphisms_equal,
)
from .coalgebra import oracle_transfer, transfer_difference
from .fixtures import FIXTURES, fixture_path
from .graded import ArityMismatch, DegreeMismatch, SpaceMismatch
from .retract import NotADifferential, NotARetract, build_retract
from .sampling import make_rng, random_order
from .scalars import DivisionByZero, field_from_tag
from .transfer import NotADgAlgebra, RetractMismatch, transfer

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2
DEFAULT_CAP = 6

INPUT_ERRORS = (aio.ParseError, aio.SemanticError, OSError, NotADifferential, NotADgAlgebra,
                RetractMismatch, NotARetract, DegreeMismatch, SpaceMismatch, ArityMismatch,
                DivisionByZero)


class InputError(Exception):
    pass


def default_cap():
    env = os.environ.get("AINFTY_CAP")
    if env is None or env == "":
        return None
    try:
        cap = int(env)
    except ValueError:
        raise InputError("AINFTY_CAP must be a positive integer, got %r" % env) from None
    if cap < 1:
        raise InputError("AINFTY_CAP must be a positive integer, got %r" % env)
    return cap


def resolve_cap(args, spec_cap=None):
    """--cap, then AINFTY_CAP, then the file's cap, then 6."""
    if args.cap is not None:
        if args.cap < 1:
            raise InputError("--cap must be positive")
        return args.cap
    env = default_cap()
    if env is not None:
        return env
    return spec_cap if spec_cap is not None else DEFAULT_CAP


def convert_spec(spec, field):
    """The same structure constants read in another field."""
    conv = lambda table: {k: {j: field(c) for j, c in v.items()} for k, v in table.items()}
    diff = {k: {j: c for j, c in v.items() if c} for k, v in conv(spec.differential).items()}
    prods = {}
    for n, t in spec.products.items():
        t = {k: {j: c for j, c in v.items() if c} for k, v in conv(t).items()}
        prods[n] = {k: v for k, v in t.items() if v}
    return aio.AlgebraSpec(field, spec.basis, {k: v for k, v in diff.items() if v},
                           {n: t for n, t in prods.items() if t}, spec.cap, dict(spec.flags),
                           spec.description)


def load_input(args):
    if args.fixture and args.spec:
        raise InputError("give either a spec file or --fixture, not both")
    if args.fixture:
        if args.fixture not in FIXTURES:
            raise InputError("unknown fixture %r; known: %s" % (args.fixture, ", ".join(FIXTURES)))
        path = fixture_path(args.fixture)
        spec = aio.parse_spec_text(path.read_text(encoding="utf-8"), args.fixture)
    elif args.spec:
        spec = aio.parse_spec(args.spec)
    else:
        raise InputError("no input: give a spec file or --fixture NAME")
    if args.field:
        try:
            F = field_from_tag(args.field)
        except ValueError as e:
            raise InputError(str(e)) from None
        if F != spec.field:
            try:
                spec = convert_spec(spec, F)
            except TypeError as e:
                raise InputError("cannot convert to %s: %s" % (F.name, e)) from None
    cap = resolve_cap(args, spec.cap)
    alg = spec.algebra(cap)
    stored = max(spec.products, default=2)
    if not alg.is_dga() and spec.cap is not None and cap > spec.cap and stored >= spec.cap:
        print("warning: operations above arity %d were not stored in the input" % stored,
              file=sys.stderr)
    return spec, alg, cap


def write_report(args, report):
    text = aio.emit_report(report)
    if args.report:
        with open(args.report, "w", encoding="utf-8") as fh:
            fh.write(text)
    if getattr(args, "json", False):
        sys.stdout.write(text)


def say(args, *parts):
    if not getattr(args, "json", False):
        print(*parts)


def _vector(v, names, field):
    return " + ".join("%s*%s" % (field.format(c), names[k[0]]) for k, c in sorted(v.items()))


def _status(ok):
    return "pass" if ok else "FAIL"


def _retract(args, alg):
    order = None
    if args.seed is not None:
        order = random_order(make_rng(args.seed), alg.space.dim)
    return build_retract(alg.space, alg.differential(), order)


# commands -----------------------------------------------------------------

def cmd_check(args):
    if args.spec and ("#" in args.spec or _is_morphism_file(args.spec)):
        return _check_morphism_file(args)
    spec, alg, cap = load_input(args)
    results = {}
    ok = True
    for n in range(1, cap + 1):
        res = check_higher_associativity(alg, n)
        ok &= res.ok
        results[str(n)] = aio.check_json(res, alg.space.names, alg.space.names, alg.field)
        say(args, "associativity n=%d: %s (%d basis tensors)" % (n, _status(res.ok), res.checked))
        for key, v in res.violations[:3]:
            say(args, "  residual at (%s): %s" % (", ".join(alg.space.names[i] for i in key),
                                                  _vector(v, alg.space.names, alg.field)))
    write_report(args, {"command": "check", "cap": cap, "associativity": results, "all_passed": ok})
    return EXIT_OK if ok else EXIT_FAIL


def _is_morphism_file(path):
    try:
        with open(path, encoding="utf-8") as fh:
            obj = json.load(fh)
    except (OSError, ValueError):
        return False
    return isinstance(obj, dict) and "components" in obj


def _check_morphism_file(args):
    mspec = aio.parse_morphism(args.spec)
    cap = resolve_cap(args, mspec.cap)
    f = mspec.morphism(cap)
    ok, out = _verify_morphism(args, f, cap, "morphism")
    write_report(args, {"command": "check", "cap": cap, "morphism": out, "all_passed": ok})
    return EXIT_OK if ok else EXIT_FAIL


def _verify_morphism(args, f, cap, label):
    A, B = f.source.space, f.target.space
    out = {}
    ok = True
    for n in range(1, cap + 1):
        res = check_morphism(f, n)
        ok &= res.ok
        out[str(n)] = aio.check_json(res, A.names, B.names, A.field)
        say(args, "%s n=%d: %s (%d basis tensors)" % (label, n, _status(res.ok), res.checked))
    return ok, out


def _summary(args, alg, result, cap):
    H = result.minimal.space
    say(args, "method: %s, cap %d" % (result.method, cap))
    say(args, "homology basis: %s" % ", ".join("%s (degree %d)" % (n, d)
                                              for n, d in zip(H.names, H.degrees)))
    for n in range(2, cap + 1):
        if n in result.vanishing:
            say(args, "m'_%d: vanishes for degree reasons" % n)
        else:
            say(args, "m'_%d: %d nonzero structure constants"
                % (n, len(result.m(n).structure_constants())))


def cmd_transfer(args):
    spec, alg, cap = load_input(args)
    r = _retract(args, alg)
    result = transfer(alg, r, cap)
    _summary(args, alg, result, cap)
    ver = aio.verification_json(alg, result.minimal, result.inclusion, result.projection, cap)
    for part in ("associativity", "inclusion", "projection"):
        bad = [n for n, v in ver[part].items() if not v["ok"]]
        say(args, "%s: %s" % (part, "pass for n <= %d" % cap if not bad
                              else "FAIL at n = %s" % ", ".join(bad)))
    form = aio.formality_json(result.minimal, cap)
    report = aio.transfer_report(result, alg, cap, verification=ver, formality=form,
                                 description=spec.description)
    write_report(args, report)
    return EXIT_OK if ver["all_passed"] else EXIT_FAIL


def cmd_oracle_diff(args):
    spec, alg, cap = load_input(args)
    r = _retract(args, alg)
    a = transfer(alg, r, cap)
    b = oracle_transfer(alg, r, cap)
    diff = transfer_difference(a, b, cap)
    out = aio.oracle_diff_json(diff, a, b)
    say(args, "convention: %s" % aio.ORACLE_CONVENTION)
    for n, entry in out["arities"].items():
        say(args, "arity %s: %s" % (n, ", ".join("%s %d" % (k, v["differences"])
                                                 for k, v in sorted(entry.items()))))
    say(args, "difference is identically zero" if out["zero"] else "DIFFERENCE IS NONZERO")
    write_report(args, {"command": "oracle-diff", "cap": cap, "method": a.method,
                        "oracle_diff": out})
    return EXIT_OK if out["zero"] else EXIT_FAIL


def cmd_compose(args):
    fs = aio.parse_morphism(args.first)
    gs = aio.parse_morphism(args.second)
    caps = [c for c in (fs.cap, gs.cap) if c is not None]
    cap = resolve_cap(args, min(caps) if caps else None)
    f, g = fs.morphism(cap), gs.morphism(cap)
    if f.target.space != g.source.space:
        raise InputError("the target of the first morphism is not the source of the second")
    if f.target.tables() != g.source.tables():
        raise InputError("the middle algebras carry different structures")
    ok_f, _ = _verify_morphism(args, f, cap, "first")
    ok_g, _ = _verify_morphism(args, g, cap, "second")
    gf = compose(f, g, cap)
    ok, out = _verify_morphism(args, gf, cap, "composite")
    is_id = gf.source.space == gf.target.space and morphisms_equal(gf, identity_morphism(gf.source, cap))
    say(args, "composite is the identity morphism: %s" % ("yes" if is_id else "no"))
    report = {"command": "compose", "cap": cap, "inputs_valid": ok_f and ok_g,
              "composite_check": out, "all_passed": ok and ok_f and ok_g,
              "composite_is_identity": is_id,
              "composite": aio.MorphismSpec.from_morphism(gf, cap).to_json()}
    write_report(args, report)
    return EXIT_OK if report["all_passed"] else EXIT_FAIL


def cmd_formality(args):
    spec, alg, cap = load_input(args)
    r = _retract(args, alg)
    result = transfer(alg, r, cap)
    form = aio.formality_json(result.minimal, cap)
    for n, count in form["higher_operations"].items():
        say(args, "m'_%s: %d nonzero structure constants" % (n, count))
    if form["witness"]:
        w = form["witness"]
        say(args, "witness: m'_%d(%s) = %s" % (w["arity"], ", ".join(w["input"]),
                                              " + ".join("%s*%s" % (c, e) for e, c in w["output"].items())))
    bad = [n for n, v in form["balanced"].items() if not v["ok"]]
    say(args, "balanced: %s" % ("yes" if not bad else "no (fails at n = %s)" % ", ".join(bad)))
    say(args, "formal: %s" % ("yes" if form["formal"] else "no"))
    write_report(args, {"command": "formality", "cap": cap, "formality": form})
    return EXIT_OK if form["formal"] else EXIT_FAIL


def build_parser():
    parser = argparse.ArgumentParser(prog="ainfty", description="A-infinity minimal models by homotopy transfer.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, spec=True):
        if spec:
            p.add_argument("spec", nargs="?", help="algebra spec file (JSON)")
            p.add_argument("--fixture", choices=sorted(FIXTURES), help="use a shipped fixture")
            p.add_argument("--field", help="read the input over Q or Fp:<p>")
            p.add_argument("--seed", type=int, help="permute the retract's basis priority with this seed")
        p.add_argument("--cap", type=int, help="weight cap (default: AINFTY_CAP or the file's cap or 6)")
        p.add_argument("--report", help="write the JSON report here")
        p.add_argument("--json", action="store_true", help="print the JSON report instead of a summary")

    common(sub.add_parser("check", help="check the higher associativity (or morphism) relations"))
    common(sub.add_parser("transfer", help="compute the minimal model and verify it"))
    common(sub.add_parser("oracle-diff", help="compare the recursions with the perturbation lemma"))
    p = sub.add_parser("compose", help="compose two morphisms (second after first) and verify")
    p.add_argument("first", help="morphism file, or report.json#inclusion, #projection, #composite")
    p.add_argument("second", help="morphism file, or report.json#inclusion, #projection, #composite")
    common(p, spec=False)
    common(sub.add_parser("formality", help="decide formality of the minimal model up to the cap"))
    return parser


COMMANDS = {"check": cmd_check, "transfer": cmd_transfer, "oracle-diff": cmd_oracle_diff,
            "compose": cmd_compose, "formality": cmd_formality}


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_INPUT if e.code else EXIT_OK
    try:
        return COMMANDS[args.command](args)
    except (InputError, *INPUT_ERRORS) as e:
        print("error: %s" % e, file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
