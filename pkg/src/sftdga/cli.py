"""Command line front end.

Exit codes: 0 on success (check passed / primitive found / classification
completed), 1 when a check fails or no primitive exists within bounds, 2 for
unusable input (parse errors, incompatible flavors, missing bounds).
"""

from __future__ import annotations

import argparse
import hashlib
import os
import sys

from . import io as sio
from .algebra import Flavor
from .corpus import corpus_entry, random_layered_spec, standard_corpus
from .differential import apply_d, check_d_squared, full_check, restrict_spec
from .errors import FlavorError, SftdgaError
from .indexcalc import enumerate_admissible_profiles
from .vanishing import (
    SearchBounds,
    classify,
    lift_primitive,
    project_primitive,
    search_unit_primitive,
)


def _bounds_from_args(args) -> SearchBounds:
    if getattr(args, "bounds", None):
        return sio.bounds_from_data(sio.load_document(args.bounds))
    kw = {}
    if getattr(args, "max_word_length", None) is not None:
        kw["max_word_length"] = args.max_word_length
    if getattr(args, "max_hbar", None) is not None:
        kw["max_hbar"] = args.max_hbar
    return SearchBounds(**kw)


def _policy_from_args(args):
    if getattr(args, "policy", None):
        return sio.policy_from_data(sio.load_document(args.policy))
    return None


def _input_digests(args):
    paths = []
    for attr in ("spec", "element", "primitive", "signature", "bounds", "policy"):
        value = getattr(args, attr, None)
        if isinstance(value, str):
            paths.append(value)
    paths.extend(getattr(args, "specs", None) or [])
    digests = {}
    for path in paths:
        with open(path, "rb") as fh:
            digests[path] = hashlib.sha256(fh.read()).hexdigest()
    return digests


def _emit(args, command, verdicts, payload, residuals=None, bounds=None,
          policy=None):
    """Write a machine-readable report: canonical JSON, no timestamps, so
    identical inputs give byte-identical reports."""
    if not getattr(args, "report", None):
        return
    doc = {
        "format": "sftdga-report",
        "version": sio.FORMAT_VERSION,
        "command": command,
        "inputs": _input_digests(args),
        "verdicts": verdicts,
    }
    doc.update(payload)
    if residuals:
        doc["residuals"] = residuals
    if bounds is not None:
        doc["bounds"] = sio.bounds_to_data(bounds)
    if policy is not None:
        doc["policy"] = sio.policy_to_data(policy)
    sio.save_document(args.report, doc)


def _check_verdicts(report):
    return {i.name: ("skipped" if i.passed is None else i.passed)
            for i in report.items}


def _check_residuals(report):
    return {i.name: i.detail for i in report.items if i.passed is False}


def _flavor(name):
    try:
        return Flavor(name)
    except ValueError:
        raise FlavorError("unknown flavor %r (expected one of %s)"
                          % (name, ", ".join(f.value for f in Flavor))) from None


def _load_spec(args):
    dspec = sio.differential_from_data(sio.load_document(args.spec))
    if getattr(args, "flavor", None):
        dspec = restrict_spec(dspec, _flavor(args.flavor))
    return dspec


def _load_primitive(path, sig):
    doc = sio.load_document(path)
    fmt = doc.get("format") if isinstance(doc, dict) else None
    if fmt == "sftdga-certificate":
        return sio.certificate_from_data(doc, sig).primitive
    return sio.element_from_data(doc, sig)


def cmd_validate(args):
    dspec = _load_spec(args)
    report = full_check(dspec)
    print(report.summary())
    _emit(args, "validate", _check_verdicts(report),
          {"checks": sio.check_report_to_data(report)},
          residuals=_check_residuals(report))
    return 0 if report.ok else 1


def cmd_d2(args):
    dspec = _load_spec(args)
    report = check_d_squared(dspec)
    print(report.summary())
    _emit(args, "d2", _check_verdicts(report),
          {"checks": sio.check_report_to_data(report)},
          residuals=_check_residuals(report))
    return 0 if report.ok else 1


def cmd_apply(args):
    dspec = _load_spec(args)
    elem = sio.element_from_data(sio.load_document(args.element), dspec.sig)
    image = apply_d(dspec, elem)
    data = sio.element_to_data(image)
    if args.out:
        sio.save_document(args.out, data)
    else:
        sys.stdout.write(sio.canonical_bytes(data).decode("utf-8"))
    return 0


def cmd_find_primitive(args):
    dspec = _load_spec(args)
    bounds = _bounds_from_args(args)
    result = search_unit_primitive(dspec, bounds)
    cert = result.certificate
    payload = {
        "candidates": result.candidates,
        "constraints": result.constraints,
        "note": result.note,
        "certificate": None if cert is None
        else sio.certificate_to_data(cert, dspec.sig),
    }
    _emit(args, "find-primitive", {"found": cert is not None}, payload,
          bounds=bounds)
    if cert is None:
        print("no primitive within bounds (%d candidates): %s"
              % (result.candidates, result.note))
        return 1
    print("primitive found (%s): d(f) = 1 with f = %s"
          % (cert.detail, cert.primitive))
    if args.out:
        sio.save_document(args.out, sio.certificate_to_data(cert, dspec.sig))
    return 0


def cmd_lift(args):
    dspec = _load_spec(args)
    primitive = _load_primitive(args.primitive, dspec.sig)
    policy = _policy_from_args(args)
    cert = lift_primitive(dspec, primitive, policy)
    scope = ("exactly" if cert.verified_to_weight is None
             else "to weight %d" % cert.verified_to_weight)
    print("%s: verified %s = %s" % (cert.method, scope, cert.verified))
    data = sio.certificate_to_data(cert, dspec.sig)
    _emit(args, "lift",
          {"verified": cert.verified,
           "verified_to_weight": cert.verified_to_weight},
          {"certificate": data}, policy=policy)
    if args.out:
        sio.save_document(args.out, data)
    else:
        sys.stdout.write(sio.canonical_bytes(data).decode("utf-8"))
    return 0 if cert.verified else 1


def cmd_project(args):
    dspec = _load_spec(args)
    primitive = _load_primitive(args.primitive, dspec.sig)
    cert = project_primitive(dspec, primitive)
    print("%s: verified = %s" % (cert.method, cert.verified))
    data = sio.certificate_to_data(cert, dspec.sig)
    _emit(args, "project", {"verified": cert.verified},
          {"certificate": data})
    if args.out:
        sio.save_document(args.out, data)
    else:
        sys.stdout.write(sio.canonical_bytes(data).decode("utf-8"))
    return 0 if cert.verified else 1


def cmd_classify(args):
    specs = {}
    sig = None
    for path in args.specs:
        dspec = sio.differential_from_data(sio.load_document(path))
        specs[dspec.flavor] = dspec
        sig = dspec.sig
    bounds = _bounds_from_args(args)
    policy = _policy_from_args(args)
    if policy is None:
        for s in specs.values():
            policy = policy or s.policy
    flavors = None
    if args.flavors:
        flavors = [_flavor(f.strip()) for f in args.flavors.split(",")
                   if f.strip()]
    report = classify(specs, bounds, policy, flavors)
    print(report.summary())
    _emit(args, "classify",
          {e.flavor.value: e.status for e in report.entries},
          {"classification": sio.classify_report_to_data(report, sig)})
    bad = any(e.status in ("invalid-spec", "error") for e in report.entries)
    return 1 if bad else 0


def cmd_enumerate(args):
    sig = sio.signature_from_data(sio.load_document(args.signature))
    groups = None
    if args.group:
        groups = [tuple(int(x) for x in g.split(",")) for g in args.group]
    profiles = enumerate_admissible_profiles(
        sig, args.orbit, args.role, dimension=args.dimension,
        max_genus=args.max_genus, max_punctures=args.max_punctures,
        marked=args.marked, groups=groups,
        action_filter=not args.no_action_filter)
    for prof in profiles:
        c_minus, c_plus = prof.factors(sig)
        print("g=%d m=%d I-=%s I+=%s A=%s C-=%d C+=%d"
              % (prof.genus, prof.marked, dict(prof.i_minus),
                 dict(prof.i_plus), list(prof.group), c_minus, c_plus))
    print("%d profiles" % len(profiles))
    return 0


def cmd_corpus(args):
    if not args.name:
        for entry in standard_corpus():
            print("%-22s %s" % (entry.name, entry.description))
        return 0
    if args.name == "layered":
        entry = random_layered_spec(args.seed, with_unit=not args.no_unit)
    else:
        try:
            entry = corpus_entry(args.name)
        except KeyError as e:
            print(str(e), file=sys.stderr)
            return 2
    outdir = args.dir or "."
    os.makedirs(outdir, exist_ok=True)
    base = os.path.join(outdir, entry.name)
    sio.save_document(base + "-signature.json",
                      sio.signature_to_data(entry.master.sig))
    sio.save_document(base + "-differential.json",
                      sio.differential_to_data(entry.master,
                                               raw_counts=args.raw_counts))
    sio.save_document(base + "-bounds.json", sio.bounds_to_data(entry.bounds))
    sio.save_document(base + "-policy.json", sio.policy_to_data(entry.policy))
    print("wrote %s-{signature,differential,bounds,policy}.json" % base)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sftdga",
        description="graded differential algebras of contact data: "
                    "validation, primitive search, flavor maps")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, help_):
        p = sub.add_parser(name, help=help_)
        p.set_defaults(func=func)
        return p

    p = add("validate", cmd_validate, "structural checks plus d^2 = 0")
    p.add_argument("spec")
    p.add_argument("--flavor", help="restrict the spec to this flavor first")
    p.add_argument("--report", help="write a JSON check report")

    p = add("d2", cmd_d2, "check d^2 = 0 only")
    p.add_argument("spec")
    p.add_argument("--flavor")
    p.add_argument("--report")

    p = add("apply", cmd_apply, "apply the differential to an element")
    p.add_argument("spec")
    p.add_argument("element")
    p.add_argument("--flavor")
    p.add_argument("--out", help="write the image element here instead of stdout")

    p = add("find-primitive", cmd_find_primitive,
            "search for f with d(f) = 1 inside bounds")
    p.add_argument("spec")
    p.add_argument("--flavor")
    p.add_argument("--bounds", help="bounds JSON file")
    p.add_argument("--max-word-length", type=int)
    p.add_argument("--max-hbar", type=int)
    p.add_argument("--report", help="write a JSON search report")
    p.add_argument("--out", help="write the certificate here, for lift/project")

    p = add("lift", cmd_lift, "lift a primitive into a larger flavor")
    p.add_argument("spec", help="differential of the target flavor")
    p.add_argument("primitive", help="element or certificate JSON")
    p.add_argument("--flavor", help="restrict the spec to this target flavor")
    p.add_argument("--policy", help="truncation policy JSON")
    p.add_argument("--out")
    p.add_argument("--report")

    p = add("project", cmd_project, "project a primitive onto a smaller flavor")
    p.add_argument("spec", help="differential of the target flavor")
    p.add_argument("primitive")
    p.add_argument("--flavor", help="restrict the spec to this target flavor")
    p.add_argument("--out")
    p.add_argument("--report")

    p = add("classify", cmd_classify,
            "classify unit-exactness across flavors, with certificates")
    p.add_argument("specs", nargs="+")
    p.add_argument("--bounds")
    p.add_argument("--max-word-length", type=int)
    p.add_argument("--max-hbar", type=int)
    p.add_argument("--policy")
    p.add_argument("--flavors", help="comma-separated subset, e.g. CH,rSFT*")
    p.add_argument("--report")

    p = add("enumerate", cmd_enumerate,
            "list puncture profiles of a given expected dimension")
    p.add_argument("signature")
    p.add_argument("--orbit", required=True)
    p.add_argument("--role", choices=["+", "-"], default="+")
    p.add_argument("--dimension", type=int, default=0)
    p.add_argument("--max-genus", type=int, default=0)
    p.add_argument("--max-punctures", type=int, default=4)
    p.add_argument("--marked", type=int, default=0)
    p.add_argument("--group", action="append",
                   help="comma-separated group exponent, repeatable")
    p.add_argument("--no-action-filter", action="store_true")

    p = add("corpus", cmd_corpus, "list built-in examples or write one out")
    p.add_argument("name", nargs="?")
    p.add_argument("--dir")
    p.add_argument("--seed", type=int, default=2026)
    p.add_argument("--no-unit", action="store_true")
    p.add_argument("--raw-counts", action="store_true",
                   help="write curve counts undivided by C(I-) C(I+)")

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (SftdgaError, OSError) as e:
        print("error: %s" % e, file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
