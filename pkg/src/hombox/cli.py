"""Command-line surface: build complexes, verify the chain matching, and
certify the simple-equivariant-homotopy theorem.

Exit codes: 0 success, 2 verification failure, 3 size guard exceeded,
4 input error (bad arguments, unreadable input, malformed JSON).
JSON outputs are canonical (sorted keys, compact separators, trailing
newline), so identical inputs produce byte-identical files.
"""

import argparse
import json
import os
import sys

from .boxcx import box_edge
from .cellcx import barycentric_subdivision
from .collapse import (MainTheoremCertificate, main_theorem_certificate,
                       replay_main_theorem, verify_critical_isomorphism)
from .errors import InputError, SizeGuard, VerificationError
from .homcx import hom_complex
from .homology import homology_agreement
from .morse import build_matching
from .rgraph import load_rgraph

DEFAULT_MAX_CELLS = 1_000_000


def canonical_json(obj):
    return json.dumps(obj, sort_keys=True, separators=(",", ":")) + "\n"


class _Parser(argparse.ArgumentParser):
    """argparse reports usage problems by raising InputError (exit 4)."""

    def error(self, message):
        raise InputError(message)


def _add_common(p):
    p.add_argument("--input", required=True, metavar="PATH",
                   help="path to r-graph JSON")
    p.add_argument("--max-cells", type=int, default=DEFAULT_MAX_CELLS,
                   metavar="N", help="size guard (default %(default)s)")
    p.add_argument("--out", metavar="PATH", help="write the JSON report here")


def make_parser():
    p = _Parser(prog="hombox", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", metavar="command", required=True)

    b = sub.add_parser("build", help="build a complex and dump its cells")
    _add_common(b)
    b.add_argument("--complex", dest="complex_kind", default="box",
                   choices=["box", "hom", "sd-box", "sd-hom"],
                   help="which complex to build (default box)")
    b.add_argument("--dot", metavar="PATH",
                   help="write a DOT Hasse diagram of the face poset")

    v = sub.add_parser(
        "verify", help="build and verify the equivariant acyclic matching")
    _add_common(v)
    v.add_argument("--certificate", metavar="PATH",
                   help="matching certificate: checked if present, "
                        "written otherwise")

    t = sub.add_parser(
        "theorem",
        help="certify simple equivariant homotopy equivalence of box and Hom")
    _add_common(t)
    t.add_argument("--coeff", choices=["z", "z2"], default="z",
                   help="homology coefficients (default z)")
    t.add_argument("--certificate", metavar="PATH",
                   help="theorem certificate: replayed if present, "
                        "written otherwise")
    return p


def _write(path, text):
    try:
        with open(path, "w") as fh:
            fh.write(text)
    except OSError as e:
        raise InputError("cannot write %s: %s" % (path, e))


def _load(args):
    if args.max_cells < 1:
        raise InputError("--max-cells must be at least 1")
    try:
        return load_rgraph(args.input)
    except OSError as e:
        raise InputError("cannot read %s: %s" % (args.input, e))
    except ValueError as e:
        raise InputError("bad r-graph JSON in %s: %s" % (args.input, e))


def cmd_build(args):
    H = _load(args)
    mc = args.max_cells
    kind = args.complex_kind
    if kind == "box":
        cx = box_edge(H, max_cells=mc).cx
    elif kind == "hom":
        cx = hom_complex(H, max_cells=mc).cx
    elif kind == "sd-box":
        cx = barycentric_subdivision(box_edge(H, max_cells=mc).cx,
                                     max_cells=mc)
    else:
        cx = barycentric_subdivision(hom_complex(H, max_cells=mc).cx,
                                     max_cells=mc)
    print("%s: %d cells" % (kind, len(cx)))
    for d, n in enumerate(cx.dim_counts()):
        print("  dim %d: %d" % (d, n))
    if args.out:
        _write(args.out, canonical_json(cx.to_json_obj()))
    if args.dot:
        _write(args.dot, cx.to_dot())
    return 0


def _check_or_write(path, payload, what):
    if os.path.exists(path):
        try:
            with open(path) as fh:
                old = fh.read()
        except OSError as e:
            raise InputError("cannot read %s: %s" % (path, e))
        if old != payload:
            raise VerificationError(
                "%s certificate %s does not match this run" % (what, path))
        print("%s certificate %s verified" % (what, path))
    else:
        _write(path, payload)
        print("%s certificate written to %s" % (what, path))


def cmd_verify(args):
    H = _load(args)
    M = build_matching(H, max_cells=args.max_cells)
    verify_critical_isomorphism(M, max_cells=args.max_cells)
    if not M.d_cells():
        print("D empty; complexes isomorphic")
    else:
        print(M.summary())
    payload = canonical_json(M.to_json_obj())
    if args.certificate:
        _check_or_write(args.certificate, payload, "matching")
    if args.out:
        report = {
            "cells": len(M.sd),
            "d_cells": len(M.d_cells()),
            "sigma": len(M.sigma()),
            "critical": len(M.critical),
            "isomorphic_onto_critical": True,
        }
        _write(args.out, canonical_json(report))
    return 0


def cmd_theorem(args):
    H = _load(args)
    mc = args.max_cells
    M = build_matching(H, max_cells=mc)
    path = args.certificate
    if path and os.path.exists(path):
        try:
            with open(path) as fh:
                obj = json.load(fh)
        except OSError as e:
            raise InputError("cannot read %s: %s" % (path, e))
        except ValueError as e:
            raise InputError("bad certificate JSON in %s: %s" % (path, e))
        cert = MainTheoremCertificate.from_json_obj(obj)
        replay_main_theorem(H, cert, max_cells=mc, matching=M)
        print("theorem certificate %s replayed: %d stages ok"
              % (path, len(cert.stages)))
    else:
        cert = main_theorem_certificate(H, max_cells=mc, matching=M)
        print("theorem certificate built: %d stages" % len(cert.stages))
        if path:
            _write(path, canonical_json(cert.to_json_obj()))
            print("theorem certificate written to %s" % path)
    agree = homology_agreement(H, coeff=args.coeff, max_cells=mc)
    if not agree.agree:
        raise VerificationError(
            "homology disagrees: box %r vs hom %r"
            % (agree.box_report, agree.hom_report))
    print("homology agrees: betti %s torsion %s"
          % (agree.box_report["betti"], agree.box_report["torsion"]))
    if args.out:
        report = {
            "agree": True,
            "betti": agree.box_report["betti"],
            "torsion": agree.box_report["torsion"],
            "endpoints": cert.to_json_obj()["endpoints"],
        }
        _write(args.out, canonical_json(report))
    return 0


def main(argv=None):
    parser = make_parser()
    try:
        args = parser.parse_args(argv)
        if args.command == "build":
            return cmd_build(args)
        if args.command == "verify":
            return cmd_verify(args)
        return cmd_theorem(args)
    except SizeGuard as e:
        print("size guard: %s" % e, file=sys.stderr)
        return 3
    except VerificationError as e:
        print("verification failed: %s" % e, file=sys.stderr)
        return 2
    except InputError as e:
        print("input error: %s" % e, file=sys.stderr)
        return 4


if __name__ == "__main__":
    sys.exit(main())
