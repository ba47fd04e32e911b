"""Command surface: make / check / search / verify / translate / homology / op.

Exit codes: 0 = yes/found, 1 = no/refuted, 2 = unknown or budget exhausted,
3 = usage or parse error.
"""

from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ThreadPoolExecutor

from . import fileio, fixtures
from .certificates import (CollapseSequence, ConstructionTree, EdgeZipStep,
                           ShellSequence, ZipStep, certificate_from_json,
                           certificate_to_json, edge_zipping_payload,
                           verify_collapse, verify_construction,
                           verify_edge_zipping, verify_shelling,
                           verify_simplicial_collapse, verify_zipping,
                           zipping_payload)
from .core import MonotoneMap, Poset, SubposetMask
from .homology import mod2_betti, order_complex_chain, poset_homology
from .ops import FacetComplex
from .verdict import Verdict

EXIT_YES = 0
EXIT_NO = 1
EXIT_UNKNOWN = 2
EXIT_USAGE = 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.exit(EXIT_USAGE, "%s: error: %s\n" % (self.prog, message))


def _read(path):
    with open(path, "r", encoding="utf-8") as fh:
        return fh.read()


def _emit(args, text):
    if getattr(args, "emit", None):
        with open(args.emit, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _load_poset(path) -> Poset:
    obj = fileio.load_subject(_read(path))
    if isinstance(obj, FacetComplex):
        return obj.face_poset()
    if not isinstance(obj, Poset):
        raise fileio.ParseError("expected a poset or facet file")
    return obj


def _load_complex(path) -> FacetComplex:
    obj = fileio.load_subject(_read(path))
    if not isinstance(obj, FacetComplex):
        raise fileio.ParseError("expected a facet file")
    return obj


def _mask_arg(p: Poset, spec):
    if not spec:
        return SubposetMask(p, 0)
    return SubposetMask(p, spec.split(","))


def _verdict_exit(v: Verdict, args):
    payload = {"verdict": v.value}
    if v.witness is not None and not hasattr(v.witness, "steps"):
        payload["witness"] = _plain(v.witness)
    if getattr(args, "format", "text") == "json":
        print(json.dumps(payload, sort_keys=True))
    else:
        print(v.value if v.witness is None
              else "%s (%s)" % (v.value, _plain(v.witness)))
    return {"yes": EXIT_YES, "no": EXIT_NO,
            "unknown": EXIT_UNKNOWN}[v.value]


def _plain(w):
    if isinstance(w, (str, int, float, list, dict, type(None))):
        return w
    return repr(w)


# ---------------------------------------------------------------------------
# make


def cmd_make(args):
    name = args.fixture
    if name == "mirror":
        if not args.arg:
            raise fileio.ParseError("mirror needs a facet file argument")
        from .ops import mirror
        out = mirror(_load_complex(args.arg))
        _emit(args, fileio.write_poset(out))
        return EXIT_YES
    if name in ("simplex", "boundary-simplex", "cube"):
        if args.arg is None:
            raise fileio.ParseError("%s needs a dimension argument" % name)
        if name != "cube" and args.facets:
            n = int(args.arg)
            vs = [str(i) for i in range(n + 1)]
            if name == "simplex":
                k = FacetComplex([vs])
            else:
                k = FacetComplex([vs[:i] + vs[i + 1:] for i in range(n + 1)])
            _emit(args, fileio.write_facets(k))
            return EXIT_YES
        out = fixtures.make_fixture(name, args.arg)
        _emit(args, fileio.write_poset(out))
        return EXIT_YES
    out = fixtures.make_fixture(name, args.arg)
    if isinstance(out, FacetComplex):
        _emit(args, fileio.write_facets(out))
    else:
        _emit(args, fileio.write_poset(out))
    return EXIT_YES


# ---------------------------------------------------------------------------
# check


def cmd_check(args):
    from . import recognize
    from .homology import is_z_acyclic
    name = args.property
    jobs = max(1, args.jobs)
    if name in ("filtration-map", "pure-filtration-map", "closed-map",
                "open-map", "full-map", "embedding"):
        f = fileio.parse_map(_read(args.subject))
        if name == "filtration-map":
            return _verdict_exit(recognize.is_filtration_map(f), args)
        if name == "pure-filtration-map":
            return _verdict_exit(recognize.is_pure_filtration_map(f), args)
        val = {"closed-map": f.is_closed, "open-map": f.is_open,
               "full-map": f.is_full, "embedding": f.is_embedding}[name]()
        return _verdict_exit(Verdict.yes() if val else Verdict.no(), args)
    p = _load_poset(args.subject)
    if name == "codim-one":
        return _verdict_exit(
            recognize.is_codim_one(_mask_arg(p, args.mask)), args)
    if name == "pure-codim-one":
        return _verdict_exit(
            recognize.is_pure_codim_one(_mask_arg(p, args.mask)), args)
    if name == "manifold":
        return _verdict_exit(
            recognize.is_manifold(p, _mask_arg(p, args.mask)), args)
    if name in ("cell-complex", "pseudo-manifold") and jobs > 1:
        # per-cell sphere checks are pure; run them in a pool
        def cell(x):
            bd, _ = p.induced(p.dn[x] & ~(1 << x))
            return recognize.is_sphere(bd)
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            verdicts = list(pool.map(cell, range(p.n)))
        if name == "cell-complex":
            from .verdict import verdict_all
            if any(v.is_no for v in verdicts):
                return _verdict_exit(Verdict.no(), args)
            return _verdict_exit(verdict_all(verdicts), args)
    table = {
        "simplicial": recognize.is_simplicial,
        "cubical": recognize.is_cubical,
        "cubosimplicial": recognize.is_cubosimplicial,
        "simple": recognize.is_simple,
        "flag": recognize.is_flag,
        "nonsingular": recognize.is_nonsingular,
        "pure": recognize.is_pure,
        "sphere": recognize.is_sphere,
        "ball": recognize.is_ball,
        "cell-complex": recognize.is_cell_complex,
        "pseudo-manifold": recognize.is_pseudo_manifold,
    }
    if name in table:
        return _verdict_exit(table[name](p), args)
    if name == "conditionally-complete":
        return _verdict_exit(
            Verdict.yes() if p.is_conditionally_complete() else Verdict.no(),
            args)
    if name == "atomic":
        return _verdict_exit(
            Verdict.yes() if p.is_atomic() else Verdict.no(), args)
    if name == "connected":
        return _verdict_exit(
            Verdict.yes() if p.connected() else Verdict.no(), args)
    if name == "z-acyclic":
        return _verdict_exit(
            Verdict.yes() if is_z_acyclic(p) else Verdict.no(), args)
    raise fileio.ParseError("unknown property %r" % (name,))


# ---------------------------------------------------------------------------
# search


def cmd_search(args):
    from .search import (BudgetExceeded, find_collapse, find_construction,
                         find_edge_zipping, find_shelling, find_zipping)
    kind = args.kind
    budget = args.budget
    try:
        if kind == "constructibility":
            p = _load_poset(args.subject)
            tree = find_construction(p, budget)
            if tree is None:
                print("refuted: no construction exists")
                return EXIT_NO
            cert = certificate_to_json(
                "construction", tree.to_obj(),
                fileio.subject_hash(p))
            _emit(args, cert)
            return EXIT_YES
        if kind == "zipping":
            p = _load_poset(args.subject)
            steps = find_zipping(p, args.goal, budget)
            if steps is None:
                print("refuted: no zipping to %s exists" % args.goal)
                return EXIT_NO
            cert = certificate_to_json(
                "zipping", zipping_payload(steps, args.goal),
                fileio.subject_hash(p))
            _emit(args, cert)
            return EXIT_YES
        if kind == "edge-zipping":
            k = _load_complex(args.subject)
            if not args.target:
                raise fileio.ParseError("edge-zipping needs --target")
            target = _load_complex(args.target)
            steps = find_edge_zipping(k, target, budget)
            if steps is None:
                print("refuted: no edge-zipping to the target exists")
                return EXIT_NO
            cert = certificate_to_json(
                "edge-zipping", edge_zipping_payload(steps),
                fileio.subject_hash(k),
                extra={"target_sha256": fileio.subject_hash(target)})
            _emit(args, cert)
            return EXIT_YES
        if kind == "shelling":
            p = _load_poset(args.subject)
            seq = find_shelling(p, budget, empty_goal=args.empty_goal)
            if seq is None:
                print("refuted: not %sshellable"
                      % ("empty-" if args.empty_goal else ""))
                return EXIT_NO
            cert = certificate_to_json("shelling", seq.to_obj(),
                                       fileio.subject_hash(p))
            _emit(args, cert)
            return EXIT_YES
        if kind == "collapse":
            p = _load_poset(args.subject)
            if args.target_mask is not None:
                tgt = _mask_arg(p, args.target_mask)
                seq = find_collapse(p, tgt, budget)
                payload_target = sorted(tgt.labels())
            else:
                from .search import CollapseSearch
                seq = CollapseSearch(p, budget).search(p.full_mask(), None)
                payload_target = "singleton"
            if seq is None:
                print("refuted: no collapse exists")
                return EXIT_NO
            obj = seq.to_obj()
            obj["target"] = payload_target
            cert = certificate_to_json("collapse", obj,
                                       fileio.subject_hash(p))
            _emit(args, cert)
            return EXIT_YES
    except BudgetExceeded as e:
        print("unknown: %s" % e)
        return EXIT_UNKNOWN
    raise fileio.ParseError("unknown search kind %r" % (kind,))


# ---------------------------------------------------------------------------
# verify


def _check_subject_hash(obj, subject):
    want = obj.get("subject_sha256")
    have = fileio.subject_hash(subject)
    if want != have:
        return False, "subject hash mismatch"
    return True, None


def cmd_verify(args):
    obj = certificate_from_json(_read(args.certificate))
    kind = obj.get("kind")
    subject = fileio.load_subject(_read(args.subject))
    ok, why = _check_subject_hash(obj, subject)
    if not ok:
        print("rejected: %s" % why)
        return EXIT_NO
    try:
        if kind == "construction":
            p = subject if isinstance(subject, Poset) else subject.face_poset()
            tree = ConstructionTree.from_obj(obj["payload"])
            ok, why = verify_construction(p, tree)
        elif kind == "zipping":
            p = subject if isinstance(subject, Poset) else subject.face_poset()
            steps = [ZipStep.from_obj(s) for s in obj["payload"]["steps"]]
            ok, why = verify_zipping(p, steps, obj["payload"].get("goal",
                                                                  "singleton"))
        elif kind == "edge-zipping":
            if not args.target:
                raise fileio.ParseError("edge-zipping verification needs "
                                        "--target")
            target = _load_complex(args.target)
            steps = [EdgeZipStep.from_obj(s)
                     for s in obj["payload"]["steps"]]
            ok, why = verify_edge_zipping(subject, steps, target)
        elif kind == "collapse":
            p = subject if isinstance(subject, Poset) else subject.face_poset()
            seq = CollapseSequence.from_obj(obj["payload"])
            tgt = obj["payload"].get("target")
            if tgt == "singleton":
                from .certificates import verify_collapse_to_any_singleton
                ok, why = verify_collapse_to_any_singleton(
                    p, p.full_mask(), seq)
            else:
                ok, why = verify_collapse(p, seq, p._mask_of(tgt))
        elif kind == "shelling":
            p = subject if isinstance(subject, Poset) else subject.face_poset()
            seq = ShellSequence.from_obj(obj["payload"])
            ok, why = verify_shelling(p, seq)
        elif kind == "simplicial-collapse":
            p = subject if isinstance(subject, Poset) else subject.face_poset()
            from .translate import _chains_of_mask
            faces = _chains_of_mask(p, p.full_mask())
            pairs = [(frozenset(a), frozenset(b))
                     for a, b in obj["payload"]["pairs"]]
            ok, why = verify_simplicial_collapse(
                faces, pairs, [frozenset(obj["payload"]["final"])])
        else:
            ok, why = False, "unknown certificate kind %r" % (kind,)
    except (KeyError, ValueError, TypeError) as e:
        ok, why = False, "malformed payload: %s" % (e,)
    if ok:
        print("verified")
        return EXIT_YES
    print("rejected: %s" % why)
    return EXIT_NO


# ---------------------------------------------------------------------------
# translate


def cmd_translate(args):
    from .translate import (barycentric_collapse_lift,
                            zipping_from_construction,
                            zipping_from_edge_zipping)
    obj = certificate_from_json(_read(args.certificate))
    kind = obj.get("kind")
    subject = fileio.load_subject(_read(args.subject))
    ok, why = _check_subject_hash(obj, subject)
    if not ok:
        print("rejected: %s" % why)
        return EXIT_NO
    if args.kind == "construction-to-zip":
        if kind != "construction":
            raise fileio.ParseError("expected a construction certificate")
        p = subject if isinstance(subject, Poset) else subject.face_poset()
        tree = ConstructionTree.from_obj(obj["payload"])
        # the certificate proves p constructible; the zipping lives on p*
        k = p.dual()
        steps, assumed = zipping_from_construction(k, tree)
        cert = certificate_to_json(
            "zipping", zipping_payload(steps, "singleton", assumed),
            fileio.subject_hash(k),
            extra={"subject_is_dual_of": fileio.subject_hash(p)})
        _emit(args, cert)
        return EXIT_YES
    if args.kind == "edge-zip-to-zip":
        if kind != "edge-zipping":
            raise fileio.ParseError("expected an edge-zipping certificate")
        k = subject
        if not isinstance(k, FacetComplex):
            raise fileio.ParseError("edge-zip translation needs a facet file")
        steps = [EdgeZipStep.from_obj(s) for s in obj["payload"]["steps"]]
        zsteps = zipping_from_edge_zipping(k, steps)
        cert = certificate_to_json(
            "zipping", zipping_payload(zsteps, "replay"),
            fileio.subject_hash(k.face_poset()))
        _emit(args, cert)
        return EXIT_YES
    if args.kind == "collapse-to-barycentric":
        if kind != "collapse":
            raise fileio.ParseError("expected a collapse certificate")
        p = subject if isinstance(subject, Poset) else subject.face_poset()
        seq = CollapseSequence.from_obj(obj["payload"])
        pairs, final = barycentric_collapse_lift(p, seq)
        payload = {"pairs": [[sorted(a), sorted(b)] for a, b in pairs],
                   "final": [final]}
        cert = certificate_to_json("simplicial-collapse", payload,
                                   fileio.subject_hash(p))
        _emit(args, cert)
        return EXIT_YES
    raise fileio.ParseError("unknown translation %r" % (args.kind,))


# ---------------------------------------------------------------------------
# homology


def cmd_homology(args):
    p = _load_poset(args.subject)
    prof = poset_homology(p)
    m2 = mod2_betti(order_complex_chain(p))
    obj = {"betti": prof.betti, "torsion": prof.torsion,
           "euler": prof.euler, "mod2_betti": m2,
           "reduced_trivial": prof.is_reduced_trivial()}
    if args.format == "json":
        print(json.dumps(obj, sort_keys=True))
    else:
        print("betti: %s" % (prof.betti,))
        print("torsion: %s" % (prof.torsion,))
        print("euler: %d" % prof.euler)
        print("mod2 betti: %s" % (m2,))
    return EXIT_YES


# ---------------------------------------------------------------------------
# op


def cmd_op(args):
    from . import ops
    from .cylinders import (hocolim_reconstruct, lmc, mc, mc_star, quotient,
                            tmc)
    from .core import transitive_closure
    name = args.operation
    if name in ("join", "product", "prejoin", "cojoin"):
        p = _load_poset(args.subject)
        if not args.other:
            raise fileio.ParseError("%s needs a second poset via --other"
                                    % name)
        q = _load_poset(args.other)
        out = getattr(ops, name)(p, q)
    elif name in ("dual", "cone", "dual-cone", "barycentric", "canonical",
                  "handles", "barycentric-handles"):
        p = _load_poset(args.subject)
        fn = {"dual": lambda x: x.dual(), "cone": ops.cone,
              "dual-cone": ops.dual_cone, "barycentric": ops.barycentric,
              "canonical": ops.canonical, "handles": ops.handles,
              "barycentric-handles": ops.barycentric_handles}[name]
        out = fn(p)
    elif name in ("mc", "mc-star", "lmc", "tmc"):
        f = fileio.parse_map(_read(args.subject))
        build = {"mc": mc, "mc-star": mc_star, "lmc": lmc}.get(name)
        if name == "tmc":
            out = tmc(f)
        else:
            pre = build(f)
            if not pre.is_partial_order():
                print("note: relation is not a partial order; emitting its "
                      "transitive closure", file=sys.stderr)
            out = transitive_closure(pre)
    elif name == "quotient":
        p = _load_poset(args.subject)
        out = quotient(p, _mask_arg(p, args.mask))
    elif name == "hocolim-reconstruct":
        f = fileio.parse_map(_read(args.subject))
        out, witness = hocolim_reconstruct(f)
    else:
        raise fileio.ParseError("unknown operation %r" % (name,))
    _emit(args, fileio.write_poset(out))
    return EXIT_YES


# ---------------------------------------------------------------------------


def build_parser():
    ap = _Parser(prog="posetcalc",
                 description="finite poset calculus and certificate engine")
    sub = ap.add_subparsers(dest="command", required=True)

    mk = sub.add_parser("make", help="generate a fixture")
    mk.add_argument("fixture",
                    choices=["simplex", "boundary-simplex", "cube",
                             "octahedron", "dunce-hat", "prism", "mirror"])
    mk.add_argument("arg", nargs="?")
    mk.add_argument("--facets", action="store_true",
                    help="emit simplex fixtures as facet files")
    mk.add_argument("--emit")

    ck = sub.add_parser("check", help="run a named recognizer")
    ck.add_argument("property")
    ck.add_argument("subject")
    ck.add_argument("--mask", default=None,
                    help="comma-separated labels (boundary/subposet)")
    ck.add_argument("--jobs", type=int, default=1)
    ck.add_argument("--format", choices=["text", "json"], default="text")

    se = sub.add_parser("search", help="run a certificate search")
    se.add_argument("kind", choices=["constructibility", "zipping",
                                     "edge-zipping", "shelling", "collapse"])
    se.add_argument("subject")
    se.add_argument("--goal", choices=["singleton", "cone", "dual-cone"],
                    default="singleton")
    se.add_argument("--target", help="target facet file (edge-zipping)")
    se.add_argument("--target-mask", dest="target_mask", default=None,
                    help="comma-separated labels (collapse target)")
    se.add_argument("--empty-goal", action="store_true",
                    help="search the empty-shelling variant")
    se.add_argument("--budget", type=int, default=None)
    se.add_argument("--jobs", type=int, default=1)
    se.add_argument("--emit")

    ve = sub.add_parser("verify", help="replay a certificate")
    ve.add_argument("certificate")
    ve.add_argument("subject")
    ve.add_argument("--target", help="target facet file (edge-zipping)")

    tr = sub.add_parser("translate", help="translate a certificate")
    tr.add_argument("kind", choices=["construction-to-zip", "edge-zip-to-zip",
                                     "collapse-to-barycentric"])
    tr.add_argument("certificate")
    tr.add_argument("subject")
    tr.add_argument("--emit")

    ho = sub.add_parser("homology", help="order-complex homology")
    ho.add_argument("subject")
    ho.add_argument("--format", choices=["text", "json"], default="text")

    op = sub.add_parser("op", help="apply a construction")
    op.add_argument("operation")
    op.add_argument("subject")
    op.add_argument("--other", help="second poset file (binary operations)")
    op.add_argument("--mask", default=None)
    op.add_argument("--emit")

    return ap


def main(argv=None):
    ap = build_parser()
    args = ap.parse_args(argv)
    handlers = {"make": cmd_make, "check": cmd_check, "search": cmd_search,
                "verify": cmd_verify, "translate": cmd_translate,
                "homology": cmd_homology, "op": cmd_op}
    try:
        return handlers[args.command](args)
    except fileio.ParseError as e:
        print("error: %s" % e, file=sys.stderr)
        return EXIT_USAGE
    except FileNotFoundError as e:
        print("error: %s" % e, file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
