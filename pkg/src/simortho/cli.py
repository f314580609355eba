"""Command-line interface.

Exit codes: 0 certificate / true, 1 disproved / false, 2 indeterminate,
3 input error. Results go to standard output as JSON.
"""

import argparse
import os
import sys
from concurrent.futures import ProcessPoolExecutor

from . import io
from .errors import (CertificateNotConstant, DegenerateBase, NotDiagonalizable,
                     NotFound, NotSimultaneouslyOrthogonalizable, OutOfBudget,
                     ParseError, RadicalNotContained, SimorthoError,
                     UnboundedFamily)
from .family import (DEFAULT_COMBINATION_BUDGET, FormFamily, family_radical,
                     minimal_radical_support, nondegenerate_combination)
from .forms import QuotientForm, radical
from .hyperreal import HyperFamily, check_wwe, negligible_subspace, st_form
from .oracle import STRATA, Nonexistent, generate_corpus, oracle_so
from .pipeline import (OrthoCertificate, check_so, orthogonalize_degenerate,
                       orthogonalize_nondegenerate, verify_certificate)
from .ultrafilter import StableTailFamily, check_pajaro, double_bracket, \
    pathological_subspace

EXIT_OK, EXIT_FALSE, EXIT_INDETERMINATE, EXIT_INPUT = 0, 1, 2, 3
_VERDICT_EXIT = {"certificate": EXIT_OK, "disproved": EXIT_FALSE,
                 "indeterminate": EXIT_INDETERMINATE}


class InputError(Exception):
    pass


def _emit(obj, out=None):
    text = io.dumps(obj)
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _family(path, kinds=(FormFamily,)):
    f = io.load_family(path)
    if not isinstance(f, kinds):
        names = ", ".join(k.__name__ for k in kinds)
        raise InputError(f"{path}: expected a {names} file, got {type(f).__name__}")
    return f


def _member(f, index, path):
    if not 0 <= index < len(f):
        raise InputError(f"{path}: member {index} out of range (family has {len(f)})")
    return f.members[index]


def cmd_radical(args):
    f = _family(args.family)
    r = radical(_member(f, args.member, args.family))
    _emit({"member": args.member, "radical": io.subspace_to_json(r),
           "nondegenerate": r.is_zero()})
    return EXIT_OK


def cmd_family_radical(args):
    f = _family(args.family)
    r = family_radical(f)
    _emit({"radical": io.subspace_to_json(r), "minimal_support": minimal_radical_support(f)})
    return EXIT_OK


def _check_one(path, budget):
    """Worker for ``check``: returns (json dict, exit code)."""
    try:
        f = _family(path)
    except (ParseError, InputError) as exc:
        return {"verdict": "input_error", "error": str(exc)}, EXIT_INPUT
    result = check_so(f, budget)
    return io.verdict_to_dict(result, f.field), _VERDICT_EXIT[result.verdict]


def cmd_check(args):
    if len(args.family) == 1:
        d, code = _check_one(args.family[0], args.budget)
        if code == EXIT_INPUT:
            raise InputError(d["error"])
        _emit(d, args.output)
        return code
    jobs = args.jobs or os.cpu_count() or 1
    if jobs == 1:
        results = [_check_one(p, args.budget) for p in args.family]
    else:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_check_one, args.family, [args.budget] * len(args.family)))
    _emit({"results": {p: d for p, (d, _c) in zip(args.family, results)}}, args.output)
    return max(c for _d, c in results)


def cmd_orthogonalize(args):
    f = _family(args.family)
    base = _member(f, args.base, args.family)
    try:
        if radical(base).is_zero():
            cert = orthogonalize_nondegenerate(f, args.base)
        else:
            cert = orthogonalize_degenerate(f, args.base)
    except NotSimultaneouslyOrthogonalizable as exc:
        _emit({"verdict": "disproved", "reason": exc.reason,
               "witness": io.to_jsonable(exc.witness)})
        return EXIT_FALSE
    except NotDiagonalizable as exc:
        _emit({"verdict": "disproved", "reason": "alternating residual",
               "witness": {"residual": io.subspace_to_json(exc.residual)}})
        return EXIT_FALSE
    except (RadicalNotContained, DegenerateBase) as exc:
        _emit({"verdict": "indeterminate", "reason": str(exc)})
        return EXIT_INDETERMINATE
    _emit(io.certificate_to_dict(cert), args.output)
    return EXIT_OK


def cmd_combo(args):
    f = _family(args.family)
    try:
        coeffs = nondegenerate_combination(f, args.budget)
    except NotFound as exc:
        _emit({"found": False, "reason": exc.reason, "evaluated": exc.evaluated})
        return EXIT_FALSE if exc.reason == "identically_singular" else EXIT_INDETERMINATE
    _emit({"found": True, "combination": io.values_to_json(coeffs)})
    return EXIT_OK


def cmd_quotient(args):
    f = _family(args.family)
    m = _member(f, args.member, args.family)
    killed = family_radical(f) if args.by == "family-radical" else radical(m)
    q = QuotientForm(m, killed)
    _emit({"killed": io.subspace_to_json(killed),
           "section": io.matrix_to_json(q.section),
           "gram": io.matrix_to_json(q.gram_q.gram)})
    return EXIT_OK


def cmd_double_bracket(args):
    f = _family(args.family, (FormFamily, StableTailFamily))
    db = double_bracket(f)
    _emit({"provenance": db.provenance, "gram": io.matrix_to_json(db.gram)})
    return EXIT_OK


def cmd_pathological(args):
    f = _family(args.family, (FormFamily, StableTailFamily))
    p = pathological_subspace(f)
    _emit({"pathological": io.subspace_to_json(p), "nonpathological": p.is_zero()})
    return EXIT_OK if p.is_zero() else EXIT_FALSE


def cmd_pajaro(args):
    f = _family(args.family, (FormFamily, StableTailFamily))
    cert = None
    if args.certificate:
        cert = io.load_certificate(args.certificate)
    else:
        fam = f.as_form_family() if isinstance(f, StableTailFamily) else f
        result = check_so(fam)
        cert = result if isinstance(result, OrthoCertificate) else None
    report = check_pajaro(f, cert)
    _emit(report.as_dict())
    return EXIT_OK


def cmd_st_form(args):
    f = _family(args.family, (HyperFamily,))
    try:
        sf = st_form(f)
    except UnboundedFamily as exc:
        _emit({"bounded": False, "error": str(exc)})
        return EXIT_FALSE
    _emit({"bounded": True, "gram_st": io.matrix_to_json(sf.gram_st),
           "negligible": io.subspace_to_json(negligible_subspace(f))})
    return EXIT_OK


def cmd_wwe_check(args):
    f = _family(args.family, (HyperFamily,))
    cert = io.load_certificate(args.certificate) if args.certificate else None
    try:
        report = check_wwe(f, cert)
    except UnboundedFamily as exc:
        _emit({"bounded": False, "error": str(exc)})
        return EXIT_FALSE
    except CertificateNotConstant as exc:
        _emit({"error": str(exc)})
        return EXIT_INDETERMINATE
    d = report.as_dict()
    d["negligible"] = io.subspace_to_json(report.negligible)
    _emit(d)
    return EXIT_OK if report.ok else EXIT_FALSE


def cmd_verify(args):
    f = _family(args.family)
    cert = io.load_certificate(args.certificate)
    report = verify_certificate(f, cert)
    _emit({"ok": report.ok, "witness": io.to_jsonable(report.witness)})
    return EXIT_OK if report.ok else EXIT_FALSE


def cmd_oracle(args):
    f = _family(args.family)
    try:
        result = oracle_so(f)
    except OutOfBudget as exc:
        _emit({"error": str(exc)})
        return EXIT_INDETERMINATE
    if isinstance(result, Nonexistent):
        _emit({"exists": False, "checked": result.checked})
        return EXIT_FALSE
    _emit({"exists": True, "basis": io.matrix_to_json(result)})
    return EXIT_OK


def cmd_corpus(args):
    corpus = generate_corpus(args.seed, args.count, args.stratum or None,
                             args.max_dim, args.max_forms)
    os.makedirs(args.out, exist_ok=True)
    width = len(str(max(args.count - 1, 0)))
    names = []
    for k, d in enumerate(corpus):
        name = os.path.join(args.out, f"family_{k:0{width}d}_{d['stratum']}.json")
        with open(name, "w", encoding="utf-8") as fh:
            fh.write(io.dumps(d))
        names.append(name)
    _emit({"written": names})
    return EXIT_OK


def build_parser():
    p = argparse.ArgumentParser(prog="simortho",
                                description="Simultaneous orthogonalization of symmetric bilinear forms.")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, fn, help_):
        sp = sub.add_parser(name, help=help_)
        sp.set_defaults(func=fn)
        return sp

    sp = add("radical", cmd_radical, "radical of one member")
    sp.add_argument("family")
    sp.add_argument("--member", type=int, default=0)

    sp = add("family-radical", cmd_family_radical, "common radical and a minimal support")
    sp.add_argument("family")

    sp = add("check", cmd_check, "decide simultaneous orthogonalizability")
    sp.add_argument("family", nargs="+")
    sp.add_argument("--budget", type=int, default=DEFAULT_COMBINATION_BUDGET)
    sp.add_argument("--jobs", type=int, default=0, help="worker processes for batches")
    sp.add_argument("-o", "--output")

    sp = add("orthogonalize", cmd_orthogonalize, "run the pipeline with a fixed base member")
    sp.add_argument("family")
    sp.add_argument("--base", type=int, default=0)
    sp.add_argument("-o", "--output")

    sp = add("combo", cmd_combo, "search a nondegenerate linear combination")
    sp.add_argument("family")
    sp.add_argument("--budget", type=int, default=DEFAULT_COMBINATION_BUDGET)

    sp = add("quotient", cmd_quotient, "quotient a member by a radical")
    sp.add_argument("family")
    sp.add_argument("--member", type=int, default=0)
    sp.add_argument("--by", choices=("radical", "family-radical"), default="radical")

    sp = add("double-bracket", cmd_double_bracket, "ultrapower form of a finite or stable-tail family")
    sp.add_argument("family")

    sp = add("pathological", cmd_pathological, "pathological subspace")
    sp.add_argument("family")

    sp = add("pajaro", cmd_pajaro, "check the pathology / double bracket implications")
    sp.add_argument("family")
    sp.add_argument("--certificate")

    sp = add("st-form", cmd_st_form, "standard-part form of a hyper family")
    sp.add_argument("family")

    sp = add("wwe-check", cmd_wwe_check, "check the st-form statements on a hyper family")
    sp.add_argument("family")
    sp.add_argument("--certificate")

    sp = add("verify", cmd_verify, "replay a certificate against a family")
    sp.add_argument("family")
    sp.add_argument("certificate")

    sp = add("oracle", cmd_oracle, "brute-force search over GL(n, p)")
    sp.add_argument("family")

    sp = add("corpus", cmd_corpus, "write a generated family corpus")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--count", type=int, default=60)
    sp.add_argument("--stratum", action="append", choices=STRATA)
    sp.add_argument("--max-dim", type=int, default=5)
    sp.add_argument("--max-forms", type=int, default=4)
    sp.add_argument("--out", required=True)
    return p


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    try:
        return args.func(args)
    except (ParseError, InputError, SimorthoError, ValueError) as exc:
        if isinstance(exc, AssertionError):
            raise
        print(f"simortho: error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
