"""Command line interface.

Each command prints a JSON report on stdout and a one-line summary on
stderr.  Exit codes: 0 success, 2 validation failure, 3 unknown or stalled,
64 usage error.
"""

import argparse
import json
import sys

from . import fileformat as ff
from .chargroup import Scalar, format_scalar, parse_scalar
from .complexes import (boundary_difference, dualize, minimize, n_equiv,
                        replay_complex, validate)
from .corpus import CORPUS, corpus
from .errors import ComplexInvalid, NovikovError
from .matrix import invert, verify_inverse
from .torsion import UNKNOWN, latour_obstruction

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_UNKNOWN = 3
EXIT_USAGE = 64


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _scalar(text):
    try:
        return parse_scalar(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def build_parser():
    p = _Parser(prog="novikov", description="Chain complexes over Novikov rings.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("validate", help="check d^2 = 0; optionally replay a report's log")
    s.add_argument("--in", dest="input", required=True)
    s.add_argument("--replay", metavar="REPORT", help="minimize/torsion report to replay")
    s.add_argument("--dimension", type=int, help="warn on generators outside 2..n-2")

    s = sub.add_parser("minimize", help="cancel unit pivots")
    s.add_argument("--in", dest="input", required=True)
    s.add_argument("--cutoff", type=_scalar, default=None)
    s.add_argument("--max-steps", type=int, default=100)
    s.add_argument("--search-depth", type=int, default=0)
    s.add_argument("--noise-seed", type=int)
    s.add_argument("--noise-level", type=_scalar, help="L_noise for approximated basis changes")
    s.add_argument("--out", help="write the minimized complex here")

    s = sub.add_parser("torsion", help="Latour obstruction certificate")
    s.add_argument("--in", dest="input", required=True)
    s.add_argument("--cutoff", type=_scalar, default=None)
    s.add_argument("--max-steps", type=int, default=100)
    s.add_argument("--search-depth", type=int, default=0)

    s = sub.add_parser("dual", help="dual complex over -chi")
    s.add_argument("--in", dest="input", required=True)
    s.add_argument("--n", type=int, required=True, help="formal dimension")
    s.add_argument("--out")

    s = sub.add_parser("compare", help="N-equivalence of two complexes")
    s.add_argument("--a", required=True)
    s.add_argument("--b", required=True)
    s.add_argument("--N", type=_scalar, required=True)

    s = sub.add_parser("invert", help="invert a matrix document")
    s.add_argument("--in", dest="input", required=True)
    s.add_argument("--cutoff", type=_scalar, required=True)
    s.add_argument("--out")

    s = sub.add_parser("truncate", help="truncate every entry below a cutoff")
    s.add_argument("--in", dest="input", required=True)
    s.add_argument("--cutoff", type=_scalar, required=True)
    s.add_argument("--out")

    s = sub.add_parser("corpus", help="write a fixture complex")
    s.add_argument("name", choices=sorted(CORPUS))
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--out")
    return p


def _emit(report, summary):
    sys.stdout.write(ff.dumps(report))
    print(summary, file=sys.stderr)


def _write_or_embed(C, path, report, key="output"):
    if path:
        ff.store(C, path)
        report[f"{key}_path"] = path
    report[key] = ff.to_document(C)


def cmd_validate(args):
    C = ff.load(args.input, check=False)
    rep = validate(C, args.dimension)
    report = {"command": "validate", "valid": rep.ok,
              "failures": [list(f) for f in rep.failures], "warnings": rep.warnings}
    code = EXIT_OK if rep.ok else EXIT_INVALID
    summary = "valid" if rep.ok else f"d^2 != 0 at {rep.failures[:5]}"
    if args.replay and rep.ok:
        with open(args.replay, encoding="utf-8") as fh:
            prior = json.load(fh)
        log_doc = prior.get("log") or prior.get("certificate", {}).get("log")
        if log_doc is None:
            raise UsageError("report has no embedded log")
        log = ff.log_from_json(C.ring, log_doc)
        replayed = replay_complex(C, log, log.cutoff)
        expected = ff.from_document(prior["output"]) if "output" in prior else None
        match = True
        if expected is not None:
            N = log.cutoff if log.cutoff is not None else Scalar(0)
            match = replayed.trimmed().ranks == expected.trimmed().ranks and \
                n_equiv(replayed.trimmed(), expected.trimmed(), N)
        report["replay"] = {"moves": len(log), "matches_output": match,
                            "replayed_ranks": list(replayed.ranks)}
        if not match:
            code = EXIT_INVALID
        summary += f"; replayed {len(log)} moves, " + ("output reproduced" if match
                                                        else "output NOT reproduced")
    _emit(report, summary)
    return code


def _noise(args):
    if (args.noise_seed is None) != (args.noise_level is None):
        raise UsageError("--noise-seed and --noise-level go together")
    return None if args.noise_seed is None else (args.noise_seed, args.noise_level)


def cmd_minimize(args):
    noise = _noise(args)
    C = ff.load(args.input)
    M, log, rep = minimize(C, max_steps=args.max_steps, search_depth=args.search_depth,
                           L=args.cutoff, noise=noise)
    report = {"command": "minimize", **rep, "log": ff.log_to_json(log)}
    _write_or_embed(M, args.out, report)
    _emit(report, f"{rep['status']}: ranks {rep['rank_trajectory'][0]} -> {rep['final_ranks']}"
                  f" in {rep['steps']} cancellations")
    return EXIT_OK if rep["status"] in ("empty", "no pivot") else EXIT_UNKNOWN


def cmd_torsion(args):
    C = ff.load(args.input)
    cert = latour_obstruction(C, L=args.cutoff, max_steps=args.max_steps,
                              search_depth=args.search_depth)
    report = {"command": "torsion", "certificate": ff.certificate_to_json(cert)}
    _emit(report, cert.summary())
    return EXIT_UNKNOWN if cert.kind == UNKNOWN else EXIT_OK


def cmd_dual(args):
    C = ff.load(args.input)
    D = dualize(C, args.n)
    report = {"command": "dual", "n": args.n}
    _write_or_embed(D, args.out, report)
    _emit(report, f"dual ranks {list(D.ranks)} over -chi")
    return EXIT_OK


def cmd_compare(args):
    A, B = ff.load(args.a), ff.load(args.b)
    verdict = n_equiv(A, B, args.N)
    diff = boundary_difference(A, B) if A.ranks == B.ranks else None
    report = {"command": "compare", "N": format_scalar(args.N), "n_equiv": verdict,
              "difference_norm": None if diff is None else str(diff)}
    _emit(report, f"n_equiv at N={format_scalar(args.N)}: {verdict}")
    return EXIT_OK


def cmd_invert(args):
    with open(args.input, encoding="utf-8") as fh:
        M = ff.matrix_from_document(json.load(fh))
    inv = invert(M, args.cutoff)
    ok = verify_inverse(M, inv)
    doc = ff.matrix_to_document(inv)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(ff.dumps(doc))
    report = {"command": "invert", "verified": ok, "inverse": doc}
    _emit(report, f"{M.rows}x{M.cols} inverse to cutoff {format_scalar(args.cutoff)}; "
                  f"multiply-back {'ok' if ok else 'FAILED'}")
    return EXIT_OK if ok else EXIT_UNKNOWN


def cmd_truncate(args):
    C = ff.load(args.input).truncate(args.cutoff)
    report = {"command": "truncate", "cutoff": format_scalar(args.cutoff)}
    _write_or_embed(C, args.out, report)
    _emit(report, f"truncated at {format_scalar(args.cutoff)}")
    return EXIT_OK


def cmd_corpus(args):
    params = {"seed": args.seed} if args.name == "random" else {}
    C = corpus(args.name, **params)
    if args.out:
        ff.store(C, args.out)
        print(f"wrote {args.name} to {args.out}", file=sys.stderr)
    else:
        sys.stdout.write(ff.dumps(ff.to_document(C)))
    return EXIT_OK


COMMANDS = {
    "validate": cmd_validate, "minimize": cmd_minimize, "torsion": cmd_torsion,
    "dual": cmd_dual, "compare": cmd_compare, "invert": cmd_invert,
    "truncate": cmd_truncate, "corpus": cmd_corpus,
}


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"novikov: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ComplexInvalid as exc:
        _emit({"command": args.command, "valid": False,
               "failures": [list(f) for f in exc.failures]}, str(exc))
        return EXIT_INVALID
    except (NovikovError, OSError, ValueError, KeyError) as exc:
        _emit({"command": args.command, "error": type(exc).__name__, "message": str(exc)},
              f"error: {exc}")
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
