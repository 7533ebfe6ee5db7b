"""Command-line entry point: ``h2ia verify|eval|reduce|tau|kernel``.

Exit status is 0 when every check passes, 1 when some check fails and 2 on a
usage or input error.
"""

from __future__ import annotations

import argparse
import json
import sys

from ..free_words import POOL_SIZE, format_word
from ..ia_alphabet import eval_aut, eval_ia, max_index, word_from_json
from ..johnson import sparse_rows, tau_of_word
from ..kernels import BACKEND
from ..rewrite import CertificateError, invariant_check, load_certificate, replay, trace_lines
from ..homlin.lattice import format_matrix
from ..homlin.exponent_matrix import MatrixMismatch, build_r5r6_matrix, kernel_report
from .report import header_record, write_report
from .suites import DEFAULT_SEED, SUITES, default_jobs, run_suite

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class InputError(Exception):
    pass


def _load_word(path: str) -> tuple[tuple, int | None]:
    """A word file holds a JSON list of generators, or {"word": [...], "rank": n}."""
    try:
        with open(path) as fh:
            data = json.load(fh)
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: invalid JSON ({exc})") from None
    rank = None
    if isinstance(data, dict):
        rank = data.get("rank")
        data = data.get("word")
    if not isinstance(data, list):
        raise InputError(f"{path}: expected a list of generator objects")
    try:
        w = word_from_json(data)
    except ValueError as exc:
        raise InputError(f"{path}: {exc}") from None
    if rank is not None and (not isinstance(rank, int) or rank < max(max_index(w), 1)):
        raise InputError(f"{path}: rank {rank!r} does not fit the word")
    return w, rank


def cmd_verify(args) -> int:
    names = list(SUITES) if args.suite == "all" else [args.suite]
    if args.jobs is None:
        args.jobs = default_jobs()
    reports = []
    for name in names:
        rep = run_suite(name, rank=args.rank, seed=args.seed, jobs=args.jobs, cert_dir=args.cert_dir)
        print(rep.summary())
        for case in rep.sorted_cases():
            if case.status == "fail":
                print(f"  FAIL {case.case}: {json.dumps(case.witness)}")
        reports.append(rep)
    if args.report:
        write_report(args.report, header_record(args.seed, args.rank, names, BACKEND), reports)
    return EXIT_OK if all(r.ok for r in reports) else EXIT_FAIL


def cmd_eval(args) -> int:
    w, rank = _load_word(args.word)
    rank = rank or max(max_index(w), 1)
    try:
        f = eval_aut(w, rank) if args.aut else eval_ia(w, rank)
    except TypeError as exc:
        raise InputError(f"{exc}; pass --aut for words with transvections, swaps or inversions") from None
    for i, img in enumerate(f.images, start=1):
        print(f"x{i} -> {format_word(img)}")
    return EXIT_OK


def cmd_reduce(args) -> int:
    try:
        cert = load_certificate(args.cert)
        result = replay(cert)
    except OSError as exc:
        raise InputError(f"{args.cert}: {exc.strerror}") from None
    except CertificateError as exc:
        raise InputError(str(exc)) from None
    if args.trace:
        with open(args.trace, "w") as fh:
            fh.write("\n".join(trace_lines(result)) + "\n")
    inv = invariant_check(cert)
    verdict = "identity" if result.reduces_to_identity else f"{len(result.final)} letters remain"
    print(f"steps: {len(cert.steps)}  final: {verdict}  invariant: {'ok' if inv else 'broken'}")
    return EXIT_OK if result.reduces_to_identity and inv else EXIT_FAIL


def cmd_tau(args) -> int:
    w, rank = _load_word(args.word)
    rank = rank or max(max_index(w), 3)
    try:
        table = tau_of_word(w, rank)
    except (TypeError, ValueError) as exc:
        raise InputError(str(exc)) from None
    for row, i, j, c in sparse_rows(table):
        print(f"row {row}: {c:+d} e{i}^e{j}")
    return EXIT_OK


def cmd_kernel(args) -> int:
    try:
        matrix = build_r5r6_matrix(check=True)
    except MatrixMismatch as exc:
        print(f"matrix mismatch: {exc}")
        return EXIT_FAIL
    k = kernel_report()
    if args.print_matrix:
        print(format_matrix(matrix))
        print()
    print(f"kernel rank {k['rank']}")
    print(format_matrix(k["kernel_hnf"]))
    ok = k["rank"] == 9 and all(k["listed_in_kernel"]) and k["hnf_equal"]
    print(f"listed vectors span the kernel: {'yes' if ok else 'no'}")
    return EXIT_OK if ok else EXIT_FAIL


def _positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{text!r} is not an integer") from None
    if value < 1:
        raise argparse.ArgumentTypeError("must be at least 1")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="h2ia", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify", help="run verification suites")
    p.add_argument("--suite", required=True, choices=SUITES + ("all",))
    p.add_argument("--rank", type=_positive_int, default=POOL_SIZE, help="letter pool for enumerations")
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--report", help="write a JSON-lines report here")
    p.add_argument("--cert-dir", help="extra certificates for the certs suite")
    p.add_argument("--jobs", type=_positive_int, help="worker processes (default: $H2IA_JOBS or CPU count)")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("eval", help="print basis images of a word")
    p.add_argument("--word", required=True)
    p.add_argument("--aut", action="store_true", help="allow Aut(F_n) generators")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("reduce", help="replay a rewriting certificate")
    p.add_argument("--cert", required=True)
    p.add_argument("--trace", help="write the intermediate words here")
    p.set_defaults(func=cmd_reduce)

    p = sub.add_parser("tau", help="Johnson image of an IA word")
    p.add_argument("--word", required=True)
    p.set_defaults(func=cmd_tau)

    p = sub.add_parser("kernel", help="exponent matrix of the R5/R6 relations and its kernel")
    p.add_argument("--print-matrix", action="store_true")
    p.set_defaults(func=cmd_kernel)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (InputError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
