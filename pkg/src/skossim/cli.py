"""Command-line interface.

Exit status: 0 on success, 1 on usage errors, 2 on data or parse errors.
Diagnostics go to stderr; data goes to stdout or ``--out``.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from typing import Sequence

from . import __version__
from .analysis import (PopulationError, containment_report, export_csv, format_value,
                       parse_population, rank_by_similarity, render_pgm)
from .closure import ClosureRequest, apply_closure, parse_scope
from .context import (ContextSyntaxError, ContextValidationError, format_context, load_context,
                      parse_context, parse_prefixes, validate_context)
from .rdf import (SKOS, Iri, NTriplesSyntaxError, PrefixMap, UnboundPrefixError, load_stores,
                  resolve_curie, serialize_ntriples)
from .similarity import DuplicateResourceError, EmptyPolicy, similarity_matrix
from .bench import SynthParams, bench_matrix

log = logging.getLogger("skossim")

DEFAULT_PREFIXES = {
    "rdf": "http://www.w3.org/1999/02/22-rdf-syntax-ns#",
    "rdfs": "http://www.w3.org/2000/01/rdf-schema#",
    "skos": SKOS,
}

DATA_ERRORS = (NTriplesSyntaxError, ContextSyntaxError, ContextValidationError, PopulationError,
               UnboundPrefixError, DuplicateResourceError, KeyError, ValueError, OSError,
               UnicodeDecodeError)


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(f"{self.prog}: error: {message}")


def _positive(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return value


def _matrix_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--data", action="append", required=True, metavar="FILE.nt",
                   help="N-Triples input; repeat to merge several files")
    p.add_argument("--context", required=True, metavar="FILE.ctx")
    p.add_argument("--population", required=True, metavar="FILE",
                   help="one IRI per line; rows and columns in this order")
    p.add_argument("--values", choices=("decimal", "rational"), default="decimal")
    p.add_argument("--empty-policy", choices=("one", "zero"), default="one")
    p.add_argument("--threads", type=_positive, default=1)
    p.add_argument("--out", metavar="FILE")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="skossim", description="Asymmetric context-dependent similarity "
                                                 "for SKOS concepts in N-Triples graphs.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True

    p = sub.add_parser("ingest", help="parse N-Triples and write them back canonically")
    p.add_argument("--data", action="append", required=True, metavar="FILE.nt")
    p.add_argument("--out", metavar="FILE")

    p = sub.add_parser("validate-context", help="check a context file")
    p.add_argument("--context", required=True, metavar="FILE.ctx")

    p = sub.add_parser("closure", help="materialize closures of one predicate")
    p.add_argument("--data", action="append", required=True, metavar="FILE.nt")
    p.add_argument("--predicate", required=True, help="CURIE or <IRI>")
    p.add_argument("--transitive", action="store_true")
    p.add_argument("--reflexive", action="store_true")
    p.add_argument("--reflexive-scope", metavar="SCOPE",
                   help="'predicate-nodes' or 'class:<curie-or-iri>' "
                        "(default: class of the --prefixes context, else skos:Concept)")
    p.add_argument("--symmetric", action="store_true")
    p.add_argument("--prefixes", metavar="FILE.ctx", help="context file whose PREFIX lines resolve CURIEs")
    p.add_argument("--out", metavar="FILE")

    p = sub.add_parser("matrix", help="compute the similarity matrix")
    _matrix_args(p)
    p.add_argument("--format", choices=("csv", "pgm"), default="csv")

    p = sub.add_parser("rank", help="rank the population against one resource")
    _matrix_args(p)
    p.add_argument("--query", required=True, help="IRI, <IRI> or CURIE")
    p.add_argument("--direction", choices=("from-query", "to-query"), default="from-query")

    p = sub.add_parser("report", help="containment relation for every pair")
    _matrix_args(p)

    p = sub.add_parser("bench", help="time the pipeline on a synthetic graph")
    p.add_argument("--concepts", type=_positive, default=1000)
    p.add_argument("--branching", type=_positive, default=4)
    p.add_argument("--targets", type=_positive, default=1000)
    p.add_argument("--density", type=float, default=10.0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--threads", type=_positive, default=1)
    p.add_argument("--out", metavar="FILE")
    return parser


def _write(out: str | None, payload: str | bytes) -> None:
    if isinstance(payload, str):
        payload = payload.encode("utf-8")
    if out:
        with open(out, "wb") as fh:
            fh.write(payload)
    else:
        sys.stdout.buffer.write(payload)
        sys.stdout.flush()


def _read(path: str) -> str:
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _compute(args):
    spec = load_context(args.context)
    store = load_stores(args.data).freeze()
    population = parse_population(_read(args.population))
    log.info("%d triples, population %d, %d threads", len(store), len(population), args.threads)
    matrix = similarity_matrix(store, spec, population, EmptyPolicy(args.empty_policy), args.threads)
    return spec, matrix


def _cmd_ingest(args):
    _write(args.out, serialize_ntriples(load_stores(args.data)))


def _cmd_validate_context(args):
    spec = validate_context(parse_context(_read(args.context)))
    sys.stdout.write(format_context(spec))


def _cmd_closure(args):
    prefixes = PrefixMap(DEFAULT_PREFIXES)
    class_ref = Iri(SKOS + "Concept")
    if args.prefixes:
        text = _read(args.prefixes)
        prefixes.update(parse_prefixes(text))
        try:
            class_ref = parse_context(text).class_ref
        except ContextSyntaxError:
            pass  # a prefixes-only file is fine
    if not (args.transitive or args.reflexive or args.symmetric):
        raise UsageError("closure: at least one of --transitive/--reflexive/--symmetric is required")
    resolve = lambda token: resolve_curie(prefixes, token)  # noqa: E731
    scope = parse_scope(args.reflexive_scope, resolve) if args.reflexive_scope else class_ref
    request = ClosureRequest(resolve(args.predicate), args.transitive, args.reflexive, scope,
                             args.symmetric)
    store = load_stores(args.data)
    before = len(store)
    apply_closure(store, request)
    log.info("closure added %d triples", len(store) - before)
    _write(args.out, serialize_ntriples(store))


def _cmd_matrix(args):
    _, matrix = _compute(args)
    if args.format == "pgm":
        _write(args.out, render_pgm(matrix))
    else:
        _write(args.out, export_csv(matrix, args.values))


def _resolve_query(spec, token: str) -> Iri:
    if token.startswith("<"):
        return resolve_curie(spec.prefix_map, token)
    prefix = token.partition(":")[0]
    if prefix in spec.prefix_map:
        return resolve_curie(spec.prefix_map, token)
    return Iri(token)


def _cmd_rank(args):
    spec, matrix = _compute(args)
    entries = rank_by_similarity(matrix, _resolve_query(spec, args.query), args.direction)
    _write(args.out, "".join(f"{e.resource}\t{format_value(e.value, args.values)}\n" for e in entries))


def _cmd_report(args):
    _, matrix = _compute(args)
    rows = containment_report(matrix)
    _write(args.out, "".join(f"{x}\t{y}\t{rel.value}\n" for x, y, rel in rows))


def _cmd_bench(args):
    params = SynthParams(args.concepts, args.branching, args.targets, args.density, args.seed)
    report = bench_matrix(params, args.threads)
    _write(args.out, json.dumps(report.as_dict(), indent=2) + "\n")


COMMANDS = {
    "ingest": _cmd_ingest,
    "validate-context": _cmd_validate_context,
    "closure": _cmd_closure,
    "matrix": _cmd_matrix,
    "rank": _cmd_rank,
    "report": _cmd_report,
    "bench": _cmd_bench,
}


def run_cli(argv: Sequence[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return 1
    except SystemExit as exc:  # --help / --version
        return int(exc.code or 0)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(name)s: %(message)s", stream=sys.stderr)
    try:
        COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"skossim: error: {exc}", file=sys.stderr)
        return 1
    except DATA_ERRORS as exc:
        print(f"skossim {args.command}: {exc}", file=sys.stderr)
        return 2
    return 0


def main() -> None:
    sys.exit(run_cli())


if __name__ == "__main__":
    main()
