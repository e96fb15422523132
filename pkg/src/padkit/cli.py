"""Command-line pipeline: ingest, validate, compute statistics, emit graphics.

All machine outputs go to files with fixed names under ``--out``; stdout
carries short human summaries only, so repeated runs on the same input are
byte-identical.
"""

from __future__ import annotations

import argparse
import os
import sys
from fractions import Fraction

from . import graphics, metrics, store
from .model import Corpus, Kind, PadkitError, validate_corpus

USAGE_EXIT = 2
DATA_EXIT = 1


def _add_input_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--nodes", help="nodes table (label,code,category_code)")
    parser.add_argument("--triads", help="triads table (ru_id,p,a,d)")
    parser.add_argument("--corpus", help="canonical corpus JSON document")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="padkit",
        description="Structural-coding corpus toolkit: triads, categories, statistics, graphics.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_validate = sub.add_parser("validate", help="check every corpus invariant")
    _add_input_flags(p_validate)

    p_stats = sub.add_parser("stats", help="write the seven statistics tables")
    _add_input_flags(p_stats)
    p_stats.add_argument("--out", required=True, help="output directory")

    p_dag = sub.add_parser("dag", help="emit the causality DAG")
    _add_input_flags(p_dag)
    p_dag.add_argument("--out", required=True)
    p_dag.add_argument("--svg", action="store_true", help="also render SVG")
    p_dag.add_argument("--node-level", action="store_true", help="individual nodes instead of categories")

    p_triads = sub.add_parser("triads", help="emit the triads graphic")
    _add_input_flags(p_triads)
    p_triads.add_argument("--out", required=True)
    p_triads.add_argument("--svg", action="store_true")

    p_dyads = sub.add_parser("dyads", help="emit one problem's dyad star")
    _add_input_flags(p_dyads)
    p_dyads.add_argument("--out", required=True)
    p_dyads.add_argument("--svg", action="store_true")
    p_dyads.add_argument("--problem", required=True, help="problem category label, e.g. P2")
    p_dyads.add_argument(
        "--dyad-count", choices=("occurrence", "ru-binary"), default="occurrence",
        help="count triad occurrences or research units",
    )

    p_tax = sub.add_parser("taxonomy", help="emit one kind's taxonomy forest")
    _add_input_flags(p_tax)
    p_tax.add_argument("--out", required=True)
    p_tax.add_argument("--svg", action="store_true")
    p_tax.add_argument("--kind", required=True, choices=("P", "A", "D"))

    p_serve = sub.add_parser("serve", help="serve the categorization API")
    _add_input_flags(p_serve)
    p_serve.add_argument("--port", type=int, default=8765)

    return parser


def _load_corpus(args: argparse.Namespace, parser: argparse.ArgumentParser) -> Corpus:
    """Resolve the input flags to a corpus. Exactly one input form is legal."""
    csv_given = bool(args.nodes or args.triads)
    if bool(args.corpus) == csv_given:
        parser.error("give either --corpus, or both --nodes and --triads")
    if csv_given and not (args.nodes and args.triads):
        parser.error("--nodes and --triads are used together")
    paths = [p for p in (args.corpus, args.nodes, args.triads) if p]
    for path in paths:
        if not os.path.exists(path):
            parser.error(f"input file not found: {path}")
    if args.corpus:
        with open(args.corpus, "rb") as handle:
            return store.load_corpus_json(handle)
    with open(args.nodes, "rb") as nodes_handle:
        node_rows = store.load_nodes_csv(nodes_handle)
    with open(args.triads, "rb") as triads_handle:
        triad_rows = store.load_triads_csv(triads_handle)
    return store.assemble_corpus(node_rows, triad_rows)


def _write(out_dir: str, filename: str, payload: bytes) -> str:
    os.makedirs(out_dir, exist_ok=True)
    path = os.path.join(out_dir, filename)
    with open(path, "wb") as handle:
        handle.write(payload)
    return path


def _emit_doc(doc: graphics.GraphDoc, out_dir: str, stem: str, svg: bool) -> list[str]:
    written = [_write(out_dir, f"{stem}.dot", doc.to_dot().encode("utf-8"))]
    if svg:
        written.append(_write(out_dir, f"{stem}.svg", doc.to_svg().encode("utf-8")))
    return written


def _decimal_string(value: Fraction, places: int = 10) -> str:
    scaled = value.numerator * 10**places // value.denominator
    return f"{scaled // 10**places}.{scaled % 10**places:0{places}d}"


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else USAGE_EXIT

    try:
        try:
            corpus = _load_corpus(args, parser)
        except SystemExit as exc:
            return exc.code if isinstance(exc.code, int) else USAGE_EXIT
        except store.StoreError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return DATA_EXIT

        report = validate_corpus(corpus)
        if args.command == "validate":
            sys.stdout.write(report.render())
            return 0 if report.ok else DATA_EXIT
        if not report.ok:
            sys.stdout.write(report.render())
            print("error: corpus is invalid; fix it before analysis", file=sys.stderr)
            return DATA_EXIT

        if args.command == "stats":
            tables = metrics.all_tables(corpus)
            written = []
            for name in metrics.TABLE_METRICS:
                written.append(_write(args.out, f"{name}.csv", tables[name].to_csv()))
            average = metrics.avg_challenges_per_ru(corpus)
            payload = f"{average.numerator}/{average.denominator}\n{_decimal_string(average)}\n"
            written.append(_write(args.out, "avg_challenges.txt", payload.encode("utf-8")))
            print(f"wrote {len(written)} files to {args.out}")
            return 0

        if args.command == "dag":
            written = _emit_doc(
                graphics.emit_causality_dag(corpus, node_level=args.node_level),
                args.out, "dag", args.svg,
            )
            print(f"wrote {', '.join(written)}")
            return 0

        if args.command == "triads":
            written = _emit_doc(graphics.emit_triads_graphic(corpus), args.out, "triads", args.svg)
            print(f"wrote {', '.join(written)}")
            return 0

        if args.command == "dyads":
            known = {
                c.label.render()
                for c in corpus.categories
                if c.kind is Kind.PROBLEM and c.label.subcategory is None
            }
            if args.problem not in known:
                print(
                    f"error: unknown problem category {args.problem!r}; "
                    f"known: {', '.join(sorted(known)) or 'none'}",
                    file=sys.stderr,
                )
                return USAGE_EXIT
            doc = graphics.emit_pa_dyads(corpus, args.problem, count_mode=args.dyad_count)
            written = _emit_doc(doc, args.out, f"dyads_{args.problem}", args.svg)
            print(f"wrote {', '.join(written)}")
            return 0

        if args.command == "taxonomy":
            kind = Kind.from_letter(args.kind)
            written = _emit_doc(
                graphics.emit_taxonomy(corpus, kind), args.out, f"taxonomy_{args.kind}", args.svg
            )
            print(f"wrote {', '.join(written)}")
            return 0

        if args.command == "serve":
            from .service import serve

            save_path = args.corpus
            try:
                server = serve(corpus, args.port, save_path=save_path)
            except OSError as exc:
                print(f"error: cannot bind port {args.port}: {exc}", file=sys.stderr)
                return DATA_EXIT
            host, port = server.server_address[:2]
            # Flush so wrappers watching the pipe see the address immediately.
            print(f"serving on http://{host}:{port}/ (Ctrl-C to stop)", flush=True)
            try:
                server.serve_forever()
            except KeyboardInterrupt:
                pass
            finally:
                server.shutdown_service()
            return 0

    except metrics.EmptyCorpusError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return DATA_EXIT
    except PadkitError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return DATA_EXIT

    raise AssertionError(f"unhandled command {args.command!r}")


if __name__ == "__main__":
    sys.exit(main())
