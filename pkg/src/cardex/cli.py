"""``cardex`` command line: candidates, extract, graph, eval, export."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import __version__
from .corpus import Document, read_conllu, segment_sentences
from .deptree import SCHEMES
from .errors import CardexError, FormatError, InvalidTree, InvariantViolation, UnknownLabel, UnknownNode
from .evaluate import POLICIES, format_table, load_gold, match_triples, report, score
from .export import EXPORTERS, import_json
from .extractor import dump_triples, extract_corpus, load_triples
from .gazetteer import APPLICATION, LICENCE, MODEL, load_gazetteers, select_candidates, starter_path
from .kg import DIRECTIONS, build_graph, dfs_query, find_paths

EXIT_OK, EXIT_USAGE, EXIT_FORMAT, EXIT_INVARIANT = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _add_gazetteer_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--models", help="model-name dictionary (default: bundled starter list)")
    p.add_argument("--licences", help="licence dictionary (default: bundled starter list)")
    p.add_argument("--apps", help="application dictionary (default: bundled starter list)")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="cardex", description="Extract model/licence/application triples "
                     "from dependency-parsed text and build a knowledge graph.")
    parser.add_argument("--version", action="version", version=f"cardex {__version__}")
    parser.add_argument("--config", help="JSON file of default option values")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser, required=True)

    p = sub.add_parser("candidates", help="dictionary lookup over plain text; review JSONL out")
    p.add_argument("--text", nargs="+", required=True, help="UTF-8 text documents")
    p.add_argument("--context", type=int, default=0,
                   help="record this many neighbouring sentences on each side")
    p.add_argument("--out", help="output file (default: stdout)")
    _add_gazetteer_args(p)

    p = sub.add_parser("extract", help="apply extraction rules to CoNLL-U; triple JSONL out")
    p.add_argument("--conllu", nargs="+", required=True)
    p.add_argument("--scheme", choices=sorted(SCHEMES), default="paper",
                   help="dependency label set of the input (default: paper)")
    p.add_argument("--doc-id", help="document id when the file has no '# newdoc id'")
    p.add_argument("--out")
    _add_gazetteer_args(p)

    graph = sub.add_parser("graph", help="build and query the knowledge graph")
    gsub = graph.add_subparsers(dest="graph_command", parser_class=_Parser, required=True)
    p = gsub.add_parser("build")
    p.add_argument("--triples", nargs="+", required=True)
    p.add_argument("--include-unknown", action="store_true")
    p.add_argument("--canonicalize", action="store_true",
                   help="merge object phrases that are dictionary aliases")
    p.add_argument("--out")
    _add_gazetteer_args(p)
    p = gsub.add_parser("query")
    p.add_argument("--graph", required=True)
    p.add_argument("--node", required=True)
    p.add_argument("--depth", type=int, default=1)
    p.add_argument("--direction", choices=DIRECTIONS, default="out")
    p.add_argument("--json", action="store_true")
    p = gsub.add_parser("paths")
    p.add_argument("--graph", required=True)
    p.add_argument("--from", dest="source", required=True)
    p.add_argument("--to", dest="target", required=True)
    p.add_argument("--depth", type=int, default=3)
    p.add_argument("--direction", choices=DIRECTIONS, default="out")

    p = sub.add_parser("eval", help="score predicted triples against gold JSONL")
    p.add_argument("--gold", required=True)
    p.add_argument("--pred", required=True)
    p.add_argument("--policy", choices=POLICIES, default="strict")
    p.add_argument("--format", choices=("json", "table"), default="json")
    _add_gazetteer_args(p)

    p = sub.add_parser("export", help="serialise a graph JSON file")
    p.add_argument("--graph", required=True)
    p.add_argument("--format", choices=sorted(EXPORTERS), required=True)
    p.add_argument("--out")
    return parser


def _apply_config(args: argparse.Namespace) -> None:
    if not args.config:
        return
    try:
        config = json.loads(Path(args.config).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise FormatError(f"config: {exc.msg}", exc.lineno) from None
    if not isinstance(config, dict):
        raise FormatError("config must be a JSON object")
    for key, value in config.items():
        key = key.replace("-", "_")
        if hasattr(args, key) and getattr(args, key) is None:
            setattr(args, key, value)


def _gazetteers(args):
    return load_gazetteers(args.models or starter_path(MODEL),
                           args.licences or starter_path(LICENCE),
                           args.apps or starter_path(APPLICATION))


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8", newline="\n")
    else:
        sys.stdout.write(text)


def _read_graph(path: str):
    return import_json(Path(path).read_text(encoding="utf-8"))


def cmd_candidates(args) -> None:
    gaz = _gazetteers(args)
    records = []
    for path in args.text:
        sentences = segment_sentences(Document.from_path(path))
        for s in sentences:
            verdict = select_candidates(s.text, gaz)
            if not verdict.is_candidate:
                continue
            rec = {"doc_id": s.doc_id, "sentence_index": s.index, "text": s.text,
                   "mentions": [m.to_dict() for m in verdict.mentions]}
            if args.context > 0:
                lo = max(0, s.index - args.context)
                rec["context"] = {
                    "before": [x.text for x in sentences[lo:s.index]],
                    "after": [x.text for x in sentences[s.index + 1:s.index + 1 + args.context]],
                }
            records.append(rec)
    records.sort(key=lambda r: (r["doc_id"], r["sentence_index"]))
    _emit("".join(json.dumps(r, ensure_ascii=False) + "\n" for r in records), args.out)


def cmd_extract(args) -> None:
    gaz = _gazetteers(args)
    sentences = []
    for path in args.conllu:
        sentences.extend(read_conllu(path, args.doc_id))
    triples = extract_corpus(sentences, gaz, SCHEMES[args.scheme])
    _emit(dump_triples(triples), args.out)


def cmd_graph(args) -> None:
    if args.graph_command == "build":
        triples = []
        for path in args.triples:
            triples.extend(load_triples(path))
        gaz = _gazetteers(args) if args.canonicalize else None
        g = build_graph(triples, include_unknown=args.include_unknown, gazetteers=gaz)
        _emit(EXPORTERS["json"](g), args.out)
    elif args.graph_command == "query":
        g = _read_graph(args.graph)
        trav = dfs_query(g, args.node, args.depth, args.direction)
        if args.json:
            doc = {"start": trav.start, "max_depth": trav.max_depth,
                   "visited": [{"id": n, "depth": d, "kind": g.nodes[n]} for n, d in trav.visited],
                   "edges_taken": [list(e) for e in trav.edges_taken]}
            sys.stdout.write(json.dumps(doc, indent=2, ensure_ascii=False) + "\n")
        else:
            for node, depth in trav.visited:
                sys.stdout.write(f"{depth}\t{node}\t{g.nodes[node]}\n")
    else:
        g = _read_graph(args.graph)
        for path in find_paths(g, args.source, args.target, args.depth, args.direction):
            sys.stdout.write(" -> ".join(path) + "\n")


def cmd_eval(args) -> None:
    gold = load_gold(args.gold)
    pred = load_triples(args.pred)
    mr = match_triples(pred, gold, args.policy, _gazetteers(args))
    metrics = score(mr)
    if args.format == "table":
        sys.stdout.write(format_table(metrics))
    else:
        sys.stdout.write(json.dumps(report(mr, metrics), indent=2, sort_keys=True) + "\n")


def cmd_export(args) -> None:
    g = _read_graph(args.graph)
    _emit(EXPORTERS[args.format](g), args.out)


COMMANDS = {"candidates": cmd_candidates, "extract": cmd_extract, "graph": cmd_graph,
            "eval": cmd_eval, "export": cmd_export}


def run(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        _apply_config(args)
        COMMANDS[args.command](args)
    except SystemExit as exc:  # --help / --version
        return exc.code if isinstance(exc.code, int) else EXIT_OK
    except (UsageError, UnknownNode) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (FormatError, InvalidTree, UnknownLabel, OSError, UnicodeDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FORMAT
    except InvariantViolation as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVARIANT
    except CardexError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FORMAT
    return EXIT_OK


def main() -> None:
    sys.exit(run())
