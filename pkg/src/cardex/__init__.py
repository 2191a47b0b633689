"""Rule-based extraction of LLM licence and application triples from dependency parses."""

__version__ = "0.1.0"

from .corpus import (Document, ParsedSentence, Sentence, parse_conllu, read_conllu, reconstruct_text,
                     segment_sentences, serialize_conllu)
from .deptree import DepTree, adapt_labels, build_tree, subtree_phrase
from .evaluate import load_gold, match_triples, score
from .export import export_dot, export_graphml, export_json, import_json
from .extractor import (Provenance, Triple, detect_voice, extract_corpus, extract_parsed, extract_sentence,
                        load_triples, validate_triple)
from .gazetteer import (Gazetteer, Gazetteers, find_mentions, load_gazetteer, load_gazetteers, normalize_mention,
                        select_candidates, starter_gazetteers)
from .kg import KnowledgeGraph, build_graph, dfs_query, find_paths
