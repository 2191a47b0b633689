import random
from pathlib import Path

from hypothesis import strategies as st

from cardex.corpus import ParsedSentence, Row, read_conllu
from cardex.deptree import DepTree, Node
from cardex.extractor import Provenance
from cardex.kg import KnowledgeGraph

DATA = Path(__file__).parent / "data"

LABELS = ["nsubj", "nsubjpass", "aux", "auxpass", "dobj", "acomp", "prep", "pobj", "det",
          "compound", "conj", "cc", "punct", "amod", "advmod"]
UPOS = ["VERB", "AUX", "ADJ", "NOUN", "PROPN", "DET", "ADP", "PUNCT"]
FORMS = ["the", "The", "THE", "BERT", "GPT-4", "licence", "Apache", "2.0", ".", ",", "(", ")",
         "-", "is", "was", "released", "under", "Text", "Generation", "theory", "them"]


def rows_from(spec: str) -> tuple[Row, ...]:
    """Rows from compact 'form upos head deprel' lines."""
    rows = []
    for i, line in enumerate(spec.strip().splitlines(), start=1):
        form, upos, head, deprel = line.split()
        rows.append(Row(id=i, form=form, upos=upos, head=int(head), deprel=deprel))
    return tuple(rows)


def tree_from(spec: str) -> DepTree:
    return DepTree(tuple(Node(r.id, r.form, r.upos, r.head, r.deprel) for r in rows_from(spec)))


def sentence_from(spec: str, raw_text=None, doc_id="t", index=0) -> ParsedSentence:
    return ParsedSentence(doc_id, index, rows_from(spec), raw_text)


def corpus(name: str):
    return read_conllu(DATA / name)


@st.composite
def random_trees(draw, max_nodes=12):
    n = draw(st.integers(1, max_nodes))
    order = draw(st.permutations(list(range(1, n + 1))))
    heads = {order[0]: 0}
    for k in range(1, n):
        heads[order[k]] = order[draw(st.integers(0, k - 1))]
    nodes = []
    for i in range(1, n + 1):
        nodes.append(Node(i, draw(st.sampled_from(FORMS)), draw(st.sampled_from(UPOS)),
                          heads[i], "ROOT" if heads[i] == 0 else draw(st.sampled_from(LABELS))))
    return DepTree(tuple(nodes))


KINDS = ["model", "licence", "application"]


def random_graph(rng: random.Random, max_nodes=20, max_edges=40) -> KnowledgeGraph:
    """Graph honouring the KG invariants: edges never point at model nodes."""
    g = KnowledgeGraph()
    n = rng.randint(1, max_nodes)
    for i in range(n):
        g.add_node(f"n{i:02d}", rng.choice(KINDS))
    targets = [v for v, k in g.nodes.items() if k != "model"]
    if targets:
        for _ in range(rng.randint(0, max_edges)):
            s = rng.choice(sorted(g.nodes))
            t = rng.choice(targets)
            if s == t:
                continue
            label = rng.choice(["uses", "is used for", "was released under", "powers"])
            prov = Provenance(rng.choice(["d1", "d2"]), rng.randint(0, 9), f"s {s} {t}")
            g.add_edge(s, t, label, [prov])
    return g
