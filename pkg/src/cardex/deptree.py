"""Dependency tree model, label-scheme adaptation and phrase yields."""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from functools import cached_property

from .corpus import ParsedSentence
from .errors import InvalidTree, UnknownLabel

# Bracket and hyphen tokens survive phrase yields ("Named Entity Recognition ( NER )",
# "Turing - NLG"); every other punctuation-only token is dropped.
KEPT_SYMBOLS = frozenset("()[]{}-")
BE_FORMS = frozenset({"is", "are", "was", "were", "be", "been", "being", "am", "'s", "'re"})


@dataclass(frozen=True)
class Node:
    id: int
    form: str
    upos: str
    head: int
    deprel: str


@dataclass(frozen=True)
class DepTree:
    nodes: tuple[Node, ...]
    root_id: int = field(init=False)

    def __post_init__(self):
        n = len(self.nodes)
        if n == 0:
            raise InvalidTree("empty tree")
        for pos, node in enumerate(self.nodes, start=1):
            if node.id != pos:
                raise InvalidTree(f"ids not contiguous: expected {pos}, got {node.id}")
            if not 0 <= node.head <= n:
                raise InvalidTree(f"head {node.head} of node {node.id} out of range")
            if node.head == node.id:
                raise InvalidTree(f"node {node.id} is its own head")
        roots = [node.id for node in self.nodes if node.head == 0]
        if len(roots) != 1:
            raise InvalidTree(f"expected exactly one root, found {len(roots)}")
        object.__setattr__(self, "root_id", roots[0])
        for node in self.nodes:
            seen = set()
            cur = node.id
            while cur != 0:
                if cur in seen:
                    raise InvalidTree(f"cycle through node {cur}")
                seen.add(cur)
                cur = self.nodes[cur - 1].head

    def __len__(self) -> int:
        return len(self.nodes)

    def node(self, node_id: int) -> Node:
        if not 1 <= node_id <= len(self.nodes):
            raise KeyError(node_id)
        return self.nodes[node_id - 1]

    @property
    def root(self) -> Node:
        return self.nodes[self.root_id - 1]

    @cached_property
    def _children(self) -> dict[int, tuple[int, ...]]:
        kids: dict[int, list[int]] = {i: [] for i in range(len(self.nodes) + 1)}
        for node in self.nodes:
            kids[node.head].append(node.id)
        return {k: tuple(v) for k, v in kids.items()}

    def children(self, node_id: int, *labels: str) -> list[int]:
        """Child ids in surface order, optionally restricted to the given deprels."""
        kids = self._children[node_id]
        if labels:
            return [c for c in kids if self.nodes[c - 1].deprel in labels]
        return list(kids)

    def first_child(self, node_id: int, *labels: str) -> int | None:
        kids = self.children(node_id, *labels)
        return kids[0] if kids else None

    def subtree(self, node_id: int, exclude: tuple[str, ...] = ()) -> list[int]:
        """Ids of the node's subtree in surface order.

        Children of ``node_id`` whose deprel is in ``exclude`` are pruned with
        their descendants; deeper nodes are not filtered.
        """
        out = [node_id]
        stack = [c for c in self._children[node_id] if self.nodes[c - 1].deprel not in exclude]
        while stack:
            cur = stack.pop()
            out.append(cur)
            stack.extend(self._children[cur])
        return sorted(out)

    def forms(self, ids) -> list[str]:
        return [self.nodes[i - 1].form for i in ids]


def build_tree(ps: ParsedSentence) -> DepTree:
    return DepTree(tuple(Node(r.id, r.form, r.upos, r.head, r.deprel) for r in ps.rows))


def _dropped(node: Node) -> bool:
    if node.form.casefold() == "the":
        return True
    if node.form in KEPT_SYMBOLS:
        return False
    return node.upos == "PUNCT" or not any(ch.isalnum() for ch in node.form)


def subtree_phrase(tree: DepTree, node_id: int, exclude: tuple[str, ...] = ()) -> str:
    """Surface-ordered yield of a subtree without "the" and without punctuation."""
    ids = tree.subtree(node_id, exclude)
    return " ".join(tree.nodes[i - 1].form for i in ids if not _dropped(tree.nodes[i - 1]))


@dataclass(frozen=True)
class LabelScheme:
    name: str
    mapping: dict[str, str]


PAPER = LabelScheme("paper", {})
UD = LabelScheme("ud", {
    "nsubj:pass": "nsubjpass",
    "aux:pass": "auxpass",
    "csubj:pass": "csubjpass",
    "obj": "dobj",
    "iobj": "dative",
})
SCHEMES = {"paper": PAPER, "ud": UD}
# UD subtypes of these bases sit on rule paths; unmapped ones cannot be interpreted.
_RULE_BASES = frozenset({"nsubj", "aux", "obj", "csubj"})


def adapt_labels(tree: DepTree, scheme: LabelScheme) -> DepTree:
    """Rewrite a tree into the label set the extraction rules consume.

    For UD input, ``obl`` (and its subtypes) with a ``case`` child is restructured:
    the case word becomes a ``prep`` on the original head and the nominal its ``pobj``.
    """
    if scheme.name == "paper":
        return tree
    nodes = {n.id: n for n in tree.nodes}
    for node in tree.nodes:
        if node.deprel in scheme.mapping:
            nodes[node.id] = replace(node, deprel=scheme.mapping[node.deprel])

    for node in tree.nodes:
        if node.deprel != "obl" and not node.deprel.startswith("obl:"):
            continue
        case = tree.first_child(node.id, "case")
        if case is None:
            continue
        nodes[case] = replace(nodes[case], head=node.head, deprel="prep")
        nodes[node.id] = replace(nodes[node.id], head=case, deprel="pobj")

    adapted = DepTree(tuple(nodes[i] for i in sorted(nodes)))
    core = adapted.root_id
    for child in adapted.children(core):
        label = adapted.node(child).deprel
        base = label.split(":", 1)[0]
        if ":" in label and base in _RULE_BASES:
            raise UnknownLabel(f"no {scheme.name} mapping for {label!r} on node {child}")
    return adapted


def normalize_copula(tree: DepTree) -> DepTree:
    """Re-root an adjective-headed clause on its copula.

    "ERNIE is effective in NER" parsed with root "effective" and a cop/aux "is"
    becomes root "is" with acomp "effective"; subjects and remaining auxiliaries
    move to the copula, other dependents stay on the adjective.
    """
    root = tree.root
    if root.upos != "ADJ":
        return tree
    copula = tree.first_child(root.id, "cop")
    if copula is None:
        for aux in tree.children(root.id, "aux"):
            if tree.node(aux).form.casefold() in BE_FORMS:
                copula = aux
                break
    if copula is None:
        return tree
    nodes = {n.id: n for n in tree.nodes}
    nodes[copula] = replace(nodes[copula], head=0, deprel="ROOT")
    nodes[root.id] = replace(root, head=copula, deprel="acomp")
    for child in tree.children(root.id, "nsubj", "nsubjpass", "csubj", "aux", "auxpass", "neg"):
        if child != copula:
            nodes[child] = replace(nodes[child], head=copula)
    return DepTree(tuple(nodes[i] for i in sorted(nodes)))
