import random

import networkx as nx
import pytest
from hypothesis import given, settings, strategies as st

from cardex.errors import InvariantViolation, KindConflict, UnknownNode
from cardex.extractor import Provenance, Triple
from cardex.kg import KnowledgeGraph, build_graph, dfs_query, find_paths

from helpers import random_graph

REFERENCE_MODELS = {"GPT-3", "GPT-4", "BERT", "RoBERTa", "XLNet", "T5", "DistilBERT", "Turing-NLG",
                "Transformer-XL", "OpenAI Codex"}
APACHE_MODELS = ["BERT", "DistilBERT", "RoBERTa", "T5", "Transformer-XL", "XLNet"]


@pytest.fixture(scope="module")
def ref_graph(reference_triples):
    return build_graph(reference_triples)


class TestBuildGraph:
    def test_reference_models(self, ref_graph):
        assert set(ref_graph.nodes_of_kind("model")) == REFERENCE_MODELS

    def test_shared_licence_node(self, ref_graph):
        # six reference models share the Apache licence
        assert ref_graph.in_degree("Apache licence 2.0") == 6

    def test_empty(self):
        g = build_graph([])
        assert g.nodes == {} and g.edges == {}

    def test_duplicate_triple_merges_provenance(self):
        t1 = Triple("BERT", "was released under", "Apache licence 2.0", "licence", Provenance("a", 0, "x"))
        t2 = Triple("BERT", "was released under", "Apache licence 2.0", "licence", Provenance("b", 3, "y"))
        g = build_graph([t1, t2])
        assert len(g.edges) == 1
        assert len(g.edges[("BERT", "Apache licence 2.0", "was released under")]) == 2

    def test_unknown_excluded_by_default(self):
        t = Triple("GPT-4", "was trained on", "corpora", "unknown")
        assert build_graph([t]).nodes == {}
        assert build_graph([t], include_unknown=True).nodes["corpora"] == "unknown"

    def test_kind_conflict(self):
        triples = [Triple("BERT", "r", "X", "licence"), Triple("GPT-4", "r", "X", "application")]
        with pytest.raises(KindConflict):
            build_graph(triples)

    def test_model_never_a_target(self):
        g = KnowledgeGraph({"GPT-4": "model", "BERT": "model"})
        with pytest.raises(InvariantViolation):
            g.add_edge("GPT-4", "BERT", "beats")
        with pytest.raises(KindConflict):
            build_graph([Triple("BERT", "r", "x", "licence"),
                         Triple("GPT-4", "beats", "BERT", "unknown")], include_unknown=True)

    def test_canonicalize_objects(self, gaz):
        triples = [Triple("BERT", "r", "Apache License 2.0", "licence"),
                   Triple("XLNet", "r", "apache-2.0", "licence")]
        g = build_graph(triples, gazetteers=gaz)
        assert g.in_degree("Apache licence 2.0") == 2

    @settings(max_examples=30)
    @given(st.data())
    def test_order_insensitive(self, reference_triples, data):
        shuffled = data.draw(st.permutations(reference_triples + reference_triples[:3]))
        assert build_graph(shuffled) == build_graph(reference_triples + reference_triples[:3])


class TestDfsQuery:
    def test_gpt3_neighbours(self, ref_graph):
        trav = dfs_query(ref_graph, "GPT-3", 1)
        assert trav.visited == [("GPT-3", 0), ("Conversational Agents", 1), ("Text Generation", 1)]

    def test_licence_undirected(self, ref_graph):
        trav = dfs_query(ref_graph, "Apache licence 2.0", 1, "undirected")
        assert trav.node_ids[1:] == APACHE_MODELS

    def test_isolated(self):
        g = KnowledgeGraph({"solo": "model"})
        for depth in range(4):
            assert dfs_query(g, "solo", depth).visited == [("solo", 0)]

    def test_unknown_start(self, ref_graph):
        with pytest.raises(UnknownNode):
            dfs_query(ref_graph, "FooNet", 1)

    def test_preorder_is_depth_first(self):
        g = KnowledgeGraph({"m": "model", "a": "application", "b": "application", "c": "licence"})
        g.add_edge("m", "a", "r")
        g.add_edge("m", "b", "r")
        g.add_edge("a", "c", "r")
        assert dfs_query(g, "m", 5).node_ids == ["m", "a", "c", "b"]

    def test_shorter_route_found_later_is_expanded(self):
        g = KnowledgeGraph({"m": "model", "a": "licence", "b": "licence", "c": "licence",
                            "d": "licence"})
        for s, t in [("m", "a"), ("a", "b"), ("m", "b"), ("b", "c"), ("c", "d")]:
            g.add_edge(s, t, "r")
        trav = dfs_query(g, "m", 2)
        assert trav.node_ids == ["m", "a", "b", "c"]
        assert dict(trav.visited)["b"] == 1
        assert ("m", "b", "r") in trav.edges_taken


def oracle_reachable(g: KnowledgeGraph, start, depth, direction):
    nxg = nx.DiGraph()
    nxg.add_nodes_from(g.nodes)
    nxg.add_edges_from((s, t) for s, t, _ in g.edges)
    if direction == "undirected":
        nxg = nxg.to_undirected()
    return nx.single_source_shortest_path_length(nxg, start, cutoff=depth)


@pytest.mark.parametrize("seed", range(20))
def test_dfs_matches_bfs_reachability(seed):
    rng = random.Random(seed)
    g = random_graph(rng)
    start = rng.choice(sorted(g.nodes))
    for direction in ("out", "undirected"):
        for depth in range(6):
            trav = dfs_query(g, start, depth, direction)
            assert dict(trav.visited) == oracle_reachable(g, start, depth, direction)
            assert len(trav.node_ids) == len(set(trav.node_ids))


class TestFindPaths:
    def test_direct_edge(self, ref_graph):
        assert find_paths(ref_graph, "GPT-3", "Text Generation", 1) == [["GPT-3", "Text Generation"]]

    def test_models_are_sources_only(self, ref_graph):
        assert find_paths(ref_graph, "GPT-3", "GPT-4", 5) == []

    def test_undirected_via_shared_application(self, ref_graph):
        assert find_paths(ref_graph, "GPT-3", "GPT-4", 2, "undirected") == [
            ["GPT-3", "Text Generation", "GPT-4"]]

    def test_unknown_node(self, ref_graph):
        with pytest.raises(UnknownNode):
            find_paths(ref_graph, "GPT-3", "nope", 2)

    @pytest.mark.parametrize("seed", range(10))
    def test_matches_networkx(self, seed):
        rng = random.Random(100 + seed)
        g = random_graph(rng, max_nodes=8, max_edges=14)
        ids = sorted(g.nodes)
        s, t = rng.choice(ids), rng.choice(ids)
        if s == t:
            return
        nxg = nx.DiGraph()
        nxg.add_nodes_from(ids)
        nxg.add_edges_from((a, b) for a, b, _ in g.edges)
        expected = sorted(nx.all_simple_paths(nxg.to_undirected(), s, t, cutoff=3))
        assert find_paths(g, s, t, 3, "undirected") == expected
