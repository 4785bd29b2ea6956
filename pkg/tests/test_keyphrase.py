from __future__ import annotations

import random

import pytest

from ctt.ingest import SubtitleFormat, load_stopwords, normalize_tokens, parse_transcript
from ctt.ingest.tokens import Token, TokenStream
from ctt.keyphrase import build_cooccurrence_graph, extract_keyphrases, rank_nodes
from ctt.keyphrase.graph import CooccurrenceGraph

from oracles import pagerank_dense_oracle


def _stream(words: list[str], stop: set[str] | None = None) -> TokenStream:
    stop = stop or set()
    tokens = []
    for i, w in enumerate(words):
        tokens.append(
            Token(
                surface=w,
                stem=w,
                start_ms=1000 * i,
                end_ms=1000 * i + 900,
                is_stopword=w in stop,
            )
        )
    return TokenStream(tokens=tuple(tokens))


# ── co-occurrence graph ─────────────────────────────────────────────

def test_window_counting_by_hand():
    # Hand oracle: positions (0,1) and (1,2) are within distance 1.
    graph = build_cooccurrence_graph(_stream(["a", "b", "a"]), window=2)
    assert graph.nodes == {"a", "b"}
    assert graph.weight("a", "b") == 2
    assert graph.weight("b", "a") == 2  # symmetric by construction


def test_single_token_graph():
    graph = build_cooccurrence_graph(_stream(["a"]), window=4)
    assert graph.nodes == {"a"}
    assert graph.edges == {}


def test_all_stopword_stream_empty_graph():
    graph = build_cooccurrence_graph(
        _stream(["the", "of"], stop={"the", "of"}), window=4
    )
    assert graph.nodes == set()
    assert graph.edges == {}


def test_no_self_loops():
    graph = build_cooccurrence_graph(_stream(["a", "a", "a"]), window=3)
    assert graph.edges == {}


# ── ranking ─────────────────────────────────────────────────────────

def test_two_node_symmetric_equal_scores():
    graph = build_cooccurrence_graph(_stream(["a", "b"]), window=2)
    result = rank_nodes(graph, damping=0.85)
    assert result.converged
    assert result.scores["a"] == pytest.approx(result.scores["b"], abs=1e-12)
    assert sum(result.scores.values()) == pytest.approx(1.0, abs=1e-9)


def test_path_graph_center_wins():
    # Power-iteration oracle over the path a-b-c.
    graph = CooccurrenceGraph(nodes={"a", "b", "c"})
    graph.add_pair("a", "b")
    graph.add_pair("b", "c")
    result = rank_nodes(graph, tol=1e-12, max_iters=500)
    oracle = pagerank_dense_oracle(3, [(0, 1, 1.0), (1, 2, 1.0)])
    names = sorted(graph.nodes)
    for i, name in enumerate(names):
        assert result.scores[name] == pytest.approx(oracle[i], abs=1e-6)
    assert result.scores["b"] > result.scores["a"]
    assert result.scores["a"] == pytest.approx(result.scores["c"], abs=1e-12)


def test_empty_graph_empty_map():
    result = rank_nodes(CooccurrenceGraph())
    assert result.scores == {}


def test_rank_matches_dense_oracle_on_random_graphs():
    rng = random.Random(42)
    for _ in range(25):
        n = rng.randint(2, 12)
        names = [f"n{i}" for i in range(n)]
        graph = CooccurrenceGraph(nodes=set(names))
        edges = []
        for _ in range(rng.randint(1, 3 * n)):
            a, b = rng.sample(range(n), 2)
            graph.add_pair(names[a], names[b])
            edges.append((a, b, 1.0))
        result = rank_nodes(graph, tol=1e-13, max_iters=1000)
        oracle = pagerank_dense_oracle(n, edges)
        for i, name in enumerate(names):
            assert result.scores[name] == pytest.approx(oracle[i], abs=1e-6)
        assert sum(result.scores.values()) == pytest.approx(1.0, abs=1e-9)


def test_insertion_order_invariance():
    words = ["w1", "w2", "w3", "w4", "w5", "w2", "w3"]
    base = rank_nodes(build_cooccurrence_graph(_stream(words), window=3), tol=1e-12)
    # Same multiset of window pairs inserted in a different order.
    graph = CooccurrenceGraph(nodes=set(words))
    pairs = []
    stems = words
    for i in range(len(stems)):
        for j in range(i + 1, min(i + 3, len(stems))):
            pairs.append((stems[i], stems[j]))
    for a, b in reversed(pairs):
        graph.add_pair(a, b)
    permuted = rank_nodes(graph, tol=1e-12)
    for k, v in base.scores.items():
        assert permuted.scores[k] == pytest.approx(v, abs=1e-6)


def test_nonconvergence_flag():
    # An asymmetric path needs several iterations; one is not enough.
    graph = CooccurrenceGraph(nodes={"a", "b", "c"})
    graph.add_pair("a", "b")
    graph.add_pair("b", "c")
    result = rank_nodes(graph, max_iters=1, tol=1e-15)
    assert not result.converged
    assert result.iterations == 1
    assert set(result.scores) == {"a", "b", "c"}


def test_damping_out_of_range():
    with pytest.raises(ValueError):
        rank_nodes(CooccurrenceGraph(), damping=1.0)


# ── keyphrases ──────────────────────────────────────────────────────

def test_adjacent_top_stems_merge():
    # Hand-merge oracle on a 10-token fixture: hash and tabl are adjacent
    # twice, so the phrase exists with score = sum of member scores.
    words = ["hash", "tabl", "store", "bucket", "hash", "tabl", "load",
             "factor", "bucket", "store"]
    stream = _stream(words)
    ranks = {"hash": 0.3, "tabl": 0.25, "store": 0.1, "bucket": 0.1,
             "load": 0.08, "factor": 0.07}
    phrases = extract_keyphrases(stream, ranks, top_k=2)
    assert phrases[0].text == "hash tabl"
    assert phrases[0].score == pytest.approx(0.55)
    assert len(phrases[0].occurrences) == 2
    assert phrases[0].occurrences[0] == (0, 1900)


def test_top_k_larger_than_candidates():
    stream = _stream(["alpha", "beta"])
    ranks = {"alpha": 0.6, "beta": 0.4}
    phrases = extract_keyphrases(stream, ranks, top_k=50)
    assert {p.text for p in phrases} == {"alpha beta"} or len(phrases) <= 2


def test_equal_score_earlier_occurrence_first():
    words = ["late", "x", "early", "x", "late", "x", "early"]
    stream = _stream(words, stop={"x"})
    ranks = {"late": 0.5, "early": 0.5}
    phrases = extract_keyphrases(stream, ranks, top_k=2)
    assert [p.text for p in phrases] == ["late", "early"]
    assert phrases[0].first_start_ms < phrases[1].first_start_ms


def test_occurrences_match_contiguous_runs():
    words = ["a", "b", "stop", "a", "b"]
    stream = _stream(words, stop={"stop"})
    ranks = {"a": 0.5, "b": 0.5}
    phrases = extract_keyphrases(stream, ranks, top_k=1)
    phrase = phrases[0]
    toks = stream.tokens
    for start, end in phrase.occurrences:
        run = [t for t in toks if start <= t.start_ms and t.end_ms <= end]
        assert tuple(t.stem for t in run) == phrase.stems


def test_phrase_length_capped_at_four():
    words = ["a", "b", "c", "d", "e", "f"]
    stream = _stream(words)
    ranks = {w: 0.5 for w in words}
    phrases = extract_keyphrases(stream, ranks, top_k=6)
    assert all(len(p.stems) <= 4 for p in phrases)


def test_transcript_to_phrases_end_to_end():
    srt = (
        b"1\n00:00:00,000 --> 00:00:06,000\n"
        b"The hash table and the hash table of buckets\n"
    )
    segments = parse_transcript(srt, SubtitleFormat.SRT)
    stopwords, _ = load_stopwords()
    stream = normalize_tokens(segments, stopwords)
    graph = build_cooccurrence_graph(stream, window=4)
    ranks = rank_nodes(graph).scores
    phrases = extract_keyphrases(stream, ranks, top_k=3)
    assert any(p.text == "hash tabl" for p in phrases)
    hash_table = next(p for p in phrases if p.text == "hash tabl")
    assert hash_table.surface == "hash table"
