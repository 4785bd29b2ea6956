"""Full pipeline orchestration: ingest through persisted concept map.

All stages compute in memory; persistence happens once at the end, so a
failing stage leaves no partial outputs behind.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field, replace
from pathlib import Path

from ctt import PIPELINE_VERSION
from ctt.config import PipelineConfig
from ctt.conceptgraph import (
    CueLexicons,
    EmbeddingTable,
    Provenance,
    assemble_concept_map,
    association_relations,
    extract_concepts,
    inclusion_relations,
    llm_refine,
    load_embeddings,
    provider_from_env,
    similarity_relations,
)
from ctt.conceptgraph.model import Concept, ConceptMap
from ctt.conceptgraph.provider import RefineProvider
from ctt.conceptgraph.relations import sequence_relations_by_group
from ctt.evalkit.report import PipelineOutputs
from ctt.ingest import (
    SubtitleFormat,
    load_stopwords,
    normalize_tokens,
    parse_frame_signatures,
    parse_slide_ocr,
    parse_style_spans,
    parse_transcript,
)
from ctt.ingest.frames import FrameSignature
from ctt.ingest.slides import SlideOcr
from ctt.ingest.styles import StyleSpan, serialize_style_spans
from ctt.ingest.tokens import TokenStream
from ctt.keyphrase import build_cooccurrence_graph, extract_keyphrases, rank_nodes
from ctt.keyphrase.phrases import Keyphrase
from ctt.mapstore.edits import StoredMap
from ctt.mapstore.store import MapStore
from ctt.mapstore.validate import validate
from ctt.scoring import (
    importance,
    occurrence_sparkline,
    pagerank,
    style_distribution,
    tfidf,
)
from ctt.segmentation import (
    RootProposition,
    detect_boundaries,
    group_slide_titles,
    label_propositions,
    merge_similar_topics,
    propagate_topic_weights,
    refine_with_slide_titles,
    window_transcript,
)
from ctt.segmentation.propositions import merge_adjacent_same_title
from ctt.slidestruct import (
    SlideShot,
    SlideTree,
    build_slide_tree,
    detect_shots,
    extract_headline,
    group_lines,
    group_paragraphs,
    select_final_states,
)
from ctt.slidestruct.tree import SlideTreeNode

logger = logging.getLogger(__name__)


class StageError(Exception):
    def __init__(self, stage: str, cause: Exception) -> None:
        super().__init__(f"[{stage}] {cause}")
        self.stage = stage
        self.cause = cause


@dataclass
class SlideChannel:
    shots: list[SlideShot] = field(default_factory=list)
    shot_boundaries: list[int] = field(default_factory=list)
    headlines: list[tuple[str, int]] = field(default_factory=list)
    titles_with_spans: list[tuple[str, int, int]] = field(default_factory=list)
    trees_by_shot: list[SlideTree] = field(default_factory=list)


@dataclass
class BuildResult:
    map: ConceptMap
    outputs: PipelineOutputs
    sparklines: dict[str, dict]
    style_spans: list[StyleSpan]
    slide_tree: SlideTree | None


def _stage(name: str):
    def wrap(fn):
        def inner(*args, **kwargs):
            try:
                return fn(*args, **kwargs)
            except StageError:
                raise
            except Exception as exc:
                raise StageError(name, exc) from exc

        return inner

    return wrap


@_stage("ingest")
def _ingest(config: PipelineConfig):
    transcript_path = Path(config.transcript_path)
    data = transcript_path.read_bytes()
    fmt = SubtitleFormat(config.transcript_format)
    segments = parse_transcript(data, fmt)
    stop_path = Path(config.stopwords_path) if config.stopwords_path else None
    stopwords, stop_hash = load_stopwords(stop_path)
    stream = normalize_tokens(
        segments, stopwords, stemmer_id=config.stemmer, stopwords_sha256=stop_hash
    )

    signatures: list[FrameSignature] = []
    if config.frame_signatures_path:
        signatures = parse_frame_signatures(
            Path(config.frame_signatures_path).read_bytes()
        )
    ocr: SlideOcr | None = None
    if config.slide_ocr_path:
        ocr = parse_slide_ocr(Path(config.slide_ocr_path).read_bytes())
    style_spans: list[StyleSpan] = []
    if config.style_spans_path:
        style_spans = parse_style_spans(Path(config.style_spans_path).read_bytes())

    duration = config.duration_ms
    if duration <= 0:
        candidates = [segments[-1].end_ms]
        if style_spans:
            candidates.append(style_spans[-1].end_ms)
        if signatures:
            candidates.append(signatures[-1].timestamp_ms)
        duration = max(candidates)
    return stream, stopwords, signatures, ocr, style_spans, duration


@_stage("keyphrase")
def _keyphrases(stream: TokenStream, config: PipelineConfig) -> list[Keyphrase]:
    graph = build_cooccurrence_graph(stream, window=config.cooccurrence_window)
    result = rank_nodes(
        graph,
        damping=config.damping,
        max_iters=config.rank_max_iters,
        tol=config.rank_tol,
    )
    if not result.converged:
        logger.warning("keyphrase ranking hit max_iters without converging")
    phrases = extract_keyphrases(stream, result.scores, config.top_k_keyphrases)
    return merge_similar_topics(phrases)


def _segmentation_candidates(
    topics: list[Keyphrase], max_topics: int
) -> list[Keyphrase]:
    """Pick the topic candidates that drive segmentation.

    Multi-stem phrases name topics; single stems are mostly supporting
    vocabulary whose spikes cause spurious argmax flips.  Phrases go
    first (a briefly covered topic must stay a candidate even when its
    rank mass is small), singles fill the remainder.
    """
    phrases = [t for t in topics if len(t.stems) > 1]
    singles = [t for t in topics if len(t.stems) == 1]
    return (phrases + singles)[:max_topics]


@_stage("segmentation")
def _segment(
    stream: TokenStream,
    topics: list[Keyphrase],
    config: PipelineConfig,
    duration_ms: int,
) -> list[RootProposition]:
    candidates = _segmentation_candidates(topics, config.max_topics)
    windows = window_transcript(stream, config.window_ms)
    propagate_topic_weights(windows, candidates, lam=config.lam)
    cuts = detect_boundaries(windows, candidates, persistence=config.persistence)
    props = label_propositions(
        windows,
        cuts,
        candidate_topics=candidates,
        duration_ms=duration_ms,
        video_id=config.video_id,
    )
    return merge_adjacent_same_title(props)


@_stage("slidestruct")
def _slide_channel(
    signatures: list[FrameSignature],
    ocr: SlideOcr,
    style_spans: list[StyleSpan],
    config: PipelineConfig,
) -> SlideChannel:
    channel = SlideChannel()
    boundaries = detect_shots(
        signatures, kappa=config.kappa, tau_edge=config.tau_edge
    )
    channel.shot_boundaries = [b.frame_index for b in boundaries]
    channel.shots = select_final_states(
        boundaries, signatures, style_spans or None
    )
    corpus_titles: list[tuple[str, tuple[int, int, int]]] = []
    for shot in channel.shots:
        boxes = ocr.frames.get(shot.final_frame_index, [])
        if not boxes:
            continue
        paragraphs = group_paragraphs(group_lines(boxes))
        headline = extract_headline(
            boxes, corpus_titles, frame_w=ocr.frame_w, frame_h=ocr.frame_h
        )
        if headline is not None:
            corpus_titles.append((headline.text, headline.color))
            channel.headlines.append((headline.text, shot.start_ms))
            channel.titles_with_spans.append(
                (headline.text, shot.start_ms, shot.end_ms)
            )
        tree = build_slide_tree(
            paragraphs,
            headline,
            span_ms=(shot.start_ms, shot.end_ms),
            indent_quantum=config.indent_quantum,
        )
        channel.trees_by_shot.append(tree)
    return channel


def _combined_tree(channel: SlideChannel) -> SlideTree | None:
    if not channel.trees_by_shot:
        return None
    lo = min(t.root.span_ms[0] for t in channel.trees_by_shot)
    hi = max(t.root.span_ms[1] for t in channel.trees_by_shot)
    root = SlideTreeNode(text="", depth=0, span_ms=(lo, hi))

    def shift(node: SlideTreeNode) -> SlideTreeNode:
        return SlideTreeNode(
            text=node.text,
            depth=node.depth + 1,
            span_ms=node.span_ms,
            concept_phrase=node.concept_phrase,
            children=[shift(c) for c in node.children],
        )

    for tree in channel.trees_by_shot:
        slide = shift(tree.root)
        slide.concept_phrase = False
        root.children.append(slide)
    return SlideTree(root=root)


def _prop_tree(
    channel: SlideChannel, prop: RootProposition
) -> SlideTree | None:
    """Slide trees overlapping the proposition, under one shared root."""
    subtrees = [
        t
        for t in channel.trees_by_shot
        if t.root.span_ms[0] < prop.end_ms and t.root.span_ms[1] > prop.start_ms
    ]
    if not subtrees:
        return None
    root = SlideTreeNode(
        text=prop.title, depth=0, span_ms=(prop.start_ms, prop.end_ms)
    )
    for t in subtrees:
        for child in t.root.children:
            root.children.append(child)
        # Slide headlines that name concepts distinct from the topic title
        # also seed a node so slide-only concepts are not lost.
    return SlideTree(root=root)


@_stage("conceptgraph")
def _concept_graph(
    props: list[RootProposition],
    topics: list[Keyphrase],
    stream: TokenStream,
    channel: SlideChannel | None,
    table: EmbeddingTable | None,
    config: PipelineConfig,
) -> tuple[list[Concept], list]:
    cues = CueLexicons(example=config.example_cues, test=config.test_cues)
    concepts: list[Concept] = []
    for prop in props:
        tree = _prop_tree(channel, prop) if channel is not None else None
        concepts.extend(
            extract_concepts(
                prop,
                topics,
                stream,
                slide_tree=tree,
                top_k=config.concepts_per_proposition,
                theta_title=config.theta_title,
                cues=cues,
            )
        )
    relations = []
    relations.extend(inclusion_relations(concepts))
    relations.extend(sequence_relations_by_group(concepts))
    relations.extend(association_relations(concepts, stream))
    if table is not None:
        relations.extend(
            similarity_relations(concepts, table, theta_sim=config.theta_sim)
        )
    return concepts, relations


@_stage("scoring")
def _score(
    cmap: ConceptMap,
    stream: TokenStream,
    style_spans: list[StyleSpan],
    config: PipelineConfig,
) -> tuple[ConceptMap, dict[str, dict]]:
    prop_index = {p.id: i for i, p in enumerate(cmap.propositions)}
    docs: list[list[str]] = [[] for _ in cmap.propositions]
    bounds = [(p.start_ms, p.end_ms) for p in cmap.propositions]
    for tok in stream.content_tokens():
        for i, (lo, hi) in enumerate(bounds):
            if lo <= tok.start_ms < hi:
                docs[i].append(tok.stem)
                break

    raw_tfidf = {
        c.id: tfidf(c.stems, docs, prop_index[c.proposition_id])
        for c in cmap.concepts
    }
    raw_rank = pagerank(
        cmap.concepts,
        cmap.relations,
        damping=config.pagerank_damping,
        tol=config.pagerank_tol,
    )
    breakdowns = importance(cmap.concepts, raw_tfidf, raw_rank, alpha=config.alpha)
    combined = {b.concept_id: b.combined for b in breakdowns}

    scored: list[Concept] = []
    for c in cmap.concepts:
        styles = style_distribution(c, style_spans) if style_spans else {}
        scored.append(
            replace(c, importance=combined[c.id], style_durations=styles)
        )
    by_parent: dict[str, list[Concept]] = {}
    for c in scored:
        if c.parent_id is not None:
            by_parent.setdefault(c.parent_id, []).append(c)
    final = []
    for c in scored:
        children = sorted(
            by_parent.get(c.id, []), key=lambda ch: (ch.first_start_ms, ch.label)
        )
        final.append(
            replace(
                c,
                sub_distribution=tuple(
                    (ch.id, ch.total_span_ms, ch.importance) for ch in children
                ),
            )
        )

    sparklines = {}
    for c in final:
        bins = occurrence_sparkline(
            c, stream, bin_ms=config.sparkline_bin_ms, duration_ms=cmap.duration_ms
        )
        sparklines[c.id] = {"bin_ms": bins.bin_ms, "values": list(bins.values)}
    return cmap.with_concepts(final), sparklines


def run_pipeline(
    config: PipelineConfig, provider: RefineProvider | None = None
) -> BuildResult:
    """Run ingest through scoring and return everything persist needs."""
    stream, _, signatures, ocr, style_spans, duration = _ingest(config)
    topics = _keyphrases(stream, config)

    channel: SlideChannel | None = None
    if signatures and ocr is not None:
        channel = _slide_channel(signatures, ocr, style_spans, config)

    props_plain = _segment(stream, topics, config, duration)
    props = props_plain
    props_no_slides: list[RootProposition] | None = None
    if channel is not None and channel.titles_with_spans:
        props_no_slides = props_plain
        groups = group_slide_titles(
            channel.titles_with_spans, theta_title=config.theta_title
        )
        try:
            props = refine_with_slide_titles(
                props_plain,
                groups,
                snap_tolerance_ms=config.snap_tolerance_ms,
                theta_title=config.theta_title,
                video_id=config.video_id,
            )
            # Halves of one topic that both landed on the same slide
            # title are a single proposition.
            props = merge_adjacent_same_title(props)
        except Exception as exc:  # pragma: no cover - defensive
            raise StageError("segmentation", exc) from exc

    table: EmbeddingTable | None = None
    if config.embeddings_path:
        try:
            table = load_embeddings(Path(config.embeddings_path))
        except Exception as exc:
            raise StageError("conceptgraph", exc) from exc

    if provider is None:
        provider = provider_from_env()

    transcript_text = " ".join(t.surface for t in stream.tokens)
    concepts, relations = _concept_graph(
        props, topics, stream, channel, table, config
    )

    provenance = Provenance(
        pipeline_version=PIPELINE_VERSION,
        config_hash=config.config_hash(),
        llm_used=False,
    )
    cmap = assemble_concept_map(
        config.video_id, duration, props, concepts, relations, provenance
    )
    cmap = llm_refine(cmap, transcript_text, _combined_tree(channel) if channel else None, provider)

    cmap, sparklines = _score(cmap, stream, style_spans, config)

    violations = validate(cmap)
    if violations:
        first = violations[0]
        raise StageError(
            "assemble",
            ValueError(f"invalid map: {first.rule} on {first.entity}: {first.message}"),
        )

    outputs = PipelineOutputs(
        propositions=[(p.title, p.start_ms, p.end_ms) for p in cmap.propositions],
        propositions_no_slides=(
            [(p.title, p.start_ms, p.end_ms) for p in props_no_slides]
            if props_no_slides is not None
            else None
        ),
        headlines=list(channel.headlines) if channel else [],
        slide_tree=_combined_tree(channel) if channel else None,
        shot_boundaries=list(channel.shot_boundaries) if channel else [],
    )
    return BuildResult(
        map=cmap,
        outputs=outputs,
        sparklines=sparklines,
        style_spans=style_spans,
        slide_tree=outputs.slide_tree,
    )


def persist_build(result: BuildResult, store: MapStore) -> None:
    """Write the map and its companion artifacts for serving and eval."""
    video_id = result.map.video_id
    store.persist(StoredMap(map=result.map, revision=0, edit_log=[]))
    store.write_artifact(
        video_id,
        "sparklines.json",
        json.dumps(result.sparklines, sort_keys=True, separators=(",", ":")).encode(),
    )
    store.write_artifact(
        video_id, "style_spans.json", serialize_style_spans(result.style_spans)
    )
    if result.slide_tree is not None:
        store.write_artifact(
            video_id, "slide_tree.json", result.slide_tree.to_json()
        )
    store.write_artifact(
        video_id,
        "shots.json",
        json.dumps(
            {"boundaries": result.outputs.shot_boundaries},
            sort_keys=True,
            separators=(",", ":"),
        ).encode(),
    )
    predictions = {
        "propositions": [
            {"title": t, "start_ms": s, "end_ms": e}
            for t, s, e in result.outputs.propositions
        ],
        "propositions_no_slides": (
            [
                {"title": t, "start_ms": s, "end_ms": e}
                for t, s, e in result.outputs.propositions_no_slides
            ]
            if result.outputs.propositions_no_slides is not None
            else None
        ),
        "headlines": [
            {"title": t, "start_ms": s} for t, s in result.outputs.headlines
        ],
        "shot_boundaries": result.outputs.shot_boundaries,
    }
    store.write_artifact(
        video_id,
        "predictions.json",
        json.dumps(predictions, sort_keys=True, separators=(",", ":")).encode(),
    )
