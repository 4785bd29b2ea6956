"""External refinement provider: protocol, HTTP transport, safe merge.

The pipeline never depends on the provider being present or sane: a
missing, failing or garbage-returning provider leaves the rule-based
map untouched and flips ``provenance.llm_used`` to False.
"""

from __future__ import annotations

import json
import logging
import os
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Protocol

from ctt.errors import ProviderTimeout, SchemaViolation
from ctt.conceptgraph.model import (
    Concept,
    ConceptKind,
    ConceptMap,
    Relation,
    RelationType,
    clip_spans,
    concept_id,
    merge_spans,
)
from ctt.conceptgraph.relations import sequence_relations_by_group
from ctt.slidestruct.tree import SlideTree

logger = logging.getLogger(__name__)

_PROMPT_DIR = Path(__file__).parent / "data" / "prompts"

ENV_ENDPOINT = "CTT_LLM_ENDPOINT"
ENV_TOKEN = "CTT_LLM_TOKEN"
ENV_TIMEOUT_MS = "CTT_LLM_TIMEOUT_MS"


class RefineProvider(Protocol):
    def refine(self, request: dict) -> dict:
        """Return a concept-map JSON fragment for the request."""
        ...


@dataclass(frozen=True)
class HttpProvider:
    endpoint: str
    token: str = ""
    timeout_ms: int = 20_000

    def refine(self, request: dict) -> dict:
        import httpx

        headers = {"content-type": "application/json"}
        if self.token:
            headers["authorization"] = f"Bearer {self.token}"
        try:
            response = httpx.post(
                self.endpoint,
                content=json.dumps(request),
                headers=headers,
                timeout=self.timeout_ms / 1000.0,
            )
        except httpx.TimeoutException as exc:
            raise ProviderTimeout(str(exc)) from exc
        if response.status_code != 200:
            raise SchemaViolation(f"provider returned HTTP {response.status_code}")
        try:
            return response.json()
        except ValueError as exc:
            raise SchemaViolation(f"provider returned non-JSON body: {exc}") from exc


def provider_from_env(env: dict[str, str] | None = None) -> HttpProvider | None:
    """Build the HTTP provider from environment, or None for fallback mode."""
    e = env if env is not None else os.environ
    endpoint = e.get(ENV_ENDPOINT, "").strip()
    if not endpoint:
        return None
    return HttpProvider(
        endpoint=endpoint,
        token=e.get(ENV_TOKEN, ""),
        timeout_ms=int(e.get(ENV_TIMEOUT_MS, "20000")),
    )


def load_prompt(name: str) -> str:
    return (_PROMPT_DIR / name).read_text(encoding="utf-8")


def build_request(
    transcript_excerpt: str,
    keywords: list[str],
    slide_tree: SlideTree | None,
) -> dict:
    """Assemble the staged request: role, transcript, priors."""
    return {
        "role_preamble": load_prompt("role_preamble.txt"),
        "instructions": load_prompt("staging.txt"),
        "transcript_text": transcript_excerpt,
        "keywords": list(keywords),
        "slide_tree_json": slide_tree.to_dict() if slide_tree is not None else None,
    }


def llm_refine(
    map_fragment: ConceptMap,
    transcript_excerpt: str,
    slide_tree: SlideTree | None,
    provider: RefineProvider | None,
) -> ConceptMap:
    """Refine one map fragment through the provider, defensively.

    The provider's JSON is schema-checked and every node or edge that
    would violate a map invariant is dropped with a logged reason.  Any
    transport or schema failure falls back to the unchanged rule-based
    fragment with ``llm_used`` False.
    """
    fallback = replace_provenance(map_fragment, llm_used=False)
    if provider is None:
        return fallback

    keywords = sorted({c.label for c in map_fragment.concepts})
    request = build_request(transcript_excerpt, keywords, slide_tree)
    try:
        fragment = provider.refine(request)
    except (ProviderTimeout, SchemaViolation) as exc:
        logger.warning("provider failed, using rule-based map: %s", exc)
        return fallback
    try:
        merged = merge_fragment(map_fragment, fragment)
    except SchemaViolation as exc:
        logger.warning("provider fragment rejected: %s", exc)
        return fallback
    return replace_provenance(merged, llm_used=True)


def replace_provenance(cmap: ConceptMap, llm_used: bool) -> ConceptMap:
    return ConceptMap(
        video_id=cmap.video_id,
        duration_ms=cmap.duration_ms,
        propositions=list(cmap.propositions),
        concepts=list(cmap.concepts),
        relations=list(cmap.relations),
        provenance=replace(cmap.provenance, llm_used=llm_used),
    )


def merge_fragment(base: ConceptMap, fragment: dict) -> ConceptMap:
    """Merge a provider fragment into the rule-based map.

    Additions only: new concepts (resolved by label or id, spans clipped
    into the parent) and new association/similarity edges.  Provider
    inclusion edges reparent a currently top-level concept when that
    keeps the forest acyclic and span-covered.  Everything else is
    dropped, each with a logged reason.
    """
    if not isinstance(fragment, dict):
        raise SchemaViolation("fragment is not an object")
    raw_concepts = fragment.get("concepts", [])
    raw_relations = fragment.get("relations", [])
    if not isinstance(raw_concepts, list) or not isinstance(raw_relations, list):
        raise SchemaViolation("fragment.concepts / fragment.relations must be lists")

    concepts = list(base.concepts)
    by_id = {c.id: c for c in concepts}
    by_label: dict[str, Concept] = {}
    for c in concepts:
        by_label.setdefault(c.label.lower(), c)

    def resolve(ref: object) -> Concept | None:
        if not isinstance(ref, str):
            return None
        return by_id.get(ref) or by_label.get(ref.lower())

    for raw in raw_concepts:
        if not isinstance(raw, dict) or "label" not in raw:
            logger.info("dropped provider concept without label: %r", raw)
            continue
        label = str(raw["label"]).strip()
        if not label or label.lower() in by_label:
            continue
        parent = resolve(raw.get("parent"))
        prop_id = (
            parent.proposition_id
            if parent is not None
            else _proposition_for(base, raw)
        )
        if prop_id is None:
            logger.info("dropped provider concept %r: no proposition", label)
            continue
        try:
            spans = merge_spans(
                [(int(s[0]), int(s[1])) for s in raw.get("spans", [])]
            )
        except (TypeError, ValueError, IndexError):
            logger.info("dropped provider concept %r: bad spans", label)
            continue
        if parent is not None:
            spans = clip_spans(spans, parent.spans) if spans else parent.spans
        if not spans:
            logger.info("dropped provider concept %r: empty spans", label)
            continue
        concept = Concept(
            id=concept_id(prop_id, label, spans[0][0]),
            proposition_id=prop_id,
            label=label,
            kind=ConceptKind.CONCEPT,
            spans=spans,
            parent_id=parent.id if parent is not None else None,
            stems=(),
        )
        concepts.append(concept)
        by_id[concept.id] = concept
        by_label[label.lower()] = concept

    relations = [
        r for r in base.relations if r.type is not RelationType.SEQUENCE
    ]
    existing = {r.key() for r in relations}
    for raw in raw_relations:
        if not isinstance(raw, dict):
            continue
        src = resolve(raw.get("src"))
        dst = resolve(raw.get("dst"))
        rtype = str(raw.get("type", "")).lower()
        if src is None or dst is None:
            logger.info("dropped provider relation with unknown endpoint: %r", raw)
            continue
        if src.id == dst.id:
            logger.info("dropped provider self-relation on %s", src.id)
            continue
        if rtype == RelationType.INCLUSION.value:
            reparented = _try_reparent(concepts, by_id, src, dst)
            if reparented is None:
                logger.info(
                    "dropped provider inclusion %s->%s: breaks forest",
                    src.id,
                    dst.id,
                )
            else:
                concepts = reparented
                by_id = {c.id: c for c in concepts}
            continue
        if rtype == RelationType.ASSOCIATION.value:
            rel = Relation(
                type=RelationType.ASSOCIATION,
                src_id=src.id,
                dst_id=dst.id,
                evidence={"kind": "provider"},
            )
        elif rtype == RelationType.SIMILARITY.value:
            a, b = sorted((src.id, dst.id))
            rel = Relation(
                type=RelationType.SIMILARITY,
                src_id=a,
                dst_id=b,
                evidence={"kind": "provider", "cosine": 1.0},
            )
        else:
            logger.info("dropped provider relation of type %r", rtype)
            continue
        if rel.key() in existing:
            continue
        existing.add(rel.key())
        relations.append(rel)

    # Inclusion edges mirror parent links; sequence chains are rebuilt.
    relations = [
        r
        for r in relations
        if r.type not in (RelationType.INCLUSION, RelationType.SEQUENCE)
    ]
    from ctt.conceptgraph.relations import inclusion_relations

    relations.extend(inclusion_relations(concepts))
    relations.extend(sequence_relations_by_group(concepts))

    return ConceptMap(
        video_id=base.video_id,
        duration_ms=base.duration_ms,
        propositions=list(base.propositions),
        concepts=sorted(concepts, key=lambda c: (c.first_start_ms, c.label, c.id)),
        relations=sorted(relations, key=lambda r: r.key()),
        provenance=base.provenance,
    )


def _proposition_for(base: ConceptMap, raw: dict) -> str | None:
    ref = raw.get("proposition")
    if isinstance(ref, str):
        for p in base.propositions:
            if p.id == ref or p.title.lower() == ref.lower():
                return p.id
    spans = raw.get("spans") or []
    if spans:
        try:
            start = int(spans[0][0])
        except (TypeError, ValueError, IndexError):
            return None
        for p in base.propositions:
            if p.start_ms <= start < p.end_ms:
                return p.id
    return None


def _try_reparent(
    concepts: list[Concept],
    by_id: dict[str, Concept],
    parent: Concept,
    child: Concept,
) -> list[Concept] | None:
    if child.parent_id is not None:
        return None
    if parent.proposition_id != child.proposition_id:
        return None
    # Walk up from the parent; the child must not be an ancestor.
    cur: Concept | None = parent
    while cur is not None:
        if cur.id == child.id:
            return None
        cur = by_id.get(cur.parent_id) if cur.parent_id else None
    clipped = clip_spans(child.spans, parent.spans)
    if not clipped:
        return None
    updated = replace(child, parent_id=parent.id, spans=clipped)
    return [updated if c.id == child.id else c for c in concepts]
