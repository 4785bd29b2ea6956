"""Concept and relation extraction within root propositions."""

from ctt.conceptgraph.model import (
    Concept,
    ConceptKind,
    ConceptMap,
    Provenance,
    Relation,
    RelationType,
)
from ctt.conceptgraph.embeddings import EmbeddingTable, load_embeddings
from ctt.conceptgraph.concepts import CueLexicons, extract_concepts
from ctt.conceptgraph.relations import (
    association_relations,
    inclusion_relations,
    sequence_relations,
    similarity_relations,
)
from ctt.conceptgraph.assemble import assemble_concept_map
from ctt.conceptgraph.provider import (
    HttpProvider,
    RefineProvider,
    llm_refine,
    provider_from_env,
)

__all__ = [
    "Concept",
    "ConceptKind",
    "ConceptMap",
    "CueLexicons",
    "EmbeddingTable",
    "HttpProvider",
    "Provenance",
    "RefineProvider",
    "Relation",
    "RelationType",
    "assemble_concept_map",
    "association_relations",
    "extract_concepts",
    "inclusion_relations",
    "llm_refine",
    "load_embeddings",
    "provider_from_env",
    "sequence_relations",
    "similarity_relations",
]
