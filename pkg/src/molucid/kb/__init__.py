"""Molecular substructure knowledge base: extraction, build, retrieval."""

from .build import (
    CorpusParseError,
    KbError,
    KnowledgeBase,
    SubstructureRecord,
    build_kb,
    count_substructures,
    embed_kb,
    load_kb,
    save_kb,
)
from .describe import (
    Describer,
    DescriberError,
    LlmDescriber,
    MockDescriber,
    StructureFacts,
    describe_substructure,
    facts_text,
    functional_group_hits,
    structure_facts,
)
from .extract import (
    extract_chain_substructures,
    extract_ring_substructures,
    extract_substructures,
)
from .retrieve import (
    CheckpointMismatchError,
    Retriever,
    retrieve_topk,
    topk_by_stub_embeddings,
)

__all__ = [
    "CheckpointMismatchError",
    "CorpusParseError",
    "Describer",
    "DescriberError",
    "KbError",
    "KnowledgeBase",
    "LlmDescriber",
    "MockDescriber",
    "Retriever",
    "StructureFacts",
    "SubstructureRecord",
    "build_kb",
    "count_substructures",
    "describe_substructure",
    "embed_kb",
    "extract_chain_substructures",
    "extract_ring_substructures",
    "extract_substructures",
    "facts_text",
    "functional_group_hits",
    "load_kb",
    "retrieve_topk",
    "save_kb",
    "structure_facts",
    "topk_by_stub_embeddings",
]
