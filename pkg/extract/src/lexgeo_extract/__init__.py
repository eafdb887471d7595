"""Embedding-store extraction from multilingual encoders.

Pipeline layers: `spec` (the JSON job description), `tokens`
(character-offset span location), `backends` (deterministic stub and
transformers wrapper), `screening` (degenerate-language flags), and
`pipeline` (pooling, store assembly, log). Output is a store file plus a
log; the analysis toolkit reads the file and nothing else.
"""

from .backends import (
    Encoding,
    EncoderBackend,
    LAYER_CONVENTION,
    StubEncoder,
    TransformersEncoder,
    backend_for,
)
from .errors import ExtractionError
from .pipeline import ExtractionResult, extract_both, extract_store, write_result
from .screening import SCREENING_RULE, degenerate_languages, language_similarity_scores
from .spec import (
    ConceptSpec,
    ExtractionSpec,
    ExtractionSpecError,
    default_carriers,
    load_carriers,
    spec_violations,
    with_default_templates,
)
from .tokens import SpanError, Token, locate_target_span, render_template, span_for_interval

__version__ = "0.1.0"
