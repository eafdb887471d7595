class ExtractionError(Exception):
    """Extraction cannot proceed: model load failure, out-of-range layer,
    or an empty job."""
