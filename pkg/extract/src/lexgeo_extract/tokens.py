"""Character-offset span location.

Given a carrier template, a surface form, and an offset-annotated
tokenization of the rendered sentence, find the contiguous token range
that carries the form. Selection is by character overlap with the form's
interval, which survives tokenizers that glue the target to a leading
space or trailing punctuation; matching token strings against the form
would not.
"""

from dataclasses import dataclass

from .spec import WORD_SLOT


class SpanError(Exception):
    """No usable token range for the target interval."""


@dataclass(frozen=True)
class Token:
    """One token with [start, end) character offsets into its sentence."""

    text: str
    start: int
    end: int


def render_template(template: str, form: str) -> tuple[str, tuple[int, int]]:
    """Substitute the form into the template's single {word} slot.

    Returns the rendered sentence and the form's character interval in it.
    The interval comes from the slot position, never from searching for the
    form, so a form that also occurs verbatim elsewhere in the template
    cannot mislead it.
    """
    if template.count(WORD_SLOT) != 1:
        raise ValueError(f"template must contain exactly one {WORD_SLOT}")
    if not form:
        raise ValueError("empty surface form")
    at = template.index(WORD_SLOT)
    rendered = template[:at] + form + template[at + len(WORD_SLOT):]
    return rendered, (at, at + len(form))


def span_for_interval(
    interval: tuple[int, int],
    tokens: list[Token] | tuple[Token, ...],
    sentence_length: int,
) -> tuple[int, int]:
    """Token index range [start, stop) of tokens overlapping a character
    interval.

    The range spans the first through last overlapping token; zero-width
    tokens (specials) never match. Raises SpanError when nothing overlaps
    or when an overlapping token reaches outside the sentence.
    """
    a, b = interval
    first = None
    last = None
    for i, t in enumerate(tokens):
        if t.start < t.end and t.start < b and t.end > a:
            if first is None:
                first = i
            last = i
    if first is None or last is None:
        raise SpanError(f"no token overlaps characters [{a}, {b})")
    for t in tokens[first:last + 1]:
        if t.start < 0 or t.end > sentence_length:
            raise SpanError(
                f"token ({t.start}, {t.end}) reaches outside the sentence"
            )
    return first, last + 1


def locate_target_span(
    template: str, form: str, tokens: list[Token] | tuple[Token, ...]
) -> tuple[int, int]:
    """Token index range [start, stop) covering the form in the rendered
    sentence.

    tokens must be an offset-annotated tokenization of
    render_template(template, form).
    """
    rendered, interval = render_template(template, form)
    try:
        return span_for_interval(interval, tokens, len(rendered))
    except SpanError as exc:
        raise SpanError(f"{exc} of {rendered!r}") from None
