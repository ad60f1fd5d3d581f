"""Segmentation of input text into outer text, snippets, and hook matches.

Scanning is incremental: `iter_segments` is a generator that re-reads the
state's hook list before every search, so a snippet that registers new hooks
affects everything after it. Concatenating the raw text of every segment
(including each snippet's consumed existing-output block) reproduces the
input byte for byte.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterator, Optional

from .core import (
    BeginEnd,
    EngineState,
    Hook,
    Literal,
    OutDelims,
    Pattern,
    UnterminatedOutputError,
    UnterminatedSnippetError,
    line_col,
)


@dataclass(frozen=True, slots=True)
class ExistingOutput:
    """A previously generated output block found directly after a snippet.

    raw == begin marker + inner + end marker; infix is the digit run shared
    by both markers ("" when none).
    """

    raw: str
    inner: str
    infix: str


@dataclass(frozen=True, slots=True)
class Outer:
    """Text the engine passes through untouched."""

    text: str


@dataclass(frozen=True, slots=True)
class Snippet:
    """One begin/end-delimited scriptlet occurrence.

    raw spans begin through end delimiter inclusive; code is the text between
    them. indent is the leading whitespace of the line holding the begin
    delimiter and line_prefix everything on that line before the delimiter.
    out_delims/indent_adjust record the values in effect when the snippet was
    scanned, so later retargeting cannot re-wrap earlier output.
    """

    raw: str
    code: str
    hook_index: int
    indent: str
    line_prefix: str
    existing_output: Optional[ExistingOutput]
    out_delims: OutDelims
    indent_adjust: bool
    offset: int


@dataclass(frozen=True, slots=True)
class LiteralMatch:
    needle_index: int
    matched: str


@dataclass(frozen=True, slots=True)
class PatternMatch:
    hook_index: int
    matched: str
    captures: tuple[str, ...]


Segment = Outer | Snippet | LiteralMatch | PatternMatch


@dataclass(frozen=True, slots=True)
class HookMatch:
    hook_index: int
    start: int
    end: int  # exclusive
    captures: tuple[str, ...] = ()


def find_next_match(text: str, from_: int, hooks: list[Hook],
                    *, file: str | None = None) -> Optional[HookMatch]:
    """Earliest hook match at or after `from_`.

    Ties are broken by smallest start, then smallest match length, then
    smallest hook index. A begin delimiter with no end delimiter anywhere
    after it is a hard error once no complete match starts before it.
    """
    best: Optional[HookMatch] = None
    best_key: tuple[int, int, int] | None = None
    dangling: int | None = None  # earliest unterminated begin

    for i, hook in enumerate(hooks):
        if isinstance(hook, BeginEnd):
            b = text.find(hook.begin, from_)
            if b < 0:
                continue
            e = text.find(hook.end, b + len(hook.begin))
            if e < 0:
                if dangling is None or b < dangling:
                    dangling = b
                continue
            cand = HookMatch(i, b, e + len(hook.end))
        elif isinstance(hook, Literal):
            n = text.find(hook.needle, from_)
            if n < 0:
                continue
            cand = HookMatch(i, n, n + len(hook.needle))
        else:
            # Zero-width matches are skipped: they carry no text to rewrite
            # and would stall the scan. (re.search clamps pos to len(text)
            # and keeps reporting the final empty match, hence the bound.)
            rx = re.compile(hook.regex)
            at = from_
            m = None
            while at <= len(text):
                found = rx.search(text, at)
                if found is None:
                    break
                if found.end() > found.start():
                    m = found
                    break
                at = found.start() + 1
            if m is None:
                continue
            groups = tuple(g if g is not None else "" for g in m.groups()[:9])
            cand = HookMatch(i, m.start(), m.end(), groups)
        key = (cand.start, cand.end - cand.start, i)
        if best_key is None or key < best_key:
            best, best_key = cand, key

    if dangling is not None and (best is None or dangling < best.start):
        ln, col = line_col(text, dangling)
        raise UnterminatedSnippetError(
            "snippet begin delimiter is never terminated",
            file=file, line=ln, col=col)
    return best


def detect_output_block(text: str, at: int, delims: OutDelims,
                        *, file: str | None = None) -> Optional[ExistingOutput]:
    """Existing output block starting exactly at `at`, or None.

    The infix is a maximal run of decimal digits between b1 and b2; the end
    marker must carry the same infix. A begin marker without its end marker
    is a hard error.
    """
    if not text.startswith(delims.b1, at):
        return None
    i = at + len(delims.b1)
    j = i
    while j < len(text) and "0" <= text[j] <= "9":
        j += 1
    infix = text[i:j]
    if not text.startswith(delims.b2, j):
        return None
    inner_start = j + len(delims.b2)
    end_marker = delims.end(infix)
    k = text.find(end_marker, inner_start)
    if k < 0:
        ln, col = line_col(text, at)
        raise UnterminatedOutputError(
            "output block begin marker has no matching end marker",
            file=file, line=ln, col=col)
    end = k + len(end_marker)
    return ExistingOutput(raw=text[at:end], inner=text[inner_start:k], infix=infix)


def _line_prefix(text: str, offset: int) -> tuple[str, str]:
    """(leading whitespace of the line, everything on the line before offset)."""
    start = text.rfind("\n", 0, offset) + 1
    prefix = text[start:offset]
    i = start
    while i < len(text) and text[i] in " \t":
        i += 1
    return text[start:i], prefix


def iter_segments(text: str, state: EngineState) -> Iterator[Segment]:
    """Yield segments left to right, honouring live hook mutations.

    Callers that evaluate snippets between pulls see hook/out_delims changes
    applied from the resume point onward. Existing output blocks are detected
    in both modes, only for BeginEnd hooks, and only with zero characters
    between snippet end and block begin.
    """
    pos = 0
    n = len(text)
    while True:
        match = find_next_match(text, pos, state.hooks, file=state.file_path)
        if match is None:
            if pos < n:
                yield Outer(text[pos:])
            return
        if match.start > pos:
            yield Outer(text[pos:match.start])
        hook = state.hooks[match.hook_index]
        if isinstance(hook, BeginEnd):
            raw = text[match.start:match.end]
            code = text[match.start + len(hook.begin):match.end - len(hook.end)]
            indent, prefix = _line_prefix(text, match.start)
            delims = state.out_delims
            existing = detect_output_block(text, match.end, delims,
                                           file=state.file_path)
            yield Snippet(
                raw=raw,
                code=code,
                hook_index=match.hook_index,
                indent=indent,
                line_prefix=prefix,
                existing_output=existing,
                out_delims=delims,
                indent_adjust=state.indent_adjust,
                offset=match.start,
            )
            pos = match.end + (len(existing.raw) if existing else 0)
        elif isinstance(hook, Literal):
            yield LiteralMatch(match.hook_index, text[match.start:match.end])
            pos = match.end
        else:
            yield PatternMatch(match.hook_index, text[match.start:match.end],
                               match.captures)
            pos = match.end


def scan(text: str, state: EngineState) -> list[Segment]:
    """Segment `text` with the state's current hooks (no evaluation)."""
    return list(iter_segments(text, state))
