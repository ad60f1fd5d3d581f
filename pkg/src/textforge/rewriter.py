"""Turning scanned segments plus snippet outputs back into file text.

Update mode keeps every snippet in place and appends its output directly
after the end delimiter, wrapped in output markers whose shared digit infix
is chosen so neither marker collides with the output text. Replace mode
drops the snippet markup (including the line's leading whitespace when the
snippet starts its line) and keeps only the bare output.
"""
from __future__ import annotations

import os
import re
import stat
import tempfile
from dataclasses import dataclass

from .core import (
    EngineState,
    EvalError,
    Mode,
    OutDelims,
    ParseError,
    UsageError,
    line_col,
)
from .scanner import (
    LiteralMatch,
    Outer,
    PatternMatch,
    Segment,
    Snippet,
    iter_segments,
)
from .scriptlet import (
    eval_expression,
    eval_program,
    parse_expression,
    parse_scriptlet,
    stringify,
)


@dataclass(frozen=True, slots=True)
class RenderedFile:
    """Result of processing one file: new text and whether it differs."""

    text: str
    changed: bool


def prepare_code(code: str, line_comment: str | None) -> str:
    """Strip the style's line-comment prefix from commented snippet lines.

    A line whose first non-whitespace characters equal `line_comment` loses
    the comment string and the whitespace before it; everything after stays,
    so multi-line scriptlets written inside host-language comments parse as
    one program.
    """
    return _prepare_with_offsets(code, line_comment)[0]


def _prepare_with_offsets(code: str, line_comment: str | None) -> tuple[str, list[int]]:
    if not line_comment:
        return code, []
    out = []
    removed = []
    for line in code.split("\n"):
        body = line.lstrip(" \t")
        if body.startswith(line_comment):
            out.append(body[len(line_comment):])
            removed.append(len(line) - len(body) + len(line_comment))
        else:
            out.append(line)
            removed.append(0)
    return "\n".join(out), removed


def choose_infix(output: str, delims: OutDelims) -> str:
    """Smallest digit infix whose markers cannot be mistaken for output text.

    Markers are compared without their trailing newlines, so an output line
    that merely *ends* like a marker still forces a numbered infix.
    """
    def clashes(infix: str) -> bool:
        return (delims.begin(infix).rstrip("\n") in output
                or delims.end(infix).rstrip("\n") in output)

    if not clashes(""):
        return ""
    n = 1
    while clashes(str(n)):
        n += 1
    return str(n)


def indent_output(output: str, indent: str) -> str:
    """Prefix `indent` to every non-empty line of `output`."""
    if not indent:
        return output
    return "\n".join(indent + line if line else line
                     for line in output.split("\n"))


def assemble_update(segments: list[Segment], outputs: list[str],
                    state: EngineState) -> str:
    """Render update-mode text: sources verbatim, fresh output blocks after
    each snippet, stale blocks dropped. Empty output appends nothing."""
    parts: list[str] = []
    i = 0
    for seg in segments:
        if isinstance(seg, Outer):
            parts.append(seg.text)
            continue
        if isinstance(seg, Snippet):
            parts.append(seg.raw)
            out = outputs[i]
            i += 1
            if seg.indent_adjust and seg.indent:
                out = indent_output(out, seg.indent)
            if out:
                infix = choose_infix(out, seg.out_delims)
                parts.append(seg.out_delims.begin(infix) + out
                             + seg.out_delims.end(infix))
        else:
            parts.append(seg.matched)
            i += 1
    return "".join(parts)


def assemble_replace(segments: list[Segment], outputs: list[str],
                     state: EngineState) -> str:
    """Render replace-mode text: snippet markup and stale blocks vanish and
    only the bare output remains.

    A snippet that starts its line (after whitespace only) takes that
    whitespace with it, and output followed by a newline-terminated end
    marker in update mode keeps a terminating newline here, so both modes
    agree on line structure.
    """
    parts: list[str] = []
    i = 0
    for seg in segments:
        if isinstance(seg, Outer):
            parts.append(seg.text)
            continue
        if isinstance(seg, Snippet):
            out = outputs[i]
            i += 1
            if seg.indent_adjust and seg.indent:
                out = indent_output(out, seg.indent)
            if (seg.indent and seg.line_prefix == seg.indent
                    and parts and parts[-1].endswith(seg.indent)):
                parts[-1] = parts[-1][:-len(seg.indent)]
            if out and seg.out_delims.e2.endswith("\n") and not out.endswith("\n"):
                out += "\n"
            parts.append(out)
        else:
            parts.append(outputs[i])
            i += 1
    return "".join(parts)


def _substitute_template(template: str, captures: tuple[str, ...]) -> str:
    def repl(m: re.Match) -> str:
        idx = int(m.group(1)) - 1
        return captures[idx] if idx < len(captures) else ""

    return re.sub(r"\$([1-9])", repl, template)


def _rebase_error(exc, text: str, seg: Snippet, begin_len: int,
                  removed: list[int], path: str):
    """Map a scriptlet error from snippet-relative to file coordinates."""
    base_line, base_col = line_col(text, seg.offset)
    rel_line = exc.line or 1
    rel_col = exc.col or 1
    if 0 < rel_line <= len(removed):
        rel_col += removed[rel_line - 1]
    if rel_line == 1:
        col = base_col + begin_len + rel_col - 1
    else:
        col = rel_col
    return type(exc)(exc.message, file=path,
                     line=base_line + rel_line - 1, col=col)


def _eval_snippet(text: str, seg: Snippet, state: EngineState) -> str:
    state.out_buffer = ""
    hook = state.hooks[seg.hook_index]
    prepared, removed = _prepare_with_offsets(seg.code, state.line_comment)
    try:
        program = parse_scriptlet(prepared)
        return eval_program(program, state)
    except (ParseError, EvalError) as exc:
        if exc.file is not None:  # e.g. an error inside a conf file
            raise
        raise _rebase_error(exc, text, seg, len(hook.begin), removed,
                            state.file_path) from None


def process_file(path: str, state: EngineState, *, out_path: str | None = None,
                 init_code: str | None = None) -> RenderedFile:
    """Process one file: read, run optional init code, evaluate snippets in
    document order, assemble per mode, and write the result.

    Update mode rewrites `path` in place (only when the content actually
    changed); replace mode writes to `out_path` and never touches the input.
    """
    if state.mode is Mode.REPLACE and not out_path:
        raise UsageError("replace mode requires an output path")
    if state.mode is Mode.UPDATE and out_path:
        raise UsageError("update mode rewrites in place; -o is not allowed")

    with open(path, "rb") as fh:
        text = fh.read().decode("utf-8", "surrogateescape")
    state.file_mtime = os.stat(path).st_mtime

    if init_code:
        try:
            program = parse_scriptlet(init_code)
            eval_program(program, state)
        except (ParseError, EvalError) as exc:
            if exc.file is None:
                exc.file = path
            raise
        state.out_buffer = ""

    segments: list[Segment] = []
    outputs: list[str] = []
    for seg in iter_segments(text, state):
        segments.append(seg)
        if isinstance(seg, Snippet):
            outputs.append(_eval_snippet(text, seg, state))
        elif isinstance(seg, LiteralMatch):
            if state.mode is Mode.REPLACE:
                hook = state.hooks[seg.needle_index]
                expr = parse_expression(hook.replacement)
                outputs.append(stringify(eval_expression(expr, state)))
            else:
                outputs.append("")
        elif isinstance(seg, PatternMatch):
            if state.mode is Mode.REPLACE:
                hook = state.hooks[seg.hook_index]
                outputs.append(_substitute_template(hook.template, seg.captures))
            else:
                outputs.append("")

    if state.mode is Mode.UPDATE:
        new_text = assemble_update(segments, outputs, state)
        write_if_changed(path, new_text)
    else:
        new_text = assemble_replace(segments, outputs, state)
        assert out_path is not None
        write_if_changed(out_path, new_text)
    return RenderedFile(text=new_text, changed=new_text != text)


def write_if_changed(path: str, text: str) -> bool:
    """Write `text` to `path` atomically, but only when it differs.

    Identical content means no write at all, so timestamps survive untouched.
    Updates go through a temp file in the same directory followed by a rename;
    an existing file keeps its permission bits.
    """
    data = text.encode("utf-8", "surrogateescape")
    mode = None
    try:
        with open(path, "rb") as fh:
            if fh.read() == data:
                return False
        mode = stat.S_IMODE(os.stat(path).st_mode)
    except FileNotFoundError:
        pass

    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(prefix=".textforge-", dir=directory)
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(data)
        if mode is None:
            mask = os.umask(0)
            os.umask(mask)
            mode = 0o666 & ~mask
        os.chmod(tmp, mode)
        os.replace(tmp, path)
    except BaseException:
        try:
            os.unlink(tmp)
        except OSError:
            pass
        raise
    return True
