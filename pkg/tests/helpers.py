"""Tiny shared helpers for the test modules."""
from textforge import Mode, builtin_registry, new_engine_state
from textforge.scanner import Outer, Snippet


def make_state(path="doc.txt", mode=Mode.UPDATE, style="default"):
    reg = builtin_registry()
    st = reg.get(style)
    assert st is not None, style
    return new_engine_state(path, mode, st)


def concat_segments(segments):
    """Reassemble the raw bytes covered by a scan (losslessness check)."""
    parts = []
    for seg in segments:
        if isinstance(seg, Outer):
            parts.append(seg.text)
        elif isinstance(seg, Snippet):
            parts.append(seg.raw)
            if seg.existing_output is not None:
                parts.append(seg.existing_output.raw)
        else:
            parts.append(seg.matched)
    return "".join(parts)
