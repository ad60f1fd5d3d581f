"""Hierarchical configuration via `starfish.conf` files.

When a snippet calls `read_starfish_conf()`, the engine walks upward from the
processed file's directory collecting `starfish.conf` from each consecutive
ancestor; the first directory without one ends the walk. The collected files
run top-down as scriptlet programs against the file's scope, so deeper confs
see (and may override) what their ancestors defined. Setting the environment
variable TEXTFORGE_NO_CONF=1 disables loading entirely.
"""
from __future__ import annotations

import os
from dataclasses import dataclass

from .core import EngineState
from .scriptlet import eval_program, parse_scriptlet

NO_CONF_ENV = "TEXTFORGE_NO_CONF"
CONF_NAME = "starfish.conf"


@dataclass(frozen=True, slots=True)
class ConfChain:
    """Conf file paths ordered top-down (shallowest ancestor first)."""

    paths: tuple[str, ...]


def find_conf_chain(start_dir: str) -> ConfChain:
    """Collect starfish.conf from `start_dir` upward; a gap stops the walk."""
    found: list[str] = []
    d = os.path.abspath(start_dir)
    while True:
        conf = os.path.join(d, CONF_NAME)
        if not os.path.isfile(conf):
            break
        found.append(conf)
        parent = os.path.dirname(d)
        if parent == d:
            break
        d = parent
    return ConfChain(tuple(reversed(found)))


def exec_conf_chain(chain: ConfChain, state: EngineState) -> None:
    """Run each conf as a scriptlet program against `state.scope`.

    Conf output ($O) is discarded and relative paths in builtins resolve
    against the conf file's own directory while it runs. Parse and runtime
    errors name the conf file. Marks the state so a second
    read_starfish_conf() is a no-op.
    """
    saved_buffer = state.out_buffer
    saved_base = state.base_dir
    try:
        for path in chain.paths:
            with open(path, "rb") as fh:
                source = fh.read().decode("utf-8", "surrogateescape")
            try:
                program = parse_scriptlet(source)
                state.base_dir = os.path.dirname(path)
                state.out_buffer = ""
                eval_program(program, state)
            except Exception as exc:
                _name_conf(exc, path)
                raise
    finally:
        state.out_buffer = saved_buffer
        state.base_dir = saved_base
    state.conf_loaded = True


def _name_conf(exc: Exception, path: str) -> None:
    file = getattr(exc, "file", None)
    if file is None and hasattr(exc, "file"):
        exc.file = path


def load_for_state(state: EngineState) -> None:
    """Entry point used by the read_starfish_conf builtin: idempotent per file."""
    if state.conf_loaded:
        return
    if os.environ.get(NO_CONF_ENV) == "1":
        state.conf_loaded = True
        return
    start = os.path.dirname(os.path.abspath(state.file_path))
    exec_conf_chain(find_conf_chain(start), state)
