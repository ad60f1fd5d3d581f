"""Command-line front end.

    textforge [-replace] [-o=PATH] [-e=CODE] [-style=NAME] FILE...

Without -replace every file is updated in place; generated output lands
after its snippet between output markers and nothing else moves. With
-replace the one input file is expanded (markup removed, bare output kept)
into PATH. -e runs CODE as a scriptlet before each file's first snippet;
-style overrides file-type detection.

Exit codes: 0 success, 1 any file failed to process (remaining files are
still attempted), 2 usage error. Diagnostics go to stderr as
FILE:LINE:COL: message.
"""
from __future__ import annotations

import sys
from dataclasses import dataclass, field

from .core import EngineError, Mode, UsageError, new_engine_state
from .rewriter import process_file
from .styles import builtin_registry, detect_style

USAGE = "usage: textforge [-replace] [-o=PATH] [-e=CODE] [-style=NAME] FILE..."


@dataclass
class CliOptions:
    mode: Mode = Mode.UPDATE
    out_path: str | None = None
    init_code: str | None = None
    style_override: str | None = None
    files: list[str] = field(default_factory=list)


def parse_args(argv: list[str]) -> CliOptions:
    """Parse command-line arguments; raises UsageError on bad invocations."""
    opts = CliOptions()
    for arg in argv:
        if arg == "-replace":
            opts.mode = Mode.REPLACE
        elif arg.startswith("-o="):
            opts.out_path = arg[3:]
        elif arg.startswith("-e="):
            opts.init_code = arg[3:]
        elif arg.startswith("-style="):
            opts.style_override = arg[7:]
        elif arg.startswith("-") and arg != "-":
            raise UsageError(f"unknown option: {arg}")
        else:
            opts.files.append(arg)
    if not opts.files:
        raise UsageError("no input files")
    if opts.mode is Mode.REPLACE and not opts.out_path:
        raise UsageError("-replace requires -o=PATH")
    if opts.out_path and opts.mode is not Mode.REPLACE:
        raise UsageError("-o is only valid together with -replace")
    if opts.out_path and len(opts.files) > 1:
        raise UsageError("-o cannot be used with multiple input files")
    return opts


def run(opts: CliOptions) -> int:
    """Process every file; returns the process exit code."""
    registry = builtin_registry()
    override = None
    if opts.style_override is not None:
        override = registry.get(opts.style_override)
        if override is None:
            known = ", ".join(registry.names())
            print(f"textforge: unknown style '{opts.style_override}' "
                  f"(known: {known})", file=sys.stderr)
            return 2

    status = 0
    for path in opts.files:
        style = override or detect_style(path, registry)
        state = new_engine_state(path, opts.mode, style)
        try:
            process_file(path, state, out_path=opts.out_path,
                         init_code=opts.init_code)
        except EngineError as exc:
            if exc.file is None:
                exc.file = path
            print(exc.diagnostic(), file=sys.stderr)
            status = 1
        except OSError as exc:
            print(f"{path}:0:0: {exc}", file=sys.stderr)
            status = 1
    return status


def main(argv: list[str] | None = None) -> int:
    args = sys.argv[1:] if argv is None else argv
    try:
        opts = parse_args(args)
    except UsageError as exc:
        print(f"textforge: {exc.message}", file=sys.stderr)
        print(USAGE, file=sys.stderr)
        return 2
    return run(opts)


if __name__ == "__main__":
    sys.exit(main())
