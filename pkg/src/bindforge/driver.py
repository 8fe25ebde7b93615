"""Command-line front end: ``bindforge <input.i> [-o DIR] [--module NAME] ...``.

Exit codes: 0 success, 1 parse/semantic errors (or warnings under
``--werror``), 2 I/O failures, 64 bad command line.
"""

from __future__ import annotations

import argparse
import os
import sys
import tempfile
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

from . import __version__, generate
from .diagnostics import ERROR, WARNING, BindforgeError, Diagnostic, sort_key

EXIT_OK = 0
EXIT_ERRORS = 1
EXIT_IO = 2
EXIT_USAGE = 64


@dataclass
class RunConfig:
    input_path: Path
    output_dir: Path = Path(".")
    module_name_override: Optional[str] = None
    warnings_as_errors: bool = False
    suppress_warning_ids: set = field(default_factory=set)
    emit_plan_dump: bool = False


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        sys.exit(EXIT_USAGE)


def build_arg_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="bindforge", description="Generate a Fortran module and C++ shims from an interface file.")
    p.add_argument("input", type=Path, help="interface file (.i)")
    p.add_argument("-o", "--output-dir", type=Path, default=Path("."), help="directory for the two outputs")
    p.add_argument("--module", dest="module_name", help="override the %%module name")
    p.add_argument("--werror", action="store_true", help="treat warnings as errors")
    p.add_argument("--suppress", action="append", default=[], metavar="ID",
                   help="silence a warning id (repeatable, or comma-separated)")
    p.add_argument("--dump-plan", action="store_true", help="print the resolved plan to standard output")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    return p


def parse_args(argv=None) -> RunConfig:
    ns = build_arg_parser().parse_args(argv)
    suppressed = {item.strip() for arg in ns.suppress for item in arg.split(",") if item.strip()}
    return RunConfig(ns.input, ns.output_dir, ns.module_name, ns.werror, suppressed, ns.dump_plan)


def _report(diags, filename, suppressed, as_errors=False):
    shown = []
    for d in sorted(diags, key=sort_key):
        if d.severity == WARNING and d.id in suppressed:
            continue
        if as_errors and d.severity == WARNING:
            d = Diagnostic(ERROR, d.id, d.message, d.span)
        shown.append(d)
        print(d.render(filename), file=sys.stderr)
    return shown


def write_atomically(outputs: dict, directory: Path):
    """Write every ``name -> text`` into ``directory`` or none of them.

    Each file goes to a temporary sibling first; renames happen only after all
    writes succeeded, and a failed rename rolls back the ones already done.
    """
    directory.mkdir(parents=True, exist_ok=True)
    staged = []
    try:
        for name, text in outputs.items():
            fd, tmp = tempfile.mkstemp(prefix=f".{name}.", suffix=".tmp", dir=directory)
            staged.append((tmp, directory / name))
            with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
                fh.write(text)
        done = []
        try:
            for tmp, final in staged:
                backup = None
                if final.exists():
                    backup = final.read_bytes()
                os.replace(tmp, final)
                done.append((final, backup))
        except OSError:
            for final, backup in done:
                if backup is None:
                    final.unlink(missing_ok=True)
                else:
                    final.write_bytes(backup)
            raise
    finally:
        for tmp, _ in staged:
            if os.path.exists(tmp):
                os.unlink(tmp)


def run(config: RunConfig) -> int:
    name = str(config.input_path)
    try:
        source = config.input_path.read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as exc:
        print(f"bindforge: error: cannot read '{name}': {exc}", file=sys.stderr)
        return EXIT_IO
    try:
        pair = generate(source, config.module_name_override)
    except BindforgeError as exc:
        _report(exc.diagnostics, name, config.suppress_warning_ids)
        return EXIT_ERRORS
    shown = _report(pair.diagnostics, name, config.suppress_warning_ids, config.warnings_as_errors)
    if config.warnings_as_errors and any(d.severity == ERROR for d in shown):
        return EXIT_ERRORS
    try:
        write_atomically({pair.c_filename: pair.c_source, pair.fortran_filename: pair.fortran_source},
                         config.output_dir)
    except OSError as exc:
        print(f"bindforge: error: cannot write outputs to '{config.output_dir}': {exc}", file=sys.stderr)
        return EXIT_IO
    if config.emit_plan_dump:
        sys.stdout.write(pair.plan.dump())
    return EXIT_OK


def main(argv=None) -> int:
    return run(parse_args(argv))


if __name__ == "__main__":
    sys.exit(main())
