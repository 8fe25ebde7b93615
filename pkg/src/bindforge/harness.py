"""Compile generated bindings with real compilers and run fixture programs.

Test-only plumbing.  Compilers come from ``BINDFORGE_CXX`` / ``BINDFORGE_FC``
or the search path; with no usable pair every fixture reports ``skipped``.
Extra Fortran runtime link flags can be given in ``BINDFORGE_FC_LIBS``.
"""

from __future__ import annotations

import os
import shlex
import shutil
import subprocess
import tempfile
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Optional

from . import generate

PASS, FAIL, SKIPPED = "pass", "fail", "skipped"

_CXX_CANDIDATES = ("g++", "c++", "clang++")
_FC_CANDIDATES = ("gfortran", "flang-new", "flang", "f95", "gcc")

_PROBE = "module probe_mod\n  use, intrinsic :: ISO_C_BINDING\n  implicit none\n  integer(C_INT) :: x = 1\nend module\n"


@dataclass(frozen=True)
class Toolchain:
    cxx: tuple
    fc: tuple
    link_libs: tuple
    strict_flags: tuple = ()  # applied to the generated module only

    def describe(self) -> str:
        return f"C++: {' '.join(self.cxx)}; Fortran: {' '.join(self.fc)}"


def _command(env_name, candidates):
    value = os.environ.get(env_name)
    if value:
        parts = shlex.split(value)
        return tuple(parts) if parts and shutil.which(parts[0]) else None
    for name in candidates:
        if shutil.which(name):
            return (name,)
    return None


def _compiles_fortran(fc) -> bool:
    with tempfile.TemporaryDirectory() as tmp:
        src = Path(tmp, "probe.f90")
        src.write_text(_PROBE)
        try:
            proc = subprocess.run([*fc, "-c", str(src), "-o", str(Path(tmp, "probe.o"))],
                                  cwd=tmp, capture_output=True, timeout=60)
        except (OSError, subprocess.TimeoutExpired):
            return False
        return proc.returncode == 0


def detect_toolchain() -> Optional[Toolchain]:
    """A working C++ + Fortran compiler pair, or None."""
    cxx = _command("BINDFORGE_CXX", _CXX_CANDIDATES)
    if cxx is None:
        return None
    if os.environ.get("BINDFORGE_FC"):
        fc = _command("BINDFORGE_FC", ())
        fcs = [fc] if fc else []
    else:
        fcs = [(name,) for name in _FC_CANDIDATES if shutil.which(name)]
    for fc in fcs:
        if _compiles_fortran(fc):
            libs = os.environ.get("BINDFORGE_FC_LIBS")
            if libs is not None:
                link = tuple(shlex.split(libs))
            elif "flang" in Path(fc[0]).name:
                link = ()
            else:
                link = ("-lgfortran",)
            strict = ("-std=f2003",) if Path(fc[0]).name in ("gfortran", "gcc", "f95") else ()
            return Toolchain(cxx, fc, link, strict)
    return None


@dataclass
class Fixture:
    """One end-to-end scenario.

    ``check`` receives the program's standard output and returns a list of
    failure messages; an empty list is a pass.
    """

    name: str
    interface_file: Path
    test_program: str
    check: Callable[[str], list]
    library_sources: list = field(default_factory=list)
    include_dirs: list = field(default_factory=list)
    stdin: str = ""
    cxx_flags: list = field(default_factory=list)


@dataclass
class FixtureResult:
    status: str
    log: str = ""
    stdout: str = ""
    failures: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.status == PASS


def _run(cmd, cwd, log, stdin=None, timeout=300):
    log.append("$ " + " ".join(shlex.quote(str(c)) for c in cmd))
    proc = subprocess.run([str(c) for c in cmd], cwd=cwd, input=stdin, capture_output=True,
                          text=True, timeout=timeout)
    if proc.stdout and stdin is None:
        log.append(proc.stdout)
    if proc.stderr:
        log.append(proc.stderr)
    return proc


def run_fixture(fixture: Fixture, toolchain: Optional[Toolchain] = None,
                workdir: Optional[Path] = None) -> FixtureResult:
    """Generate, compile, link and run ``fixture`` in an isolated directory."""
    toolchain = toolchain or detect_toolchain()
    if toolchain is None:
        return FixtureResult(SKIPPED, "no C++/Fortran compiler pair found")
    log = [toolchain.describe()]
    with tempfile.TemporaryDirectory(prefix=f"bindforge-{fixture.name}-") as tmp:
        build = Path(workdir) if workdir else Path(tmp)
        build.mkdir(parents=True, exist_ok=True)
        pair = generate(Path(fixture.interface_file).read_text(encoding="utf-8"))
        (build / pair.c_filename).write_text(pair.c_source)
        (build / pair.fortran_filename).write_text(pair.fortran_source)
        (build / "main.f90").write_text(fixture.test_program)
        includes = [f"-I{Path(d).resolve()}" for d in
                    [Path(fixture.interface_file).parent, *fixture.include_dirs]]
        objects = []
        steps = []
        for src in [build / pair.c_filename, *[Path(s).resolve() for s in fixture.library_sources]]:
            obj = build / (src.stem + ".o")
            steps.append([*toolchain.cxx, "-std=c++11", *fixture.cxx_flags, *includes, "-c", src, "-o", obj])
            objects.append(obj)
        for src, flags in ((build / pair.fortran_filename, toolchain.strict_flags), (build / "main.f90", ())):
            obj = build / (src.stem + "_f.o")
            steps.append([*toolchain.fc, *flags, "-c", src, "-o", obj])
            objects.append(obj)
        exe = build / "fixture.exe"
        steps.append([*toolchain.cxx, *objects, *toolchain.link_libs, "-o", exe])
        for cmd in steps:
            proc = _run(cmd, build, log)
            if proc.returncode != 0:
                return FixtureResult(FAIL, "\n".join(log), failures=[f"build step failed: {cmd[0]}"])
        proc = _run([exe], build, log, stdin=fixture.stdin)
        if proc.returncode != 0:
            return FixtureResult(FAIL, "\n".join(log), proc.stdout,
                                 [f"program exited with status {proc.returncode}"])
        failures = fixture.check(proc.stdout)
        return FixtureResult(FAIL if failures else PASS, "\n".join(log), proc.stdout, failures)
