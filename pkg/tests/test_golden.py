"""Snapshot suite over the fixture corpus plus corpus-wide structural invariants."""

import re
import shlex
import shutil
import subprocess

import pytest

from bindforge import generate
from bindforge.emit_c import extern_symbols
from bindforge.emit_fortran import bound_symbols, exported_names
from bindforge.fortran_syntax import validate
from bindforge.harness import detect_toolchain
from bindforge.plan import RELEASE
from update_golden import fixture_interfaces, golden_dir, render

INTERFACES = fixture_interfaces()
IDS = [p.stem for p in INTERFACES]


def test_corpus_is_large_enough():
    assert len(INTERFACES) >= 10


@pytest.mark.parametrize("interface", INTERFACES, ids=IDS)
def test_matches_golden(interface):
    expected_dir = golden_dir(interface)
    rendered = render(interface)
    assert sorted(p.name for p in expected_dir.iterdir()) == sorted(rendered)
    for name, text in rendered.items():
        golden = (expected_dir / name).read_text(encoding="utf-8")
        assert text == golden, f"{interface.stem}/{name} differs; run tests/update_golden.py if intended"


@pytest.mark.parametrize("interface", INTERFACES, ids=IDS)
def test_regeneration_is_byte_identical(interface):
    assert render(interface) == render(interface)


def _pair(interface):
    return generate(interface.read_text(encoding="utf-8"))


@pytest.mark.parametrize("interface", INTERFACES, ids=IDS)
def test_interface_block_and_shims_are_a_bijection(interface):
    pair = _pair(interface)
    fortran = bound_symbols(pair.fortran_source)
    direct = {d.c_name for d in pair.plan.direct_bindings}
    assert fortran - direct == extern_symbols(pair.c_source)


@pytest.mark.parametrize("interface", INTERFACES, ids=IDS)
def test_one_shim_per_wrapped_procedure(interface):
    pair = _pair(interface)
    shims = re.findall(r"^SWIGEXPORT .*\b(_wrap_\w+)\(", pair.c_source, re.M)
    wrapped = [p.c_symbol for p in pair.plan.procedures if p.c_symbol]
    support = set()
    if pair.plan.has_exceptions:
        support.add(f"_wrap_{pair.plan.module_name}_get_serr")
    if "free" in pair.plan.needs:
        support.add(pair.plan.free_symbol)
    assert len(shims) == len(set(shims))
    assert sorted(shims) == sorted(wrapped + list(support))


@pytest.mark.parametrize("interface", INTERFACES, ids=IDS)
def test_exported_names_equal_public_names(interface):
    pair = _pair(interface)
    assert exported_names(pair.fortran_source) == {n.lower() for n in pair.plan.public_names}


@pytest.mark.parametrize("interface", INTERFACES, ids=IDS)
def test_fortran_passes_structural_validator(interface):
    assert validate(_pair(interface).fortran_source) == []


@pytest.mark.parametrize("interface", INTERFACES, ids=IDS)
def test_verbatim_blocks_reappear_in_shim_unit(interface):
    pair = _pair(interface)
    source = interface.read_text(encoding="utf-8")
    for block in pair.plan.verbatim:
        assert block.text in source
        assert block.text in pair.c_source


_BRIDGE_TYPES = {
    "void", "SwigClassWrapper", "SwigClassWrapper *", "SwigArrayWrapper", "SwigArrayWrapper *",
    "void *", "int", "MPI_Fint", "double", "float", "char", "signed char", "short", "long", "long long",
    "size_t", "ptrdiff_t", "intptr_t", "int8_t", "int16_t", "int32_t", "int64_t",
}


@pytest.mark.parametrize("interface", INTERFACES, ids=IDS)
def test_shim_signatures_use_only_bridge_types(interface):
    pair = _pair(interface)
    funptrs = set(pair.plan.funptr_types)
    for m in re.finditer(r"^SWIGEXPORT (?:const )?(.+?)\s*\b_wrap_\w+\((.*)\)", pair.c_source, re.M):
        types = [m.group(1).strip()]
        for param in filter(None, (p.strip() for p in m.group(2).split(","))):
            types.append(re.sub(r"\w+$", "", param).strip())
        for t in types:
            t = re.sub(r"\s+\*", " *", t)
            assert t in _BRIDGE_TYPES or t in funptrs, f"{t!r} is not a bridge type"


@pytest.mark.parametrize("interface", INTERFACES, ids=IDS)
def test_fortran_identifiers_unique_ignoring_case(interface):
    plan = _pair(interface).plan
    names = [p.specific for p in plan.procedures] + [p.interface_name for p in plan.procedures if p.interface_name]
    names += [t.assign_specific for t in plan.proxy_types] + [t.release.specific for t in plan.proxy_types
                                                               if t.release.role == RELEASE]
    names += [g.name for g in plan.generics] + list(plan.public_names)
    module_scope = [n.lower() for n in dict.fromkeys(names)]
    assert len(module_scope) == len(set(module_scope))
    assert all(len(n) <= 63 for n in module_scope)


TOOLCHAIN = detect_toolchain()


def _mpi_flags():
    if not shutil.which("mpicxx"):
        return None
    proc = subprocess.run(["mpicxx", "--showme:compile"], capture_output=True, text=True)
    return shlex.split(proc.stdout) if proc.returncode == 0 else None


@pytest.mark.toolchain
@pytest.mark.skipif(TOOLCHAIN is None, reason="no C++/Fortran compiler pair on this machine")
@pytest.mark.parametrize("interface", INTERFACES, ids=IDS)
def test_generated_pair_compiles(interface, tmp_path):
    pair = _pair(interface)
    extra = []
    if "mpi" in pair.plan.needs:
        extra = _mpi_flags()
        if extra is None:
            pytest.skip("MPI headers not available")
    (tmp_path / pair.c_filename).write_text(pair.c_source)
    (tmp_path / pair.fortran_filename).write_text(pair.fortran_source)
    cxx = subprocess.run([*TOOLCHAIN.cxx, "-std=c++11", "-Wall", "-Werror", "-Wno-unused-parameter", *extra,
                          f"-I{interface.parent}", "-c", pair.c_filename], cwd=tmp_path, capture_output=True,
                         text=True)
    if "mpi" in pair.plan.needs and cxx.returncode != 0:
        # system MPI C++ bindings can trip -Werror on their own headers
        cxx = subprocess.run([*TOOLCHAIN.cxx, "-std=c++11", *extra, f"-I{interface.parent}", "-c",
                              pair.c_filename], cwd=tmp_path, capture_output=True, text=True)
    assert cxx.returncode == 0, cxx.stderr
    fc = subprocess.run([*TOOLCHAIN.fc, *TOOLCHAIN.strict_flags, "-c", pair.fortran_filename], cwd=tmp_path,
                        capture_output=True, text=True)
    assert fc.returncode == 0, fc.stderr
