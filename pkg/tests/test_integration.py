"""End-to-end runs: generated bindings compiled against fixture libraries."""

import random
from pathlib import Path

import pytest

from bindforge.harness import PASS, Fixture, detect_toolchain, run_fixture

FIXTURES = Path(__file__).parent / "fixtures"

TOOLCHAIN = detect_toolchain()
pytestmark = [
    pytest.mark.toolchain,
    pytest.mark.skipif(TOOLCHAIN is None, reason="no C++/Fortran compiler pair on this machine"),
]


def _fixture(name, driver, check, library_sources=(), stdin=""):
    return Fixture(name, FIXTURES / name / f"{name}.i", (FIXTURES / name / driver).read_text(), check,
                   library_sources=[FIXTURES / name / s for s in library_sources], stdin=stdin)


def _lines(stdout):
    return [line.strip() for line in stdout.splitlines()]


def _expect_lines(*expected):
    def check(stdout):
        got = _lines(stdout)
        return [f"expected line {e!r}" for e in expected if e not in got]
    return check


def _assert_passes(fixture):
    result = run_fixture(fixture, TOOLCHAIN)
    assert result.status == PASS, "\n".join(result.failures) + "\n" + result.log + "\n" + result.stdout
    return result


def sort_fixture(n=10_000, seed=20190):
    rng = random.Random(seed)
    values = [rng.uniform(-1e6, 1e6) for _ in range(n)]
    stdin = f"{n}\n" + "".join(f"{v!r}\n" for v in values)

    def check(stdout):
        lines = _lines(stdout)
        split = lines.index("ints")
        got = [float(x) for x in lines[:split]]
        ints = [int(x) for x in lines[split + 1:]]
        reference = sorted(values)
        failures = []
        if got != reference:
            bad = next(i for i, (a, b) in enumerate(zip(got, reference)) if a != b) if len(got) == n else -1
            failures.append(f"sorted doubles differ from the reference sort (first mismatch at {bad})")
        if ints != sorted(int(v * 1000) for v in values):
            failures.append("sorted integers differ from the reference sort")
        return failures

    return _fixture("algorithm", "sort_driver.f90", check, stdin=stdin)


def test_sort_matches_reference_sort():
    _assert_passes(sort_fixture())


def test_sort_handles_empty_and_single_element_arrays():
    _assert_passes(sort_fixture(n=0))
    _assert_passes(sort_fixture(n=1))


def exception_fixture():
    def check(stdout):
        def get(key):
            return next((line[len(key):].strip() for line in _lines(stdout) if line.startswith(key)), None)

        failures = []
        if get("first ierr") in (None, "0"):
            failures.append("a thrown std::exception did not set ierr")
        if not get("first message"):
            failures.append("get_serr returned an empty message")
        if get("sticky ierr") != get("first ierr") or get("sticky message") != get("first message"):
            failures.append("a second failure overwrote the first error before it was cleared")
        if get("cleared ierr") != "0":
            failures.append("a valid call after clearing ierr reported an error")
        if get("root ierr") != "0 value   4.00":
            failures.append(f"checked_root(16) after clearing gave {get('root ierr')!r}")
        if get("unknown ierr") != "-1 value   0.00":
            failures.append(f"a non-standard exception gave {get('unknown ierr')!r}")
        return failures

    return _fixture("except", "except_driver.f90", check)


def test_exception_sets_and_clears_ierr():
    result = _assert_passes(exception_fixture())
    assert "careful_sqrt: argument must be positive" in result.stdout


def test_cpp_sum_of_one_two_three_is_six():
    _assert_passes(_fixture("arrays", "arrays_driver.f90",
                            _expect_lines("sum    6.000", "empty    0.000", "fill    7   7  11   7", "element 11")))


def test_proxy_ownership_has_no_leaks_or_double_frees():
    _assert_passes(_fixture("classes", "ownership_driver.f90",
                            _expect_lines("live after alias 1", "alias area    9.000", "alias side    6.000",
                                          "live after alias release 1", "base area    0.000", "live at end 0"),
                            library_sources=["shapes.cpp"]))


def test_strings_round_trip():
    _assert_passes(_fixture("strings", "strings_driver.f90",
                            _expect_lines("[Hello, World!]", "count 3", "[1.2.3]", "empty greeting length 8")))


def test_booleans_normalize():
    _assert_passes(_fixture("booleans", "booleans_driver.f90",
                            _expect_lines("positive FFT", "negate FT", "as_int 10")))


def test_direct_bindings_enums_and_constants():
    _assert_passes(_fixture("bindc", "bindc_driver.f90",
                            _expect_lines("norm    5.000", "shifted 2   4.000", "enum   1  2  4  5",
                                          "const 100  3.14 bindc", "global   1.00E-06"),
                            library_sources=["bindc_lib.cpp"]))


def test_vector_results_become_allocatable_arrays():
    _assert_passes(_fixture("vectors", "vectors_driver.f90",
                            _expect_lines("size 5", "values   0.00  0.25  0.50  0.75  1.00", "total    2.500",
                                          "empty size 0")))


def test_function_pointer_callbacks():
    _assert_passes(_fixture("funptr", "funptr_driver.f90", _expect_lines("twice   81.000")))


def test_default_arguments_scoped_enums_and_static_members():
    _assert_passes(_fixture("defaults", "defaults_driver.f90",
                            _expect_lines("scale     6.00    9.00   10.00", "modes   0  3  4", "code 30",
                                          "default 4", "counter 1 2", "counter 10 instances 2"),
                            library_sources=["defaults.cpp"]))
