import hashlib

from hypothesis import given
from hypothesis import strategies as st

from bindforge.names import (FORTRAN_RESERVED, MAX_FORTRAN_NAME, NameRegistry, fortranize,
                             is_valid_identifier, mangle_name, truncate)


def test_short_names_are_untouched():
    assert truncate("sort") == "sort"
    assert truncate("x" * 63) == "x" * 63


def test_long_names_get_a_hash_suffix():
    name = "a_rather_long_function_name_that_keeps_going_and_going_past_the_limit"
    expected = name[:55] + "_" + hashlib.sha1(name.encode()).hexdigest()[:7]
    assert truncate(name) == expected
    assert len(truncate(name)) == MAX_FORTRAN_NAME


@given(st.text(alphabet="abcdefghijklmnopqrstuvwxyz_0123456789", min_size=64, max_size=200))
def test_truncation_fits_and_is_stable(name):
    out = truncate(name)
    assert len(out) == MAX_FORTRAN_NAME
    assert out == truncate(name)


def test_mangling():
    assert mangle_name("myfunc", 1, "example") == ("myfunc__SWIG_1", "_wrap_example_myfunc__SWIG_1")
    assert mangle_name("sort", None, "algorithm") == ("sort", "_wrap_algorithm_sort")
    assert mangle_name("area", None, "shapes", scope="Circle") == ("swigf_Circle_area", "_wrap_shapes_Circle_area")


def test_fortranize():
    assert fortranize("end") == "end_"
    assert fortranize("Type") == "Type_"
    assert fortranize("_hidden") == "f_hidden"
    assert fortranize("value_of") == "value_of"
    assert "select" in FORTRAN_RESERVED


def test_identifier_validity():
    assert is_valid_identifier("abc_1")
    assert not is_valid_identifier("_abc")
    assert not is_valid_identifier("1abc")
    assert not is_valid_identifier("a" * 64)


def test_registry_is_case_insensitive():
    reg = NameRegistry()
    assert reg.claim("Foo") == "Foo"
    assert reg.claim("foo") == "foo_1"
    assert reg.claim("FOO") == "FOO_2"
    assert "fOo_1" in reg


def test_child_registry_sees_parent_names():
    parent = NameRegistry()
    parent.reserve("sort", owner="generic")
    child = NameRegistry(parent)
    assert child.claim("sort") == "sort_1"
    assert child.owner("SORT") == "generic"
