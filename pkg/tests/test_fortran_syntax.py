from hypothesis import given
from hypothesis import strategies as st

from bindforge.fortran_syntax import MAX_COLUMNS, validate, wrap_line, wrap_source


def test_short_lines_are_unchanged():
    assert wrap_line("  x = 1") == ["  x = 1"]


def test_long_argument_lists_break_after_commas():
    line = "  call f(" + ", ".join(f"argument_{i}" for i in range(30)) + ")"
    pieces = wrap_line(line)
    assert len(pieces) > 1
    assert all(len(p) <= MAX_COLUMNS for p in pieces)
    assert all(p.endswith("&") for p in pieces[:-1])
    joined = "".join(p[:-1].rstrip() + " " if p.endswith("&") else p for p in pieces)
    assert joined.split() == line.split()


def test_long_literals_use_character_continuation():
    line = '  print *, "' + "x" * 300 + '"'
    pieces = wrap_line(line)
    assert all(len(p) <= MAX_COLUMNS for p in pieces)
    assert pieces[1].lstrip().startswith("&")


@given(st.lists(st.text(alphabet="abc ,()'=", max_size=400), max_size=5))
def test_wrapped_source_respects_the_column_limit(lines):
    out = wrap_source(["  " + line.replace("'", "") for line in lines])
    assert all(len(line) <= MAX_COLUMNS for line in out.split("\n"))


GOOD = """module m
  use, intrinsic :: ISO_C_BINDING
  implicit none
contains
function f(x) result(y)
  integer, intent(in) :: x
  integer :: y
  if (x > 0) then
    y = x
  else
    y = -x
  end if
end function
end module
"""


def test_valid_module_has_no_problems():
    assert validate(GOOD) == []


def test_declaration_after_statement():
    bad = GOOD.replace("  integer :: y\n", "").replace("    y = x\n", "    y = x\n  integer :: z\n")
    assert any("declaration after executable statement" in p for p in validate(bad))


def test_unbalanced_blocks():
    assert "unclosed module block" in validate(GOOD.replace("end module\n", ""))
    assert any("closes" in p for p in validate(GOOD.replace("end function", "end subroutine")))


def test_second_contains():
    assert any("second 'contains'" in p for p in validate(GOOD.replace("contains\n", "contains\ncontains\n")))


def test_overlong_line():
    assert any("exceeds" in p for p in validate("module m\n  ! " + "x" * 200 + "\nend module\n"))
