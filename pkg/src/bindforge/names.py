"""Fortran identifier rules: overload mangling, length limits, uniqueness."""

from __future__ import annotations

import hashlib
import re

MAX_FORTRAN_NAME = 63
_TRUNCATED_STEM = 55
_HASH_DIGITS = 7

# Keywords and intrinsic statements that generated code must not reuse as
# identifiers.  Fortran has no reserved words, but reusing these produces
# code that is at best confusing and at worst ambiguous to the compiler.
FORTRAN_RESERVED = frozenset("""
    abstract allocatable allocate assign associate asynchronous backspace bind block
    call case character class close common complex contains continue cycle data
    deallocate default deferred dimension do double elemental else elseif elsewhere
    end endif enddo entry enum enumerator equivalence exit extends external final
    flush forall format function generic go goto if implicit import in include inout
    inquire integer intent interface intrinsic kind len logical module namelist none
    non_overridable nopass nullify only open operator optional out parameter pass
    pause pointer precision print private procedure program protected public pure
    read real recursive result return rewind save select sequence stop subroutine
    target then to type use value volatile wait where while write
""".split())

_VALID_IDENT = re.compile(r"^[A-Za-z][A-Za-z0-9_]*$")


def is_valid_identifier(name: str) -> bool:
    return bool(_VALID_IDENT.match(name)) and len(name) <= MAX_FORTRAN_NAME


def truncate(name: str) -> str:
    """Fit ``name`` in 63 characters: 55-char stem, ``_``, 7 hex digits of its SHA-1."""
    if len(name) <= MAX_FORTRAN_NAME:
        return name
    digest = hashlib.sha1(name.encode("utf-8")).hexdigest()[:_HASH_DIGITS]
    return f"{name[:_TRUNCATED_STEM]}_{digest}"


def fortranize(name: str) -> str:
    """Make a C++ identifier usable in Fortran.

    Fortran names cannot start with an underscore, and keyword-like names get
    a trailing underscore.
    """
    out = name
    if out.startswith("_"):
        out = "f" + out
    if out.lower() in FORTRAN_RESERVED:
        out += "_"
    return out


def mangle_name(public_name: str, overload_index, module: str, scope: str = None):
    """Return ``(fortran_specific, c_symbol)`` for one wrapped procedure.

    Free functions use ``name`` or ``name__SWIG_<i>``.  Members of a class
    ``scope`` are prefixed ``swigf_<scope>_`` on the Fortran side so they do not
    crowd the module namespace.
    """
    base = public_name if scope is None else f"{scope}_{public_name}"
    if overload_index is not None:
        base += f"__SWIG_{overload_index}"
    specific = base if scope is None else f"swigf_{base}"
    return truncate(specific), f"_wrap_{module}_{base}"


class NameRegistry:
    """Case-insensitive allocator for names sharing one Fortran scope."""

    def __init__(self, parent: "NameRegistry" = None):
        self._taken = {}
        self._parent = parent

    def __contains__(self, name):
        key = name.lower()
        return key in self._taken or (self._parent is not None and name in self._parent)

    def owner(self, name):
        key = name.lower()
        if key in self._taken:
            return self._taken[key]
        return self._parent.owner(name) if self._parent is not None else None

    def reserve(self, name, owner=None):
        self._taken[name.lower()] = owner if owner is not None else name

    def claim(self, name: str, owner=None) -> str:
        """Reserve ``name`` (truncated) or, if taken, the first free ``name_<k>``."""
        candidate = truncate(name)
        k = 0
        while candidate in self:
            k += 1
            candidate = truncate(f"{name}_{k}")
        self.reserve(candidate, owner)
        return candidate

    def names(self):
        return list(self._taken)
