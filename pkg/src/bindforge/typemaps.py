"""Type conversion across the C/Fortran boundary.

Every C++ parameter or result type resolves to a :class:`TypemapBinding`: the
ISO-C-interoperable *bridge* representation that crosses the boundary, the
Fortran-facing declaration, and the code snippets run on each side.

Snippets are templates.  Fortran placeholders: ``$fin`` (public dummy),
``$farg`` (bridge temporary), ``$fresult``/``$fout`` (bridge/public result),
``$free`` (generated deallocation entry point).  C placeholders: ``$farg``
(shim parameter), ``$arg`` (C++ temporary), ``$call`` (the wrapped call),
``$fresult``, ``$func`` and ``$error_return``.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Optional

from .nodes import FunctionPointerType, TypeExpr

FLAG_OWN = 0x01
FLAG_RVALUE = 0x02
FLAG_CONST = 0x04

BRIDGE_KINDS = frozenset({
    "scalar", "string_span", "array_span", "opaque_handle", "funptr",
    "enum_int", "mpi_fint", "bindc_struct",
})

# ISO_C_BINDING kinds with their byte sizes on LP64 targets; the sizes decide
# whether two generic specifics are distinguishable.
ISO_C_KINDS = {
    "C_SIGNED_CHAR": 1, "C_SHORT": 2, "C_INT": 4, "C_LONG": 8, "C_LONG_LONG": 8,
    "C_SIZE_T": 8, "C_PTRDIFF_T": 8, "C_INTPTR_T": 8, "C_INT8_T": 1, "C_INT16_T": 2,
    "C_INT32_T": 4, "C_INT64_T": 8, "C_FLOAT": 4, "C_DOUBLE": 8, "C_CHAR": 1,
    "C_BOOL": 1, "C_PTR": 8, "C_FUNPTR": 8,
}

_INTEGER_KINDS = {
    "signed char": "C_SIGNED_CHAR", "unsigned char": "C_SIGNED_CHAR",
    "short": "C_SHORT", "unsigned short": "C_SHORT",
    "int": "C_INT", "unsigned int": "C_INT",
    "long": "C_LONG", "unsigned long": "C_LONG",
    "long long": "C_LONG_LONG", "unsigned long long": "C_LONG_LONG",
}
_INTEGER_NAMED = {
    "size_t": "C_SIZE_T", "ptrdiff_t": "C_PTRDIFF_T", "intptr_t": "C_INTPTR_T",
    "int8_t": "C_INT8_T", "int16_t": "C_INT16_T", "int32_t": "C_INT32_T", "int64_t": "C_INT64_T",
    "uint8_t": "C_INT8_T", "uint16_t": "C_INT16_T", "uint32_t": "C_INT32_T", "uint64_t": "C_INT64_T",
}
_REAL_KINDS = {"float": "C_FLOAT", "double": "C_DOUBLE"}

STRING_TYPES = frozenset({"std::string", "string"})
VECTOR_TYPES = frozenset({"std::vector", "vector"})
SHARED_PTR_TYPES = frozenset({"std::shared_ptr", "shared_ptr"})
MPI_COMM = "MPI_Comm"

ARRAY_PATTERNS = frozenset({
    "(SWIGTYPE *DATA, size_t SIZE)",
    "(const SWIGTYPE *DATA, size_t SIZE)",
})
INDEX_PATTERN = "int INDEX"
KNOWN_PATTERNS = ARRAY_PATTERNS | {INDEX_PATTERN}


class UnmappedType(Exception):
    """No conversion exists for a type; callers skip the declaration with a warning."""


@dataclass(frozen=True)
class Snippets:
    fortran_pre: str = ""
    fortran_post: str = ""
    c_pre: str = ""
    c_call_expr: str = "$farg"
    c_post: str = ""


@dataclass(frozen=True)
class TypemapBinding:
    cpp_type: TypeExpr
    bridge_repr: str
    c_kind: Optional[str]
    fortran_decl: str
    bridge_fortran_decl: str
    bridge_c_type: str
    snippets: Snippets = Snippets()
    fortran_attrs: tuple = ()
    fortran_locals: tuple = ()
    fortran_actual: str = "$farg"
    consumes_extra_params: int = 0
    direction: str = "in"
    needs: frozenset = frozenset()
    imports: tuple = ()
    tkr: tuple = ()
    signature: tuple = ()  # component bindings of a function-pointer type

    def dummy_declaration(self, name: str) -> str:
        attrs = "".join(", " + a for a in self.fortran_attrs)
        return f"{self.fortran_decl}{attrs} :: {name}"


@dataclass(frozen=True)
class ClassRef:
    cpp_name: str
    root_cpp_name: str
    fortran_name: str


@dataclass
class TypeContext:
    classes: dict = field(default_factory=dict)  # C++ name -> ClassRef
    enums: dict = field(default_factory=dict)  # C++ name -> qualified C++ name
    typedefs: dict = field(default_factory=dict)  # name -> TypeExpr | FunctionPointerType
    bindc_types: dict = field(default_factory=dict)  # C++ name -> Fortran type name


# -- model functions of the boundary conversions ------------------------------


def c_to_fortran_truth(value: int) -> bool:
    """Truth value a Fortran caller sees for C value ``value`` after normalization."""
    return value != 0


def fortran_to_c_truth(flag: bool) -> int:
    return 1 if flag else 0


def naive_fortran_truth(value: int) -> bool:
    """What reinterpreting a C int as a Fortran logical yields (gfortran tests bit 0)."""
    return bool(value & 1)


def index_to_c(index: int) -> int:
    return index - 1


def index_to_fortran(index: int) -> int:
    return index + 1


def marshal_string(text: str) -> tuple:
    """Byte layout of an inbound string: ``(buffer, size)`` with one trailing NUL."""
    data = text.encode("utf-8")
    if b"\0" in data:
        raise ValueError("strings with embedded NUL characters are not supported")
    return data + b"\0", len(data)


def unmarshal_string(buffer: bytes, size: int) -> str:
    return buffer[:size].decode("utf-8")


# -- helpers ----------------------------------------------------------------


def _fundamental_name(t: TypeExpr) -> Optional[str]:
    base = t.base[5:] if t.base.startswith("std::") else t.base
    if t.category == "fundamental":
        return t.base
    if base in _INTEGER_NAMED:
        return base
    return None


def integer_kind(t: TypeExpr) -> Optional[str]:
    name = _fundamental_name(t)
    if name is None:
        return None
    return _INTEGER_KINDS.get(name) or _INTEGER_NAMED.get(name)


def scalar_kind(t: TypeExpr):
    """``(fortran_type_keyword, iso_c_kind)`` for a fundamental type, else None."""
    name = _fundamental_name(t)
    if name is None:
        return None
    if name == "char":
        return "character", "C_CHAR"
    if name in _REAL_KINDS:
        return "real", _REAL_KINDS[name]
    kind = integer_kind(t)
    if kind:
        return "integer", kind
    return None


def _decl(keyword, kind):
    if keyword == "character":
        return f"character(kind={kind})"
    return f"{keyword}({kind})"


def _c_scalar_type(t: TypeExpr) -> str:
    return t.base


def _by_value(t: TypeExpr) -> bool:
    return t.indirection == "value" or (t.indirection == "reference" and t.const)


def _void_pointer_cast(expr, const):
    if const:
        return f"const_cast<void *>(static_cast<const void *>({expr}))"
    return f"static_cast<void *>({expr})"


def resolve_typedef(t: TypeExpr, ctx: TypeContext):
    """Follow plain typedef aliases; returns a TypeExpr or a FunctionPointerType."""
    seen = set()
    while t.category == "named" and not t.template_args and t.base in ctx.typedefs:
        if t.base in seen:
            raise UnmappedType(f"recursive typedef '{t.base}'")
        seen.add(t.base)
        target = ctx.typedefs[t.base]
        if isinstance(target, FunctionPointerType):
            return t
        t = target.replace(const=t.const or target.const,
                           pointers=t.pointers + target.pointers,
                           reference=t.reference or target.reference)
    return t


# -- the typemap rules -------------------------------------------------------


def map_fundamental(t: TypeExpr, direction="in") -> TypemapBinding:
    """Scalar ISO-C types, passed by value (or by reference when mutable)."""
    sk = scalar_kind(t)
    if sk is None or t.indirection not in ("value", "pointer", "reference"):
        raise UnmappedType(f"no Fortran equivalent for '{t.spelling()}'")
    keyword, kind = sk
    decl = _decl(keyword, kind)
    tkr = (keyword, ISO_C_KINDS[kind], 0)
    ctype = _c_scalar_type(t)

    if direction == "out":
        if _by_value(t):
            return TypemapBinding(
                t, "scalar", kind, decl, decl, ctype,
                Snippets(fortran_post="$fout = $fresult", c_post="$fresult = $call;"),
                direction="out", tkr=tkr)
        return TypemapBinding(
            t, "scalar", "C_PTR", "type(C_PTR)", "type(C_PTR)", "void *",
            Snippets(fortran_post="$fout = $fresult",
                     c_post="$fresult = " + _void_pointer_cast(
                         "$call" if t.pointers else "&($call)", t.const) + ";"),
            direction="out", tkr=("type", "C_PTR", 0))

    if _by_value(t):
        return TypemapBinding(
            t, "scalar", kind, decl, f"{decl}, intent(in), value", ctype,
            Snippets(fortran_pre="$farg = $fin"),
            fortran_attrs=("intent(in)",), fortran_locals=(f"{decl} :: $farg",), tkr=tkr)
    # mutable (or const) pointer/reference to a single scalar: pass by address
    intent = "intent(in)" if t.const else "intent(inout)"
    call = "$farg" if t.pointers else "*$farg"
    cptr = ("const " if t.const else "") + ctype + " *"
    return TypemapBinding(
        t, "scalar", kind, decl, f"{decl}, {intent}", cptr,
        Snippets(c_call_expr=call),
        fortran_attrs=("target", intent), fortran_actual="$fin", tkr=tkr)


def map_void_pointer(t: TypeExpr, direction="in") -> TypemapBinding:
    if direction == "out":
        return TypemapBinding(
            t, "scalar", "C_PTR", "type(C_PTR)", "type(C_PTR)", "void *",
            Snippets(fortran_post="$fout = $fresult",
                     c_post="$fresult = " + _void_pointer_cast("$call", t.const) + ";"),
            direction="out", tkr=("type", "C_PTR", 0))
    return TypemapBinding(
        t, "scalar", "C_PTR", "type(C_PTR)", "type(C_PTR), intent(in), value", "void *",
        Snippets(fortran_pre="$farg = $fin"),
        fortran_attrs=("intent(in)",), fortran_locals=("type(C_PTR) :: $farg",),
        tkr=("type", "C_PTR", 0))


def map_bool(t: TypeExpr, direction="in") -> TypemapBinding:
    """C++ bool crosses as a C int; any nonzero int reads as Fortran true."""
    if not _by_value(t):
        raise UnmappedType(f"no Fortran equivalent for '{t.spelling()}'")
    tkr = ("logical", 4, 0)
    if direction == "out":
        return TypemapBinding(
            t, "scalar", "C_INT", "logical", "integer(C_INT)", "int",
            Snippets(c_post="$fresult = ($call) ? 1 : 0;", fortran_post="$fout = ($fresult /= 0)"),
            direction="out", tkr=tkr)
    return TypemapBinding(
        t, "scalar", "C_INT", "logical", "integer(C_INT), intent(in), value", "int",
        Snippets(fortran_pre="$farg = merge(1_C_INT, 0_C_INT, $fin)", c_call_expr="($farg != 0)"),
        fortran_attrs=("intent(in)",), fortran_locals=("integer(C_INT) :: $farg",), tkr=tkr)


def is_string_type(t: TypeExpr) -> bool:
    if t.base in STRING_TYPES and not t.template_args:
        return t.pointers == 0
    return t.category == "fundamental" and t.base == "char" and t.pointers == 1 and not t.reference


def map_string(t: TypeExpr, direction="in") -> TypemapBinding:
    """Strings travel as (address, length) spans; results are copied and freed."""
    std = t.base in STRING_TYPES
    if not is_string_type(t):
        raise UnmappedType(f"'{t.spelling()}' is not a string type")
    tkr = ("character", 1, 0)
    wrapper = "type(SwigArrayWrapper)"
    if direction == "out":
        if std:
            c_post = ("{\n  const std::string &swig_str = $call;\n"
                      "  $fresult = swigbf_copy_string(swig_str.data(), swig_str.size());\n}")
        else:
            c_post = "$fresult = swigbf_copy_cstring($call);"
        return TypemapBinding(
            t, "string_span", "C_CHAR", "character(kind=C_CHAR, len=:)", wrapper, "SwigArrayWrapper",
            Snippets(c_post=c_post,
                     fortran_post="call SWIG_chararray_to_string($fresult, $fout)\ncall $free($fresult%data)"),
            fortran_attrs=("allocatable",), direction="out",
            needs=frozenset({"array_wrapper", "string_out", "free"}),
            imports=("SwigArrayWrapper",), tkr=tkr)
    if std:
        c_pre = "std::string $arg(static_cast<char *>($farg->data), $farg->size);"
        call = "$arg"
    else:
        c_pre = ""
        call = "static_cast<char *>($farg->data)"
    return TypemapBinding(
        t, "string_span", "C_CHAR", "character(len=*)", wrapper, "SwigArrayWrapper *",
        Snippets(fortran_pre="call SWIG_string_to_chararray($fin, $farg_chars, $farg)",
                 c_pre=c_pre, c_call_expr=call),
        fortran_attrs=("intent(in)",),
        fortran_locals=("character(kind=C_CHAR), dimension(:), allocatable, target :: $farg_chars",
                        f"{wrapper} :: $farg"),
        needs=frozenset({"array_wrapper", "string_in"}), imports=("SwigArrayWrapper",), tkr=tkr)


_ARRAY_PRE = """if (size($fin) > 0) then
  $farg%data = c_loc($fin(1))
else
  $farg%data = C_NULL_PTR
endif
$farg%size = size($fin, kind=C_SIZE_T)"""


def map_array_span(ptr: TypeExpr, size: TypeExpr) -> TypemapBinding:
    """Fuse a (pointer, count) parameter pair into one assumed-shape array."""
    sk = scalar_kind(ptr.replace(pointers=0, reference=False))
    if ptr.indirection != "pointer" or sk is None or sk[0] == "character" or integer_kind(size) is None \
            or size.indirection != "value":
        raise UnmappedType(
            f"array pattern needs (scalar *, integer size), got ({ptr.spelling()}, {size.spelling()})")
    keyword, kind = sk
    decl = _decl(keyword, kind)
    intent = "intent(IN)" if ptr.const else "intent(INOUT)"
    elem = ("const " if ptr.const else "") + ptr.base
    return TypemapBinding(
        ptr, "array_span", kind, decl, "type(SwigArrayWrapper)", "SwigArrayWrapper *",
        Snippets(fortran_pre=_ARRAY_PRE,
                 c_call_expr=f"static_cast<{elem} *>($farg->data), $farg->size"),
        fortran_attrs=("dimension(:)", intent, "target"),
        fortran_locals=("type(SwigArrayWrapper) :: $farg",),
        consumes_extra_params=1, needs=frozenset({"array_wrapper"}),
        imports=("SwigArrayWrapper",), tkr=(keyword, ISO_C_KINDS[kind], 1))


def map_vector(t: TypeExpr, direction="in") -> TypemapBinding:
    """``std::vector`` of scalars, copied through an array span."""
    if len(t.template_args) != 1:
        raise UnmappedType(f"unsupported vector type '{t.spelling()}'")
    elem = t.template_args[0]
    sk = scalar_kind(elem)
    if sk is None or sk[0] == "character" or elem.indirection != "value":
        raise UnmappedType(f"only vectors of numeric scalars are supported, not '{t.spelling()}'")
    keyword, kind = sk
    decl = _decl(keyword, kind)
    tkr = (keyword, ISO_C_KINDS[kind], 1)
    etype = elem.spelling()
    if direction == "out":
        if not _by_value(t):
            raise UnmappedType(f"returning '{t.spelling()}' by mutable reference is not supported")
        c_post = ("{\n  const std::vector<%s > &swig_vec = $call;\n"
                  "  $fresult = swigbf_copy_array(swig_vec.empty() ? 0 : &swig_vec[0], "
                  "swig_vec.size(), sizeof(%s));\n}") % (etype, etype)
        f_post = ("allocate($fout($fresult%size))\n"
                  "if ($fresult%size > 0) then\n"
                  "  call c_f_pointer($fresult%data, $fresult_view, [$fresult%size])\n"
                  "  $fout(:) = $fresult_view(:)\n"
                  "endif\n"
                  "call $free($fresult%data)")
        return TypemapBinding(
            t, "array_span", kind, decl, "type(SwigArrayWrapper)", "SwigArrayWrapper",
            Snippets(c_post=c_post, fortran_post=f_post),
            fortran_attrs=("dimension(:)", "allocatable"),
            fortran_locals=(f"{decl}, dimension(:), pointer :: $fresult_view",),
            direction="out", needs=frozenset({"array_wrapper", "array_out", "free"}),
            imports=("SwigArrayWrapper",), tkr=tkr)
    if not _by_value(t):
        raise UnmappedType(f"passing '{t.spelling()}' by mutable reference is not supported")
    c_pre = ("std::vector<%s > $arg(static_cast<const %s *>($farg->data), "
             "static_cast<const %s *>($farg->data) + $farg->size);") % (etype, etype, etype)
    return TypemapBinding(
        t, "array_span", kind, decl, "type(SwigArrayWrapper)", "SwigArrayWrapper *",
        Snippets(fortran_pre=_ARRAY_PRE, c_pre=c_pre, c_call_expr="$arg"),
        fortran_attrs=("dimension(:)", "intent(IN)", "target"),
        fortran_locals=("type(SwigArrayWrapper) :: $farg",),
        needs=frozenset({"array_wrapper"}), imports=("SwigArrayWrapper",), tkr=tkr)


def _handle_cast(cls: ClassRef, const: bool) -> str:
    q = "const " if const else ""
    if cls.root_cpp_name == cls.cpp_name:
        return f"static_cast<{q}{cls.cpp_name} *>($farg->cptr)"
    return f"static_cast<{q}{cls.cpp_name} *>(static_cast<{q}{cls.root_cpp_name} *>($farg->cptr))"


def handle_accepts(flags: int, t: TypeExpr) -> bool:
    """Whether a handle with ``flags`` may bind to a parameter of type ``t``.

    Mirrors C++ conversions: a const object binds to values, const references
    and pointers-to-const, never to mutable references or pointers.
    """
    if not flags & FLAG_CONST:
        return True
    return t.indirection == "value" or t.const


def map_class(t: TypeExpr, cls: ClassRef, direction="in", receiver=False, constructed=False):
    """Proxy handles for wrapped classes.

    Inbound snippets verify non-null (for values and references) and
    const-correctness.  By-value and constructor results are fresh heap
    objects flagged OWN|RVALUE; pointer/reference results carry no ownership.
    """
    fname = cls.fortran_name
    tkr = ("class", cls.root_cpp_name, 0)
    if t.indirection not in ("value", "pointer", "reference"):
        raise UnmappedType(f"no Fortran equivalent for '{t.spelling()}'")
    if direction == "out":
        root = cls.root_cpp_name
        if constructed:
            expr = f"static_cast<{root} *>($call)"
            flags = "SWIG_MEM_OWN | SWIG_MEM_RVALUE"
        elif t.indirection == "value":
            expr = f"static_cast<{root} *>(new {cls.cpp_name}($call))"
            flags = "SWIG_MEM_OWN | SWIG_MEM_RVALUE"
        else:
            q = "const " if t.const else ""
            ptr = "$call" if t.indirection == "pointer" else "&($call)"
            expr = f"static_cast<{q}{root} *>({ptr})"
            flags = "SWIG_MEM_CONST" if t.const else "0"
        c_post = f"$fresult.cptr = {_void_pointer_cast(expr, t.const and not constructed)};\n" \
                 f"$fresult.cmemflags = {flags};"
        return TypemapBinding(
            t, "opaque_handle", None, f"type({fname})", "type(SwigClassWrapper)", "SwigClassWrapper",
            Snippets(c_post=c_post, fortran_post="$fout%swigdata = $fresult"),
            direction="out", needs=frozenset({"class_wrapper"}), imports=("SwigClassWrapper",),
            tkr=("type", cls.cpp_name, 0))

    nullable = t.indirection == "pointer" and not receiver
    mutable = not t.const and t.indirection != "value"
    if receiver:
        mutable = not t.const
    const_view = not mutable
    what = t.spelling().replace('"', "'")
    check = (f'if (swigbf_check_handle($farg, {0 if nullable else 1}, {1 if mutable else 0}, '
             f'$func, "{what}")) $error_return')
    c_pre = check + f"\n{'const ' if const_view else ''}{cls.cpp_name} *$arg = {_handle_cast(cls, const_view)};"
    call = "$arg" if t.indirection == "pointer" or receiver else "*$arg"
    return TypemapBinding(
        t, "opaque_handle", None, f"class({fname})", "type(SwigClassWrapper)", "SwigClassWrapper *",
        Snippets(fortran_pre="$farg = $fin%swigdata", c_pre=c_pre, c_call_expr=call),
        fortran_attrs=("intent(in)",), fortran_locals=("type(SwigClassWrapper) :: $farg",),
        needs=frozenset({"class_wrapper"}), imports=("SwigClassWrapper",), tkr=tkr)


def map_funptr(t: TypeExpr, sig: FunctionPointerType, ctx: TypeContext, direction="in"):
    """C function pointers pass through untouched as ``type(C_FUNPTR)``.

    The pointee signature must itself be interoperable: Fortran procedures
    obtained with ``c_funloc`` are called directly by the library.
    """
    if t.indirection != "value":
        raise UnmappedType(f"pointers to function pointers are not supported: '{t.spelling()}'")
    parts = []
    for ptype in (sig.return_type,) + tuple(p.type for p in sig.params):
        if ptype.category == "fundamental" and ptype.base == "void" and ptype.pointers == 0:
            continue
        parts.append(_interoperable_component(ptype, ctx))
    name = t.base
    tkr = ("type", "C_FUNPTR", 0)
    if direction == "out":
        return TypemapBinding(
            t, "funptr", "C_FUNPTR", "type(C_FUNPTR)", "type(C_FUNPTR)", name,
            Snippets(c_post="$fresult = $call;", fortran_post="$fout = $fresult"),
            direction="out", tkr=tkr, signature=tuple(parts))
    return TypemapBinding(
        t, "funptr", "C_FUNPTR", "type(C_FUNPTR)", "type(C_FUNPTR), intent(in), value", name,
        Snippets(fortran_pre="$farg = $fin"),
        fortran_attrs=("intent(in)", "value"), fortran_locals=("type(C_FUNPTR) :: $farg",),
        tkr=tkr, signature=tuple(parts))


def _interoperable_component(t: TypeExpr, ctx: TypeContext) -> TypemapBinding:
    t = resolve_typedef(t, ctx)
    if t.category == "fundamental" and t.base == "bool" and t.indirection == "value":
        # called straight from C, so it needs the native C bool layout
        return TypemapBinding(t, "scalar", "C_BOOL", "logical(C_BOOL)",
                              "logical(C_BOOL), value", "bool", tkr=("logical", 1, 0))
    if t.indirection == "value" and scalar_kind(t):
        return map_fundamental(t)
    if t.indirection == "pointer" and (scalar_kind(t.replace(pointers=0)) or t.base == "void"):
        return map_void_pointer(t)
    if t.indirection == "value" and t.base in ctx.enums:
        return map_enum(t, ctx.enums[t.base])
    raise UnmappedType(f"function pointer component '{t.spelling()}' is not interoperable")


def map_enum(t: TypeExpr, cpp_name: str, direction="in") -> TypemapBinding:
    if not _by_value(t):
        raise UnmappedType(f"no Fortran equivalent for '{t.spelling()}'")
    tkr = ("integer", 4, 0)
    if direction == "out":
        return TypemapBinding(
            t, "enum_int", "C_INT", "integer(C_INT)", "integer(C_INT)", "int",
            Snippets(c_post="$fresult = static_cast<int>($call);", fortran_post="$fout = $fresult"),
            direction="out", tkr=tkr)
    return TypemapBinding(
        t, "enum_int", "C_INT", "integer(C_INT)", "integer(C_INT), intent(in), value", "int",
        Snippets(fortran_pre="$farg = $fin", c_call_expr=f"static_cast<{cpp_name}>($farg)"),
        fortran_attrs=("intent(in)",), fortran_locals=("integer(C_INT) :: $farg",), tkr=tkr)


def map_mpi_comm(t: TypeExpr, direction="in") -> TypemapBinding:
    """MPI communicators cross as Fortran integer handles (``MPI_Comm_f2c``/``c2f``)."""
    if t.base != MPI_COMM or not _by_value(t):
        raise UnmappedType(f"'{t.spelling()}' is not an MPI communicator")
    tkr = ("integer", 4, 0)
    if direction == "out":
        return TypemapBinding(
            t, "mpi_fint", "C_INT", "integer", "integer(C_INT)", "int",
            Snippets(c_post="$fresult = static_cast<int>(MPI_Comm_c2f($call));",
                     fortran_post="$fout = int($fresult)"),
            direction="out", needs=frozenset({"mpi"}), tkr=tkr)
    return TypemapBinding(
        t, "mpi_fint", "C_INT", "integer", "integer(C_INT), intent(in), value", "int",
        Snippets(fortran_pre="$farg = int($fin, C_INT)",
                 c_call_expr="MPI_Comm_f2c(static_cast<MPI_Fint>($farg))"),
        fortran_attrs=("intent(in)",), fortran_locals=("integer(C_INT) :: $farg",),
        needs=frozenset({"mpi"}), tkr=tkr)


def map_bindc_struct(t: TypeExpr, fname: str, direction="in") -> TypemapBinding:
    """Plain C structs mirrored by a ``bind(C)`` derived type, passed by address."""
    tkr = ("type", t.base, 0)
    if direction == "out":
        if not _by_value(t):
            return map_void_pointer(t.replace(reference=False, pointers=1), "out") \
                if t.indirection == "pointer" else _struct_ref_out(t)
        return TypemapBinding(
            t, "bindc_struct", t.base, f"type({fname})", f"type({fname})", t.base,
            Snippets(c_post="$fresult = $call;", fortran_post="$fout = $fresult"),
            direction="out", imports=(fname,), tkr=tkr)
    if t.indirection == "value" or t.const:
        call = "$farg" if t.indirection == "pointer" else "*$farg"
        return TypemapBinding(
            t, "bindc_struct", t.base, f"type({fname})", f"type({fname}), intent(in)",
            f"const {t.base} *", Snippets(c_call_expr=call),
            fortran_attrs=("intent(in)",), fortran_actual="$fin", imports=(fname,), tkr=tkr)
    call = "$farg" if t.indirection == "pointer" else "*$farg"
    return TypemapBinding(
        t, "bindc_struct", t.base, f"type({fname})", f"type({fname}), intent(inout)",
        f"{t.base} *", Snippets(c_call_expr=call),
        fortran_attrs=("intent(inout)", "target"), fortran_actual="$fin", imports=(fname,), tkr=tkr)


def _struct_ref_out(t):
    binding = map_void_pointer(t.replace(reference=False, pointers=1), "out")
    return replace(binding, cpp_type=t, snippets=Snippets(
        fortran_post="$fout = $fresult",
        c_post="$fresult = " + _void_pointer_cast("&($call)", t.const) + ";"))


def apply_index_offset(binding: TypemapBinding) -> TypemapBinding:
    """Shift an integer between Fortran's 1-based and C++'s 0-based indexing."""
    if binding.bridge_repr != "scalar" or not binding.fortran_decl.startswith("integer") \
            or binding.fortran_actual != "$farg":
        raise UnmappedType(f"index offset needs an integer value, got '{binding.cpp_type.spelling()}'")
    if binding.direction == "out":
        snippets = replace(binding.snippets, fortran_post="$fout = $fresult + 1")
    else:
        snippets = replace(binding.snippets, fortran_pre="$farg = $fin - 1")
    return replace(binding, snippets=snippets)


def resolve(t: TypeExpr, ctx: TypeContext, direction="in") -> TypemapBinding:
    """Pick the conversion rule for ``t``; raise :class:`UnmappedType` if none applies."""
    t = resolve_typedef(t, ctx)
    if t.indirection == "nested":
        raise UnmappedType(f"multiple levels of indirection are not supported: '{t.spelling()}'")
    if t.category == "named" and t.base in ctx.typedefs \
            and isinstance(ctx.typedefs[t.base], FunctionPointerType):
        return map_funptr(t, ctx.typedefs[t.base], ctx, direction)
    if t.category == "fundamental":
        if t.base == "bool":
            return map_bool(t, direction)
        if t.base == "void":
            if t.pointers == 1:
                return map_void_pointer(t, direction)
            raise UnmappedType("'void' is not a value type")
        if is_string_type(t):
            return map_string(t, direction)
        return map_fundamental(t, direction)
    if t.base in STRING_TYPES:
        if t.indirection == "pointer":
            raise UnmappedType(f"'{t.spelling()}' is not supported; pass strings by value or reference")
        return map_string(t, direction)
    if t.base in VECTOR_TYPES:
        return map_vector(t, direction)
    if t.base in SHARED_PTR_TYPES:
        raise UnmappedType(f"shared pointers are not supported: '{t.spelling()}'")
    if t.base == MPI_COMM:
        return map_mpi_comm(t, direction)
    if scalar_kind(t):
        return map_fundamental(t, direction)
    if t.base in ctx.enums:
        return map_enum(t, ctx.enums[t.base], direction)
    if t.base in ctx.bindc_types:
        return map_bindc_struct(t, ctx.bindc_types[t.base], direction)
    if t.name in ctx.classes:
        return map_class(t, ctx.classes[t.name], direction)
    raise UnmappedType(f"unknown type '{t.spelling()}'")


def pattern_key(params) -> str:
    """Canonical text of an ``%apply`` pattern, e.g. ``(SWIGTYPE *DATA, size_t SIZE)``."""
    if len(params) == 1:
        return params[0].spelling()
    return "(" + ", ".join(p.spelling() for p in params) + ")"
