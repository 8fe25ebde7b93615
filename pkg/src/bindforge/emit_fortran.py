"""Emit the Fortran 2003 module (``<module>.f90``)."""

from __future__ import annotations

import re

from .fortran_syntax import wrap_source
from .plan import CONSTRUCTOR, FREE, RELEASE, STATIC, GenericPlan, ModulePlan, ProcedurePlan, ProxyTypePlan

_PLACEHOLDER = re.compile(r"\$([a-z_]+)")
_IND = "  "

_CLASS_WRAPPER = """\
type, bind(C) :: SwigClassWrapper
  type(C_PTR), public :: cptr = C_NULL_PTR
  integer(C_INT), public :: cmemflags = 0
end type
integer(C_INT), parameter :: SWIG_MEM_OWN = 1_C_INT
integer(C_INT), parameter :: SWIG_MEM_RVALUE = 2_C_INT
integer(C_INT), parameter :: SWIG_MEM_CONST = 4_C_INT"""

_ARRAY_WRAPPER = """\
type, bind(C) :: SwigArrayWrapper
  type(C_PTR), public :: data = C_NULL_PTR
  integer(C_SIZE_T), public :: size = 0
end type"""

_STRING_IN = """\
subroutine SWIG_string_to_chararray(string, chars, wrap)
  character(kind=C_CHAR, len=*), intent(in) :: string
  character(kind=C_CHAR), dimension(:), target, allocatable, intent(out) :: chars
  type(SwigArrayWrapper), intent(out) :: wrap
  integer :: i
  allocate(chars(len(string) + 1))
  do i = 1, len(string)
    chars(i) = string(i:i)
  end do
  chars(len(string) + 1) = C_NULL_CHAR
  wrap%data = c_loc(chars(1))
  wrap%size = len(string, kind=C_SIZE_T)
end subroutine"""

_STRING_OUT = """\
subroutine SWIG_chararray_to_string(wrap, string)
  type(SwigArrayWrapper), intent(in) :: wrap
  character(kind=C_CHAR, len=:), allocatable, intent(out) :: string
  character(kind=C_CHAR), dimension(:), pointer :: chars
  integer(C_SIZE_T) :: i
  if (.not. c_associated(wrap%data)) then
    allocate(character(kind=C_CHAR, len=0) :: string)
    if (wrap%size > 0) then
$NULL_SPAN
    end if
    return
  end if
  call c_f_pointer(wrap%data, chars, [wrap%size])
  allocate(character(kind=C_CHAR, len=wrap%size) :: string)
  do i = 1, wrap%size
    string(i:i) = chars(i)
  end do
end subroutine"""


def _sub(template: str, values: dict) -> str:
    def repl(m):
        key = m.group(1)
        if key not in values:
            raise KeyError(f"unbound snippet placeholder ${key}")
        return values[key]
    return _PLACEHOLDER.sub(repl, template)


def _indent(text: str, level: int) -> list:
    return [(_IND * level + line) if line else "" for line in text.split("\n")]


def _values(i: int, name: str = "") -> dict:
    return {"fin": name, "farg": f"farg{i}", "farg_chars": f"farg{i}_chars", "free": "swigc_free",
            "fresult": "fresult", "fresult_view": "fresult_view", "fout": "swig_result"}


def _dummy_names(p: ProcedurePlan):
    names = [p.receiver.name] if p.receiver is not None else []
    return names + [q.name for q in p.params]


def emit_interface_entry(p: ProcedurePlan) -> list:
    """The private bind(C) declaration of one shim."""
    fargs = ["farg1"] if p.receiver is not None else []
    fargs += [f"farg{q.index}" for q in p.params]
    head = "function" if p.result else "subroutine"
    suffix = " result(fresult)" if p.result else ""
    lines = [f"{head} {p.interface_name}({', '.join(fargs)}) bind(C, name=\"{p.c_symbol}\"){suffix}"]
    lines.append(_IND + "use, intrinsic :: ISO_C_BINDING")
    bindings = ([p.receiver.binding] if p.receiver is not None else []) + [q.binding for q in p.params]
    if p.result:
        bindings.append(p.result)
    imports = sorted({imp for b in bindings for imp in b.imports})
    if imports:
        lines.append(_IND + "import :: " + ", ".join(imports))
    if p.receiver is not None:
        lines.append(_IND + f"{p.receiver.binding.bridge_fortran_decl} :: farg1")
    for q in p.params:
        lines.append(_IND + f"{q.binding.bridge_fortran_decl} :: farg{q.index}")
    if p.result:
        lines.append(_IND + f"{p.result.bridge_fortran_decl} :: fresult")
    lines.append(f"end {head}")
    return lines


def emit_procedure(p: ProcedurePlan) -> list:
    """The public-facing procedure: convert arguments, call the shim, convert back."""
    if p.role == RELEASE:
        return _emit_release(p)
    head = "function" if p.result else "subroutine"
    names = _dummy_names(p)
    suffix = " result(swig_result)" if p.result else ""
    lines = [f"{head} {p.specific}({', '.join(names)}){suffix}"]
    body_decl = []
    if p.result:
        attrs = "".join(", " + a for a in p.result.fortran_attrs)
        body_decl.append(f"{p.result.fortran_decl}{attrs} :: swig_result")
    if p.receiver is not None:
        body_decl.append(p.receiver.binding.dummy_declaration(p.receiver.name))
    for q in p.params:
        body_decl.append(q.binding.dummy_declaration(q.name))
    if p.result:
        body_decl.append(f"{p.result.bridge_fortran_decl} :: fresult")
        for local in p.result.fortran_locals:
            body_decl.append(_sub(local, _values(0)))
    pre, post, actuals = [], [], []
    entries = ([(1, p.receiver)] if p.receiver is not None else []) + [(q.index, q) for q in p.params]
    for index, q in entries:
        values = _values(index, q.name)
        for local in q.binding.fortran_locals:
            body_decl.append(_sub(local, values))
        if q.binding.snippets.fortran_pre:
            pre.extend(_sub(q.binding.snippets.fortran_pre, values).split("\n"))
        if q.binding.snippets.fortran_post:
            post.extend(_sub(q.binding.snippets.fortran_post, values).split("\n"))
        actuals.append(_sub(q.binding.fortran_actual, values))
    call = f"{p.interface_name}({', '.join(actuals)})"
    lines.extend(_IND + line for line in body_decl)
    lines.extend(_IND + line for line in pre)
    if p.result:
        lines.append(_IND + f"fresult = {call}")
        lines.extend(_IND + line for line in _sub(p.result.snippets.fortran_post, _values(0)).split("\n"))
    else:
        lines.append(_IND + f"call {call}")
    lines.extend(_IND + line for line in post)
    lines.append(f"end {head}")
    return lines


def _emit_release(p: ProcedurePlan) -> list:
    lines = [f"subroutine {p.specific}(self)",
             _IND + f"class({p.owner}), intent(inout) :: self",
             _IND + "type(SwigClassWrapper) :: farg1",
             _IND + "farg1 = self%swigdata"]
    if p.c_symbol:
        lines += [_IND + "if (btest(farg1%cmemflags, 0)) then",
                  _IND * 2 + "! owned: destroy the C++ object",
                  _IND * 2 + f"call {p.interface_name}(farg1)",
                  _IND + "end if"]
    lines += [_IND + "farg1%cptr = C_NULL_PTR",
              _IND + "farg1%cmemflags = 0",
              _IND + "self%swigdata = farg1",
              "end subroutine"]
    return lines


def emit_assignment(t: ProxyTypePlan) -> list:
    """Assignment moves temporaries (with ownership) and aliases everything else."""
    return [
        f"subroutine {t.assign_specific}(self, other)",
        _IND + f"class({t.type_name}), intent(inout) :: self",
        _IND + f"type({t.type_name}), intent(in) :: other",
        _IND + "if (c_associated(self%swigdata%cptr, other%swigdata%cptr)) return",
        _IND + "call self%release()",
        _IND + "self%swigdata%cptr = other%swigdata%cptr",
        _IND + "if (btest(other%swigdata%cmemflags, 1)) then",
        _IND * 2 + "! a temporary: take it over, ownership included",
        _IND * 2 + "self%swigdata%cmemflags = iand(other%swigdata%cmemflags, not(SWIG_MEM_RVALUE))",
        _IND + "else",
        _IND * 2 + "self%swigdata%cmemflags = iand(other%swigdata%cmemflags, SWIG_MEM_CONST)",
        _IND + "end if",
        "end subroutine",
    ]


def emit_proxy_type(t: ProxyTypePlan) -> list:
    head = f"type, extends({t.parent}), public :: {t.type_name}" if t.parent \
        else f"type, public :: {t.type_name}"
    lines = [head]
    if not t.parent:
        lines.append(_IND + "type(SwigClassWrapper), private :: swigdata")
    lines.append("contains")
    grouped = {s for g in t.generics for s in g.specifics}
    for m in t.methods:
        if m.specific in grouped:
            lines.append(_IND + f"procedure, private :: {m.specific}")
        else:
            lines.append(_IND + f"procedure :: {m.public_name} => {m.specific}")
    for g in t.generics:
        lines.append(_IND + f"generic :: {g.name} => {', '.join(g.specifics)}")
    lines.append(_IND + f"procedure :: release => {t.release.specific}")
    lines.append(_IND + f"procedure, private :: {t.assign_specific}")
    lines.append(_IND + f"generic :: assignment(=) => {t.assign_specific}")
    lines.append(f"end type {t.type_name}")
    if t.constructors:
        lines += [f"interface {t.type_name}",
                  _IND + "module procedure " + ", ".join(c.specific for c in t.constructors),
                  "end interface"]
    return lines


def emit_generic_interface(g: GenericPlan) -> list:
    return [f"public :: {g.name}",
            f"interface {g.name}",
            _IND + "module procedure " + ", ".join(g.specifics),
            "end interface"]


def emit_direct_bindings(plan: ModulePlan) -> list:
    """bind(C) types, enums, constants, and direct bind(C) function interfaces."""
    lines = []
    for t in plan.bindc_types:
        lines.append(f"type, bind(C), public :: {t.name}")
        lines.extend(_IND + f"{decl}, public :: {name}" for name, decl in t.fields)
        lines.append("end type")
    for e in plan.enums:
        lines.append("enum, bind(c)")
        lines.extend(_IND + f"enumerator :: {name} = {value}" for name, value in e.enumerators)
        lines.append("end enum")
        if e.name and e.enumerators:
            lines.append(f"integer, parameter, public :: {e.name} = kind({e.enumerators[0][0]})")
        elif e.name:
            lines.append(f"integer, parameter, public :: {e.name} = C_INT")
        if e.enumerators:
            lines.append("public :: " + ", ".join(name for name, _ in e.enumerators))
    for c in plan.constants:
        if c.strategy == "parameter":
            lines.append(f"{c.fortran_type}, parameter, public :: {c.name} = {c.literal}")
        else:
            lines.append(f"{c.fortran_type}, protected, public, bind(C, name=\"{c.c_symbol}\") :: {c.name}")
    if plan.direct_bindings:
        lines.append("public :: " + ", ".join(d.name for d in plan.direct_bindings))
        lines.append("interface")
        for d in plan.direct_bindings:
            names = ", ".join(name for name, _ in d.params)
            suffix = " result(fresult)" if d.result_decl else ""
            lines.append(_IND + f"{d.kind} {d.name}({names}) bind(C, name=\"{d.c_name}\"){suffix}")
            lines.append(_IND * 2 + "use, intrinsic :: ISO_C_BINDING")
            if d.imports:
                lines.append(_IND * 2 + "import :: " + ", ".join(d.imports))
            lines.extend(_IND * 2 + f"{decl} :: {name}" for name, decl in d.params)
            if d.result_decl:
                lines.append(_IND * 2 + f"{d.result_decl} :: fresult")
            lines.append(_IND + f"end {d.kind}")
        lines.append("end interface")
    return lines


def emit_fortran_unit(plan: ModulePlan) -> str:
    """The complete module source, wrapped to 132 columns."""
    needs = plan.needs
    spec = [f"! Fortran bindings for module '{plan.module_name}'; generated by bindforge.",
            f"module {plan.module_name}", _IND + "use, intrinsic :: ISO_C_BINDING",
            _IND + "implicit none", _IND + "private"]
    block = []
    if "class_wrapper" in needs:
        block += _CLASS_WRAPPER.split("\n")
    if "array_wrapper" in needs:
        block += _ARRAY_WRAPPER.split("\n")
    if plan.has_exceptions:
        block.append(f"integer(C_INT), public, bind(C, name=\"_wrap_{plan.module_name}_ierr\") :: ierr")
        block.append("public :: get_serr")
    block += emit_direct_bindings(plan)
    for t in plan.proxy_types:
        block += emit_proxy_type(t)
    for g in plan.generics:
        block += emit_generic_interface(g)
    generic_specifics = {s for g in plan.generics for s in g.specifics}
    singles = [p.specific for p in plan.procedures
               if p.role in (FREE, STATIC) and p.specific not in generic_specifics]
    if singles:
        block.append("public :: " + ", ".join(singles))
    entries = []
    for p in plan.procedures:
        entries += emit_interface_entry(p)
    if "free" in needs:
        entries += ["subroutine swigc_free(cptr) bind(C, name=\"%s\")" % plan.free_symbol,
                    _IND + "use, intrinsic :: ISO_C_BINDING",
                    _IND + "type(C_PTR), value :: cptr",
                    "end subroutine"]
    if plan.has_exceptions:
        entries += [f"function swigc_get_serr() bind(C, name=\"_wrap_{plan.module_name}_get_serr\") "
                    "result(fresult)",
                    _IND + "use, intrinsic :: ISO_C_BINDING",
                    _IND + "import :: SwigArrayWrapper",
                    _IND + "type(SwigArrayWrapper) :: fresult",
                    "end function"]
    if entries:
        block += ["interface"] + [_IND + line for line in entries] + ["end interface"]
    spec += [_IND + line if line else "" for line in block]

    procs = []
    if "string_in" in needs:
        procs += _STRING_IN.split("\n") + [""]
    if "string_out" in needs or plan.has_exceptions:
        if plan.has_exceptions:
            on_null = "      if (ierr == 0) ierr = 1"
        else:
            on_null = '      stop "bindforge: a returned string has no data but a nonzero length"'
        procs += _STRING_OUT.replace("$NULL_SPAN", on_null).split("\n") + [""]
    if plan.has_exceptions:
        procs += ["function get_serr() result(swig_result)",
                  _IND + "character(kind=C_CHAR, len=:), allocatable :: swig_result",
                  _IND + "type(SwigArrayWrapper) :: fresult",
                  _IND + "fresult = swigc_get_serr()",
                  _IND + "call SWIG_chararray_to_string(fresult, swig_result)",
                  _IND + "call swigc_free(fresult%data)",
                  "end function", ""]
    releases = {t.release.specific for t in plan.proxy_types}
    emitted = set()
    for p in plan.procedures:
        procs += emit_procedure(p) + [""]
        emitted.add(p.specific)
    for t in plan.proxy_types:
        if t.release.specific not in emitted:
            procs += _emit_release(t.release) + [""]
        procs += emit_assignment(t) + [""]
    del releases
    lines = spec
    if procs:
        lines += ["", "contains", ""] + [_IND + line if line else "" for line in procs]
    lines.append(f"end module {plan.module_name}")
    return wrap_source(lines)


_BIND_NAME = re.compile(r"bind\s*\(\s*c\s*,\s*name\s*=\s*\"([^\"]+)\"\s*\)", re.I)


def bound_symbols(source: str) -> set:
    """Every ``bind(C, name=...)`` label in an emitted module."""
    return set(_BIND_NAME.findall(source.replace("&\n", "")))


def exported_names(source: str) -> set:
    """Module-scope names made public by ``public`` statements or attributes, lower-cased."""
    joined = re.sub(r"&\s*\n\s*&?", "", source)
    names = set()
    depth = 0  # inside derived-type or interface blocks, components and dummies are not exports
    for line in joined.split("\n"):
        low = line.split("!", 1)[0].strip().lower()
        if low == "contains" and depth == 0:
            break
        if re.match(r"^type\s*,.*\bpublic\b.*::", low):
            names.add(low.split("::", 1)[1].strip())
        if re.match(r"^(type\b(?!\s*\()|interface\b|enum\b)", low):
            depth += 1
            continue
        if re.match(r"^end\s*(type|interface|enum)\b", low):
            depth -= 1
            continue
        if depth:
            continue
        if low.startswith("public ::"):
            names.update(n.strip() for n in low.split("::", 1)[1].split(","))
        elif "::" in low and re.search(r",\s*public\b", low.split("::", 1)[0]):
            names.update(n.split("=")[0].strip() for n in low.split("::", 1)[1].split(","))
    return names
