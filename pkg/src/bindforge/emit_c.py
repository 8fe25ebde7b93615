"""Emit the C-linkage shim translation unit (``<module>_wrap.cxx``)."""

from __future__ import annotations

import re

from .plan import CONSTRUCTOR, GETTER, RELEASE, SETTER, ModulePlan, ProcedurePlan

_PLACEHOLDER = re.compile(r"\$([a-z_]+)")

_RUNTIME_HEAD = """\
#ifndef SWIGEXPORT
#define SWIGEXPORT extern "C"
#endif

enum {
  SWIG_MEM_OWN = 0x01,
  SWIG_MEM_RVALUE = 0x02,
  SWIG_MEM_CONST = 0x04
};
"""

_CLASS_WRAPPER = """\
struct SwigClassWrapper {
  void *cptr;
  int cmemflags;
};
"""

_ARRAY_WRAPPER = """\
struct SwigArrayWrapper {
  void *data;
  size_t size;
};

static inline SwigArrayWrapper swigbf_copy_array(const void *data, size_t count, size_t elem) {
  SwigArrayWrapper result;
  result.data = 0;
  result.size = 0;
  if (count > 0) {
    result.data = std::malloc(count * elem);
    if (!result.data) {
      throw std::bad_alloc();
    }
    std::memcpy(result.data, data, count * elem);
    result.size = count;
  }
  return result;
}
"""

_STRING_OUT = """\
static inline SwigArrayWrapper swigbf_copy_string(const char *data, size_t size) {
  return swigbf_copy_array(data, size, 1);
}

static inline SwigArrayWrapper swigbf_copy_cstring(const char *str) {
  return swigbf_copy_array(str, str ? std::strlen(str) : 0, 1);
}
"""

_ERROR_STATE = """\
SWIGEXPORT int {ierr};
int {ierr} = 0;
static std::string swigbf_error_message;

static inline void swigbf_store_error(int code, const char *message) {{
  if ({ierr} == 0) {{
    {ierr} = code;
    swigbf_error_message = message ? message : "";
  }}
}}

static inline void swigbf_fail(const char *func, const char *what, const char *type) {{
  swigbf_store_error(1, (std::string(func) + ": " + what + " '" + type + "'").c_str());
}}
"""

_ABORT_STATE = """\
static inline void swigbf_fail(const char *func, const char *what, const char *type) {
  std::fprintf(stderr, "%s: %s '%s'\\n", func, what, type);
  std::abort();
}
"""

_CHECK_HANDLE = """\
static inline int swigbf_check_handle(const SwigClassWrapper *handle, int nonnull, int needs_mutable,
                               const char *func, const char *type) {
  if (nonnull && !handle->cptr) {
    swigbf_fail(func, "received a null handle for", type);
    return 1;
  }
  if (needs_mutable && (handle->cmemflags & SWIG_MEM_CONST)) {
    swigbf_fail(func, "cannot modify a const handle of", type);
    return 1;
  }
  return 0;
}
"""


def _substitute(template: str, values: dict) -> str:
    def repl(m):
        key = m.group(1)
        if key not in values:
            raise KeyError(f"unbound snippet placeholder ${key}")
        return values[key]
    return _PLACEHOLDER.sub(repl, template)


def _declare(ctype: str, name: str) -> str:
    return f"{ctype}{name}" if ctype.endswith("*") else f"{ctype} {name}"


def _c_string(text: str) -> str:
    return '"' + text.replace("\\", "\\\\").replace('"', '\\"') + '"'


def shim_signature(p: ProcedurePlan) -> str:
    params = []
    if p.receiver is not None:
        params.append(_declare(p.receiver.binding.bridge_c_type, "farg1"))
    params.extend(_declare(q.binding.bridge_c_type, f"farg{q.index}") for q in p.params)
    ret = p.result.bridge_c_type if p.result else "void"
    return f"SWIGEXPORT {_declare(ret, p.c_symbol)}({', '.join(params)})"


def emit_shim_function(p: ProcedurePlan, has_exceptions: bool = False) -> str:
    """The extern-C function that converts arguments, calls, and converts the result."""
    lines = [shim_signature(p) + " {"]
    if p.role == RELEASE:
        recv = p.receiver.binding
        cast = recv.snippets.c_pre.split("\n")[-1]
        lines.append("  " + _substitute(cast, {"arg": "arg1", "farg": "farg1"}))
        lines.append("  delete arg1;")
        lines.append("}")
        return "\n".join(lines) + "\n"
    body = []
    error_return = "return fresult;" if p.result else "return;"
    func = _c_string(p.cpp_name)
    args = []
    self_expr = None
    if p.receiver is not None:
        snip = p.receiver.binding.snippets
        values = {"farg": "farg1", "arg": "arg1", "func": func, "error_return": error_return}
        body.extend(_substitute(snip.c_pre, values).split("\n"))
        self_expr = _substitute(snip.c_call_expr, values)
    for q in p.params:
        snip = q.binding.snippets
        values = {"farg": f"farg{q.index}", "arg": f"arg{q.index}", "func": func, "error_return": error_return}
        if snip.c_pre:
            body.extend(_substitute(snip.c_pre, values).split("\n"))
        args.append(_substitute(snip.c_call_expr, values))
    call = p.call.replace("$args", ", ".join(args))
    if self_expr is not None:
        call = call.replace("$self", f"({self_expr})")
    if p.result is not None:
        body.extend(_substitute(p.result.snippets.c_post, {"call": call, "fresult": "fresult"}).split("\n"))
    else:
        body.append(call + ";")
    for q in p.params:
        if q.binding.snippets.c_post:
            body.extend(_substitute(q.binding.snippets.c_post, {"arg": f"arg{q.index}",
                                                                "farg": f"farg{q.index}"}).split("\n"))
    if p.result is not None:
        lines.append(f"  {_declare(p.result.bridge_c_type, 'fresult')} = {{}};")
    if p.exception_wrapped and has_exceptions:
        lines.append("  try {")
        lines.extend("    " + line for line in body)
        lines.append("  } catch (const std::exception &e) {")
        lines.append("    swigbf_store_error(1, e.what());")
        lines.append(f"    {error_return}")
        lines.append("  } catch (...) {")
        lines.append('    swigbf_store_error(-1, "an unknown C++ exception was thrown");')
        lines.append(f"    {error_return}")
        lines.append("  }")
    else:
        lines.extend("  " + line for line in body)
    if p.result is not None:
        lines.append("  return fresult;")
    lines.append("}")
    return "\n".join(lines) + "\n"


def emit_exception_support(plan: ModulePlan) -> str:
    """The sticky error flag, the message accessor and the shared failure hook."""
    ierr = f"_wrap_{plan.module_name}_ierr"
    text = _ERROR_STATE.format(ierr=ierr)
    text += f"""
SWIGEXPORT SwigArrayWrapper _wrap_{plan.module_name}_get_serr() {{
  return swigbf_copy_string(swigbf_error_message.data(), swigbf_error_message.size());
}}
"""
    return text


def _includes(plan: ModulePlan):
    heads = ["<cstddef>", "<cstdio>", "<cstdlib>", "<cstring>"]
    if "array_wrapper" in plan.needs or plan.has_exceptions:
        heads.append("<new>")
    if plan.has_exceptions or "string_in" in plan.needs or "string_out" in plan.needs:
        heads.append("<string>")
    if plan.has_exceptions:
        heads.append("<exception>")
    if any(p.result and p.result.bridge_repr == "array_span" for p in plan.procedures) or \
            any(q.binding.cpp_type.base in ("std::vector", "vector") for p in plan.procedures for q in p.params):
        heads.append("<vector>")
    out = [f"#include {h}" for h in heads]
    if "mpi" in plan.needs:
        out.append("#include <mpi.h>")
    return out


def emit_c_unit(plan: ModulePlan) -> str:
    """Full shim translation unit: includes, verbatim code, runtime support, shims."""
    needs = set(plan.needs)
    if plan.has_exceptions:
        needs |= {"array_wrapper", "string_out", "free"}
    parts = [f"/* C-linkage shims for Fortran module '{plan.module_name}'; generated by bindforge. */\n",
             "\n".join(_includes(plan)) + "\n"]
    for block in plan.verbatim:
        text = block.text
        parts.append(text if text.endswith("\n") else text + "\n")
    parts.append(_RUNTIME_HEAD)
    if "class_wrapper" in needs:
        parts.append(_CLASS_WRAPPER)
    if "array_wrapper" in needs:
        parts.append(_ARRAY_WRAPPER)
    if "string_out" in needs:
        parts.append(_STRING_OUT)
    if plan.has_exceptions:
        parts.append(emit_exception_support(plan))
    if "class_wrapper" in needs and any(p.receiver is not None or _takes_handle(p) for p in plan.procedures):
        if not plan.has_exceptions:
            parts.append(_ABORT_STATE)
        parts.append(_CHECK_HANDLE)
    if "free" in needs:
        parts.append(f"SWIGEXPORT void {plan.free_symbol}(void *ptr) {{\n  std::free(ptr);\n}}\n")
    for c in plan.constants:
        if c.strategy == "global":
            parts.append(f"SWIGEXPORT const {c.c_type} {c.c_symbol};\n"
                         f"const {c.c_type} {c.c_symbol} = ({c.cpp_name});\n")
    for p in plan.procedures:
        parts.append(emit_shim_function(p, plan.has_exceptions))
    return "\n".join(part.rstrip("\n") + "\n" for part in parts)


def _takes_handle(p: ProcedurePlan) -> bool:
    return any(q.binding.bridge_repr == "opaque_handle" for q in p.params)


_EXTERN_SYMBOL = re.compile(r"^SWIGEXPORT\s+(?:const\s+)?[\w\s\*]*?\b(_wrap_\w+)\s*(?:\(|;)", re.M)


def extern_symbols(source: str) -> set:
    """Names of every extern-C definition in an emitted shim unit."""
    return set(_EXTERN_SYMBOL.findall(source))
