"""Turn a parsed interface into a :class:`ModulePlan`.

The pass expands templates and default arguments, resolves every type through
the typemap table, groups overloads into generic interfaces, assigns Fortran
and C names, and decides how each declaration is bound.
"""

from __future__ import annotations

import ast
import re
from dataclasses import dataclass, field, replace
from typing import Optional

from . import nodes as n
from . import typemaps as tm
from .diagnostics import BindforgeError, DiagnosticBag, sort_key
from .names import NameRegistry, fortranize, is_valid_identifier, mangle_name
from .plan import (CONSTRUCTOR, FREE, GETTER, METHOD, RELEASE, SETTER, STATIC, BindCTypePlan,
                   ConstantPlan, DirectBindingPlan, EnumPlan, GenericPlan, ModulePlan, ParamPlan,
                   ProcedurePlan, ProxyTypePlan, SkippedItem)

# Strategies reported by classify_binding.
WRAPPED = "wrapped"
DIRECT_BINDC = "direct_bindc"
DIRECT_BINDC_TYPE = "direct_bindc_type"
FORTRANCONST = "fortranconst"
ENUM = "enum"
SKIPPED = "skipped"

# Module-level names owned by the emitted runtime support code.
RUNTIME_NAMES = (
    "SwigClassWrapper", "SwigArrayWrapper", "SWIG_string_to_chararray", "SWIG_chararray_to_string",
    "SWIG_MEM_OWN", "SWIG_MEM_RVALUE", "SWIG_MEM_CONST", "ierr", "get_serr", "swigc_free",
    "swigc_get_serr",
)

# Names a generated procedure body relies on; dummy arguments must not shadow them.
_BODY_NAMES = frozenset(name.lower() for name in RUNTIME_NAMES) | {
    "swig_result", "fresult", "fresult_view", "self", "size", "c_loc", "c_f_pointer", "c_null_ptr",
    "c_associated", "merge", "int", "allocate", "btest", "iand", "ior", "not", "kind", "len",
    "c_size_t", "c_int", "c_double", "c_float", "c_char", "c_ptr", "c_funptr", "c_bool",
    "c_long", "c_long_long", "c_short", "c_signed_char", "c_ptrdiff_t", "c_intptr_t",
    "c_int8_t", "c_int16_t", "c_int32_t", "c_int64_t", "iso_c_binding",
}
_LOCAL_PATTERN = re.compile(r"^farg\d+(_chars)?$", re.IGNORECASE)
_INT_LITERAL = re.compile(r"^[+-]?(0[xX][0-9a-fA-F]+|\d+)[uUlL]*$")
_REAL_LITERAL = re.compile(r"^[+-]?(\d+\.\d*|\.\d+|\d+)([eE][+-]?\d+)?([fFlL]?)$")
_STRING_LITERAL = re.compile(r'^"([^"\\]|\\.)*"$')
_INT32 = (-2**31, 2**31 - 1)


# -- pure helpers -----------------------------------------------------------


def normalize_type(t: n.TypeExpr) -> n.TypeExpr:
    """Canonical form for comparing spelled types (``std::size_t`` == ``size_t``)."""
    base = t.base
    if base.startswith("std::") and base[5:] in ("size_t", "ptrdiff_t"):
        base = base[5:]
    return t.replace(base=base, template_args=tuple(normalize_type(a) for a in t.template_args))


def substitute(t: n.TypeExpr, mapping: dict) -> n.TypeExpr:
    """Replace template parameters in ``t`` by the bound argument types."""
    args = tuple(substitute(a, mapping) for a in t.template_args)
    if t.category == "named" and not t.template_args and t.base in mapping:
        target = mapping[t.base]
        return target.replace(const=t.const or target.const,
                              pointers=t.pointers + target.pointers,
                              reference=t.reference or target.reference,
                              rvalue_ref=t.rvalue_ref or target.rvalue_ref)
    return t.replace(template_args=args)


def _substitute_function(fn: n.FunctionDecl, mapping) -> n.FunctionDecl:
    ret = substitute(fn.return_type, mapping) if fn.return_type else None
    params = tuple(replace(p, type=substitute(p.type, mapping)) for p in fn.params)
    return replace(fn, return_type=ret, params=params)


def expand_default_arguments(fn: n.FunctionDecl, diag: DiagnosticBag = None) -> list:
    """One declaration per admissible arity: ``k`` trailing defaults give ``k + 1``."""
    defaults = [p.default is not None for p in fn.params]
    first = defaults.index(True) if True in defaults else len(defaults)
    if not all(defaults[first:]):
        message = f"default arguments of '{fn.signature()}' must be trailing"
        if diag is None:
            raise BindforgeError([])
        diag.error("E-default-arg-order", message, fn.span)
        return []
    out = []
    for arity in range(first, len(fn.params) + 1):
        params = tuple(replace(p, default=None) for p in fn.params[:arity])
        out.append(replace(fn, params=params))
    return out


def evaluate_int(expr: str, env: dict) -> int:
    """Evaluate a C integer constant expression; ``ValueError`` if it is not one."""
    text = re.sub(r"\b(0[xX][0-9a-fA-F]+|\d+)[uUlL]+\b", r"\1", expr.strip())
    if "'" in text:
        text = re.sub(r"'(\\?.)'", lambda m: str(ord(m.group(1)[-1])), text)
    text = text.replace("&&", " and ").replace("||", " or ")
    try:
        tree = ast.parse(text, mode="eval")
    except SyntaxError:
        raise ValueError(f"not a constant expression: {expr!r}") from None

    def ev(node):
        if isinstance(node, ast.Expression):
            return ev(node.body)
        if isinstance(node, ast.Constant) and isinstance(node.value, int) and not isinstance(node.value, bool):
            return node.value
        if isinstance(node, ast.Name) and node.id in env:
            return env[node.id]
        if isinstance(node, ast.UnaryOp):
            v = ev(node.operand)
            ops = {ast.USub: lambda: -v, ast.UAdd: lambda: v, ast.Invert: lambda: ~v}
            if type(node.op) in ops:
                return ops[type(node.op)]()
        if isinstance(node, ast.BinOp):
            a, b = ev(node.left), ev(node.right)
            if isinstance(node.op, (ast.Div, ast.FloorDiv, ast.Mod)) and b == 0:
                raise ValueError("division by zero in constant expression")
            ops = {
                ast.Add: lambda: a + b, ast.Sub: lambda: a - b, ast.Mult: lambda: a * b,
                ast.Div: lambda: _cdiv(a, b),
                ast.FloorDiv: lambda: _cdiv(a, b),
                ast.Mod: lambda: a - b * _cdiv(a, b),
                ast.LShift: lambda: a << b, ast.RShift: lambda: a >> b,
                ast.BitOr: lambda: a | b, ast.BitAnd: lambda: a & b, ast.BitXor: lambda: a ^ b,
            }
            if type(node.op) in ops:
                return ops[type(node.op)]()
        raise ValueError(f"not a constant expression: {expr!r}")

    return ev(tree)


def _cdiv(a, b):
    q = abs(a) // abs(b)
    return q if (a < 0) == (b < 0) else -q


def enum_values(enum: n.EnumDecl, env: dict = None) -> list:
    """Enumerator values under C rules: explicit, else previous + 1, starting at 0."""
    env = dict(env or {})
    out = []
    nxt = 0
    for e in enum.enumerators:
        value = nxt if e.value is None else evaluate_int(e.value, env)
        env[e.name] = value
        out.append((e.name, value))
        nxt = value + 1
    return out


def distinguishable(a: list, b: list) -> bool:
    """Whether two specifics may share a generic name under Fortran's rules.

    ``a`` and ``b`` are lists of ``(dummy_name, tkr_key)``; the passed-object
    dummy is excluded.  Implements the counting rule and the position/name
    rule for procedures without optional arguments.
    """
    for x, y in ((a, b), (b, a)):
        keys = [k for _, k in x]
        for key in set(keys):
            if keys.count(key) > sum(1 for _, k in y if k == key):
                return True
    for x, y in ((a, b), (b, a)):
        ymap = {name: key for name, key in y}
        positions = [i for i, (_, key) in enumerate(x) if i >= len(y) or y[i][1] != key]
        by_name = [i for i, (name, key) in enumerate(x) if name not in ymap or ymap[name] != key]
        if positions and by_name and min(positions) <= max(by_name):
            return True
    return False


# -- internal records ---------------------------------------------------------


@dataclass
class _ClassInfo:
    decl: n.ClassDecl
    cpp_name: str
    fortran_name: str
    parent: Optional["_ClassInfo"] = None
    template_mapping: dict = field(default_factory=dict)
    exception: bool = False
    order: int = 0
    plan: Optional[ProxyTypePlan] = None
    registry: Optional[NameRegistry] = None
    bindings: dict = field(default_factory=dict)  # lower binding name -> list of ProcedurePlan

    @property
    def root(self):
        node = self
        while node.parent is not None:
            node = node.parent
        return node

    @property
    def depth(self):
        return 0 if self.parent is None else self.parent.depth + 1

    @property
    def ref(self):
        return tm.ClassRef(self.cpp_name, self.root.cpp_name, self.fortran_name)


@dataclass
class _Candidate:
    decl: n.FunctionDecl
    role: str
    public_name: str
    cpp_name: str
    call: str
    order: tuple
    exception: bool
    cls: Optional[_ClassInfo] = None
    template_args: str = ""
    params: list = None  # of ParamPlan
    result: Optional[tm.TypemapBinding] = None
    receiver: Optional[ParamPlan] = None
    signature: str = ""

    @property
    def kind(self):
        return "subroutine" if self.result is None else "function"

    @property
    def scope(self):
        if self.role in (FREE, STATIC, CONSTRUCTOR):
            return None
        return self.cls.fortran_name

    @property
    def group_key(self):
        return (self.scope, self.public_name.lower())

    def keys(self):
        return [(p.name.lower(), p.binding.tkr) for p in self.params]


@dataclass
class _Apply:
    kind: str  # array | index
    targets: tuple
    span: object
    used: set = field(default_factory=set)


class Analyzer:
    def __init__(self, unit: n.InterfaceUnit, module_name: Optional[str] = None):
        self.unit = unit
        self.module = module_name or unit.module_name
        self.diag = DiagnosticBag()
        self.plan = ModulePlan(self.module)
        self.ctx = tm.TypeContext()
        self.names = NameRegistry()
        self.c_names = set()
        self.classes = {}  # every spelling of a class -> _ClassInfo
        self.class_list = []
        self.templates = {}
        self.used_templates = set()
        self.aliases = {}
        self.applies = []
        self.bindc = {}
        self.bindc_type = {}
        self.fortranconst = {}
        self.exception_on = set()
        self.exception_off = set()
        self.macros = {}

    # -- driver ---------------------------------------------------------------

    def run(self) -> ModulePlan:
        self.diag.extend(self.unit.diagnostics)
        if not is_valid_identifier(self.module):
            self.diag.error("E-bad-module-name", f"module name '{self.module}' is not a valid Fortran identifier")
            raise BindforgeError(self.diag.items)
        self.names.reserve(self.module)
        for name in RUNTIME_NAMES:
            self.names.reserve(name)
        self.collect_directives()
        self.collect_types()
        candidates = self.collect_candidates()
        self.resolve_candidates(candidates)
        self.build_procedures(candidates)
        self.finish_types()
        if self.plan.has_exceptions:
            self.plan.needs.update({"array_wrapper", "string_out", "free"})
        self.report_unused()
        self.plan.diagnostics = sorted(self.diag.items, key=sort_key)
        self.plan.public_names = self.public_names()
        if self.diag.has_errors:
            raise BindforgeError(self.diag.items)
        return self.plan

    # -- directives ------------------------------------------------------------

    def collect_directives(self):
        for item in self.unit.declarations():
            if isinstance(item, n.BindC):
                self.bindc.update({s: item for s in item.symbols})
            elif isinstance(item, n.BindCType):
                self.bindc_type.update({s: item for s in item.symbols})
            elif isinstance(item, n.FortranConst):
                self.fortranconst.update({s: item for s in item.symbols})
            elif isinstance(item, n.ExceptionPolicy):
                if item.enabled:
                    self.plan.has_exceptions = True
                if item.names:
                    (self.exception_on if item.enabled else self.exception_off).update(item.names)
            elif isinstance(item, n.ApplyTypemap):
                self.collect_apply(item)
            elif isinstance(item, n.VerbatimBlock):
                self.plan.verbatim.append(item)
            elif isinstance(item, n.TemplateDecl):
                self.templates[item.decl.qualified_name] = item
                self.templates.setdefault(item.decl.name, item)

    def collect_apply(self, item: n.ApplyTypemap):
        pattern = item.pattern
        if len(pattern) == 2 and pattern[0].type.base == "SWIGTYPE" and pattern[0].type.pointers == 1 \
                and tm.integer_kind(pattern[1].type):
            kind = "array"
        elif len(pattern) == 1 and tm.integer_kind(pattern[0].type) and pattern[0].name == "INDEX":
            kind = "index"
        else:
            self.diag.error("E-apply-unknown-pattern",
                            f"unknown typemap pattern '{tm.pattern_key(pattern)}'", item.span)
            return
        for target in item.targets:
            if kind == "array":
                ok = (len(target) == 2 and target[0].type.indirection == "pointer"
                      and tm.integer_kind(target[1].type) and target[1].type.indirection == "value"
                      and tm.scalar_kind(target[0].type.replace(pointers=0)) is not None)
                if ok and pattern[0].type.const and not target[0].type.const:
                    ok = False
                if not ok:
                    self.diag.error("E-apply-mismatch",
                                    f"'{tm.pattern_key(target)}' does not fit pattern "
                                    f"'{tm.pattern_key(pattern)}'", item.span)
            elif len(target) != 1:
                self.diag.error("E-apply-mismatch",
                                f"'{tm.pattern_key(target)}' does not fit pattern 'int INDEX'", item.span)
            elif not tm.integer_kind(target[0].type) or target[0].type.indirection != "value":
                self.diag.error("E-index-non-integer",
                                f"index offset applied to non-integer '{target[0].spelling()}'", item.span)
        self.applies.append(_Apply(kind, item.targets, item.span))

    def exception_for(self, names, default: bool) -> bool:
        if any(name in self.exception_off for name in names):
            return False
        return default or any(name in self.exception_on for name in names)

    # -- types -----------------------------------------------------------------

    def register_class(self, info: _ClassInfo, spellings):
        for s in spellings:
            self.classes[s] = info

    def collect_types(self):
        exc = False
        for index, item in enumerate(self.unit.declarations()):
            if isinstance(item, n.ExceptionPolicy) and not item.names:
                exc = item.enabled
            elif isinstance(item, n.TypedefDecl):
                target = item.funptr if item.funptr else item.type
                for key in self._spellings(item.name, getattr(item, "scope", ())):
                    self.ctx.typedefs[key] = target
                if item.funptr:
                    self.plan.funptr_types.append(item.name)
            elif isinstance(item, n.EnumDecl):
                self.add_enum(item)
            elif isinstance(item, n.ConstantMacro):
                self.add_constant(item)
            elif isinstance(item, n.ClassDecl):
                if item.name in self.bindc_type or item.qualified_name in self.bindc_type:
                    self.add_bindc_type(item)
                else:
                    self.add_class(item, item.qualified_name, item.name, {}, exc, index)
            elif isinstance(item, n.TemplateInstantiation):
                self.add_template_class(item, exc, index)
            elif isinstance(item, n.UnsupportedItem):
                self.diag.warning("W-unsupported", f"skipping '{item.name}': {item.reason}", item.span)
                self.plan.skipped.append(SkippedItem(item.name, item.reason))

    @staticmethod
    def _spellings(name, scope):
        out = [name]
        if scope:
            out.append("::".join(tuple(scope) + (name,)))
        return out

    def add_class(self, decl: n.ClassDecl, cpp_name, fortran_base, mapping, exc, index):
        public_bases = [(acc, b) for acc, b in decl.bases if acc == "public"]
        if len(decl.bases) > 1:
            self.diag.warning("W-multiple-inheritance",
                              f"skipping class '{cpp_name}': multiple inheritance is not supported",
                              decl.span)
            self.plan.skipped.append(SkippedItem(cpp_name, "multiple inheritance"))
            return
        existing = self.classes.get(cpp_name)
        if existing is not None:
            if existing.decl.forward and not decl.forward:
                existing.decl = decl
                existing.order = index
            return
        parent = None
        if public_bases:
            base = substitute(public_bases[0][1], mapping)
            parent = self.classes.get(base.name)
            if parent is None:
                self.diag.warning("W-unsupported",
                                  f"base '{base.name}' of '{cpp_name}' is not wrapped; "
                                  f"'{cpp_name}' is treated as a root class", decl.span)
        fname = self.names.claim(fortranize(fortran_base), owner=cpp_name)
        info = _ClassInfo(decl, cpp_name, fname, parent, dict(mapping), exc, index)
        info.registry = NameRegistry(parent.registry if parent else None)
        if parent is None:
            for reserved in ("release", "swigdata"):
                info.registry.reserve(reserved)
        spellings = self._spellings(decl.name, decl.scope) if not mapping else [cpp_name]
        self.register_class(info, spellings)
        self.class_list.append(info)

    def add_template_class(self, inst: n.TemplateInstantiation, exc, index):
        template = self.templates.get(inst.target)
        if template is None or not isinstance(template.decl, n.ClassDecl):
            return
        self.used_templates.add(id(template))
        mapping = self._template_mapping(template, inst)
        if mapping is None or not self._record_alias(inst):
            return
        cpp_name = n.TypeExpr(template.decl.qualified_name, template_args=inst.args).name
        # inside its own body the template's name means this instantiation
        mapping = dict(mapping)
        mapping[template.decl.name] = n.TypeExpr(template.decl.qualified_name, template_args=inst.args)
        self.add_class(template.decl, cpp_name, inst.alias, mapping, exc, index)
        info = self.classes.get(cpp_name)
        if info is not None:
            self.classes[n.TypeExpr(template.decl.name, template_args=inst.args).name] = info

    def _template_mapping(self, template: n.TemplateDecl, inst: n.TemplateInstantiation):
        if len(template.params) != len(inst.args):
            self.diag.error("E-template-arity",
                            f"'{inst.target}' takes {len(template.params)} template argument(s), "
                            f"'{inst.alias}' gives {len(inst.args)}", inst.span)
            return None
        return {p.name: a for p, a in zip(template.params, inst.args)}

    def _record_alias(self, inst):
        if inst.alias in self.aliases:
            self.diag.error("E-duplicate-alias",
                            f"instantiation name '{inst.alias}' is already used", inst.span)
            return False
        self.aliases[inst.alias] = inst
        return True

    def add_enum(self, enum: n.EnumDecl):
        env = {}
        for e in self.plan.enums:
            env.update({name: v for name, v in e.enumerators})
        try:
            values = enum_values(enum, env)
        except ValueError as exc:
            self.diag.warning("W-unsupported", f"skipping enum '{enum.name or '<anonymous>'}': {exc}",
                              enum.span)
            self.plan.skipped.append(SkippedItem(enum.name or "<anonymous>", str(exc)))
            return
        prefix = f"{enum.name}_" if enum.scoped else ""
        enumerators = [(self.names.claim(fortranize(prefix + name)), v) for name, v in values]
        kind_name = self.names.claim(fortranize(enum.name)) if enum.name else None
        cpp = "::".join(enum.scope + (enum.name,)) if enum.name else None
        if enum.name:
            for key in self._spellings(enum.name, enum.scope):
                self.ctx.enums[key] = cpp
        self.plan.enums.append(EnumPlan(kind_name, cpp, enumerators))

    def add_constant(self, macro: n.ConstantMacro):
        value = macro.value.strip()
        while value.startswith("(") and value.endswith(")"):
            value = value[1:-1].strip()
        direct = macro.name in self.fortranconst
        env = {name: v for name, v in self.macros.items() if isinstance(v, int)}
        for e in self.plan.enums:
            env.update({name: v for name, v in e.enumerators})
        name = None
        if _STRING_LITERAL.match(value):
            text = value[1:-1]
            if "\\" in text:
                self._skip_constant(macro, "string escapes are not supported")
                return
            name = self.names.claim(fortranize(macro.name))
            literal = '"' + text.replace('"', '""') + '"'
            self.plan.constants.append(ConstantPlan(name, macro.name, macro.value, "character(len=*)",
                                                    "parameter", literal=literal))
            return
        real = _REAL_LITERAL.match(value) if not _INT_LITERAL.match(value) else None
        if real and (("." in value) or "e" in value.lower()):
            suffix = real.group(3).lower()
            kind, ctype = ("C_FLOAT", "float") if suffix == "f" else ("C_DOUBLE", "double")
            mantissa = value[:-1] if suffix else value
            self.macros[macro.name] = float(mantissa)
            self._add_numeric(macro, direct, f"real({kind})", ctype,
                              f"{_fortran_real(mantissa)}_{kind}")
            return
        try:
            number = evaluate_int(value, env)
        except ValueError:
            if direct:
                self._skip_constant(macro, "value is not a literal constant")
            else:
                self._skip_constant(macro, "cannot infer the type of the macro value")
            return
        self.macros[macro.name] = number
        if _INT32[0] <= number <= _INT32[1]:
            self._add_numeric(macro, direct, "integer(C_INT)", "int", f"{number}_C_INT")
        else:
            self._add_numeric(macro, direct, "integer(C_LONG_LONG)", "long long", f"{number}_C_LONG_LONG")

    def _add_numeric(self, macro, direct, ftype, ctype, literal):
        name = self.names.claim(fortranize(macro.name))
        if direct:
            self.plan.constants.append(ConstantPlan(name, macro.name, macro.value, ftype, "parameter",
                                                    literal=literal))
        else:
            symbol = self.claim_c_symbol(f"_wrap_{self.module}_{macro.name}")
            self.plan.constants.append(ConstantPlan(name, macro.name, macro.value, ftype, "global",
                                                    c_symbol=symbol, c_type=ctype))

    def _skip_constant(self, macro, reason):
        self.diag.warning("W-unsupported", f"skipping macro '{macro.name}': {reason}", macro.span)
        self.plan.skipped.append(SkippedItem(macro.name, reason))

    def add_bindc_type(self, decl: n.ClassDecl):
        problems = []
        if decl.bases:
            problems.append("it has base classes")
        fields = []
        registry = NameRegistry()
        for member in decl.members:
            if isinstance(member, n.FunctionDecl):
                if member.kind in ("constructor", "destructor") or member.virtual:
                    problems.append(f"member '{member.name}' makes it non-trivial")
                continue
            if not isinstance(member, n.FieldDecl):
                continue
            if member.static:
                continue
            decl_text = self._bindc_field_type(member)
            if decl_text is None:
                self.diag.error("E-bindc-type-nonpod",
                                f"%fortranbindc_type '{decl.name}': field '{member.name}' of type "
                                f"'{member.type.spelling()}' is not interoperable", member.span or decl.span)
                return
            fields.append((registry.claim(fortranize(member.name)), decl_text))
        if problems:
            self.diag.error("E-bindc-type-nonpod",
                            f"%fortranbindc_type '{decl.name}' is not a plain C struct: {problems[0]}",
                            decl.span)
            return
        fname = self.names.claim(fortranize(decl.name))
        for key in self._spellings(decl.name, decl.scope):
            self.ctx.bindc_types[key] = fname
        self.plan.bindc_types.append(BindCTypePlan(fname, decl.qualified_name, fields))

    def _bindc_field_type(self, member: n.FieldDecl):
        t = tm.resolve_typedef(member.type, self.ctx)
        dims = ""
        if member.array_dims:
            try:
                sizes = [evaluate_int(d, {}) for d in member.array_dims]
            except ValueError:
                return None
            # C row-major extents map to reversed Fortran column-major extents
            dims = ", dimension(" + ", ".join(str(s) for s in reversed(sizes)) + ")"
        if t.indirection == "value":
            if t.category == "fundamental" and t.base == "bool":
                return "logical(C_BOOL)" + dims
            sk = tm.scalar_kind(t)
            if sk:
                return tm._decl(*sk) + dims
            if t.base in self.ctx.enums:
                return "integer(C_INT)" + dims
            if t.base in self.ctx.bindc_types:
                return f"type({self.ctx.bindc_types[t.base]})" + dims
            if isinstance(self.ctx.typedefs.get(t.base), n.FunctionPointerType):
                return "type(C_FUNPTR)" + dims
            return None
        if t.indirection == "pointer" and not member.array_dims:
            return "type(C_PTR)"
        return None

    # -- candidates ------------------------------------------------------------

    def collect_candidates(self):
        out = []
        exc = False
        for index, item in enumerate(self.unit.declarations()):
            if isinstance(item, n.ExceptionPolicy) and not item.names:
                exc = item.enabled
            elif isinstance(item, n.FunctionDecl):
                if item.name in self.bindc or item.qualified_name in self.bindc:
                    self.add_direct_binding(item)
                    continue
                out.extend(self.free_candidates(item, item.name, "", exc, (index,)))
            elif isinstance(item, n.TemplateInstantiation):
                out.extend(self.instantiate_function(item, exc, index))
            elif isinstance(item, n.ClassDecl):
                info = self.classes.get(item.qualified_name)
                if info is not None and info.decl is item and not info.template_mapping:
                    out.extend(self.class_candidates(info, index))
        for info in self.class_list:
            if info.template_mapping:
                out.extend(self.class_candidates(info, info.order))
        for name in self.bindc:
            if not any(d.c_name == name for d in self.plan.direct_bindings):
                self.diag.warning("W-unsupported", f"%fortranbindc names no declared function '{name}'",
                                  self.bindc[name].span)
        out.sort(key=lambda c: c.order)
        return out

    def instantiate_function(self, inst: n.TemplateInstantiation, exc, index):
        template = self.templates.get(inst.target)
        if template is None:
            self.diag.error("E-unknown-template", f"'{inst.target}' is not a declared template", inst.span)
            return []
        if isinstance(template.decl, n.ClassDecl):
            return []
        self.used_templates.add(id(template))
        mapping = self._template_mapping(template, inst)
        if mapping is None or not self._record_alias(inst):
            return []
        fn = _substitute_function(template.decl, mapping)
        targs = n.TypeExpr("x", template_args=inst.args).name[1:]
        return self.free_candidates(fn, template.decl.name, targs, exc, (index,))

    def free_candidates(self, fn: n.FunctionDecl, name, targs, exc, order):
        qualified = "::".join(fn.scope + (name,))
        exception = self.exception_for((name, qualified), exc)
        call = f"{qualified}{targs}($args)"
        out = []
        for k, decl in enumerate(expand_default_arguments(fn, self.diag)):
            out.append(_Candidate(decl, FREE, fortranize(name), qualified, call, order + (k,),
                                  exception, template_args=targs))
        return out

    def class_candidates(self, info: _ClassInfo, index):
        decl = info.decl
        if decl.forward:
            return []
        out = []
        abstract = any(isinstance(m, n.FunctionDecl) and m.pure for m in decl.members)
        seq = 0

        def order():
            nonlocal seq
            seq += 1
            return (index, seq)

        for member in decl.members:
            if getattr(member, "access", "public") != "public":
                continue
            if isinstance(member, n.FunctionDecl):
                fn = _substitute_function(member, info.template_mapping) if info.template_mapping else member
                names = (fn.name, f"{decl.name}::{fn.name}", f"{info.cpp_name}::{fn.name}")
                exception = self.exception_for(names, info.exception)
                if fn.kind == "destructor":
                    continue
                if fn.kind == "constructor":
                    if abstract:
                        continue
                    for k, d in enumerate(expand_default_arguments(fn, self.diag)):
                        out.append(_Candidate(d, CONSTRUCTOR, info.fortran_name, f"{info.cpp_name}::{fn.name}",
                                              f"new {info.cpp_name}($args)", order() + (k,), exception, info))
                elif fn.static:
                    public = fortranize(f"{info.fortran_name}_{fn.name}")
                    for k, d in enumerate(expand_default_arguments(fn, self.diag)):
                        out.append(_Candidate(d, STATIC, public, f"{info.cpp_name}::{fn.name}",
                                              f"{info.cpp_name}::{fn.name}($args)", order() + (k,),
                                              exception, info))
                else:
                    for k, d in enumerate(expand_default_arguments(fn, self.diag)):
                        out.append(_Candidate(d, METHOD, fortranize(fn.name), f"{info.cpp_name}::{fn.name}",
                                              f"$self->{fn.name}($args)", order() + (k,), exception, info))
            elif isinstance(member, n.FieldDecl):
                out.extend(self.field_candidates(info, member, order))
            elif isinstance(member, n.UnsupportedItem):
                what = f"{info.cpp_name}::{member.name}"
                self.diag.warning("W-unsupported", f"skipping '{what}': {member.reason}", member.span)
                self.plan.skipped.append(SkippedItem(what, member.reason))
        return out

    def field_candidates(self, info, member: n.FieldDecl, order):
        ftype = substitute(member.type, info.template_mapping) if info.template_mapping else member.type
        what = f"{info.cpp_name}::{member.name}"
        if member.static or member.array_dims or ftype.reference:
            reason = "static data members" if member.static else "array or reference data members"
            self.diag.warning("W-unsupported", f"skipping '{what}': {reason} are not wrapped", member.span)
            self.plan.skipped.append(SkippedItem(what, f"{reason} are not wrapped"))
            return []
        resolved = tm.resolve_typedef(ftype, self.ctx)
        is_class = resolved.indirection == "value" and resolved.name in self.classes
        get_type = ftype.replace(reference=True) if is_class else ftype
        exception = self.exception_for((member.name, what), info.exception)
        getter = n.FunctionDecl(f"get_{member.name}", get_type, (), "method", const=not is_class,
                                scope=info.decl.scope + (info.decl.name,), span=member.span)
        out = [_Candidate(getter, GETTER, fortranize(f"get_{member.name}"), what,
                          f"$self->{member.name}", order(), exception, info)]
        if ftype.const or (resolved.category == "fundamental" and resolved.base == "char"
                           and resolved.pointers == 1):
            return out
        set_type = ftype.replace(const=True, reference=True) if is_class else ftype
        setter = n.FunctionDecl(f"set_{member.name}", n.TypeExpr("void", "fundamental"),
                                (n.Param(member.name, set_type),), "method",
                                scope=info.decl.scope + (info.decl.name,), span=member.span)
        out.append(_Candidate(setter, SETTER, fortranize(f"set_{member.name}"), what,
                              f"$self->{member.name} = $args", order(), exception, info))
        return out

    # -- direct bind(C) --------------------------------------------------------

    def add_direct_binding(self, fn: n.FunctionDecl):
        params = []
        imports = set()
        try:
            if fn.scope or fn.kind != "function":
                raise tm.UnmappedType("only free C functions can be bound directly")
            if any(p.default is not None for p in fn.params):
                raise tm.UnmappedType("default arguments need a wrapper")
            registry = NameRegistry()
            registry.reserve("fresult")
            for i, p in enumerate(fn.params, 1):
                decl, imp = self._direct_type(p.type, param=True)
                imports.update(imp)
                params.append((registry.claim(fortranize(p.name or f"arg{i}")), decl))
            result = None
            if not _is_void(fn.return_type):
                result, imp = self._direct_type(fn.return_type, param=False)
                imports.update(imp)
        except tm.UnmappedType as exc:
            self.diag.warning("W-unsupported", f"skipping '{fn.signature()}' for %fortranbindc: {exc}", fn.span)
            self.plan.skipped.append(SkippedItem(fn.name, str(exc)))
            return
        name = self.names.claim(fortranize(fn.name))
        kind = "subroutine" if result is None else "function"
        self.plan.direct_bindings.append(DirectBindingPlan(name, fn.name, kind, params, result,
                                                           tuple(sorted(imports)), fn.signature()))

    def _direct_type(self, t: n.TypeExpr, param: bool):
        t = tm.resolve_typedef(t, self.ctx)
        value = ", intent(in), value" if param else ""
        if isinstance(self.ctx.typedefs.get(t.base), n.FunctionPointerType) and t.indirection == "value":
            return "type(C_FUNPTR)" + value, ()
        if t.indirection == "value":
            if t.category == "fundamental" and t.base == "bool":
                return "logical(C_BOOL)" + value, ()
            sk = tm.scalar_kind(t)
            if sk:
                return tm._decl(*sk) + value, ()
            if t.base in self.ctx.enums:
                return "integer(C_INT)" + value, ()
            if t.base in self.ctx.bindc_types:
                fname = self.ctx.bindc_types[t.base]
                return f"type({fname})" + value, (fname,)
        if t.indirection == "pointer":
            if not param:
                return "type(C_PTR)", ()
            pointee = t.replace(pointers=0, const=False)
            intent = "intent(in)" if t.const else "intent(inout)"
            sk = tm.scalar_kind(pointee)
            if sk:
                return f"{tm._decl(*sk)}, dimension(*), {intent}", ()
            if pointee.base in self.ctx.bindc_types:
                fname = self.ctx.bindc_types[pointee.base]
                return f"type({fname}), {intent}", (fname,)
            if pointee.category == "fundamental" and pointee.base == "void":
                return "type(C_PTR), value", ()
        raise tm.UnmappedType(f"'{t.spelling()}' is not interoperable")

    # -- type resolution -------------------------------------------------------

    def match_array(self, params, i) -> bool:
        if i + 1 >= len(params):
            return False
        pair = (params[i], params[i + 1])
        for ap in self.applies:
            if ap.kind != "array":
                continue
            for t_index, target in enumerate(ap.targets):
                if len(target) == 2 and all(_param_matches(p, q) for p, q in zip(pair, target)):
                    ap.used.add(t_index)
                    return True
        return False

    def match_index(self, name, t) -> bool:
        for ap in self.applies:
            if ap.kind != "index":
                continue
            for t_index, target in enumerate(ap.targets):
                if len(target) == 1 and _param_matches(n.Param(name, t), target[0]):
                    ap.used.add(t_index)
                    return True
        return False

    def resolve_candidates(self, candidates):
        for c in candidates:
            try:
                self.resolve_candidate(c)
            except tm.UnmappedType as exc:
                c.params = None
                self.diag.warning("W-unmapped-type", f"skipping '{c.signature or c.decl.signature()}': {exc}",
                                  c.decl.span)
                self.plan.skipped.append(SkippedItem(c.cpp_name, str(exc)))

    def resolve_candidate(self, c: _Candidate):
        decl = c.decl
        c.signature = _signature(c)
        index = 1
        if c.role in (METHOD, GETTER, SETTER):
            self_type = n.TypeExpr(c.cls.cpp_name, const=decl.const)
            binding = tm.map_class(self_type, c.cls.ref, receiver=True)
            c.receiver = ParamPlan("self", "self", binding, 1)
            index = 2
        params = []
        i = 0
        while i < len(decl.params):
            p = decl.params[i]
            if self.match_array(decl.params, i):
                binding = tm.map_array_span(tm.resolve_typedef(p.type, self.ctx),
                                            tm.resolve_typedef(decl.params[i + 1].type, self.ctx))
            else:
                binding = tm.resolve(p.type, self.ctx, "in")
                if self.match_index(p.name, p.type):
                    binding = tm.apply_index_offset(binding)
            params.append(ParamPlan(p.name or f"arg{i + 1}", p.name or f"arg{i + 1}", binding, index))
            index += 1
            i += 1 + binding.consumes_extra_params
        c.params = params
        if c.role == CONSTRUCTOR:
            c.result = tm.map_class(n.TypeExpr(c.cls.cpp_name), c.cls.ref, "out", constructed=True)
        elif not _is_void(decl.return_type):
            c.result = tm.resolve(decl.return_type, self.ctx, "out")
            if c.role in (FREE, STATIC) and self.match_index(decl.name, decl.return_type):
                c.result = tm.apply_index_offset(c.result)
        self.name_dummies(c)

    def name_dummies(self, c: _Candidate):
        type_names = {info.fortran_name.lower() for info in self.class_list}
        type_names |= {b.name.lower() for b in self.plan.bindc_types}
        registry = NameRegistry()
        for name in _BODY_NAMES | type_names:
            registry.reserve(name)
        registry.reserve(c.public_name)
        for p in c.params:
            base = fortranize(p.cpp_name)
            if _LOCAL_PATTERN.match(base) or base.lower().startswith(("swigc_", "swigf_")):
                base = base + "_"
            p.name = registry.claim(base)

    # -- procedures ------------------------------------------------------------

    def claim_c_symbol(self, symbol):
        candidate = symbol
        k = 0
        while candidate in self.c_names:
            k += 1
            candidate = f"{symbol}_{k}"
        self.c_names.add(candidate)
        return candidate

    def build_procedures(self, candidates):
        groups = {}
        for c in candidates:
            if c.params is None:
                continue
            groups.setdefault(c.group_key, []).append(c)
        kept = []
        for key, members in groups.items():
            kept.extend(self.build_group(members))
        self._ordered = [(c.order, proc) for c, proc in kept]

    def build_group(self, members):
        name = members[0].public_name
        if len({c.kind for c in members}) > 1:
            for c in members:
                self.diag.warning("W-mixed-overload",
                                  f"dropping '{c.signature}': overloads of '{name}' mix functions and "
                                  f"subroutines", c.decl.span)
                self.plan.skipped.append(SkippedItem(c.cpp_name, "mixed function/subroutine overloads"))
            return []
        kept = []
        for c in members:
            clash = next((k for k in kept if not distinguishable(c.keys(), k.keys())), None)
            if clash is not None:
                self.diag.warning("W-ambiguous-overload",
                                  f"dropping '{c.signature}': indistinguishable in Fortran from "
                                  f"'{clash.signature}'", c.decl.span)
                self.plan.skipped.append(SkippedItem(c.cpp_name, "ambiguous Fortran overload"))
                continue
            kept.append(c)
        if not kept:
            return []
        first = kept[0]
        if first.role in (METHOD, GETTER, SETTER):
            return self.build_member_group(first.cls, kept)
        if first.role == CONSTRUCTOR:
            public = first.cls.fortran_name
            scope = first.cls.fortran_name
            indices = range(len(kept))
            base_name = "new"
        else:
            public = self.names.claim(first.public_name)
            scope = None
            indices = [None] if len(kept) == 1 else range(len(kept))
            base_name = public
        procs = []
        for c, idx in zip(kept, indices):
            specific, symbol = mangle_name(base_name, idx, self.module, scope)
            if specific.lower() != public.lower():
                specific = self.names.claim(specific)
            procs.append((c, self.make_procedure(c, public, specific, symbol)))
        if len(kept) > 1 or first.role == CONSTRUCTOR:
            generic = GenericPlan(public, [p.specific for _, p in procs], first.kind)
            for _, p in procs:
                p.overload_group = public
            if first.role == CONSTRUCTOR:
                self._type_plan(first.cls).constructors = [p for _, p in procs]
            else:
                self.plan.generics.append(generic)
        return procs

    def build_member_group(self, info: _ClassInfo, kept):
        type_plan = self._type_plan(info)
        first = kept[0]
        inherited = self._inherited_binding(info, first.public_name)
        if inherited is not None:
            base = inherited
            if len(kept) == 1 and len(base) == 1 and _same_interface(kept[0], base[0]):
                c = kept[0]
                for p, q in zip(c.params, base[0].params):
                    p.name = q.name
                specific, symbol = mangle_name(base[0].public_name, None, self.module, info.fortran_name)
                specific = self.names.claim(specific)
                proc = self.make_procedure(c, base[0].public_name, specific, symbol)
                type_plan.overrides[base[0].public_name] = specific
                type_plan.methods.append(proc)
                info.bindings[first.public_name.lower()] = [proc]
                return [(c, proc)]
            for c in kept:
                self.diag.warning("W-bad-override",
                                  f"dropping '{c.signature}': it redefines inherited '{first.public_name}' "
                                  f"with a different interface", c.decl.span)
                self.plan.skipped.append(SkippedItem(c.cpp_name, "incompatible redefinition of inherited method"))
            return []
        binding = info.registry.claim(first.public_name)
        indices = [None] if len(kept) == 1 else range(len(kept))
        procs = []
        for c, idx in zip(kept, indices):
            specific, symbol = mangle_name(binding, idx, self.module, info.fortran_name)
            specific = self.names.claim(specific)
            proc = self.make_procedure(c, binding, specific, symbol)
            procs.append((c, proc))
            type_plan.methods.append(proc)
        if len(kept) > 1:
            for _, p in procs:
                p.overload_group = binding
            type_plan.generics.append(GenericPlan(binding, [p.specific for _, p in procs], first.kind,
                                                  owner=info.fortran_name))
        info.bindings[binding.lower()] = [p for _, p in procs]
        return procs

    def _inherited_binding(self, info, name):
        node = info.parent
        while node is not None:
            if name.lower() in node.bindings:
                return node.bindings[name.lower()]
            node = node.parent
        return None

    def make_procedure(self, c: _Candidate, public, specific, symbol) -> ProcedurePlan:
        symbol = self.claim_c_symbol(symbol)
        iface = self.names.claim("swigc_" + symbol[len(f"_wrap_{self.module}_"):])
        proc = ProcedurePlan(public, specific, symbol, c.kind, c.params, c.result, c.signature, c.call,
                             role=c.role, owner=c.cls.fortran_name if c.cls and c.role != STATIC else None,
                             receiver=c.receiver, exception_wrapped=c.exception, interface_name=iface,
                             cpp_name=c.cpp_name, span=c.decl.span)
        for binding in [p.binding for p in c.params] + ([c.result] if c.result else []):
            self.plan.needs.update(binding.needs)
        if c.receiver is not None:
            self.plan.needs.update(c.receiver.binding.needs)
        return proc

    def _type_plan(self, info: _ClassInfo) -> ProxyTypePlan:
        if info.plan is None:
            parent = info.parent.fortran_name if info.parent else None
            info.plan = ProxyTypePlan(info.fortran_name, info.cpp_name, info.root.cpp_name, parent,
                                      extends_chain_depth=info.depth, doc=info.decl.doc)
        return info.plan

    def finish_types(self):
        """Attach release and assignment to every proxy type, in declaration order."""
        releases = []
        for info in sorted(self.class_list, key=lambda i: i.order):
            type_plan = self._type_plan(info)
            self.plan.proxy_types.append(type_plan)
            self.plan.needs.add("class_wrapper")
            type_plan.assign_specific = self.names.claim(f"swigf_{info.fortran_name}_op_assign__")
            deletable = not info.decl.forward and not any(
                isinstance(m, n.FunctionDecl) and m.kind == "destructor" and m.access != "public"
                for m in info.decl.members)
            specific = self.names.claim(f"swigf_{info.fortran_name}_release")
            symbol = None
            iface = ""
            if deletable:
                symbol = self.claim_c_symbol(f"_wrap_{self.module}_{info.fortran_name}_delete")
                iface = self.names.claim(f"swigc_{info.fortran_name}_delete")
            receiver = ParamPlan("self", "self", tm.map_class(n.TypeExpr(info.cpp_name), info.ref, receiver=True), 1)
            release = ProcedurePlan("release", specific, symbol or "", "subroutine", [], None,
                                    f"{info.cpp_name}::~{info.decl.name}()", "delete $self", role=RELEASE,
                                    owner=info.fortran_name, receiver=receiver, interface_name=iface,
                                    cpp_name=f"{info.cpp_name}::~{info.decl.name}")
            type_plan.release = release
            if symbol:
                releases.append((info.order, release))
        # each release shim follows the other procedures of its class
        ordered = self._ordered + [((order, float("inf")), rel) for order, rel in releases]
        ordered.sort(key=lambda pair: pair[0])
        self.plan.procedures = [proc for _, proc in ordered]

    def report_unused(self):
        for name, template in self.templates.items():
            if id(template) not in self.used_templates and name == template.decl.qualified_name:
                self.diag.warning("W-unused-template",
                                  f"template '{name}' has no %template instantiation; nothing is emitted",
                                  template.span)
        for ap in self.applies:
            for i, target in enumerate(ap.targets):
                if i not in ap.used:
                    self.diag.warning("W-unused-apply",
                                      f"%apply target '{tm.pattern_key(target)}' matched no declaration", ap.span)

    def public_names(self):
        names = []
        for t in self.plan.bindc_types:
            names.append(t.name)
        for e in self.plan.enums:
            names.extend(name for name, _ in e.enumerators)
            if e.name:
                names.append(e.name)
        names.extend(c.name for c in self.plan.constants)
        names.extend(d.name for d in self.plan.direct_bindings)
        names.extend(t.type_name for t in self.plan.proxy_types)
        generic_specifics = {s for g in self.plan.generics for s in g.specifics}
        names.extend(g.name for g in self.plan.generics)
        for p in self.plan.procedures:
            if p.role in (FREE, STATIC) and p.specific not in generic_specifics:
                names.append(p.specific)
        if self.plan.has_exceptions:
            names.extend(["ierr", "get_serr"])
        return names


# -- small predicates ----------------------------------------------------------


def _is_void(t) -> bool:
    return t is None or (t.category == "fundamental" and t.base == "void" and t.pointers == 0)


def _param_matches(actual: n.Param, target: n.Param) -> bool:
    if normalize_type(actual.type) != normalize_type(target.type):
        return False
    return target.name is None or actual.name == target.name


def _same_interface(a: _Candidate, b: ProcedurePlan) -> bool:
    if a.kind != b.kind or len(a.params) != len(b.params):
        return False
    if a.result is not None and a.result.tkr != b.result.tkr:
        return False
    return all(p.binding.tkr == q.binding.tkr for p, q in zip(a.params, b.params))


def _signature(c: _Candidate) -> str:
    decl = c.decl
    params = ", ".join(p.spelling() for p in decl.params)
    if c.role == CONSTRUCTOR:
        return f"{c.cls.cpp_name}({params})"
    ret = decl.return_type.spelling() if decl.return_type else "void"
    if c.role in (METHOD, GETTER, SETTER, STATIC):
        text = f"{ret} {c.cls.cpp_name}::{decl.name}({params})"
    else:
        text = f"{ret} {c.cpp_name}{c.template_args}({params})"
    if c.role == STATIC:
        text = "static " + text
    return text + (" const" if decl.const else "")


def _fortran_real(text: str) -> str:
    """C floating literal spelled as a Fortran real literal (kind suffix added by caller)."""
    text = text.lstrip("+")
    if "." not in text and "e" not in text.lower():
        text += ".0"
    if text.startswith("."):
        text = "0" + text
    if text.startswith("-."):
        text = "-0" + text[1:]
    return text.replace("E", "e")


def analyze(unit: n.InterfaceUnit, module_name: Optional[str] = None) -> ModulePlan:
    """Resolve ``unit`` into a :class:`ModulePlan`; errors raise :class:`BindforgeError`."""
    return Analyzer(unit, module_name).run()


def expand_templates(unit: n.InterfaceUnit):
    """Concrete declarations for every ``%template`` instantiation, in source order.

    Returns ``(alias, generic_name, declaration)`` triples; function templates
    keep the template's name as the shared generic name.
    """
    analyzer = Analyzer(unit)
    analyzer.collect_directives()
    out = []
    for item in unit.declarations():
        if not isinstance(item, n.TemplateInstantiation):
            continue
        template = analyzer.templates.get(item.target)
        if template is None:
            analyzer.diag.error("E-unknown-template", f"'{item.target}' is not a declared template", item.span)
            continue
        mapping = analyzer._template_mapping(template, item)
        if mapping is None or not analyzer._record_alias(item):
            continue
        if isinstance(template.decl, n.FunctionDecl):
            out.append((item.alias, template.decl.name, _substitute_function(template.decl, mapping)))
        else:
            members = tuple(_substitute_function(m, mapping) if isinstance(m, n.FunctionDecl)
                            else replace(m, type=substitute(m.type, mapping)) if isinstance(m, n.FieldDecl)
                            else m for m in template.decl.members)
            out.append((item.alias, item.alias, replace(template.decl, members=members)))
    if analyzer.diag.has_errors:
        raise BindforgeError(analyzer.diag.items)
    return out


def classify_binding(item, unit: n.InterfaceUnit) -> str:
    """Binding strategy for one declaration of ``unit``."""
    bindc = set()
    bindc_type = set()
    const = set()
    for d in unit.declarations():
        if isinstance(d, n.BindC):
            bindc.update(d.symbols)
        elif isinstance(d, n.BindCType):
            bindc_type.update(d.symbols)
        elif isinstance(d, n.FortranConst):
            const.update(d.symbols)
    if isinstance(item, n.UnsupportedItem):
        return SKIPPED
    if isinstance(item, n.FunctionDecl):
        return DIRECT_BINDC if item.name in bindc else WRAPPED
    if isinstance(item, n.ClassDecl):
        if item.name in bindc_type:
            return DIRECT_BINDC_TYPE
        if len(item.bases) > 1:
            return SKIPPED
        return WRAPPED
    if isinstance(item, n.ConstantMacro):
        return FORTRANCONST if item.name in const else WRAPPED
    if isinstance(item, n.EnumDecl):
        return ENUM
    return WRAPPED
