"""The resolved emission plan shared by both code emitters."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .typemaps import TypemapBinding

# Procedure roles.  Free functions and static methods are module procedures;
# the rest belong to a proxy type.
FREE = "free"
STATIC = "static"
METHOD = "method"
GETTER = "getter"
SETTER = "setter"
CONSTRUCTOR = "constructor"
RELEASE = "release"


@dataclass
class ParamPlan:
    name: str  # Fortran dummy argument name
    cpp_name: str
    binding: TypemapBinding
    index: int  # 1-based position among the shim's parameters

    @property
    def intent(self) -> str:
        for attr in self.binding.fortran_attrs:
            if attr.lower().startswith("intent("):
                return attr[7:-1].lower()
        return "in"


@dataclass
class ProcedurePlan:
    public_name: str  # generic (or direct) name callers use; binding name for methods
    specific: str  # Fortran specific procedure name
    c_symbol: str
    kind: str  # function | subroutine
    params: list
    result: Optional[TypemapBinding]
    cpp_signature: str
    call: str  # C++ call template; ``$args`` expands to the converted arguments
    role: str = FREE
    owner: Optional[str] = None  # Fortran proxy type name for members
    receiver: Optional[ParamPlan] = None
    overload_group: Optional[str] = None
    exception_wrapped: bool = False
    interface_name: str = ""  # name inside the private bind(C) interface block
    cpp_name: str = ""  # qualified C++ name, used in runtime error messages
    span: object = None

    @property
    def fortran_arity(self) -> int:
        return len(self.params)

    def dummy_keys(self):
        return [(p.name.lower(), dispatch_key(p.binding)) for p in self.params]


def dispatch_key(binding: TypemapBinding):
    """TKR key for generic resolution: class arguments compare by hierarchy root."""
    return binding.tkr


@dataclass
class GenericPlan:
    name: str
    specifics: list  # Fortran specific names in order
    kind: str
    owner: Optional[str] = None  # type name for type-bound generics


@dataclass
class ProxyTypePlan:
    type_name: str
    cpp_name: str
    root_cpp_name: str
    parent: Optional[str]
    methods: list = field(default_factory=list)  # ProcedurePlan, type-bound
    generics: list = field(default_factory=list)  # GenericPlan, type-bound
    overrides: dict = field(default_factory=dict)  # binding name -> specific
    constructors: list = field(default_factory=list)
    release: Optional[ProcedurePlan] = None
    assign_specific: str = ""
    extends_chain_depth: int = 0
    has_release: bool = True
    doc: Optional[str] = None


@dataclass
class EnumPlan:
    name: Optional[str]  # Fortran kind parameter name, None for anonymous enums
    cpp_name: Optional[str]
    enumerators: list  # of (fortran_name, value)


@dataclass
class ConstantPlan:
    name: str
    cpp_name: str
    value: str  # macro text
    fortran_type: str  # e.g. integer(C_INT)
    strategy: str  # parameter | global
    c_symbol: Optional[str] = None
    c_type: Optional[str] = None
    literal: Optional[str] = None  # Fortran literal for parameters


@dataclass
class DirectBindingPlan:
    name: str
    c_name: str
    kind: str
    params: list  # of (name, fortran declaration)
    result_decl: Optional[str]
    imports: tuple = ()
    cpp_signature: str = ""


@dataclass
class BindCTypePlan:
    name: str
    cpp_name: str
    fields: list  # of (fortran_name, declaration)


@dataclass
class SkippedItem:
    name: str
    reason: str


@dataclass
class ModulePlan:
    module_name: str
    procedures: list = field(default_factory=list)  # every shim-backed procedure, in order
    generics: list = field(default_factory=list)  # module-level generic interfaces
    proxy_types: list = field(default_factory=list)
    enums: list = field(default_factory=list)
    constants: list = field(default_factory=list)
    direct_bindings: list = field(default_factory=list)
    bindc_types: list = field(default_factory=list)
    verbatim: list = field(default_factory=list)  # VerbatimBlock nodes in order
    skipped: list = field(default_factory=list)
    diagnostics: list = field(default_factory=list)
    public_names: list = field(default_factory=list)
    has_exceptions: bool = False
    needs: set = field(default_factory=set)
    funptr_types: list = field(default_factory=list)

    @property
    def wrapped(self):
        return self.procedures

    def c_symbols(self) -> set:
        """Every C-linkage symbol the shim unit defines."""
        syms = {p.c_symbol for p in self.procedures}
        syms.update(c.c_symbol for c in self.constants if c.strategy == "global")
        if self.has_exceptions:
            syms.update(self.runtime_symbols())
        if "free" in self.needs:
            syms.add(self.free_symbol)
        return syms

    @property
    def free_symbol(self):
        return f"_wrap_{self.module_name}_free"

    def runtime_symbols(self):
        return {f"_wrap_{self.module_name}_ierr", f"_wrap_{self.module_name}_get_serr"}

    def procedure(self, specific):
        for p in self.procedures:
            if p.specific == specific:
                return p
        raise KeyError(specific)

    def dump(self) -> str:
        """One line per plan entry: ``KIND  public_name  specific  c_symbol  signature``."""
        rows = []
        for t in self.bindc_types:
            rows.append(("bindc_type", t.name, "-", "-", f"struct {t.cpp_name}"))
        for e in self.enums:
            values = ", ".join(f"{n}={v}" for n, v in e.enumerators)
            rows.append(("enum", e.name or "-", "-", "-", f"{{{values}}}"))
        for c in self.constants:
            rows.append(("constant", c.name, c.strategy, c.c_symbol or "-", f"#define {c.cpp_name} {c.value}"))
        for d in self.direct_bindings:
            rows.append(("bindc", d.name, d.name, d.c_name, d.cpp_signature))
        for t in self.proxy_types:
            parent = f" extends {t.parent}" if t.parent else ""
            rows.append(("type", t.type_name, "-", "-", f"class {t.cpp_name}{parent}"))
        for p in self.procedures:
            kind = p.role if p.role not in (FREE, STATIC) else p.kind
            public = f"{p.owner}%{p.public_name}" if p.owner and p.role not in (CONSTRUCTOR,) \
                else p.public_name
            rows.append((kind, public, p.specific, p.c_symbol, p.cpp_signature))
        for s in self.skipped:
            rows.append(("skipped", s.name, "-", "-", s.reason))
        return "".join("  ".join(row) + "\n" for row in rows)
