"""Syntax tree for interface files.

Nodes are frozen dataclasses.  Source spans and doc comments are excluded
from equality so that a pretty-printed-and-reparsed unit compares equal to
the original.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .diagnostics import Span

FUNDAMENTAL_WORDS = frozenset(
    "void bool char short int long float double signed unsigned wchar_t".split()
)


@dataclass(frozen=True)
class TypeExpr:
    base: str
    category: str = "named"  # "fundamental" or "named"
    const: bool = False
    pointers: int = 0
    reference: bool = False
    rvalue_ref: bool = False
    template_args: tuple = ()

    @property
    def indirection(self) -> str:
        if self.rvalue_ref or (self.pointers and self.reference) or self.pointers > 1:
            return "nested"
        if self.pointers == 1:
            return "pointer"
        if self.reference:
            return "reference"
        return "value"

    @property
    def name(self) -> str:
        """Base name including template arguments, without qualifiers."""
        if not self.template_args:
            return self.base
        args = ", ".join(a.spelling() for a in self.template_args)
        if args.endswith(">"):
            args += " "
        return f"{self.base}<{args}>"

    def spelling(self, declarator: str = "") -> str:
        text = ("const " if self.const else "") + self.name
        if self.pointers:
            text += " " + "*" * self.pointers
        if self.reference:
            text += "&" if self.pointers else " &"
        if self.rvalue_ref:
            text += " &&"
        if declarator:
            sep = "" if text.endswith(("*", "&")) else " "
            text += sep + declarator
        return text

    def strip(self) -> "TypeExpr":
        """The same type with no cv-qualifier, pointer, or reference."""
        return TypeExpr(self.base, self.category, template_args=self.template_args)

    def replace(self, **changes) -> "TypeExpr":
        from dataclasses import replace
        return replace(self, **changes)

    def __str__(self):
        return self.spelling()


@dataclass(frozen=True)
class Param:
    name: Optional[str]
    type: TypeExpr
    default: Optional[str] = None

    def spelling(self) -> str:
        text = self.type.spelling(self.name or "")
        if self.default is not None:
            text += " = " + self.default
        return text


@dataclass(frozen=True)
class FunctionPointerType:
    return_type: TypeExpr
    params: tuple


@dataclass(frozen=True)
class FunctionDecl:
    name: str
    return_type: Optional[TypeExpr]
    params: tuple
    kind: str = "function"  # function | method | constructor | destructor
    const: bool = False
    static: bool = False
    virtual: bool = False
    pure: bool = False
    scope: tuple = ()
    access: str = "public"
    span: Optional[Span] = field(default=None, compare=False)
    doc: Optional[str] = field(default=None, compare=False)

    @property
    def qualified_name(self) -> str:
        return "::".join(self.scope + (self.name,))

    def signature(self) -> str:
        params = ", ".join(p.spelling() for p in self.params)
        ret = self.return_type.spelling() + " " if self.return_type else ""
        text = f"{ret}{self.qualified_name}({params})"
        return text + (" const" if self.const else "")


@dataclass(frozen=True)
class FieldDecl:
    name: str
    type: TypeExpr
    array_dims: tuple = ()
    static: bool = False
    access: str = "public"
    span: Optional[Span] = field(default=None, compare=False)


@dataclass(frozen=True)
class ClassDecl:
    name: str
    keyword: str  # class | struct
    bases: tuple = ()  # of (access, TypeExpr)
    members: tuple = ()
    scope: tuple = ()
    forward: bool = False
    span: Optional[Span] = field(default=None, compare=False)
    doc: Optional[str] = field(default=None, compare=False)

    @property
    def qualified_name(self) -> str:
        return "::".join(self.scope + (self.name,))


@dataclass(frozen=True)
class Enumerator:
    name: str
    value: Optional[str] = None


@dataclass(frozen=True)
class EnumDecl:
    name: Optional[str]
    enumerators: tuple
    scoped: bool = False
    scope: tuple = ()
    span: Optional[Span] = field(default=None, compare=False)
    doc: Optional[str] = field(default=None, compare=False)


@dataclass(frozen=True)
class TypedefDecl:
    name: str
    type: Optional[TypeExpr] = None
    funptr: Optional[FunctionPointerType] = None
    span: Optional[Span] = field(default=None, compare=False)


@dataclass(frozen=True)
class ConstantMacro:
    name: str
    value: str
    span: Optional[Span] = field(default=None, compare=False)


@dataclass(frozen=True)
class TemplateParam:
    kind: str  # "typename" for type parameters, otherwise the spelled value type
    name: str


@dataclass(frozen=True)
class TemplateDecl:
    params: tuple
    decl: object  # FunctionDecl or ClassDecl
    span: Optional[Span] = field(default=None, compare=False)

    @property
    def name(self):
        return self.decl.name


@dataclass(frozen=True)
class VerbatimBlock:
    kind: str  # header | inline
    text: str
    items: tuple = ()
    span: Optional[Span] = field(default=None, compare=False)


@dataclass(frozen=True)
class UnsupportedItem:
    name: str
    reason: str
    span: Optional[Span] = field(default=None, compare=False)


# -- directives --------------------------------------------------------------


@dataclass(frozen=True)
class ModuleName:
    name: str
    span: Optional[Span] = field(default=None, compare=False)


@dataclass(frozen=True)
class TemplateInstantiation:
    alias: str
    target: str
    args: tuple
    span: Optional[Span] = field(default=None, compare=False)


@dataclass(frozen=True)
class ApplyTypemap:
    pattern: tuple  # of Param
    targets: tuple  # of tuple of Param
    span: Optional[Span] = field(default=None, compare=False)


@dataclass(frozen=True)
class ExceptionPolicy:
    enabled: bool
    names: tuple = ()
    span: Optional[Span] = field(default=None, compare=False)


@dataclass(frozen=True)
class BindC:
    symbols: tuple
    span: Optional[Span] = field(default=None, compare=False)


@dataclass(frozen=True)
class BindCType:
    symbols: tuple
    span: Optional[Span] = field(default=None, compare=False)


@dataclass(frozen=True)
class FortranConst:
    symbols: tuple
    span: Optional[Span] = field(default=None, compare=False)


DIRECTIVE_TYPES = (
    ModuleName, TemplateInstantiation, ApplyTypemap, ExceptionPolicy,
    BindC, BindCType, FortranConst,
)


@dataclass(frozen=True)
class InterfaceUnit:
    module_name: str
    items: tuple
    diagnostics: tuple = field(default=(), compare=False)

    @property
    def source_spans(self):
        return [getattr(item, "span", None) for item in self.items]

    def declarations(self):
        """Items in source order with ``%inline`` contents spliced in place."""
        for item in self.items:
            yield item
            if isinstance(item, VerbatimBlock):
                yield from item.items
