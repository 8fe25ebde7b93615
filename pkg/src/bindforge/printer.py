"""Render an :class:`InterfaceUnit` back to interface-file text.

Reparsing the output yields a structurally equal unit; this is what the
round-trip property tests check.
"""

from __future__ import annotations

from . import nodes as n


def _params(params):
    return ", ".join(p.spelling() for p in params)


def _doc(doc, indent=""):
    if not doc:
        return []
    body = doc.replace("*/", "* /").split("\n")
    if len(body) == 1:
        return [f"{indent}/** {body[0]} */"]
    return [f"{indent}/**"] + [f"{indent} * {line}".rstrip() for line in body] + [f"{indent} */"]


def format_function(fn: n.FunctionDecl, indent="") -> list:
    lines = _doc(fn.doc, indent)
    if fn.kind == "destructor":
        prefix = "virtual " if fn.virtual else ""
        return lines + [f"{indent}{prefix}~{fn.name}();"]
    if fn.kind == "constructor":
        return lines + [f"{indent}{fn.name}({_params(fn.params)});"]
    prefix = ("static " if fn.static else "") + ("virtual " if fn.virtual else "")
    text = f"{indent}{prefix}{fn.return_type.spelling(fn.name)}({_params(fn.params)})"
    if fn.const:
        text += " const"
    if fn.pure:
        text += " = 0"
    return lines + [text + ";"]


def format_class(cls: n.ClassDecl, indent="", name=None) -> list:
    head = f"{indent}{cls.keyword} {cls.name if name is None else name}"
    if cls.bases:
        head += " : " + ", ".join(f"{acc} {t.spelling()}" for acc, t in cls.bases)
    if cls.forward:
        return _doc(cls.doc, indent) + [head + ";"]
    lines = _doc(cls.doc, indent) + [head + " {"]
    access = "public" if cls.keyword == "struct" else "private"
    for member in cls.members:
        member_access = getattr(member, "access", access)
        if isinstance(member, n.UnsupportedItem):
            continue
        if member_access != access:
            lines.append(f"{indent}{member_access}:")
            access = member_access
        if isinstance(member, n.FunctionDecl):
            lines.extend(format_function(member, indent + "  "))
        elif isinstance(member, n.FieldDecl):
            dims = "".join(f"[{d}]" for d in member.array_dims)
            static = "static " if member.static else ""
            lines.append(f"{indent}  {static}{member.type.spelling(member.name)}{dims};")
    lines.append(f"{indent}}};")
    return lines


def format_enum(enum: n.EnumDecl, indent="") -> list:
    head = "enum class" if enum.scoped else "enum"
    if enum.name:
        head += " " + enum.name
    body = ", ".join(e.name if e.value is None else f"{e.name} = {e.value}" for e in enum.enumerators)
    return _doc(enum.doc, indent) + [f"{indent}{head} {{ {body} }};"]


def format_item(item, indent="") -> list:
    if isinstance(item, n.ModuleName):
        return [f"%module {item.name}"]
    if isinstance(item, n.VerbatimBlock):
        prefix = "%inline " if item.kind == "inline" else ""
        return [f"{prefix}%{{{item.text}%}}"]
    if isinstance(item, n.TemplateInstantiation):
        args = ", ".join(a.spelling() for a in item.args)
        if args.endswith(">"):
            args += " "
        return [f"%template({item.alias}) {item.target}<{args}>;"]
    if isinstance(item, n.ApplyTypemap):
        pattern = f"({_params(item.pattern)})"
        targets = ", ".join(f"({_params(t)})" for t in item.targets)
        return [f"%apply {pattern} {{ {targets} }};"]
    if isinstance(item, n.ExceptionPolicy):
        name = "%exception" if item.enabled else "%noexception"
        names = " " + ", ".join(item.names) if item.names else ""
        return [f"{name}{names};"]
    if isinstance(item, (n.BindC, n.BindCType, n.FortranConst)):
        name = {n.BindC: "fortranbindc", n.BindCType: "fortranbindc_type",
                n.FortranConst: "fortranconst"}[type(item)]
        return [f"%{name} {', '.join(item.symbols)};"]
    if isinstance(item, n.ConstantMacro):
        return [f"#define {item.name} {item.value}"]
    if isinstance(item, n.TypedefDecl):
        if item.funptr:
            ret = item.funptr.return_type.spelling()
            return [f"typedef {ret} (*{item.name})({_params(item.funptr.params)});"]
        return [f"typedef {item.type.spelling(item.name)};"]
    if isinstance(item, n.TemplateDecl):
        params = ", ".join(f"{'class' if p.kind == 'typename' else p.kind} {p.name}" for p in item.params)
        head = f"{indent}template<{params}>"
        body = format_class(item.decl, indent) if isinstance(item.decl, n.ClassDecl) \
            else format_function(item.decl, indent)
        return [head] + body
    if isinstance(item, n.FunctionDecl):
        return format_function(item, indent)
    if isinstance(item, n.ClassDecl):
        return format_class(item, indent)
    if isinstance(item, n.EnumDecl):
        return format_enum(item, indent)
    if isinstance(item, n.UnsupportedItem):
        return []
    raise TypeError(f"cannot format {type(item).__name__}")


def _scope_of(item):
    if isinstance(item, n.TemplateDecl):
        return item.decl.scope
    return getattr(item, "scope", ())


def format_unit(unit: n.InterfaceUnit) -> str:
    lines = []
    current = ()
    for item in unit.items:
        scope = _scope_of(item)
        if scope != current:
            lines.extend("}" for _ in current)
            lines.extend(f"namespace {s} {{" for s in scope)
            current = scope
        lines.extend(format_item(item))
    lines.extend("}" for _ in current)
    return "\n".join(lines) + "\n"
