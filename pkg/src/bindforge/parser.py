"""Recursive-descent parser for interface files.

Grammar errors are collected rather than raised one at a time: after a bad
declaration the parser skips to the next ``;`` or ``}`` and carries on, so a
single run reports every problem in the file.
"""

from __future__ import annotations

import re

from . import nodes as n
from .diagnostics import BindforgeError, DiagnosticBag, Span
from .lexer import LexError, Token, tokenize

_CANONICAL_FUNDAMENTALS = {
    ("signed",): "int",
    ("unsigned",): "unsigned int",
    ("signed", "int"): "int",
    ("unsigned", "int"): "unsigned int",
    ("short", "int"): "short",
    ("signed", "short"): "short",
    ("signed", "short", "int"): "short",
    ("unsigned", "short", "int"): "unsigned short",
    ("long", "int"): "long",
    ("signed", "long"): "long",
    ("signed", "long", "int"): "long",
    ("unsigned", "long", "int"): "unsigned long",
    ("long", "long", "int"): "long long",
    ("signed", "long", "long"): "long long",
    ("signed", "long", "long", "int"): "long long",
    ("unsigned", "long", "long", "int"): "unsigned long long",
}

_DECL_SPECIFIERS = frozenset(
    "static inline virtual explicit extern constexpr mutable volatile friend".split()
)
_LIST_DIRECTIVES = {
    "fortranbindc": n.BindC,
    "fortranbindc_type": n.BindCType,
    "fortranconst": n.FortranConst,
}


class _Unsupported(Exception):
    def __init__(self, reason):
        super().__init__(reason)
        self.reason = reason


class _SyntaxError(Exception):
    def __init__(self, message, token):
        super().__init__(message)
        self.message = message
        self.token = token


def _canonical_fundamental(words):
    key = tuple(sorted(words, key=["signed", "unsigned", "short", "long", "long", "int"].index)) \
        if all(w in ("signed", "unsigned", "short", "long", "int") for w in words) else tuple(words)
    if key in _CANONICAL_FUNDAMENTALS:
        return _CANONICAL_FUNDAMENTALS[key]
    return " ".join(words)


def _shift(span: Span, origin: Span) -> Span:
    if span.line == 1:
        return Span(origin.line, origin.column + 2 + span.column - 1,
                    origin.offset + 2 + span.offset, span.length)
    return Span(origin.line + span.line - 1, span.column,
                origin.offset + 2 + span.offset, span.length)


class Parser:
    def __init__(self, tokens, diagnostics=None, nested=False):
        self.tokens = []
        self.docs = {}
        pending = None
        for tok in tokens:
            if tok.kind == "doc":
                pending = tok.value if pending is None else pending + "\n" + tok.value
                continue
            if pending is not None:
                self.docs[len(self.tokens)] = pending
                pending = None
            self.tokens.append(tok)
        if not self.tokens or self.tokens[-1].kind != "eof":
            last = self.tokens[-1].span if self.tokens else Span(1, 1)
            self.tokens.append(Token("eof", "", last))
        self.pos = 0
        self.diag = diagnostics if diagnostics is not None else DiagnosticBag()
        self.nested = nested
        self.scope = ()

    # -- token helpers -----------------------------------------------------

    @property
    def tok(self) -> Token:
        return self.tokens[self.pos]

    def peek(self, k=1) -> Token:
        return self.tokens[min(self.pos + k, len(self.tokens) - 1)]

    def at(self, kind, value=None):
        return self.tok.is_(kind, value)

    def advance(self) -> Token:
        tok = self.tok
        if tok.kind != "eof":
            self.pos += 1
        return tok

    def accept(self, kind, value=None):
        if self.at(kind, value):
            return self.advance()
        return None

    def expect(self, kind, value=None, what=None):
        if self.at(kind, value):
            return self.advance()
        wanted = what or (repr(value) if value else kind)
        found = self.tok.value or self.tok.kind
        raise _SyntaxError(f"expected {wanted}, found {found!r}", self.tok)

    def expect_ident(self, what="identifier"):
        return self.expect("ident", what=what).value

    def skip_balanced(self, open_kind, close_kind):
        """Skip from an opening token through its matching close."""
        start = self.expect(open_kind)
        depth = 1
        while depth:
            if self.at("eof"):
                raise _SyntaxError(f"unbalanced {start.value!r}", start)
            if self.at(open_kind):
                depth += 1
            elif self.at(close_kind):
                depth -= 1
            self.advance()

    def recover(self):
        """Skip to just past the next ``;`` or ``}`` at the current nesting level."""
        depth = 0
        while not self.at("eof"):
            tok = self.advance()
            if tok.kind == "lbrace":
                depth += 1
            elif tok.kind == "rbrace":
                if depth <= 1:
                    self.accept("semi")
                    return
                depth -= 1
            elif tok.kind == "semi" and depth == 0:
                return

    def skip_statement(self):
        """Skip a declaration we do not model, including any braced body."""
        while not self.at("eof"):
            if self.at("lbrace"):
                self.skip_balanced("lbrace", "rbrace")
                self.accept("semi")
                return
            if self.advance().kind == "semi":
                return

    def text_until(self, stop_kinds):
        """Collect tokens up to a depth-0 stop token; return them joined by spaces."""
        parts = []
        depth = 0
        while not self.at("eof"):
            kind = self.tok.kind
            if depth == 0 and kind in stop_kinds:
                break
            if kind in ("lparen", "lbracket", "lbrace"):
                depth += 1
            elif kind in ("rparen", "rbracket", "rbrace"):
                if depth == 0:
                    break
                depth -= 1
            parts.append(self.advance().value)
        return " ".join(parts)

    # -- top level -----------------------------------------------------------

    def parse_items(self, terminator=None):
        items = []
        while not self.at("eof") and not (terminator and self.at(terminator)):
            start = self.pos
            try:
                items.extend(self.parse_item())
            except _SyntaxError as exc:
                self.diag.error("E-parse", exc.message, exc.token.span)
                self.pos = max(self.pos, start)
                if self.pos == start:
                    self.advance()
                self.recover()
        return items

    def parse_item(self):
        tok = self.tok
        doc = self.docs.get(self.pos)
        if tok.kind == "directive":
            return self.parse_directive()
        if tok.kind == "verbatim":
            self.advance()
            return [n.VerbatimBlock("header", tok.value, span=tok.span)]
        if tok.kind == "pp":
            self.advance()
            return self.parse_preprocessor(tok)
        if tok.kind == "semi":
            self.advance()
            return []
        if tok.is_("kw", "namespace"):
            return self.parse_namespace()
        if tok.is_("kw", "extern") and self.peek().kind == "string":
            self.advance()
            self.advance()
            if self.accept("lbrace"):
                items = self.parse_items("rbrace")
                self.expect("rbrace")
                return items
            return self.parse_item()
        if tok.is_("kw", "template"):
            return [self.parse_template()]
        if tok.is_("kw", "typedef"):
            return self.parse_typedef()
        if tok.is_("kw", "using") or tok.is_("kw", "friend"):
            self.skip_statement()
            return [n.UnsupportedItem(tok.value, f"'{tok.value}' declarations are not supported", tok.span)]
        if (tok.is_("kw", "enum")) and self._enum_body_follows():
            item = self.parse_enum(doc)
            self.expect("semi")
            return [item]
        if (tok.is_("kw", "class") or tok.is_("kw", "struct")) and self._class_body_follows():
            item = self.parse_class(doc)
            self.expect("semi")
            return [item]
        if tok.is_("kw", "union"):
            self.skip_statement()
            return [n.UnsupportedItem("union", "unions are not supported", tok.span)]
        return [self.parse_declaration(doc)]

    def _class_body_follows(self):
        i = self.pos + 1
        while self.tokens[i].kind in ("ident", "scope") or self.tokens[i].is_("kw", "final"):
            i += 1
        return self.tokens[i].kind in ("lbrace", "colon", "semi")

    def _enum_body_follows(self):
        i = self.pos + 1
        if self.tokens[i].is_("kw", "class") or self.tokens[i].is_("kw", "struct"):
            i += 1
        if self.tokens[i].kind == "ident":
            i += 1
        if self.tokens[i].kind == "colon":
            return True
        return self.tokens[i].kind == "lbrace"

    def parse_namespace(self):
        self.expect("kw", "namespace")
        name = self.expect_ident("namespace name")
        self.expect("lbrace")
        outer = self.scope
        self.scope = outer + (name,)
        try:
            items = self.parse_items("rbrace")
        finally:
            self.scope = outer
        self.expect("rbrace")
        return items

    # -- preprocessor --------------------------------------------------------

    def parse_preprocessor(self, tok):
        m = re.match(r"define\s+([A-Za-z_]\w*)(\(?)\s*(.*)$", tok.value, re.S)
        if m and not m.group(2):
            name, value = m.group(1), " ".join(m.group(3).split())
            if not value:
                self.diag.warning("W-preprocessor", f"macro '{name}' has no value; ignored", tok.span)
                return []
            return [n.ConstantMacro(name, value, span=tok.span)]
        if self.nested:
            return []  # part of the inlined code, passed through verbatim
        directive = tok.value.split(None, 1)[0] if tok.value else ""
        self.diag.warning("W-preprocessor",
                          f"preprocessor directive '#{directive}' ignored outside %{{ %}} blocks",
                          tok.span)
        return []

    # -- directives ----------------------------------------------------------

    def parse_directive(self):
        tok = self.advance()
        name = tok.value
        if name == "module":
            mod = self.expect_ident("module name")
            self.accept("semi")
            return [n.ModuleName(mod, span=tok.span)]
        if name == "template":
            return [self.parse_template_instantiation(tok)]
        if name == "apply":
            return [self.parse_apply(tok)]
        if name == "inline":
            block = self.expect("verbatim", what="%{ block after %inline")
            return [n.VerbatimBlock("inline", block.value, self.parse_nested(block), span=tok.span)]
        if name == "exception":
            names = self.parse_name_list(allow_empty=True)
            return [n.ExceptionPolicy(True, names, span=tok.span)]
        if name == "noexception":
            names = self.parse_name_list(allow_empty=True)
            return [n.ExceptionPolicy(False, names, span=tok.span)]
        if name in _LIST_DIRECTIVES:
            names = self.parse_name_list(allow_empty=False)
            return [_LIST_DIRECTIVES[name](names, span=tok.span)]
        raise _SyntaxError(f"unknown directive %{name}", tok)

    def parse_name_list(self, allow_empty):
        names = []
        if not (allow_empty and self.at("semi")):
            names.append(self.expect_ident())
            while self.accept("comma"):
                names.append(self.expect_ident())
        self.expect("semi")
        return tuple(names)

    def parse_nested(self, block: Token):
        try:
            tokens = tokenize(block.value)
        except LexError as exc:
            self.diag.error("E-lex", exc.message, _shift(exc.span, block.span))
            return ()
        tokens = [Token(t.kind, t.value, _shift(t.span, block.span)) for t in tokens]
        sub = Parser(tokens, self.diag, nested=True)
        sub.scope = self.scope
        items = sub.parse_items()
        return tuple(items)

    def parse_template_instantiation(self, tok):
        self.expect("lparen")
        alias = self.expect_ident("instantiation name")
        self.expect("rparen")
        target = self.parse_qualified_name()
        self.expect("lt", what="'<'")
        args = self.parse_template_args()
        self.expect("semi")
        return n.TemplateInstantiation(alias, target, args, span=tok.span)

    def parse_apply(self, tok):
        pattern = self.parse_parm_group()
        self.expect("lbrace")
        targets = [self.parse_parm_group()]
        while self.accept("comma"):
            targets.append(self.parse_parm_group())
        self.expect("rbrace")
        self.accept("semi")
        return n.ApplyTypemap(pattern, tuple(targets), span=tok.span)

    def parse_parm_group(self):
        if self.accept("lparen"):
            params = [self.parse_param()]
            while self.accept("comma"):
                params.append(self.parse_param())
            self.expect("rparen")
            return tuple(params)
        return (self.parse_param(),)

    # -- types ---------------------------------------------------------------

    def parse_qualified_name(self):
        parts = []
        if self.accept("scope"):
            parts.append("")
        parts.append(self.expect_ident("type name"))
        while self.at("scope") and self.peek().kind == "ident":
            self.advance()
            parts.append(self.advance().value)
        return "::".join(parts)

    def parse_template_args(self):
        """Parse type arguments after '<' through the closing '>'."""
        args = []
        if not self.accept("gt"):
            args.append(self.parse_type())
            while self.accept("comma"):
                args.append(self.parse_type())
            self.expect("gt", what="'>'")
        return tuple(args)

    def parse_type(self, allow_void=True):
        const = False
        while self.at("kw") and self.tok.value in ("const", "volatile", "typename", "struct", "class", "enum"):
            if self.advance().value == "const":
                const = True
        words = []
        while self.at("kw") and self.tok.value in n.FUNDAMENTAL_WORDS:
            words.append(self.advance().value)
        if words:
            base, category, targs = _canonical_fundamental(words), "fundamental", ()
        elif self.at("ident") or self.at("scope"):
            base, category = self.parse_qualified_name(), "named"
            targs = self.parse_template_args() if self.accept("lt") else ()
        else:
            found = self.tok.value or self.tok.kind
            raise _SyntaxError(f"expected a type, found {found!r}", self.tok)
        while self.at("kw") and self.tok.value in ("const", "volatile"):
            if self.advance().value == "const":
                const = True
        pointers = 0
        while self.at("star"):
            self.advance()
            pointers += 1
            while self.accept("kw", "const") or self.accept("kw", "volatile"):
                pass
        reference = bool(self.accept("amp"))
        rvalue = bool(self.accept("ampamp"))
        return n.TypeExpr(base, category, const, pointers, reference, rvalue, targs)

    def parse_param(self):
        ptype = self.parse_type()
        if self.at("lparen"):
            raise _Unsupported("function-pointer parameters must be declared through a typedef")
        name = self.accept("ident")
        dims = 0
        while self.at("lbracket"):
            self.skip_balanced("lbracket", "rbracket")
            dims += 1
        if dims:
            ptype = ptype.replace(pointers=ptype.pointers + dims)
        default = None
        if self.accept("eq"):
            default = self.text_until(("comma", "rparen", "rbrace"))
        return n.Param(name.value if name else None, ptype, default)

    def parse_params(self):
        self.expect("lparen")
        params = []
        if self.at("kw", "void") and self.peek().kind == "rparen":
            self.advance()
        if not self.at("rparen"):
            if self.at("ellipsis"):
                raise _Unsupported("variadic functions are not supported")
            params.append(self.parse_param())
            while self.accept("comma"):
                if self.at("ellipsis"):
                    raise _Unsupported("variadic functions are not supported")
                params.append(self.parse_param())
        self.expect("rparen")
        return tuple(params)

    # -- declarations --------------------------------------------------------

    def parse_specifiers(self):
        specs = set()
        while self.at("kw") and self.tok.value in _DECL_SPECIFIERS:
            specs.add(self.advance().value)
        return specs

    def parse_function_tail(self):
        """Qualifiers after the parameter list, then ';' or a body."""
        const = pure = False
        while True:
            if self.accept("kw", "const"):
                const = True
            elif self.accept("kw", "noexcept"):
                if self.at("lparen"):
                    self.skip_balanced("lparen", "rparen")
            elif self.accept("kw", "override") or self.accept("kw", "final"):
                pass
            elif self.at("ident", "throw") and self.peek().kind == "lparen":
                self.advance()
                self.skip_balanced("lparen", "rparen")
            else:
                break
        if self.accept("eq"):
            if self.accept("number"):
                pure = True
            elif self.accept("kw", "delete"):
                self.expect("semi")
                return const, pure, "deleted"
            else:
                self.expect("kw", "default", what="'0', 'default' or 'delete'")
        if self.at("colon"):
            # constructor initializer list
            while not self.at("lbrace") and not self.at("eof"):
                if self.at("lparen"):
                    self.skip_balanced("lparen", "rparen")
                else:
                    self.advance()
        if self.at("lbrace"):
            self.skip_balanced("lbrace", "rbrace")
            self.accept("semi")
        else:
            self.expect("semi")
        return const, pure, None

    def parse_declaration(self, doc, class_name=None, access="public"):
        start = self.tok
        start_pos = self.pos
        try:
            return self._parse_declaration(doc, class_name, access)
        except _Unsupported as exc:
            self.pos = start_pos
            name = self._guess_name()
            self.pos = start_pos
            self.skip_statement()
            return n.UnsupportedItem(name, exc.reason, start.span)

    def _guess_name(self):
        name = "?"
        while not self.at("eof") and not self.at("semi") and not self.at("lbrace"):
            if self.at("lparen"):
                break
            if self.at("kw", "operator"):
                return "operator"
            if self.at("ident"):
                name = self.tok.value
            self.advance()
        return name

    def _parse_declaration(self, doc, class_name, access):
        start = self.tok
        specs = self.parse_specifiers()
        if "friend" in specs:
            raise _Unsupported("friend declarations are not supported")
        if self.at("kw", "operator"):
            raise _Unsupported("operator overloading is not supported")
        kind = "method" if class_name else "function"

        if class_name is not None:
            if self.at("tilde"):
                self.advance()
                name = self.expect_ident("destructor name")
                self.parse_params()
                self.parse_function_tail()
                return n.FunctionDecl(name, None, (), kind="destructor", virtual="virtual" in specs,
                                      access=access, scope=self.scope, span=start.span, doc=doc)
            if self.at("ident", class_name) and self.peek().kind == "lparen":
                self.advance()
                params = self.parse_params()
                _, _, deleted = self.parse_function_tail()
                if deleted:
                    return n.UnsupportedItem(class_name, "deleted constructor", start.span)
                return n.FunctionDecl(class_name, None, params, kind="constructor",
                                      access=access, scope=self.scope, span=start.span, doc=doc)

        rtype = self.parse_type()
        specs |= self.parse_specifiers()
        if self.at("kw", "operator"):
            raise _Unsupported("operator overloading is not supported")
        if self.at("lparen"):
            raise _Unsupported("function-pointer declarators must be declared through a typedef")
        name_tok = self.expect("ident", what="declarator name")
        if self.at("lparen"):
            params = self.parse_params()
            const, pure, deleted = self.parse_function_tail()
            if deleted:
                return n.UnsupportedItem(name_tok.value, "deleted function", start.span)
            return n.FunctionDecl(
                name_tok.value, rtype, params, kind=kind, const=const,
                static="static" in specs, virtual="virtual" in specs, pure=pure,
                scope=self.scope, access=access, span=start.span, doc=doc)

        # variable or field
        names = [(name_tok.value, self.parse_array_dims())]
        self.skip_initializer()
        while self.accept("comma"):
            extra_ptr = 0
            while self.accept("star"):
                extra_ptr += 1
            if extra_ptr or self.at("amp"):
                raise _Unsupported("declarators with mixed indirection are not supported")
            names.append((self.expect_ident(), self.parse_array_dims()))
            self.skip_initializer()
        self.expect("semi")
        if class_name is None:
            return n.UnsupportedItem(name_tok.value, "global variables are not wrapped", start.span)
        return [n.FieldDecl(nm, rtype, dims, static="static" in specs, access=access, span=start.span)
                for nm, dims in names]

    def parse_array_dims(self):
        dims = []
        while self.accept("lbracket"):
            dims.append(self.text_until(("rbracket",)))
            self.expect("rbracket")
        return tuple(dims)

    def skip_initializer(self):
        if self.accept("eq"):
            self.text_until(("comma", "semi"))
        elif self.at("lbrace"):
            self.skip_balanced("lbrace", "rbrace")

    def parse_typedef(self):
        start = self.expect("kw", "typedef")
        if (self.at("kw", "struct") or self.at("kw", "class")) and self._typedef_struct_body():
            decl = self.parse_class(None, anonymous_ok=True)
            alias = self.expect_ident("typedef name")
            self.expect("semi")
            return [n.ClassDecl(alias, decl.keyword, decl.bases, decl.members, self.scope,
                                span=decl.span, doc=decl.doc)]
        try:
            base = self.parse_type()
            if self.accept("lparen"):
                self.expect("star", what="'*' in function-pointer typedef")
                name = self.expect_ident("typedef name")
                self.expect("rparen")
                params = self.parse_params()
                self.expect("semi")
                return [n.TypedefDecl(name, funptr=n.FunctionPointerType(base, params), span=start.span)]
            name = self.expect_ident("typedef name")
            dims = self.parse_array_dims()
            self.expect("semi")
        except _Unsupported as exc:
            self.recover()
            return [n.UnsupportedItem("typedef", exc.reason, start.span)]
        if dims:
            return [n.UnsupportedItem(name, "array typedefs are not supported", start.span)]
        return [n.TypedefDecl(name, type=base, span=start.span)]

    def _typedef_struct_body(self):
        i = self.pos + 1
        if self.tokens[i].kind == "ident":
            i += 1
        return self.tokens[i].kind == "lbrace"

    def parse_enum(self, doc):
        start = self.expect("kw", "enum")
        scoped = bool(self.accept("kw", "class") or self.accept("kw", "struct"))
        name_tok = self.accept("ident")
        if self.accept("colon"):
            self.parse_type()
        self.expect("lbrace")
        enumerators = []
        while not self.at("rbrace"):
            ename = self.expect_ident("enumerator name")
            value = None
            if self.accept("eq"):
                value = self.text_until(("comma", "rbrace"))
                if not value:
                    raise _SyntaxError("expected enumerator value", self.tok)
            enumerators.append(n.Enumerator(ename, value))
            if not self.accept("comma"):
                break
        self.expect("rbrace")
        return n.EnumDecl(name_tok.value if name_tok else None, tuple(enumerators), scoped,
                          self.scope, span=start.span, doc=doc)

    def parse_class(self, doc, anonymous_ok=False):
        start = self.advance()
        keyword = start.value
        name_tok = self.accept("ident")
        if name_tok is None and not anonymous_ok:
            raise _SyntaxError("expected class name", self.tok)
        name = name_tok.value if name_tok else ""
        self.accept("kw", "final")
        bases = []
        if self.accept("colon"):
            while True:
                self.accept("kw", "virtual")
                base_access = "public" if keyword == "struct" else "private"
                if self.at("kw") and self.tok.value in ("public", "protected", "private"):
                    base_access = self.advance().value
                self.accept("kw", "virtual")
                bases.append((base_access, self.parse_type()))
                if not self.accept("comma"):
                    break
        if self.at("semi"):
            # forward declaration
            return n.ClassDecl(name, keyword, tuple(bases), (), self.scope, forward=True,
                               span=start.span, doc=doc)
        self.expect("lbrace")
        access = "public" if keyword == "struct" else "private"
        members = []
        while not self.at("rbrace"):
            if self.at("eof"):
                raise _SyntaxError(f"unterminated {keyword} body", start)
            if self.at("kw") and self.tok.value in ("public", "protected", "private") \
                    and self.peek().kind == "colon":
                access = self.advance().value
                self.advance()
                continue
            if self.accept("semi"):
                continue
            mem_start = self.pos
            doc_m = self.docs.get(self.pos)
            try:
                members.extend(self.parse_member(name, access, doc_m))
            except _SyntaxError as exc:
                self.diag.error("E-parse", exc.message, exc.token.span)
                if self.pos == mem_start:
                    self.advance()
                self.recover_member()
        self.expect("rbrace")
        return n.ClassDecl(name, keyword, tuple(bases), tuple(members), self.scope,
                           span=start.span, doc=doc)

    def recover_member(self):
        depth = 0
        while not self.at("eof"):
            if self.at("rbrace") and depth == 0:
                return
            tok = self.advance()
            if tok.kind == "lbrace":
                depth += 1
            elif tok.kind == "rbrace":
                depth -= 1
                if depth == 0:
                    self.accept("semi")
                    return
            elif tok.kind == "semi" and depth == 0:
                return

    def parse_member(self, class_name, access, doc):
        tok = self.tok
        if tok.is_("kw", "enum") and self._enum_body_follows():
            item = self.parse_enum(doc)
            self.expect("semi")
            return [n.UnsupportedItem(item.name or "enum", "nested enums are not supported", tok.span)]
        if (tok.is_("kw", "class") or tok.is_("kw", "struct")) and self._class_body_follows():
            item = self.parse_class(doc)
            self.expect("semi")
            return [n.UnsupportedItem(item.name, "nested classes are not supported", tok.span)]
        if tok.is_("kw", "template") or tok.is_("kw", "using") or tok.is_("kw", "typedef") \
                or tok.is_("kw", "friend"):
            self.skip_statement()
            return [n.UnsupportedItem(tok.value, f"member '{tok.value}' declarations are not supported",
                                      tok.span)]
        decl = self.parse_declaration(doc, class_name, access)
        return decl if isinstance(decl, list) else [decl]

    def parse_template(self):
        start = self.expect("kw", "template")
        self.expect("lt")
        params = []
        while not self.at("gt"):
            if self.accept("kw", "class") or self.accept("kw", "typename"):
                pname = self.expect_ident("template parameter name")
                params.append(n.TemplateParam("typename", pname))
            else:
                ptype = self.parse_type()
                pname = self.expect_ident("template parameter name")
                params.append(n.TemplateParam(ptype.spelling(), pname))
            if self.accept("eq"):
                raise _SyntaxError("default template arguments are not supported", self.tok)
            if not self.accept("comma"):
                break
        self.expect("gt", what="'>'")
        doc = self.docs.get(self.pos)
        if (self.at("kw", "class") or self.at("kw", "struct")) and self._class_body_follows():
            decl = self.parse_class(doc)
            self.expect("semi")
        else:
            decl = self.parse_declaration(doc)
            if isinstance(decl, n.UnsupportedItem):
                return decl
            if not isinstance(decl, n.FunctionDecl):
                return n.UnsupportedItem(getattr(decl, "name", "?"), "variable templates are not supported",
                                         start.span)
        return n.TemplateDecl(tuple(params), decl, span=start.span)


def parse_interface(tokens, diagnostics=None) -> n.InterfaceUnit:
    """Parse a token stream into an :class:`InterfaceUnit`.

    Raises :class:`BindforgeError` carrying every diagnostic if any error was
    found; warnings travel on ``unit.diagnostics``.
    """
    diag = diagnostics if diagnostics is not None else DiagnosticBag()
    parser = Parser(tokens, diag)
    items = parser.parse_items()
    modules = [item for item in items if isinstance(item, n.ModuleName)]
    if not modules:
        diag.error("E-missing-module", "missing %module directive", tokens[0].span if tokens else None)
    for extra in modules[1:]:
        diag.error("E-duplicate-module", "more than one %module directive", extra.span)
    if diag.has_errors:
        raise BindforgeError(diag.items)
    return n.InterfaceUnit(modules[0].name, tuple(items), tuple(diag.items))


def parse_text(source: str) -> n.InterfaceUnit:
    """Tokenize and parse; every failure surfaces as :class:`BindforgeError`."""
    try:
        tokens = tokenize(source)
    except LexError as exc:
        bag = DiagnosticBag()
        bag.error("E-lex", exc.message, exc.span)
        raise BindforgeError(bag.items) from None
    return parse_interface(tokens)
