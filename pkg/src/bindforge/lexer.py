"""Tokenizer for interface files: a C/C++ declaration subset plus ``%`` directives."""

from __future__ import annotations

import re
from dataclasses import dataclass

from .diagnostics import Span

KEYWORDS = frozenset("""
    void bool char short int long float double signed unsigned wchar_t
    const volatile mutable struct class union enum typedef template typename
    public private protected virtual static inline extern namespace operator
    explicit friend using noexcept override final true false nullptr
    delete default new return sizeof constexpr
""".split())

PUNCTUATION = {
    "::": "scope",
    "...": "ellipsis",
    "->": "arrow",
    "&&": "ampamp",
    "(": "lparen",
    ")": "rparen",
    "{": "lbrace",
    "}": "rbrace",
    "[": "lbracket",
    "]": "rbracket",
    "<": "lt",
    ">": "gt",
    ",": "comma",
    ";": "semi",
    ":": "colon",
    "*": "star",
    "&": "amp",
    "=": "eq",
    "+": "plus",
    "-": "minus",
    "/": "slash",
    "~": "tilde",
    ".": "dot",
    "|": "pipe",
    "^": "caret",
    "!": "bang",
    "?": "question",
    "%": "percent",
    "#": "hash",
}
_PUNCT_BY_LENGTH = sorted(PUNCTUATION, key=len, reverse=True)

_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")
_NUMBER = re.compile(
    r"0[xX][0-9a-fA-F]+[uUlL]*"
    r"|(?:\d+\.\d*|\.\d+|\d+)(?:[eE][+-]?\d+)?[fFlLuU]*"
)


@dataclass(frozen=True)
class Token:
    kind: str
    value: str
    span: Span

    def is_(self, kind, value=None):
        return self.kind == kind and (value is None or self.value == value)

    def __repr__(self):
        if self.kind in ("kw", "ident", "number", "directive"):
            return f"{self.kind} {self.value}"
        return self.kind


class LexError(Exception):
    def __init__(self, message, span):
        super().__init__(message)
        self.message = message
        self.span = span


def _clean_doc(body: str) -> str:
    lines = []
    for raw in body.splitlines():
        line = raw.strip()
        if line.startswith("*"):
            line = line[1:].strip()
        lines.append(line)
    while lines and not lines[0]:
        lines.pop(0)
    while lines and not lines[-1]:
        lines.pop()
    return "\n".join(lines)


class _Scanner:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0
        self.line = 1
        self.col = 1
        self.at_line_start = True

    def span(self, start_pos, start_line, start_col):
        return Span(start_line, start_col, start_pos, self.pos - start_pos)

    def advance(self, n=1):
        for ch in self.text[self.pos:self.pos + n]:
            if ch == "\n":
                self.line += 1
                self.col = 1
            else:
                self.col += 1
        self.pos += n

    def startswith(self, s):
        return self.text.startswith(s, self.pos)

    def find(self, s):
        return self.text.find(s, self.pos)


def tokenize(source: str) -> list:
    """Split ``source`` into tokens; the list always ends with an ``eof`` token.

    Ordinary comments are dropped, doc comments (``/** */``, ``///``) become
    ``doc`` tokens, ``%{ ... %}`` bodies become a single ``verbatim`` token
    holding the exact text, and preprocessor lines become ``pp`` tokens.
    """
    sc = _Scanner(source)
    tokens = []
    text = source
    while sc.pos < len(text):
        ch = text[sc.pos]
        if ch == "\n":
            sc.advance()
            sc.at_line_start = True
            continue
        if ch in " \t\r\f\v":
            sc.advance()
            continue

        start = (sc.pos, sc.line, sc.col)
        line_start = sc.at_line_start
        sc.at_line_start = False

        if sc.startswith("//"):
            end = sc.find("\n")
            end = len(text) if end < 0 else end
            body = text[sc.pos:end]
            sc.advance(end - sc.pos)
            if body.startswith("///") or body.startswith("//!"):
                tokens.append(Token("doc", _clean_doc(body[3:]), sc.span(*start)))
            continue
        if sc.startswith("/*"):
            end = text.find("*/", sc.pos + 2)
            if end < 0:
                raise LexError("unterminated comment", Span(start[1], start[2], start[0], 2))
            body = text[sc.pos + 2:end]
            sc.advance(end + 2 - sc.pos)
            if (body.startswith("*") and not body.startswith("**")) or body.startswith("!"):
                tokens.append(Token("doc", _clean_doc(body[1:]), sc.span(*start)))
            continue
        if sc.startswith("%{"):
            end = text.find("%}", sc.pos + 2)
            if end < 0:
                raise LexError("unterminated %{ block", Span(start[1], start[2], start[0], 2))
            body = text[sc.pos + 2:end]
            sc.advance(end + 2 - sc.pos)
            tokens.append(Token("verbatim", body, sc.span(*start)))
            continue
        if ch == "%":
            m = _IDENT.match(text, sc.pos + 1)
            if m:
                sc.advance(m.end() - sc.pos)
                tokens.append(Token("directive", m.group(), sc.span(*start)))
                continue
        if ch == "#" and line_start:
            tokens.append(_preprocessor_line(sc, start))
            sc.at_line_start = True
            continue
        if ch == '"' or ch == "'":
            tokens.append(_quoted(sc, start, ch))
            continue
        m = _NUMBER.match(text, sc.pos)
        if m and (ch.isdigit() or (ch == "." and m.end() > sc.pos + 1)):
            sc.advance(m.end() - sc.pos)
            tokens.append(Token("number", m.group(), sc.span(*start)))
            continue
        m = _IDENT.match(text, sc.pos)
        if m:
            word = m.group()
            sc.advance(len(word))
            kind = "kw" if word in KEYWORDS else "ident"
            tokens.append(Token(kind, word, sc.span(*start)))
            continue
        for punct in _PUNCT_BY_LENGTH:
            if sc.startswith(punct):
                sc.advance(len(punct))
                tokens.append(Token(PUNCTUATION[punct], punct, sc.span(*start)))
                break
        else:
            raise LexError(f"unexpected character {ch!r}", Span(start[1], start[2], start[0], 1))
    tokens.append(Token("eof", "", Span(sc.line, sc.col, sc.pos, 0)))
    return tokens


def _preprocessor_line(sc: _Scanner, start) -> Token:
    text = sc.text
    pieces = []
    while True:
        end = text.find("\n", sc.pos)
        end = len(text) if end < 0 else end
        chunk = text[sc.pos:end]
        sc.advance(end - sc.pos)
        if chunk.endswith("\\") and sc.pos < len(text):
            pieces.append(chunk[:-1])
            sc.advance()
            continue
        pieces.append(chunk)
        break
    body = " ".join(pieces)[1:]
    # strip trailing comments; string literals in macros are rare enough to ignore here
    body = re.sub(r"/\*.*?\*/", " ", body)
    body = body.split("//", 1)[0]
    return Token("pp", body.strip(), sc.span(*start))


def _quoted(sc: _Scanner, start, quote) -> Token:
    text = sc.text
    i = sc.pos + 1
    while i < len(text):
        c = text[i]
        if c == "\\":
            i += 2
            continue
        if c == "\n":
            break
        if c == quote:
            sc.advance(i + 1 - sc.pos)
            kind = "string" if quote == '"' else "char"
            return Token(kind, text[start[0]:sc.pos], sc.span(*start))
        i += 1
    what = "string" if quote == '"' else "character"
    raise LexError(f"unterminated {what} literal", Span(start[1], start[2], start[0], 1))
