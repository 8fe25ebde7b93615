"""Free-form Fortran layout: line continuation and a structural checker."""

from __future__ import annotations

import re

MAX_COLUMNS = 132
_BREAK_AT = MAX_COLUMNS - 4


def _quote_state(line: str):
    """For each index, whether it sits inside a character literal."""
    inside = []
    quote = None
    for ch in line:
        if quote is None and ch in "'\"":
            quote = ch
            inside.append(True)
            continue
        inside.append(quote is not None)
        if quote is not None and ch == quote:
            quote = None
    return inside


def wrap_line(line: str) -> list:
    """Split ``line`` into continuation lines of at most 132 columns.

    Breaks go after a comma or space outside character literals; long
    literals are split with the character-context continuation form.
    """
    if len(line) <= MAX_COLUMNS:
        return [line]
    indent = line[: len(line) - len(line.lstrip())] + "  "
    out = []
    rest = line
    while len(rest) > MAX_COLUMNS:
        inside = _quote_state(rest)
        cut = None
        for i in range(min(_BREAK_AT, len(rest) - 1), len(indent) + 8, -1):
            if rest[i] in ", " and not inside[i]:
                cut = i + 1
                break
        if cut is not None:
            out.append(rest[:cut].rstrip() + " &")
            rest = indent + rest[cut:].lstrip()
        else:
            # no break point outside a literal: continue inside it
            cut = _BREAK_AT
            out.append(rest[:cut] + "&")
            rest = indent + "&" + rest[cut:]
    out.append(rest)
    return out


def wrap_source(lines) -> str:
    out = []
    for line in lines:
        out.extend(wrap_line(line))
    return "".join(l.rstrip() + "\n" for l in out)


# -- structural checks ---------------------------------------------------------

_DECL = re.compile(
    r"^(use\b|implicit\b|import\b|external\b|intrinsic\b|"
    r"(integer|real|logical|character|complex|type\s*\(|class\s*\(|procedure\s*\().*::)", re.I)
_BLOCK_OPEN = [
    ("module", re.compile(r"^module\s+(?!procedure\b)\w+$", re.I)),
    ("interface", re.compile(r"^(abstract\s+)?interface\b", re.I)),
    ("type", re.compile(r"^type\s*(,[^:]*::|::)?\s*\w+$", re.I)),
    ("enum", re.compile(r"^enum\s*,\s*bind", re.I)),
    ("function", re.compile(r"^([\w(),=]+\s+)*function\s+\w+\s*\(", re.I)),
    ("subroutine", re.compile(r"^((recursive|pure|elemental)\s+)*subroutine\s+\w+", re.I)),
    ("program", re.compile(r"^program\s+\w+$", re.I)),
    ("if", re.compile(r"^if\s*\(.*\)\s*then$", re.I)),
    ("do", re.compile(r"^do\b", re.I)),
]
_END = re.compile(r"^end\s*(module|interface|type|enum|function|subroutine|program|if|do)?(\s+\w+)?$", re.I)
_PROCEDURES = ("function", "subroutine", "program")


def _statements(text: str):
    """Yield ``(line_number, statement)`` with continuation lines joined."""
    buf = None
    start = 0
    for number, raw in enumerate(text.split("\n"), 1):
        stripped = raw.strip()
        if buf is not None:
            buf += stripped[1:] if stripped.startswith("&") else stripped
        else:
            if not stripped or stripped.startswith("!"):
                continue
            buf = stripped
            start = number
        if buf.endswith("&"):
            buf = buf[:-1]
            continue
        yield start, buf.strip()
        buf = None


def validate(text: str) -> list:
    """Return problems found in generated free-form source; empty means valid.

    Checks line length, balanced block constructs, a single ``contains`` per
    module, and that declarations precede executable statements in every
    procedure.
    """
    problems = []
    for number, raw in enumerate(text.split("\n"), 1):
        if len(raw) > MAX_COLUMNS:
            problems.append(f"line {number}: {len(raw)} columns exceeds {MAX_COLUMNS}")
        if "\t" in raw:
            problems.append(f"line {number}: tab character")
    stack = []  # of [kind, executable_seen, contains_seen]
    for number, stmt in _statements(text):
        lower = stmt.lower()
        end = _END.match(lower)
        if end:
            kind = end.group(1)
            if not stack:
                problems.append(f"line {number}: '{stmt}' closes nothing")
                continue
            top = stack.pop()[0]
            if kind and kind != top:
                problems.append(f"line {number}: '{stmt}' closes a {top} block")
            continue
        if lower.startswith("else") and stack and stack[-1][0] == "if":
            continue
        if lower == "contains":
            if not stack or stack[-1][0] not in ("module", "type") + _PROCEDURES:
                problems.append(f"line {number}: misplaced 'contains'")
            elif stack[-1][2]:
                problems.append(f"line {number}: second 'contains' in one scope")
            else:
                stack[-1][2] = True
            continue
        opened = next((kind for kind, pattern in _BLOCK_OPEN if pattern.match(stmt)), None)
        scope = next((frame for frame in reversed(stack) if frame[0] in _PROCEDURES), None)
        start = next((i for i, frame in enumerate(stack) if frame is scope), len(stack))
        in_body = scope is not None and not any(f[0] == "interface" for f in stack[start:])
        if in_body and opened not in _PROCEDURES:
            if _DECL.match(stmt):
                if scope[1] or stack[-1] is not scope:
                    problems.append(f"line {number}: declaration after executable statement: '{stmt}'")
            else:
                scope[1] = True
        if opened:
            stack.append([opened, False, False])
    for frame in reversed(stack):
        problems.append(f"unclosed {frame[0]} block")
    return problems
