"""Executable model of proxy-handle ownership.

Generated Fortran assignment and ``release`` code implement exactly these
transitions; the model doubles as the oracle for randomized trace tests.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Optional


@dataclass(frozen=True)
class ProxyState:
    cptr: Optional[int] = None
    own: bool = False
    rvalue: bool = False
    cnst: bool = False

    def __post_init__(self):
        if self.cptr is None and (self.own or self.rvalue or self.cnst):
            raise ValueError("a null handle carries no flags")

    @property
    def flags(self) -> int:
        return (0x01 if self.own else 0) | (0x02 if self.rvalue else 0) | (0x04 if self.cnst else 0)


NULL = ProxyState()


@dataclass
class AllocationLedger:
    live: set = field(default_factory=set)
    total_allocated: int = 0
    total_freed: int = 0
    double_free_events: int = 0
    use_after_free_events: int = 0
    notes: list = field(default_factory=list)

    @property
    def leaks(self) -> int:
        return len(self.live)

    def allocate(self) -> int:
        self.total_allocated += 1
        return self.total_allocated

    def free(self, obj: int):
        if obj not in self.live:
            self.double_free_events += 1
            return
        self.live.remove(obj)
        self.total_freed += 1

    def touch(self, obj: Optional[int]):
        """Record a dereference; dereferencing a freed object is a use-after-free.

        Copying a handle does not dereference it, so dangling aliases are only
        reported when something acts on the object.
        """
        if obj is not None and obj not in self.live:
            self.use_after_free_events += 1


def construct(ledger: AllocationLedger) -> ProxyState:
    """A constructor result: a fresh object flagged OWN|RVALUE."""
    obj = ledger.allocate()
    ledger.live.add(obj)
    return ProxyState(obj, own=True, rvalue=True)


def release(state: ProxyState, ledger: AllocationLedger) -> ProxyState:
    """Destroy the object if owned; the handle always ends up null."""
    if state.cptr is not None and state.own:
        ledger.touch(state.cptr)  # the destructor runs on the object
        ledger.free(state.cptr)
    return NULL


def assign(lhs: ProxyState, rhs: ProxyState, ledger: AllocationLedger):
    """``lhs = rhs``; returns the new ``(lhs, rhs)``.

    Assigning a handle onto one already pointing at the same object is a
    no-op, so an owner can never destroy the object it is about to alias.
    """
    if lhs.cptr is not None and lhs.cptr == rhs.cptr:
        return lhs, rhs
    lhs = release(lhs, ledger)
    if rhs.rvalue:
        if not rhs.own:
            ledger.notes.append(f"rvalue handle {rhs.cptr} moved without ownership")
        return ProxyState(rhs.cptr, own=rhs.own, rvalue=False, cnst=rhs.cnst), NULL
    if rhs.cptr is None:
        return NULL, rhs
    return ProxyState(rhs.cptr, own=False, rvalue=False, cnst=rhs.cnst), rhs


def parse_trace(text: str) -> list:
    """Parse ``NEW v`` / ``MOVE dst Ctor`` / ``ALIAS dst src`` / ``RELEASE v`` lines."""
    ops = []
    arity = {"NEW": 1, "MOVE": 2, "ALIAS": 2, "RELEASE": 1}
    for lineno, line in enumerate(text.splitlines(), 1):
        words = line.split("#", 1)[0].split()
        if not words:
            continue
        op = words[0].upper()
        if op not in arity or len(words) != arity[op] + 1:
            raise ValueError(f"line {lineno}: cannot parse trace operation {line.strip()!r}")
        ops.append((op, *words[1:]))
    return ops


def run_trace(ops, end_of_scope: bool = True) -> AllocationLedger:
    """Execute trace operations against fresh variables and return the ledger.

    ``NEW v`` and ``MOVE v Ctor`` both assign a constructor result to ``v``.
    Variables still set at the end are released, mirroring scope exit.
    """
    if isinstance(ops, str):
        ops = parse_trace(ops)
    ledger = AllocationLedger()
    env = {}
    for op in ops:
        kind, target = op[0], op[1]
        if kind in ("NEW", "MOVE"):
            env[target], _ = assign(env.get(target, NULL), construct(ledger), ledger)
        elif kind == "ALIAS":
            env[target], env[op[2]] = assign(env.get(target, NULL), env.get(op[2], NULL), ledger)
        elif kind == "RELEASE":
            env[target] = release(env.get(target, NULL), ledger)
        else:
            raise ValueError(f"unknown trace operation {kind!r}")
    if end_of_scope:
        for name in sorted(env):
            env[name] = release(env[name], ledger)
    return ledger


def owning_handles(env: dict) -> dict:
    """Map object id -> number of handles claiming ownership of it."""
    counts = {}
    for state in env.values():
        if state.own:
            counts[state.cptr] = counts.get(state.cptr, 0) + 1
    return counts


def random_trace(rng: random.Random, max_length: int = 50, max_vars: int = 8) -> list:
    """A well-formed random trace over at most ``max_vars`` variables."""
    names = [f"v{i}" for i in range(rng.randint(1, max_vars))]
    ops = []
    for _ in range(rng.randint(0, max_length)):
        choice = rng.random()
        dst = rng.choice(names)
        if choice < 0.3:
            ops.append(("NEW", dst))
        elif choice < 0.45:
            ops.append(("MOVE", dst, "Foo"))
        elif choice < 0.8:
            ops.append(("ALIAS", dst, rng.choice(names)))
        else:
            ops.append(("RELEASE", dst))
    return ops


def format_trace(ops) -> str:
    return "".join(" ".join(op) + "\n" for op in ops)


# Two owners created in turn, an alias taken, both released.
OWNER_ALIAS_TRACE = """\
MOVE owner Foo
MOVE owner Foo
ALIAS alias owner
RELEASE alias
RELEASE owner
"""
