"""Generate Fortran 2003 bindings and C-linkage shims from C/C++ interface files.

>>> pair = generate(open("algorithm.i").read())
>>> pair.fortran_filename, pair.c_filename
('algorithm.f90', 'algorithm_wrap.cxx')
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .diagnostics import BindforgeError, Diagnostic
from .emit_c import emit_c_unit
from .emit_fortran import emit_fortran_unit
from .parser import parse_text
from .plan import ModulePlan
from .semantic import analyze

__version__ = "0.1.0"

__all__ = [
    "BindforgeError", "Diagnostic", "GeneratedPair", "ModulePlan",
    "analyze", "emit_c_unit", "emit_fortran_unit", "generate", "parse_text",
]


@dataclass(frozen=True)
class GeneratedPair:
    module_name: str
    c_source: str
    fortran_source: str
    plan: ModulePlan

    @property
    def c_filename(self) -> str:
        return f"{self.module_name}_wrap.cxx"

    @property
    def fortran_filename(self) -> str:
        return f"{self.module_name}.f90"

    @property
    def diagnostics(self) -> list:
        return self.plan.diagnostics


def generate(source: str, module_name: Optional[str] = None) -> GeneratedPair:
    """Parse, analyze and emit one interface; raises :class:`BindforgeError` on errors."""
    plan = analyze(parse_text(source), module_name)
    return GeneratedPair(plan.module_name, emit_c_unit(plan), emit_fortran_unit(plan), plan)
