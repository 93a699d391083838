"""S-pattern templates for the reducible 3x3 sign patterns.

Each template is stored in block-triangular orientation: a 2x2 block on
vertices 0, 1 and a 1x1 block on vertex 2 with nothing below the blocks.
Tokens: ``0*`` any sign, ``0+`` nonnegative, ``0-`` nonpositive, ``*`` nonzero.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .patterns import SPattern, SignPattern, orbit_keys, parse_spattern

_REQUIRES = {
    "A1": """0* *  0*
             *  0  0*
             0  0  0""",
    "A2": """+  0+ 0*
             +  -  0*
             0  0  0""",
    "A3": """+  +  0*
             -  +  0*
             0  0  0""",
    "A4": """0- +  0*
             -  0- 0*
             0  0  +""",
    "A5": """-  0* 0*
             0  0  0*
             0  0  +""",
    "A6": """0  0* 0*
             0  -  0*
             0  0  +""",
}

_ALLOWS = {
    "B1": """+  +  0*
             +  +  0*
             0  0  0""",
    "B2": """+  +  0*
             -  -  0*
             0  0  0""",
    "B3": """+  +  0*
             -  0* 0*
             0  0  +""",
    "B4": """0* +  0*
             +  0* 0*
             0  0  +""",
    "B5": """+  0* 0*
             0  0* 0*
             0  0  +""",
    "B6": """0- 0* 0*
             0  +  0*
             0  0  +""",
}


@dataclass(frozen=True)
class TemplateLibrary:
    requires_templates: dict[str, SPattern]
    allows_templates: dict[str, SPattern]


@lru_cache(maxsize=None)
def template_library() -> TemplateLibrary:
    req = {k: parse_spattern(v) for k, v in _REQUIRES.items()}
    allow = {k: parse_spattern(v) for k, v in _ALLOWS.items()}
    return TemplateLibrary(req, allow)


@lru_cache(maxsize=None)
def _closure(name: str) -> frozenset[tuple[int, ...]]:
    lib = template_library()
    T = lib.requires_templates.get(name) or lib.allows_templates[name]
    keys: set[tuple[int, ...]] = set()
    for P in T.fixed_signings():
        if P.key not in keys:
            keys |= orbit_keys(P)
    return frozenset(keys)


def matching_templates(P: SignPattern) -> list[str]:
    """Names of the templates having a fixed signing equivalent to ``P``."""
    if P.n != 3:
        return []
    lib = template_library()
    names = list(lib.requires_templates) + list(lib.allows_templates)
    return [name for name in names if P.key in _closure(name)]
