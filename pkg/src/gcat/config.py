"""Enumeration caps.

All exhaustive searches take a SizeCaps; the defaults fit every construction
the test corpus needs while refusing silent blowup.
"""

from dataclasses import dataclass


@dataclass(frozen=True)
class SizeCaps:
    max_objects: int = 64
    max_morphisms: int = 512
    max_candidates: int = 1_000_000
    max_simplices: int = 50_000


DEFAULT_CAPS = SizeCaps()

#: roomier caps for functor categories over groupoids (opt-in per call)
WIDE_CAPS = SizeCaps(max_objects=512, max_morphisms=300_000,
                     max_candidates=5_000_000, max_simplices=200_000)
