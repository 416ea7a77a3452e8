"""Model-comparison games as comonads on finite relational structures."""

from .structures import (Graph, Hom, Structure, Vocabulary, check_hom, find_hom,
                         gaifman, is_partial_hom, is_partial_iso, parse_structure,
                         serialize_structure)

__all__ = [
    "Graph", "Hom", "Structure", "Vocabulary", "check_hom", "find_hom",
    "gaifman", "is_partial_hom", "is_partial_iso", "parse_structure",
    "serialize_structure",
]

__version__ = "0.1.0"
