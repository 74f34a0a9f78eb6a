"""ultragrade: grading analysis for ultragraph Leavitt path algebras."""

__version__ = "0.1.0"

from .errors import UltragradeError
from .model import (
    EdgeInst,
    InfinitePathRep,
    UltragraphPresentation,
    VertexRef,
    VertexSet,
    parse_presentation,
    print_presentation,
)

__all__ = [
    "__version__",
    "UltragradeError",
    "EdgeInst",
    "InfinitePathRep",
    "UltragraphPresentation",
    "VertexRef",
    "VertexSet",
    "parse_presentation",
    "print_presentation",
]
