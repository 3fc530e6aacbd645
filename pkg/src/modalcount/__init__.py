"""Executable Kripke frames, branching-time games and partition counting."""

from modalcount.errors import ConsistencyError, InputError, LimitError
from modalcount.relations import Frame, canonical_key, frame_from_edges, has_property, relation_power

__all__ = [
    "ConsistencyError",
    "Frame",
    "InputError",
    "LimitError",
    "canonical_key",
    "frame_from_edges",
    "has_property",
    "relation_power",
]

__version__ = "0.1.0"
