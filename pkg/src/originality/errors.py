"""Exceptions raised on degenerate input geometry."""

from __future__ import annotations


class DegenerateInputError(ValueError):
    """Input geometry makes the requested quantity undefined."""


class CollisionError(DegenerateInputError):
    """An asset sits at zero distance from one of its comparands."""

    def __init__(self, k: int, j: int, ids=None):
        self.k = int(k)
        self.j = int(j)
        super().__init__(
            f"collision: asset {_label(k, ids)} coincides with comparand {_label(j, ids)}"
        )


class DoubletonError(DegenerateInputError):
    """Two comparands coincide, which makes the reference energy infinite."""

    def __init__(self, i: int, j: int, ids=None):
        self.i = int(i)
        self.j = int(j)
        super().__init__(
            f"doubleton: comparands {_label(i, ids)} and {_label(j, ids)} coincide"
        )


def _label(idx: int, ids) -> str:
    if ids is not None:
        return repr(ids[idx])
    return f"#{idx}"
