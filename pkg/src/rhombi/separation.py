"""Corner separation and intersection tests on pixelized zero sets.

Marked cells are treated as 8-connected and the unmarked complement as
4-connected, the dual pairing under which a diagonal chain of cells blocks
passage.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import ndimage

from .median import ZeroMask

_CORNERS = {(0, 0), (0, 1), (1, 0), (1, 1)}
_FOUR = ndimage.generate_binary_structure(2, 1)


@dataclass(frozen=True)
class CornerPair:
    """Two corners of the unit parameter square, e.g. ((0, 1), (1, 0))."""

    from_corner: tuple[int, int]
    to_corner: tuple[int, int]

    def __post_init__(self):
        if self.from_corner not in _CORNERS or self.to_corner not in _CORNERS:
            raise ValueError("corners must be drawn from (0,0), (0,1), (1,0), (1,1)")
        if self.from_corner == self.to_corner:
            raise ValueError("corner pair must name two distinct corners")

    def cells(self, resolution: int) -> tuple[tuple[int, int], tuple[int, int]]:
        last = resolution - 1
        return (
            (self.from_corner[0] * last, self.from_corner[1] * last),
            (self.to_corner[0] * last, self.to_corner[1] * last),
        )


ANTI_DIAGONAL = CornerPair((0, 1), (1, 0))
MAIN_DIAGONAL = CornerPair((0, 0), (1, 1))


def separates(mask: ZeroMask, pair: CornerPair = ANTI_DIAGONAL) -> bool:
    """True iff the pair's corner cells lie in different 4-components of the unmarked cells.

    A marked corner cell counts as separated.
    """
    a, b = pair.cells(mask.resolution)
    if mask.cells[a] or mask.cells[b]:
        return True
    labels, _ = ndimage.label(~mask.cells, structure=_FOUR)
    return bool(labels[a] != labels[b])


def masks_intersect(mask_k: ZeroMask, mask_l: ZeroMask) -> list[tuple[int, int]]:
    """Cells marked in both masks, in row-major order."""
    if mask_k.resolution != mask_l.resolution:
        raise ValueError(f"mask resolutions differ: {mask_k.resolution} vs {mask_l.resolution}")
    both = mask_k.cells & mask_l.cells
    return [(int(a), int(b)) for a, b in zip(*np.nonzero(both))]
