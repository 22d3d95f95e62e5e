"""Strip geometry: the waveguide {0 < x2 < pi} with a bottom-edge window.

The strip has fixed height pi.  The window is the open segment
{|x1| < l, x2 = 0} on the bottom edge; everywhere else on the boundary
a Dirichlet condition applies.  For numerics the strip is truncated to
|x1| <= L with Dirichlet ends.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

HEIGHT = math.pi


class GeometryError(ValueError):
    """Raised when a geometric precondition fails (ball outside strip, etc.)."""


@dataclass(frozen=True)
class StripGeometry:
    """Truncated strip [-L, L] x (0, pi) with a window of half-length l."""

    half_width_l: float
    truncation_L: float
    height: float = HEIGHT

    def __post_init__(self):
        if not 0.0 <= self.half_width_l < self.truncation_L:
            raise GeometryError(
                f"need 0 <= l < L, got l={self.half_width_l}, L={self.truncation_L}"
            )
        if self.height != HEIGHT:
            raise GeometryError("strip height is fixed at pi")

    @property
    def l(self) -> float:
        return self.half_width_l

    @property
    def L(self) -> float:
        return self.truncation_L

    def contains(self, x1: float, x2: float) -> bool:
        """Strict interior of the (untruncated) strip."""
        return 0.0 < x2 < self.height

    def ball_inside(self, p, r: float) -> bool:
        """Whether the closed ball B(p, r) lies strictly inside the strip."""
        _, p2 = p
        return r < min(p2, self.height - p2)

    def ball_clear_of_window(self, p, r: float, side: int) -> bool:
        """Whether B(p, r) lies entirely left (side=-1) or right (side=+1) of the window.

        "Left of the window" means inside {x1 < -l}; right is {x1 > l}.
        """
        p1, _ = p
        if side < 0:
            return p1 + r < -self.half_width_l
        return p1 - r > self.half_width_l

    def to_dict(self) -> dict:
        return {
            "half_width_l": self.half_width_l,
            "truncation_L": self.truncation_L,
            "height": self.height,
        }
