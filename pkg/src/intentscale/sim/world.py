"""Planar peg-transfer task world.

Rings of two sizes must be carried onto same-color pegs. The world is
2-D (x, y); z is carried as 0 everywhere so the pipeline's 3-vector
types are untouched. Grasping and placing are proximity rules evaluated
once per tick: a free ring within its capture radius of the follower is
picked up, a grasped ring within its capture radius of the matching peg
snaps onto it. Small rings get half their radius as capture radius,
large rings their full radius, which is what makes small rings demand
finer motor control.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

SMALL_CAPTURE_FACTOR = 0.5
LARGE_CAPTURE_FACTOR = 1.0


class RingSize(enum.Enum):
    SMALL = "small"
    LARGE = "large"


class RingState(enum.Enum):
    FREE = "free"
    GRASPED = "grasped"
    PLACED = "placed"


@dataclass(frozen=True)
class Peg:
    position: np.ndarray  # (2,)
    color: str


@dataclass
class Ring:
    position: np.ndarray  # (2,)
    color: str
    size: RingSize
    radius: float
    state: RingState = RingState.FREE


@dataclass
class PegWorld:
    pegs: list[Peg]
    rings: list[Ring]
    bounds: tuple[tuple[float, float], tuple[float, float]] = ((-1.0, -1.0), (1.0, 1.0))
    capture_override: float | None = None

    def __post_init__(self):
        colors = [p.color for p in self.pegs]
        if len(set(colors)) != len(colors):
            raise ValueError("peg colors must be unique")
        by_color = {p.color: p for p in self.pegs}
        for ring in self.rings:
            if ring.color not in by_color:
                raise ValueError(f"ring color {ring.color!r} has no matching peg")
        self._peg_by_color = by_color

    def peg_for(self, ring: Ring) -> Peg:
        return self._peg_by_color[ring.color]

    def capture_radius(self, ring: Ring) -> float:
        if self.capture_override is not None:
            return self.capture_override
        factor = SMALL_CAPTURE_FACTOR if ring.size is RingSize.SMALL else LARGE_CAPTURE_FACTOR
        return factor * ring.radius

    @property
    def grasped_ring(self) -> Ring | None:
        for ring in self.rings:
            if ring.state is RingState.GRASPED:
                return ring
        return None

    @property
    def complete(self) -> bool:
        return all(r.state is RingState.PLACED for r in self.rings)

    def next_goal(self) -> tuple[str, np.ndarray, Ring] | None:
        """Current objective: ("grasp"|"place", target xy, ring).

        Rings are worked in declaration order; deterministic by design.
        """
        for ring in self.rings:
            if ring.state is RingState.PLACED:
                continue
            if ring.state is RingState.GRASPED:
                return "place", self.peg_for(ring).position, ring
            return "grasp", ring.position, ring
        return None

    def update(self, follower_xy: np.ndarray) -> None:
        """Apply the per-tick grasp/place rules at the follower position."""
        pos = np.asarray(follower_xy, dtype=float)[:2]
        held = self.grasped_ring
        if held is not None:
            held.position = pos.copy()
            peg = self.peg_for(held)
            if np.linalg.norm(pos - peg.position) <= self.capture_radius(held):
                held.position = peg.position.copy()
                held.state = RingState.PLACED
            return
        candidates = [
            (float(np.linalg.norm(pos - r.position)), i, r)
            for i, r in enumerate(self.rings)
            if r.state is RingState.FREE
        ]
        for dist, _, ring in sorted(candidates, key=lambda c: (c[0], c[1])):
            if dist <= self.capture_radius(ring):
                ring.state = RingState.GRASPED
                ring.position = pos.copy()
                break

    def in_bounds(self, xy) -> bool:
        (xmin, ymin), (xmax, ymax) = self.bounds
        return xmin <= xy[0] <= xmax and ymin <= xy[1] <= ymax
