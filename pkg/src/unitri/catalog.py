"""Named diagrams with vertex orientations taken from a planar drawing.

Rotation conventions: a vertex on a circle drawn counterclockwise lists
(outward edge, edge to the next vertex counterclockwise, edge to the
previous one).
"""

from __future__ import annotations

from .diagram import ConnectedDiagram, DiagramError, from_rotation, strut

__all__ = ["wheel", "theta", "strut", "dumbbell", "circle_chain", "ring", "legged_circle"]


def wheel(n: int, color: str = "x") -> ConnectedDiagram:
    """n-gon of trivalent vertices with one leg per vertex (n even, n >= 2)."""
    if n < 2 or n % 2:
        raise DiagramError(f"wheel needs an even size >= 2, got {n}")
    return legged_circle([color] * n)


def theta() -> ConnectedDiagram:
    """Two trivalent vertices joined by three edges, drawn in the plane."""
    return from_rotation({0: ("a", "b", "c"), 1: ("a", "c", "b")})


def legged_circle(colors, reversed_at=()) -> ConnectedDiagram:
    """Circle with one leg per vertex, legs colored in counterclockwise order.

    Vertices whose index is in ``reversed_at`` get the opposite cyclic order.
    """
    n = len(colors)
    if n < 1:
        raise DiagramError("a legged circle needs at least one leg")
    tri = {}
    legs = {}
    for i, c in enumerate(colors):
        rot = (("s", i), ("r", i), ("r", (i - 1) % n))
        if i in reversed_at:
            rot = (rot[0], rot[2], rot[1])
        tri[i] = rot
        legs[i] = (("s", i), c)
    return from_rotation(tri, legs)


def dumbbell(left: str = "y1", right: str = "y2") -> ConnectedDiagram:
    """Circle with one leg on each side (the two-legged wheel with mixed colors)."""
    return legged_circle([left, right])


def _circle(tri, i, left_edge, right_edge):
    tri[("u", i)] = (left_edge, ("lo", i), ("up", i))
    tri[("v", i)] = (right_edge, ("up", i), ("lo", i))


def circle_chain(k: int, left: str = "y1", right: str = "y2") -> ConnectedDiagram:
    """k circles in a row joined by single edges, with a leg at each end."""
    if k < 1:
        raise DiagramError("need at least one circle")
    tri: dict = {}
    for i in range(k):
        _circle(tri, i, ("bridge", i - 1) if i else "L", ("bridge", i) if i < k - 1 else "R")
    return from_rotation(tri, {"a": ("L", left), "b": ("R", right)})


def ring(k: int) -> ConnectedDiagram:
    """Closed ring of k circles, each joined to the next by one edge."""
    if k < 1:
        raise DiagramError("need at least one circle")
    tri: dict = {}
    for i in range(k):
        _circle(tri, i, ("bridge", (i - 1) % k), ("bridge", i))
    return from_rotation(tri)
