"""The two small forests on which the existence-failure certificate is exhibited."""

from __future__ import annotations

from .core import STD, TRIPLE, Forest, Structure


def std_gadget() -> Structure:
    """Six vertices around ``o``: a color-1 path ``o-u-o2`` and a color-2 star ``v`` with leaves ``o, w1, w2``."""
    edges = [("o", "u", 1), ("u", "o2", 1), ("o", "v", 2), ("v", "w1", 2), ("v", "w2", 2)]
    return Structure(Forest(["o", "u", "o2", "v", "w1", "w2"], edges, STD.k), variant=STD)


def triple_gadget() -> Structure:
    """Seven vertices: for each color ``i`` a color-``i`` path ``o-ui-oi``."""
    vertices = ["o"]
    edges = []
    for i in TRIPLE.colors:
        vertices += [f"u{i}", f"o{i}"]
        edges += [("o", f"u{i}", i), (f"u{i}", f"o{i}", i)]
    return Structure(Forest(vertices, edges, TRIPLE.k), variant=TRIPLE)
