"""Built-in example varieties used by the CLI, the suites and the tests.

Instances are cached so that repeated lookups share Groebner bases,
chart caches and jet caches.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache

from varfields.variety import Point, Variety, build_variety

_CATALOG = {
    "affine_line": ([], ("t",)),
    "affine_plane": ([], ("u", "v")),
    "circle": (["x^2 + y^2 - 1"], ("x", "y")),
    "hyperbola": (["x*y - 1"], ("x", "y")),
    "sphere": (["x^2 + y^2 + z^2 - 1"], ("x", "y", "z")),
}


def catalog_names() -> list[str]:
    return sorted(_CATALOG)


@lru_cache(maxsize=None)
def named_variety(name: str) -> Variety:
    try:
        gens, variables = _CATALOG[name]
    except KeyError:
        raise KeyError(f"unknown catalog variety {name!r}; try one of {catalog_names()}")
    return build_variety(gens, variables=variables)


def base_point(name: str) -> Point:
    """A canonical rational point for each catalog variety."""
    v = named_variety(name)
    if name == "affine_line":
        return Point(v.chart(0), [0])
    if name == "affine_plane":
        return Point(v.chart(0), [0, 0])
    if name == "circle":
        # chart N(2y): parameter x
        return Point(v.chart(1), [0, 1])
    if name == "hyperbola":
        # chart N(x): parameter x
        return Point(v.chart(1), [1, 1])
    if name == "sphere":
        # chart N(2z): parameters x, y
        return Point(v.chart(2), [0, 0, 1])
    raise KeyError(name)


def interior_point(name: str) -> Point:
    """A second rational point, useful for cross-checks."""
    v = named_variety(name)
    if name == "circle":
        return Point(v.chart(1), [Fraction(3, 5), Fraction(4, 5)])
    if name == "sphere":
        return Point(v.chart(2), [Fraction(3, 13), Fraction(4, 13), Fraction(12, 13)])
    return base_point(name)
