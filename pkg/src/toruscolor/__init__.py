"""Toolkit for coloring Eulerian triangulations of the torus.

Exact combinatorial and rational-arithmetic machinery: rotation-system torus
maps, homotopy classes and crossing numbers, the associated convex polygon,
disjoint homotopic cycle families, and a cut/complete/3-color/recolor/glue
pipeline producing verified 4-colorings.
"""

from .map import (TorusMap, CylinderGraph, MapError, MapFormatError,
                  MapInvariantError, load, loads, dump, from_rotations,
                  cut_along, glue_coloring, reglue_map)

__version__ = "0.1.0"

__all__ = [
    "TorusMap", "CylinderGraph", "MapError", "MapFormatError",
    "MapInvariantError", "load", "loads", "dump", "from_rotations",
    "cut_along", "glue_coloring", "reglue_map", "__version__",
]
