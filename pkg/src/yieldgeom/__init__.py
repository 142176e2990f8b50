"""Critical yield numbers from exact two-step Cheeger optimisation.

Typical use::

    from yieldgeom import ExampleCase, solve_two_step
    sol = solve_two_step(ExampleCase("square-in-square", {"L": 3.33}).scene())
    sol.y_c, sol.lambda_c, sol.config
"""
from .analytic import ExampleCase, solve_example, sweep
from .cheeger import cheeger_annular, cheeger_convex
from .critical import YieldSolution, asymptotic_yield, solve_two_step, verify_feasible_ratio
from .enclosure import minimal_enclosure
from .errors import (
    ConsistencyError,
    EmptyOpeningError,
    GeometryError,
    ParameterError,
    ResolutionError,
    UnsupportedGeometryError,
    ValidationError,
)
from .geom import ConvexPolygon, Disk, Rectangle
from .morph import close_r, open_r
from .sceneio import Scene, load_scene, parse_scene, save_scene

__version__ = "0.1.0"

__all__ = [
    "ConsistencyError",
    "ConvexPolygon",
    "Disk",
    "EmptyOpeningError",
    "ExampleCase",
    "GeometryError",
    "ParameterError",
    "Rectangle",
    "ResolutionError",
    "Scene",
    "UnsupportedGeometryError",
    "ValidationError",
    "YieldSolution",
    "asymptotic_yield",
    "cheeger_annular",
    "cheeger_convex",
    "close_r",
    "load_scene",
    "minimal_enclosure",
    "open_r",
    "parse_scene",
    "save_scene",
    "solve_example",
    "solve_two_step",
    "sweep",
    "verify_feasible_ratio",
]
