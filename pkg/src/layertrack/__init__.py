"""Parameter-uniform solver for convection-diffusion problems with a jump in the initial data."""

from .characteristic import CharacteristicCurve, HorizonDiagnostics, horizon_diagnostics, integrate_characteristic
from .errors import (
    InvalidMesh,
    LayerHitsBoundary,
    LayerTrackError,
    NonPositiveConvection,
    NonPositiveDifference,
    OutOfRange,
    SingularSystem,
)
from .harness import ConvergenceReport, epsilon_sweep, order_from_pair, render_table, two_mesh_difference
from .mesh import SpaceMesh, TimeMesh, build_space_mesh, transition_points
from .postprocess import bilinear_eval, export_csv, reconstruct_u
from .problem import ProblemSpec, get_example, make_example1, make_example2, validate
from .solver import DiscreteSolution, solve
from .transform import TransformContext

__all__ = [
    "CharacteristicCurve",
    "ConvergenceReport",
    "DiscreteSolution",
    "HorizonDiagnostics",
    "InvalidMesh",
    "LayerHitsBoundary",
    "LayerTrackError",
    "NonPositiveConvection",
    "NonPositiveDifference",
    "OutOfRange",
    "ProblemSpec",
    "SingularSystem",
    "SpaceMesh",
    "TimeMesh",
    "TransformContext",
    "bilinear_eval",
    "build_space_mesh",
    "epsilon_sweep",
    "export_csv",
    "get_example",
    "horizon_diagnostics",
    "integrate_characteristic",
    "make_example1",
    "make_example2",
    "order_from_pair",
    "reconstruct_u",
    "render_table",
    "solve",
    "transition_points",
    "two_mesh_difference",
    "validate",
]
