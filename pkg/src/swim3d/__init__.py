"""Kinematic locomotion of a three-link low-Reynolds swimmer with ball joints.

Submodules:
  liegroup    SO(3)/SE(3) primitives
  model       drag matrix, link Jacobians, local connection, force balance
  reconstruct geometric integration of the reconstruction equation
  gaitlab     Fourier gaits, connection field sampling, curvature maps
  optimizer   Nelder-Mead gait optimization
  checks      seeded invariant suite (also `swim3d check`)
  cli         the `swim3d` command line
"""

from .errors import SingularConfiguration, NonFiniteState
from .liegroup import GroupPose, BodyTwist
from .model import (
    DragParams,
    Shape,
    ShapeVelocity,
    LocalConnection,
    Wrench,
    drag_matrix,
    local_connection,
    body_velocity,
    net_wrench,
)
from .gaitlab import Gait, CoordinateSeries, Harmonic, RetracedPath, SliceSpec
from .reconstruct import SimConfig, TrajectorySample, integrate, cycle_displacement
from .optimizer import Objective, OptimizerConfig, evaluate_objective, optimize_gait

__all__ = [
    "SingularConfiguration",
    "NonFiniteState",
    "GroupPose",
    "BodyTwist",
    "DragParams",
    "Shape",
    "ShapeVelocity",
    "LocalConnection",
    "Wrench",
    "drag_matrix",
    "local_connection",
    "body_velocity",
    "net_wrench",
    "Gait",
    "CoordinateSeries",
    "Harmonic",
    "RetracedPath",
    "SliceSpec",
    "SimConfig",
    "TrajectorySample",
    "integrate",
    "cycle_displacement",
    "Objective",
    "OptimizerConfig",
    "evaluate_objective",
    "optimize_gait",
]

__version__ = "0.1.0"
