"""
labmech: a physics kernel for laboratory mechanisms.

Four mechanism models ubiquitous in lab instruments (threaded contact via
approximate helix distance fields, detent click-stop knobs, eccentric
drives, and quasi-static liquid surfaces) plus a quasi-static simulation
harness with lossless replay traces and a command-line front end
(``labmech --help``).
"""

from .detent import DetentProfile, KnobState, detent_force, nearest_detent, step_knob
from .eccentric import (
    EccentricSpec,
    HingePair,
    eccentric_transform,
    factor_transforms,
    orbit_point,
)
from .errors import (
    DegenerateGradient,
    DegenerateTerm,
    LabmechError,
    MalformedTrace,
    MeshFormatError,
    NoConvergence,
    NonFiniteState,
    NonStarShapedCutLoop,
    NotWatertight,
    OpenCutLoop,
    VolumeOutOfRange,
    ZeroGravity,
)
from .harness import (
    FrameTrajectory,
    PoleStiffnessWarning,
    ProgressSpec,
    SceneConfig,
    effective_accel,
    progress_score,
    rotate_world_to_frame,
    run_knob_scene,
    run_liquid_scene,
    run_screw_scene,
)
from .helix import (
    EngagementReport,
    HelixAngleWarning,
    HelixSpec,
    SdfResult,
    helix_point,
    screw_advance,
    screw_pose,
    sdf_bounded,
    sdf_gradient,
    sdf_thread,
    sdf_unbounded,
    thread_engagement,
)
from .mesh import (
    ClipResult,
    HeightSearch,
    LiquidPlane,
    TriMesh,
    box_mesh,
    clip_volume,
    cylinder_mesh,
    height_search,
    icosphere_mesh,
    l_prism_mesh,
    liquid_geometry,
    load_mesh,
    mesh_volume,
    save_mesh,
    solve_height,
    unit_vector,
)
from .pendulum import (
    PendulumParams,
    PendulumState,
    direction_of,
    init_state,
    integrate_pendulum,
    lagrangian,
    ode_rhs,
    step_pendulum,
)
from .trace import ReplayTrace, read_trace, trace_table, write_trace

__version__ = "0.1.0"

__all__ = [
    "ClipResult",
    "DegenerateGradient",
    "DegenerateTerm",
    "DetentProfile",
    "EccentricSpec",
    "EngagementReport",
    "FrameTrajectory",
    "HeightSearch",
    "HelixAngleWarning",
    "HelixSpec",
    "HingePair",
    "KnobState",
    "LabmechError",
    "LiquidPlane",
    "MalformedTrace",
    "MeshFormatError",
    "NoConvergence",
    "NonFiniteState",
    "NonStarShapedCutLoop",
    "NotWatertight",
    "OpenCutLoop",
    "PendulumParams",
    "PoleStiffnessWarning",
    "PendulumState",
    "ProgressSpec",
    "ReplayTrace",
    "SceneConfig",
    "SdfResult",
    "TriMesh",
    "VolumeOutOfRange",
    "ZeroGravity",
    "box_mesh",
    "clip_volume",
    "cylinder_mesh",
    "detent_force",
    "direction_of",
    "eccentric_transform",
    "effective_accel",
    "factor_transforms",
    "height_search",
    "helix_point",
    "icosphere_mesh",
    "init_state",
    "integrate_pendulum",
    "l_prism_mesh",
    "lagrangian",
    "liquid_geometry",
    "load_mesh",
    "mesh_volume",
    "nearest_detent",
    "ode_rhs",
    "orbit_point",
    "progress_score",
    "read_trace",
    "rotate_world_to_frame",
    "run_knob_scene",
    "run_liquid_scene",
    "run_screw_scene",
    "save_mesh",
    "screw_advance",
    "screw_pose",
    "sdf_bounded",
    "sdf_gradient",
    "sdf_thread",
    "sdf_unbounded",
    "solve_height",
    "step_knob",
    "step_pendulum",
    "thread_engagement",
    "trace_table",
    "unit_vector",
    "write_trace",
]
