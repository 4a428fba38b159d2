from .ik import IKParams, Unreachable, ik_dls
from .kin import clamp_to_limits, fk, fk_frames, jacobian, within_limits
from .model import ArmDescriptionError, ArmModel, JointSpec, load_arm, parse_arm
from .trajectory import DEFAULT_A_MAX, DEFAULT_DT, JointTrajectory, plan_joint_trajectory

__all__ = [
    "ArmDescriptionError",
    "ArmModel",
    "DEFAULT_A_MAX",
    "DEFAULT_DT",
    "IKParams",
    "JointSpec",
    "JointTrajectory",
    "Unreachable",
    "clamp_to_limits",
    "fk",
    "fk_frames",
    "ik_dls",
    "jacobian",
    "load_arm",
    "parse_arm",
    "plan_joint_trajectory",
    "within_limits",
]
