"""Grasp synthesis from a single demonstration."""

from ._core import (
    Error,
    GaussianMixture,
    apply_noise,
    default_config,
    demo_cloud,
    em_fit,
    estimate_frames,
    learn_demo,
    paired_t_test,
    pose_compose,
    pose_inverse,
    pose_transform,
    quat_exp,
    quat_log,
    synthesize_demo,
)

__all__ = [
    "Error",
    "GaussianMixture",
    "apply_noise",
    "default_config",
    "demo_cloud",
    "em_fit",
    "estimate_frames",
    "learn_demo",
    "paired_t_test",
    "pose_compose",
    "pose_inverse",
    "pose_transform",
    "quat_exp",
    "quat_log",
    "synthesize_demo",
]
