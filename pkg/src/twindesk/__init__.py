"""Desk-scale digital-twin teleoperation stack: bus, kinematics, scene,
twin loop, RGB-D pipeline, analysis, and orchestrator."""

__version__ = "0.1.0"
