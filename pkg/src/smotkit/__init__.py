"""smotkit: a toolkit for semantic multi-object tracking.

Models SMOT annotations (trajectories, instance captions, directed
interaction triplets, video captions), runs detection-to-trajectory
association (BYTE / SORT), provides a deterministic reference
implementation of the fusion and interaction-head math, and computes the
full evaluation protocol (HOTA / CLEAR / identity, caption, and
interaction metrics) with a synthetic-scenario oracle harness.
"""

__version__ = "0.1.0"

from .errors import SmotKitError

__all__ = ["SmotKitError", "__version__"]
