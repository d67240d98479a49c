"""Kernel backend selection.

The hot kernels (pairwise IoU and the gated assignment solve) exist twice:
a compiled Cython extension (``_ext``) and a pure-Python twin (``_pure``).
The compiled backend is used when importable; set ``SMOTKIT_KERNEL=pure``
or ``SMOTKIT_KERNEL=ext`` to force one. Both return identical results —
``benchmarks/bench_kernels.py`` compares their speed.
"""

from __future__ import annotations

import importlib
import os

from . import _pure

_requested = os.environ.get("SMOTKIT_KERNEL", "auto").lower()

_ext = None
if _requested in ("auto", "ext"):
    try:
        _ext = importlib.import_module(__name__ + "._ext")
    except ImportError:
        if _requested == "ext":
            raise ImportError(
                "SMOTKIT_KERNEL=ext but the compiled kernel is not available; "
                "reinstall the package with a C compiler present"
            )

_active = _ext if _ext is not None else _pure

BACKEND: str = _active.BACKEND
iou_matrix = _active.iou_matrix
solve_assignment = _active.solve_assignment


def available_backends() -> dict:
    """Importable backend modules keyed by name."""
    out = {"pure": _pure}
    if _ext is not None:
        out["ext"] = _ext
    return out
