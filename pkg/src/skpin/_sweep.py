"""Selects the partition-sweep backend.

The compiled kernel (built from ``_sweep_c.pyx`` at install time) is used
when importable; otherwise the pure-Python fallback takes over with
identical results.  Set ``SKPIN_PURE_PYTHON=1`` to force the fallback,
e.g. for the backend-comparison benchmark.
"""

from __future__ import annotations

import os

if os.environ.get("SKPIN_PURE_PYTHON") == "1":
    from . import _sweep_py as _impl

    BACKEND = "python"
else:
    try:
        from . import _sweep_c as _impl  # type: ignore[attr-defined]

        BACKEND = "c"
    except ImportError:
        from . import _sweep_py as _impl

        BACKEND = "python"

sweep_min = _impl.sweep_min
sweep_shared = _impl.sweep_shared
