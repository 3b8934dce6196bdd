"""Kernel selection: the compiled extension when importable, else pure Python.

Set ``HOMALG_PURE_PYTHON=1`` to force the fallback.
"""

from __future__ import annotations

import os

from . import _pykernel

EXHAUSTED = _pykernel.EXHAUSTED
FOUND = _pykernel.FOUND
BUDGET = _pykernel.BUDGET
INTERRUPTED = _pykernel.INTERRUPTED

compiled_run = None
if os.environ.get("HOMALG_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from ._ckernel import run as compiled_run
    except ImportError:  # extension not built
        compiled_run = None

python_run = _pykernel.run
run = compiled_run if compiled_run is not None else python_run
BACKEND = "compiled" if compiled_run is not None else "python"


def get_run(backend: str | None = None):
    """Kernel entry point for ``backend`` in {None, "compiled", "python"}."""
    if backend is None:
        return run
    if backend == "python":
        return python_run
    if backend == "compiled":
        if compiled_run is None:
            raise RuntimeError("compiled kernel is not available")
        return compiled_run
    raise ValueError(f"unknown backend {backend!r}")
