"""Backend selection for the hot kernels.

The compiled ``_core`` extension is used when it imports; otherwise the
numpy versions in ``_fallback`` are used.  Setting the environment
variable ``WAVEBEM_PURE_PYTHON=1`` forces the fallback.
"""

from __future__ import annotations

import logging
import os

from . import _fallback

logger = logging.getLogger(__name__)

_core = None
if os.environ.get("WAVEBEM_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from . import _core  # type: ignore[no-redef]
    except ImportError:  # pragma: no cover - depends on the build
        logger.debug("compiled kernels unavailable, using numpy fallback")
        _core = None

BACKEND = "compiled" if _core is not None else "python"

_impl = _core if _core is not None else _fallback

rect_log_tan = _impl.rect_log_tan
coupling_matvec = _impl.coupling_matvec
coupling_block = _impl.coupling_block
coupling_rmatvec = _impl.coupling_rmatvec
jacobi_eigenvalues = _impl.jacobi_eigenvalues


def backend(name: str):
    """Return the kernel namespace ``"compiled"`` or ``"python"`` explicitly."""
    if name == "python":
        return _fallback
    if name == "compiled":
        if _core is None:
            raise ImportError("compiled kernels are not built")
        return _core
    raise ValueError(f"unknown backend {name!r}")


def compiled_available() -> bool:
    return _core is not None


__all__ = [
    "BACKEND",
    "backend",
    "compiled_available",
    "rect_log_tan",
    "coupling_matvec",
    "coupling_block",
    "coupling_rmatvec",
    "jacobi_eigenvalues",
]
