"""Selects the trial-kernel backend at import.

The compiled Cython extension is preferred; the numpy fallback is used when
it is missing.  ``BRANCHENV_BACKEND=python`` (or ``compiled``) forces a
choice.  Both backends produce bit-identical trials.
"""

from __future__ import annotations

import os

from . import _kernels_py

_forced = os.environ.get("BRANCHENV_BACKEND", "auto").lower()

if _forced == "python":
    _default = _kernels_py
elif _forced in ("auto", "compiled", ""):
    try:
        from . import _kernels as _compiled

        _default = _compiled
    except ImportError:
        if _forced == "compiled":
            raise
        _default = _kernels_py
else:
    raise RuntimeError(f"unknown BRANCHENV_BACKEND value {_forced!r}")


def active_backend() -> str:
    """Name of the backend used by default ('compiled' or 'python')."""
    return _default.BACKEND_NAME


def get_kernels(backend: str | None = None):
    """Resolve a kernels module: None for the default, or an explicit name."""
    if backend is None:
        return _default
    if backend == "python":
        return _kernels_py
    if backend == "compiled":
        from . import _kernels

        return _kernels
    raise ValueError(f"unknown backend {backend!r}")
