"""Kernel backend selection: compiled extension if built, numpy otherwise.

Set ``COLLARCUSP_PURE_PYTHON=1`` to force the numpy implementation even when
the extension is available (used by the benchmark and backend-parity tests).
"""

from __future__ import annotations

import os

from . import _kernels_py

if os.environ.get("COLLARCUSP_PURE_PYTHON") == "1":
    _impl = _kernels_py
else:
    try:
        from . import _kernels as _impl  # type: ignore[no-redef]
    except ImportError:
        _impl = _kernels_py

scaled_k_integrand = _impl.scaled_k_integrand
scaled_k_panel = _impl.scaled_k_panel
scaled_k_panel_batch = _impl.scaled_k_panel_batch


def backend_name() -> str:
    """'compiled' when the Cython extension is in use, else 'python'."""
    return _impl.BACKEND_NAME
