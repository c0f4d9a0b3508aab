"""Select the compiled text-scanning kernels when the extension is built.

``pip install`` with Cython and a C compiler present builds
``alignru._kernels``; otherwise the pure-Python fallback is used.
``KERNEL_IMPL`` names the active implementation ("compiled" or
"pure-python") so diagnostics and benchmarks can report it.
"""

from __future__ import annotations

try:
    from alignru._kernels import boundary_candidates, count_ws_tokens

    KERNEL_IMPL = "compiled"
except ImportError:  # pragma: no cover - depends on the build environment
    from alignru._kernels_py import boundary_candidates, count_ws_tokens

    KERNEL_IMPL = "pure-python"

__all__ = ["boundary_candidates", "count_ws_tokens", "KERNEL_IMPL"]
