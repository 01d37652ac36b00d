"""Select the compiled iteration kernels, falling back to pure Python.

Set ``ELGOT_ITER_PURE=1`` to force the fallback.
"""

import os

if os.environ.get("ELGOT_ITER_PURE", "") not in ("", "0"):
    from ._kernels_py import DIVERGE, bounded_chain, bounded_from, exit_code, iterate_all, iterate_from

    BACKEND = "python"
else:
    try:
        from ._kernels import DIVERGE, bounded_chain, bounded_from, exit_code, iterate_all, iterate_from

        BACKEND = "cython"
    except ImportError:
        from ._kernels_py import DIVERGE, bounded_chain, bounded_from, exit_code, iterate_all, iterate_from

        BACKEND = "python"

__all__ = [
    "BACKEND",
    "DIVERGE",
    "bounded_chain",
    "bounded_from",
    "exit_code",
    "iterate_all",
    "iterate_from",
]
