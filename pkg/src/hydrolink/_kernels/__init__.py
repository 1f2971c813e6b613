"""Symbol-rate equalizer kernel, compiled when available.

The adaptive feedback loop is inherently sequential (each decision feeds
the next output), so it cannot be vectorized; the compiled extension
removes the per-symbol interpreter overhead.  Set ``HYDROLINK_PURE_PYTHON=1``
to force the fallback, e.g. to benchmark or debug.
"""

import os

_force_pure = os.environ.get("HYDROLINK_PURE_PYTHON", "") not in ("", "0")

if _force_pure:
    from ._dfe_py import dfe_run

    BACKEND = "python"
else:
    try:
        from ._dfe_cy import dfe_run  # type: ignore[no-redef]

        BACKEND = "cython"
    except ImportError:
        from ._dfe_py import dfe_run  # type: ignore[no-redef]

        BACKEND = "python"

__all__ = ["dfe_run", "BACKEND"]
