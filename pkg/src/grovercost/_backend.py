"""Select the compiled kernels when available, else the pure-Python ones.

Set ``GROVERCOST_PURE_PYTHON=1`` to force the fallback.
"""

import os

NAME = "python"

if os.environ.get("GROVERCOST_PURE_PYTHON", "") not in ("", "0"):
    from . import _kernels_py as kernels
else:
    try:
        from . import _kernels as kernels  # type: ignore[attr-defined]

        NAME = "compiled"
    except ImportError:  # extension not built
        from . import _kernels_py as kernels

simulate = kernels.simulate
schedule = kernels.schedule
