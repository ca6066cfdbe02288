"""Hot kernels with a compiled core and a pure-Python fallback.

The Cython extension ``_ckernels`` is preferred when it has been built;
setting ``SPINCONC_PURE_PYTHON=1`` forces the NumPy/SciPy implementation.
``BACKEND`` names the implementation in use.
"""
import os

if os.environ.get("SPINCONC_PURE_PYTHON", "") not in ("", "0"):
    from ._pykernels import banded_matvec, directional_values, refine_direction

    BACKEND = "python"
else:
    try:
        from ._ckernels import banded_matvec, directional_values, refine_direction

        BACKEND = "cython"
    except ImportError:
        from ._pykernels import banded_matvec, directional_values, refine_direction

        BACKEND = "python"

__all__ = ["BACKEND", "banded_matvec", "directional_values", "refine_direction"]
