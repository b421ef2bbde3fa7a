"""Select the iteration kernel backend at import.

The compiled ``_kernel_c`` extension is preferred; if it was not built, or
``UNITSCALE_BACKEND=python`` is set, the numpy implementation in
``_kernel_py`` is used. ``BACKEND`` names the one in use.
"""
import os

from . import _kernel_py

_impl = _kernel_py
BACKEND = "python"
if os.environ.get("UNITSCALE_BACKEND", "").lower() != "python":
    try:
        from . import _kernel_c as _impl

        BACKEND = "cython"
    except ImportError:  # extension not built
        pass

run_steps = _impl.run_steps
batch_psi = _impl.batch_psi

__all__ = ["BACKEND", "run_steps", "batch_psi"]
