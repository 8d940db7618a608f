"""Select the annealing kernel: compiled extension if importable, else pure Python.

Set ``SPHERICAL_THRACKLE_BACKEND=python`` to force the fallback.
"""

import os

from . import _anneal_py

BACKEND_ENV = "SPHERICAL_THRACKLE_BACKEND"

_kernel = _anneal_py
BACKEND = "python"
if os.environ.get(BACKEND_ENV, "").lower() != "python":
    try:
        from . import _anneal as _compiled
    except ImportError:  # pragma: no cover - depends on the build
        pass
    else:
        _kernel = _compiled
        BACKEND = "cython"

full_energy = _kernel.full_energy
anneal = _kernel.anneal


def get_kernel(name=None):
    """Kernel module by name ("python" or "cython"); default is the selected one."""
    if name is None:
        return _kernel
    if name == "python":
        return _anneal_py
    if name == "cython":
        from . import _anneal
        return _anneal
    raise ValueError(f"unknown backend {name!r}")
