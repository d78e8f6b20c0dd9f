"""Backend selection for the sweep kernels.

The compiled extension is used when it was built; otherwise, or when
``CONTOUR_CHAIN_PURE_PYTHON`` is set to a non-empty value, the pure-Python
kernels are used. Both expose ``successor_table`` and ``label_cycles``.
"""

import importlib
import os

from . import _kernels_py


def load_backend(name):
    """Return the kernel module for ``name`` ("cython" or "python")."""
    if name == "python":
        return _kernels_py
    if name == "cython":
        return importlib.import_module("contour_chain._kernels")
    raise ValueError(f"unknown kernel backend {name!r}")


def available_backends():
    names = ["python"]
    try:
        load_backend("cython")
    except ImportError:
        pass
    else:
        names.insert(0, "cython")
    return names


if os.environ.get("CONTOUR_CHAIN_PURE_PYTHON"):
    _backend = _kernels_py
    BACKEND = "python"
else:
    try:
        _backend = load_backend("cython")
        BACKEND = "cython"
    except ImportError:
        _backend = _kernels_py
        BACKEND = "python"

successor_table = _backend.successor_table
label_cycles = _backend.label_cycles
