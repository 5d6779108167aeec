"""Kernel selection.

The compiled extension is used when it imports; otherwise the numpy
fallback.  Setting ``QSBAI_PURE_PYTHON=1`` forces the fallback.
"""
import importlib
import os
from types import ModuleType

BACKENDS = ("cython", "numpy")
_MODULES = {"cython": "qsbai._kernels", "numpy": "qsbai._fallback"}


def load_backend(name: str) -> ModuleType:
    if name not in _MODULES:
        raise ValueError(f"unknown backend {name!r}; choose from {BACKENDS}")
    return importlib.import_module(_MODULES[name])


def available_backends() -> list[str]:
    found = []
    for name in BACKENDS:
        try:
            load_backend(name)
        except ImportError:
            continue
        found.append(name)
    return found


def _select() -> tuple[str, ModuleType]:
    if os.environ.get("QSBAI_PURE_PYTHON", "").strip() not in ("", "0"):
        return "numpy", load_backend("numpy")
    try:
        return "cython", load_backend("cython")
    except ImportError:
        return "numpy", load_backend("numpy")


BACKEND, kernels = _select()
