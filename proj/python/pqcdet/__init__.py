"""Detector statistics and simulation toolkit for photonic quantum computing."""

try:
    from ._pqcdet import *  # noqa: F401,F403  (installed wheel layout)
    from . import _pqcdet as _core
except ImportError:  # in-tree build: extension sits next to the package on sys.path
    from _pqcdet import *  # noqa: F401,F403
    import _pqcdet as _core

__all__ = [name for name in dir(_core) if not name.startswith("_")]
