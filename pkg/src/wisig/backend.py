"""Solver backend selection.

The compiled extension is preferred when importable; set
``WISIG_BACKEND=python`` or ``WISIG_BACKEND=cython`` to force a choice.
Selection happens once, at first use.
"""

from __future__ import annotations

import os

from . import _smo_py

_SELECTED = None  # (module, name)


def _select():
    global _SELECTED
    if _SELECTED is not None:
        return _SELECTED
    choice = os.environ.get("WISIG_BACKEND", "auto")
    if choice not in ("auto", "python", "cython"):
        raise ValueError(f"WISIG_BACKEND must be auto|python|cython, got {choice!r}")
    if choice in ("auto", "cython"):
        try:
            from . import _smo_c

            _SELECTED = (_smo_c, "cython")
            return _SELECTED
        except ImportError:
            if choice == "cython":
                raise
    _SELECTED = (_smo_py, "python")
    return _SELECTED


def backend_name() -> str:
    return _select()[1]


def smo_solve(K, y, c, tol, max_updates, trace=False):
    return _select()[0].smo_solve(K, y, c, tol, max_updates, trace=trace)
