"""Kernel selection.

The compiled ``_kernels`` module is used when importable; otherwise the
numpy fallback.  ``SIGNSUM_BACKEND=python`` forces the fallback and
``SIGNSUM_NUM_THREADS`` sets the thread count of the layered engine.
"""

from __future__ import annotations

import contextlib
import os
from types import ModuleType

from . import _fallback

try:
    from . import _kernels as _compiled
except ImportError:  # pragma: no cover - depends on the build
    _compiled = None

BACKENDS: dict[str, ModuleType] = {"python": _fallback}
if _compiled is not None:
    BACKENDS["compiled"] = _compiled

_active: ModuleType = _fallback
if _compiled is not None and os.environ.get("SIGNSUM_BACKEND", "").lower() != "python":
    _active = _compiled


def kernels() -> ModuleType:
    return _active


def backend_name() -> str:
    return "compiled" if _active is _compiled and _compiled is not None else "python"


def set_backend(name: str) -> None:
    global _active
    try:
        _active = BACKENDS[name]
    except KeyError:
        raise ValueError(f"backend {name!r} not available; have {sorted(BACKENDS)}") from None


@contextlib.contextmanager
def use_backend(name: str):
    global _active
    saved = _active
    set_backend(name)
    try:
        yield BACKENDS[name]
    finally:
        _active = saved


def default_threads() -> int:
    env = os.environ.get("SIGNSUM_NUM_THREADS")
    if env:
        return max(1, int(env))
    return 1
