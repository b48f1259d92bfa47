"""Hot-path numeric kernels with a compiled core and a pure NumPy fallback.

The Cython extension ``volteq.kernels._core`` is preferred when it built;
otherwise (or when ``VOLTEQ_KERNELS=pure`` is set) the NumPy implementation
in ``volteq.kernels.pure`` is used. Both expose the same functions; the
simulation consumes all randomness in Python, so traces stay reproducible
under either backend.

Attribute access dispatches to the active backend, so callers simply use
``kernels.effective_sinr_db(...)`` etc.
"""

import os

from . import pure as _pure

_BACKENDS = {"pure": _pure}
try:
    from . import _core as _compiled

    _BACKENDS["compiled"] = _compiled
except ImportError:
    _compiled = None

if os.environ.get("VOLTEQ_KERNELS", "").strip().lower() == "pure":
    _impl = _pure
else:
    _impl = _compiled if _compiled is not None else _pure


def backend() -> str:
    """Name of the active backend, 'compiled' or 'pure'."""
    return "compiled" if _impl is not _pure else "pure"


def available_backends() -> tuple[str, ...]:
    return tuple(sorted(_BACKENDS))


def get_backend(name: str):
    """Return a backend module by name (for benchmarks and parity tests)."""
    try:
        return _BACKENDS[name]
    except KeyError:
        raise ValueError(f"unknown kernel backend {name!r}; have {sorted(_BACKENDS)}") from None


def set_backend(name: str) -> None:
    """Switch the backend used by subsequent kernel calls."""
    global _impl
    _impl = get_backend(name)


def __getattr__(name):
    return getattr(_impl, name)
