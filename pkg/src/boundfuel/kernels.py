"""Backend selection for the hot kernels.

The compiled extension is used when it was built; otherwise the numpy
implementation is used.  ``set_backend`` switches explicitly (tests and the
benchmark use it to compare the two).
"""

from __future__ import annotations

from . import _kernels_py

try:  # pragma: no cover - depends on the build
    from . import _kernels as _kernels_c
except ImportError:  # pragma: no cover
    _kernels_c = None

__all__ = ["available_backends", "backend", "set_backend", "lindblad_rk4", "kraus_apply_local"]

_BACKENDS = {"python": _kernels_py}
if _kernels_c is not None:
    _BACKENDS["compiled"] = _kernels_c

_active = "compiled" if _kernels_c is not None else "python"


def available_backends() -> tuple[str, ...]:
    return tuple(_BACKENDS)


def backend() -> str:
    return _active


def set_backend(name: str) -> str:
    """Select ``"compiled"`` or ``"python"``; returns the previous backend."""
    global _active
    if name not in _BACKENDS:
        raise ValueError(f"backend {name!r} unavailable; have {available_backends()}")
    prev, _active = _active, name
    return prev


def lindblad_rk4(rho0, heff, jumps, dt, n_steps, stride):
    return _BACKENDS[_active].lindblad_rk4(rho0, heff, jumps, float(dt), int(n_steps), int(stride))


def kraus_apply_local(rho, kraus, left, d, right):
    return _BACKENDS[_active].kraus_apply_local(rho, kraus, int(left), int(d), int(right))
