"""Backend selection for the hot kernels.

The compiled Cython module is used when it imports; otherwise the
pure-Python twin is used. ``use_backend`` switches explicitly (tests and
the benchmark exercise both).
"""
from . import _pykernels

try:
    from . import _ckernels
except ImportError:  # extension not built
    _ckernels = None

BACKENDS = {"python": _pykernels}
if _ckernels is not None:
    BACKENDS["compiled"] = _ckernels

_active = _ckernels if _ckernels is not None else _pykernels


def backend_name():
    return "compiled" if _active is _ckernels and _ckernels is not None else "python"


def use_backend(name):
    """Select ``"compiled"`` or ``"python"``; returns the previous name."""
    global _active
    if name not in BACKENDS:
        raise ValueError(f"backend {name!r} unavailable; have {sorted(BACKENDS)}")
    previous = backend_name()
    _active = BACKENDS[name]
    return previous


def bessel_ik(nu, x):
    return _active.bessel_ik(float(nu), float(x))


def assemble_p1(vertices, triangles):
    return _active.assemble_p1(vertices, triangles)
