"""Kernel backend selection.

Imports the compiled Cython kernels when the extension was built,
otherwise the pure-Python fallback.  Set ``VARFIELDS_KERNELS=py`` or
``=c`` to force a backend (``c`` raises if the extension is missing).
``BACKEND`` reports which one is live.
"""

import os

_requested = os.environ.get("VARFIELDS_KERNELS", "auto")
if _requested not in ("auto", "py", "c"):
    raise ValueError(f"VARFIELDS_KERNELS must be 'py' or 'c', got {_requested!r}")

if _requested == "py":
    from varfields.kernels import _pykernels as _impl

    BACKEND = "py"
else:
    try:
        from varfields.kernels import _ckernels as _impl  # type: ignore[no-redef]

        BACKEND = "c"
    except ImportError:
        if _requested == "c":
            raise
        from varfields.kernels import _pykernels as _impl  # type: ignore[no-redef]

        BACKEND = "py"

mono_mul = _impl.mono_mul
mono_deg = _impl.mono_deg
mono_divides = _impl.mono_divides
mono_div = _impl.mono_div
mono_lcm = _impl.mono_lcm
tmap_add = _impl.tmap_add
tmap_sub = _impl.tmap_sub
tmap_neg = _impl.tmap_neg
tmap_scale = _impl.tmap_scale
tmap_mul = _impl.tmap_mul
tmap_mul_term = _impl.tmap_mul_term
series_mul = _impl.series_mul

__all__ = [
    "BACKEND",
    "mono_mul",
    "mono_deg",
    "mono_divides",
    "mono_div",
    "mono_lcm",
    "tmap_add",
    "tmap_sub",
    "tmap_neg",
    "tmap_scale",
    "tmap_mul",
    "tmap_mul_term",
    "series_mul",
]
