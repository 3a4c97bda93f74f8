"""Backend selection for the special-function kernels.

The compiled ``_ckernels`` extension is used when it imports; otherwise
the numpy implementation in ``_pykernels`` takes over. Setting
``GRADDIV_PURE_PYTHON=1`` forces the fallback.
"""
import os

from . import _pykernels

if os.environ.get("GRADDIV_PURE_PYTHON"):
    _impl = _pykernels
else:
    try:
        from . import _ckernels as _impl
    except ImportError:  # extension not built
        _impl = _pykernels

BACKEND = "cython" if _impl is not _pykernels else "python"

sph_bessel_triplet = _impl.sph_bessel_triplet
legendre_triplet = _impl.legendre_triplet

__all__ = ["BACKEND", "sph_bessel_triplet", "legendre_triplet"]
