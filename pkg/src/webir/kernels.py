"""Backend selection for the hot loops.

The compiled ``_ckernels`` extension is used when it was built; otherwise,
or when ``WEBIR_PURE_PYTHON`` is set to a non-empty value, the pure-Python
``_pykernels`` module is used. Both expose the same functions and agree bit
for bit.
"""

import os

from . import _pykernels

if os.environ.get("WEBIR_PURE_PYTHON"):
    _impl = _pykernels
else:
    try:
        from . import _ckernels as _impl
    except ImportError:  # extension not built
        _impl = _pykernels

BACKEND = "compiled" if _impl is not _pykernels else "python"

pagerank_sweep = _impl.pagerank_sweep
hits_sweep = _impl.hits_sweep
fnv1a64 = _impl.fnv1a64
fingerprint_windows = _impl.fingerprint_windows
intersect_count = _impl.intersect_count


def backend(name):
    """Return the kernel module called ``name`` ("python" or "compiled")."""
    if name == "python":
        return _pykernels
    if name == "compiled":
        from . import _ckernels

        return _ckernels
    raise ValueError(f"unknown kernel backend {name!r}")
