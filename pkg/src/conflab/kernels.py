"""Kernel backend selection.

The compiled extension is used when it was built; otherwise (or when
``CONFLAB_PURE_PYTHON=1``) the numpy implementations are used.  Both
backends return identical integer counts; float sums agree to rounding.
"""

import os

from . import _pykernels

python_backend = _pykernels

if os.environ.get("CONFLAB_PURE_PYTHON") == "1":
    _impl = _pykernels
else:
    try:
        from . import _kernels as _impl
    except ImportError:
        _impl = _pykernels

try:
    from . import _kernels as compiled_backend
except ImportError:
    compiled_backend = None

BACKEND = "python" if _impl is _pykernels else "cython"

auc_pair_twice = _impl.auc_pair_twice
roc_counts = _impl.roc_counts
step_overlap = _impl.step_overlap
