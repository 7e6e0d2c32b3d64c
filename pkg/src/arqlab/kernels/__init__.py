"""Trellis decoding kernels: compiled extension with a pure-Python fallback.

The Cython build (`arqlab.kernels._fast`) is preferred; set
``ARQLAB_PURE_PYTHON=1`` to force the numpy fallback (used by the benchmark
and the parity tests).
"""

import os

from . import pure

if os.environ.get("ARQLAB_PURE_PYTHON"):
    _impl = pure
    BACKEND = "python"
else:
    try:
        from . import _fast as _impl
        BACKEND = "compiled"
    except ImportError:  # pragma: no cover - build-less installs
        _impl = pure
        BACKEND = "python"

conv_encode = _impl.conv_encode
conv_encode_batch = _impl.conv_encode_batch
viterbi = _impl.viterbi
list_viterbi = _impl.list_viterbi
bcjr = _impl.bcjr

__all__ = [
    "BACKEND",
    "conv_encode",
    "conv_encode_batch",
    "viterbi",
    "list_viterbi",
    "bcjr",
    "pure",
]
