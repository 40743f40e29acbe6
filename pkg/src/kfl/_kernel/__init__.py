"""Kernel dispatch: compiled extension when available, pure Python otherwise.

Set KFL_PURE=1 to force the pure implementation.
"""

import os

from . import pure

if os.environ.get("KFL_PURE"):
    _impl = pure
else:
    try:
        from . import _speedups as _impl  # type: ignore[no-redef]
    except ImportError:
        _impl = pure

IMPLEMENTATION = _impl.IMPLEMENTATION

OP_VAR = pure.OP_VAR
OP_BOT = pure.OP_BOT
OP_TOP = pure.OP_TOP
OP_NOT = pure.OP_NOT
OP_AND = pure.OP_AND
OP_OR = pure.OP_OR
OP_IMP = pure.OP_IMP
OP_IFF = pure.OP_IFF
OP_DIA = pure.OP_DIA
OP_BOX = pure.OP_BOX

compose_rows = _impl.compose_rows
closure_rows = _impl.closure_rows


def valid_on_frame(opcodes, arga, argb, rows, n, nvars):
    if _impl is not pure and (n > 64 or nvars * n > 62):
        return pure.valid_on_frame(opcodes, arga, argb, rows, n, nvars)
    return _impl.valid_on_frame(opcodes, arga, argb, rows, n, nvars)
