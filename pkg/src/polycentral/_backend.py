"""Select the compiled kernel when available, else the pure-Python one.

Set ``POLYCENTRAL_PURE_PYTHON=1`` to force the fallback.
"""

import os
import sys

from . import _kernel as pure

BACKEND = "python"
kernel = pure

if os.environ.get("POLYCENTRAL_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from . import _ckernel as compiled
    except ImportError:
        compiled = None
    else:
        kernel = compiled
        BACKEND = "cython"
else:
    compiled = None

# rewriting recursion depth grows with the total degree of monomials
if sys.getrecursionlimit() < 20000:
    sys.setrecursionlimit(20000)

Rewriter = kernel.Rewriter
rref = kernel.rref


def available_backends():
    out = {"python": pure}
    if compiled is not None:
        out["cython"] = compiled
    else:
        try:
            from . import _ckernel
        except ImportError:
            pass
        else:
            out["cython"] = _ckernel
    return out
