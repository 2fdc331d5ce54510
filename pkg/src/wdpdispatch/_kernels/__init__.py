"""Grid-scan kernels behind the brute-force dispatch oracle.

The compiled Cython kernel is used when its extension module built; a
vectorized numpy implementation is the fallback. Set WDP_PURE_PYTHON=1 to
force the fallback. Both backends scan identical grids with identical
arithmetic and the same deterministic tie-break, so results do not depend
on which one is active.
"""

import os

from wdpdispatch._kernels import _grid_np

BACKEND = "numpy"
scan_box = _grid_np.scan_box

if not os.environ.get("WDP_PURE_PYTHON"):
    try:
        from wdpdispatch._kernels import _grid_cy

        BACKEND = "cython"
        scan_box = _grid_cy.scan_box
    except ImportError:
        pass


def available_backends() -> dict:
    """Importable backend name -> scan_box implementation."""
    impls = {"numpy": _grid_np.scan_box}
    try:
        from wdpdispatch._kernels import _grid_cy

        impls["cython"] = _grid_cy.scan_box
    except ImportError:
        pass
    return impls


__all__ = ["BACKEND", "scan_box", "available_backends"]
