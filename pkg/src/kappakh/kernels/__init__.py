"""Hot kernels with a numba path and a pure-numpy fallback.

The backend is chosen at import time from the ``KAPPAKH_BACKEND`` environment
variable (``numba`` or ``numpy``).  The default is numba when it imports.

``circle_labels(letters, n, masks)``
    Circles of every resolution in ``masks``.  Returns ``circ[R, nseg]`` (circle
    index of each segment, circles numbered by their smallest segment),
    ``ncirc[R]`` and ``nontriv[R, nseg]`` (parity of closure arcs per circle).

``reduce_columns(red, combo, piv, low, start, stop, track)``
    Reduce packed GF(2) columns ``start:stop`` of ``red`` in place against the
    pivots already recorded in ``piv`` (pivot row -> column), lowest set row
    first.  When ``track`` is set, ``combo`` records each reduced column as a
    sum of original columns.

``reduce_vector(red, combo, piv, vec, acc, track)``
    Reduce ``vec`` in place; returns whether it reached zero.  ``acc``
    accumulates the combination used when ``track`` is set.
"""

from __future__ import annotations

import os

from . import _numpy

_requested = os.environ.get("KAPPAKH_BACKEND", "numba").strip().lower()
if _requested not in ("numba", "numpy"):
    raise ImportError(f"KAPPAKH_BACKEND must be 'numba' or 'numpy', got {_requested!r}")

BACKEND = "numpy"
if _requested == "numba":
    try:
        from . import _numba as _impl

        BACKEND = "numba"
    except ImportError:
        _impl = _numpy
else:
    _impl = _numpy

circle_labels = _impl.circle_labels
reduce_columns = _impl.reduce_columns
reduce_vector = _impl.reduce_vector

__all__ = ["BACKEND", "circle_labels", "reduce_columns", "reduce_vector"]
