"""Hot numerical kernels with a compiled core and a NumPy fallback.

The Cython extension ``_core`` is used when it was built; otherwise the
pure NumPy implementations in ``_fallback`` take over.  Both expose the
same functions with identical semantics, and ``BACKEND`` records which
one is active.  ``backends()`` returns every importable implementation,
which the benchmark and the cross-checking tests iterate over.
"""

from . import _fallback

try:
    from . import _core  # type: ignore[attr-defined]

    _impl = _core
    BACKEND = "compiled"
except ImportError:  # pragma: no cover - depends on build environment
    _core = None
    _impl = _fallback
    BACKEND = "numpy"

circ_max_1d = _impl.circ_max_1d
circ_min_1d = _impl.circ_min_1d
circ_sum_1d = _impl.circ_sum_1d
slobodeckij_1d = _impl.slobodeckij_1d
slobodeckij_2d = _impl.slobodeckij_2d
min_dist_graph_1d = _impl.min_dist_graph_1d

_KERNEL_NAMES = (
    "circ_max_1d",
    "circ_min_1d",
    "circ_sum_1d",
    "slobodeckij_1d",
    "slobodeckij_2d",
    "min_dist_graph_1d",
)


def backends() -> dict:
    """Map backend name -> module for every importable implementation."""
    found = {"numpy": _fallback}
    if _core is not None:
        found["compiled"] = _core
    return found
