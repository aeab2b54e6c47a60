"""Backend selection for the hot loops.

The compiled ``_ckernels`` extension is used when it imports; otherwise (or
when ``PERFECT_FORGE_PURE=1`` is set) the numpy versions in ``_pykernels`` are
used.  Both return identical results; outputs of the pair kernels are sorted
here so callers never see backend-specific ordering.
"""

from __future__ import annotations

import os

import numpy as np

from . import _pykernels

_compiled = None
if os.environ.get("PERFECT_FORGE_PURE", "") not in ("1", "true", "yes"):
    try:
        from . import _ckernels as _compiled
    except ImportError:  # extension not built
        _compiled = None

BACKEND = "cython" if _compiled is not None else "python"


def get_backend(name: str | None = None):
    """Module implementing the kernels: ``"cython"``, ``"python"`` or the active one."""
    if name is None:
        name = BACKEND
    if name == "cython":
        if _compiled is None:
            raise ImportError("compiled kernels are not available")
        return _compiled
    if name == "python":
        return _pykernels
    raise ValueError(f"unknown backend {name!r}")


def _impl(backend):
    return get_backend(backend)


def _sorted_pairs(pairs: np.ndarray) -> np.ndarray:
    pairs = np.asarray(pairs, dtype=np.int64).reshape(-1, 2)
    if len(pairs) == 0:
        return pairs
    if pairs.min() >= 0 and pairs.max() < (1 << 31):
        packed = np.sort((pairs[:, 0] << 32) | pairs[:, 1])
        return np.stack([packed >> 32, packed & 0xFFFFFFFF], axis=1)
    return pairs[np.lexsort((pairs[:, 1], pairs[:, 0]))]


def ball_mark(keys, words, q: int, cells: int, backend: str | None = None):
    keys = np.ascontiguousarray(keys, dtype=np.int64)
    words = np.ascontiguousarray(words, dtype=np.uint8)
    return tuple(int(v) for v in _impl(backend).ball_mark(keys, words, int(q), int(cells)))


def min_distance(words, backend: str | None = None) -> int:
    words = np.ascontiguousarray(words, dtype=np.uint8)
    return int(_impl(backend).min_distance(words))


def pairs_at_distance(words, lo: int, hi: int, backend: str | None = None) -> np.ndarray:
    words = np.ascontiguousarray(words, dtype=np.uint8)
    return _sorted_pairs(_impl(backend).pairs_at_distance(words, int(lo), int(hi)))


def radius_pairs(sorted_keys, queries, q: int, radius: int, backend: str | None = None) -> np.ndarray:
    """(query row, key position) for every stored word at distance exactly ``radius`` (0, 1 or 2)."""
    sorted_keys = np.ascontiguousarray(sorted_keys, dtype=np.int64)
    queries = np.ascontiguousarray(queries, dtype=np.uint8)
    return _sorted_pairs(_impl(backend).radius_pairs(sorted_keys, queries, int(q), int(radius)))


def component_labels(n_vertices: int, edges, backend: str | None = None) -> np.ndarray:
    edges = np.ascontiguousarray(np.asarray(edges, dtype=np.int64).reshape(-1, 2))
    return np.asarray(_impl(backend).component_labels(int(n_vertices), edges), dtype=np.int64)
