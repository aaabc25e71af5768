"""Search-kernel dispatch.

The compiled kernel is used when it was built and the component fits in
64-bit label masks.  Set ``ROTLABEL_PURE_PYTHON=1`` to force the Python
kernel.
"""
from __future__ import annotations

import os

from . import _search

_compiled = None
if not os.environ.get("ROTLABEL_PURE_PYTHON"):
    try:
        from . import _csearch as _compiled  # type: ignore[no-redef]
    except ImportError:  # extension not built
        _compiled = None

BACKEND = "cython" if _compiled is not None else "python"
MAX_COMPILED_LABELS = 64


def available_backends() -> list[str]:
    return ["python", "cython"] if _compiled is not None else ["python"]


def _pick(n: int, backend: str | None):
    if backend is None:
        return _compiled if _compiled is not None and n <= MAX_COMPILED_LABELS else _search
    if backend == "python":
        return _search
    if backend == "cython":
        if _compiled is None:
            raise RuntimeError("compiled kernel not available")
        if n > MAX_COMPILED_LABELS:
            raise ValueError(f"compiled kernel handles at most {MAX_COMPILED_LABELS} labels")
        return _compiled
    raise ValueError(f"unknown backend {backend!r}")


def sweep_search(lengths, allowed, adj, n, k, lexi, inc_act, inc_runs, inc_rows, time_limit, lag=None, backend=None):
    mod = _pick(n, backend)
    return mod.sweep_search(lengths, allowed, adj, n, k, lexi, inc_act, inc_runs, inc_rows, time_limit, lag)


def max_independent_set(cands: int, adj, n: int | None = None, backend=None) -> int:
    if n is None:
        n = max(cands.bit_length(), len(adj))
    return _pick(n, backend).max_independent_set(cands, adj)


def max_independent_set_budget(cands: int, adj, n: int | None, time_limit: float, backend=None) -> tuple[int, bool]:
    """``(set, optimal)``; on expiry the best set found so far is returned."""
    if n is None:
        n = max(cands.bit_length(), len(adj))
    return _pick(n, backend).max_independent_set_budget(cands, adj, time_limit)
