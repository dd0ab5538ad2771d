"""Hot kernels for the linear-time decompose/label scan.

Each kernel is written once as a plain-Python function over the CSR arrays
from ``Network.csr`` and compiled a second time with numba when available.
Setting the environment variable ``REGIONCODE_NO_NUMBA`` (to any non-empty
value) forces the pure-Python path; the flag is read on every call so tests
and benchmarks can flip it without reimporting.
"""

from __future__ import annotations

import os

import numpy as np

try:
    from numba import njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - exercised only without numba
    njit = None
    HAVE_NUMBA = False

ENV_FLAG = "REGIONCODE_NO_NUMBA"


def numba_enabled() -> bool:
    return HAVE_NUMBA and not os.environ.get(ENV_FLAG)


def active_backend() -> str:
    return "numba" if numba_enabled() else "python"


def _owner_scan(in_ptr, in_links, owner):
    # Link j joins the region owning all of its incoming links, if they
    # agree; otherwise it starts a new region headed by itself.
    m = owner.shape[0]
    owner[0] = 0
    owner[1] = 1
    for j in range(2, m):
        s = in_ptr[j]
        o = owner[in_links[s]]
        for t in range(s + 1, in_ptr[j + 1]):
            if owner[in_links[t]] != o:
                o = j
                break
        owner[j] = o
    return owner


def _label_scan(in_ptr, in_links, owner, sess, x1, x2):
    # Seed each region with the sessions of the links it contains, then
    # close upward: a region whose parents all carry a label inherits it.
    # Region heads ascend topologically, so one pass suffices.
    m = owner.shape[0]
    for j in range(m):
        if sess[j] == 1:
            x1[owner[j]] = True
        elif sess[j] == 2:
            x2[owner[j]] = True
    for r in range(2, m):
        if owner[r] != r:
            continue
        s = in_ptr[r]
        e = in_ptr[r + 1]
        if not x1[r]:
            all1 = True
            for t in range(s, e):
                if not x1[owner[in_links[t]]]:
                    all1 = False
                    break
            if all1:
                x1[r] = True
        if not x2[r]:
            all2 = True
            for t in range(s, e):
                if not x2[owner[in_links[t]]]:
                    all2 = False
                    break
            if all2:
                x2[r] = True
    return x1, x2


if HAVE_NUMBA:
    _owner_scan_jit = njit(cache=True)(_owner_scan)
    _label_scan_jit = njit(cache=True)(_label_scan)


def owner_scan(in_ptr: np.ndarray, in_links: np.ndarray) -> np.ndarray:
    """Region owner (head position) per link, 0-based positions."""
    owner = np.empty(in_ptr.shape[0] - 1, dtype=np.int64)
    fn = _owner_scan_jit if numba_enabled() else _owner_scan
    return fn(in_ptr, in_links, owner)


def label_scan(in_ptr, in_links, owner, sess) -> tuple[np.ndarray, np.ndarray]:
    """Session-label flags per region head position."""
    m = owner.shape[0]
    x1 = np.zeros(m, dtype=np.bool_)
    x2 = np.zeros(m, dtype=np.bool_)
    fn = _label_scan_jit if numba_enabled() else _label_scan
    return fn(in_ptr, in_links, owner, sess, x1, x2)


def solvability_scan(in_ptr, in_links, sess):
    """Full decompose + label + singular count over CSR arrays.

    Returns (owner, x1, x2, n_regions, n_singular).
    """
    owner = owner_scan(in_ptr, in_links)
    x1, x2 = label_scan(in_ptr, in_links, owner, sess)
    heads = owner == np.arange(owner.shape[0])
    n_regions = int(heads.sum())
    n_singular = int((x1 & x2 & heads).sum())
    return owner, x1, x2, n_regions, n_singular


def owner_scan_counting(in_ptr, in_links) -> tuple[np.ndarray, int]:
    """Python-only owner scan that counts owner comparisons (for the
    work-bound check: the count never exceeds the total fan-in)."""
    m = in_ptr.shape[0] - 1
    owner = np.empty(m, dtype=np.int64)
    owner[0] = 0
    owner[1] = 1
    comparisons = 0
    for j in range(2, m):
        s = in_ptr[j]
        o = owner[in_links[s]]
        comparisons += 1
        for t in range(s + 1, in_ptr[j + 1]):
            comparisons += 1
            if owner[in_links[t]] != o:
                o = j
                break
        owner[j] = o
    return owner, comparisons


def warmup() -> None:
    """Trigger jit compilation so benchmarks exclude compile time."""
    if not numba_enabled():
        return
    in_ptr = np.array([0, 0, 0, 1, 2], dtype=np.int64)
    in_links = np.array([0, 1], dtype=np.int64)
    sess = np.array([1, 2, 0, 2], dtype=np.int8)
    solvability_scan(in_ptr, in_links, sess)
