"""Reference kernels in Python/numpy.

``pl_minimize`` is generic over the number type, so the exact-rational code
path always uses it.  ``grid_scan`` is vectorised with numpy in chunks.
"""

from __future__ import annotations

import math

import numpy as np

UNBOUNDED = 1
ATTAINED = 0

_CHUNK = 1 << 16


def _objective(deltas, values, h):
    return max(v - h * d for d, v in zip(deltas, values))


def pl_minimize(deltas, values, lo, hi, eps=0):
    """Minimise ``h -> max_k (values[k] - h * deltas[k])`` over ``[lo, hi]``.

    All ``values`` must be finite; ``lo``/``hi`` may be infinite.  Returns
    ``(value, h, status)`` where ``status`` is ``ATTAINED`` or ``UNBOUNDED``
    (value ``-inf``, ``h`` is ``None``).  Among minimisers the one smallest in
    absolute value is returned, ties going to the smaller ``h``.
    """
    if eps:
        deltas = [0.0 if abs(d) <= eps else d for d in deltas]
    pos = any(d > 0 for d in deltas)
    neg = any(d < 0 for d in deltas)
    zero = any(d == 0 for d in deltas)
    if hi == math.inf and pos and not (neg or zero):
        return -math.inf, None, UNBOUNDED
    if lo == -math.inf and neg and not (pos or zero):
        return -math.inf, None, UNBOUNDED

    zero_h = deltas[0] * 0 if deltas else 0
    cands = []
    if lo != -math.inf:
        cands.append(lo)
    if hi != math.inf:
        cands.append(hi)
    cands.append(min(max(zero_h, lo), hi))
    n = len(deltas)
    for i in range(n):
        di, vi = deltas[i], values[i]
        for k in range(i + 1, n):
            dk = deltas[k]
            if di == dk:
                continue
            h = (vi - values[k]) / (di - dk)
            if lo <= h <= hi:
                cands.append(h)

    scored = [(_objective(deltas, values, h), h) for h in cands]
    best = min(s for s, _ in scored)
    tol = eps * max(1.0, abs(best)) if eps else 0
    chosen = min((abs(h), h) for s, h in scored if s <= best + tol)[1]
    return best, chosen, ATTAINED


def grid_scan(deltas, values, h0, step, n):
    """Scan ``h = h0 + i * step`` for ``i < n``; return ``(min value, argmin i)``.

    Ties go to the lowest index.
    """
    d = np.asarray(deltas, dtype=float)
    v = np.asarray(values, dtype=float)
    best = math.inf
    best_i = 0
    for start in range(0, n, _CHUNK):
        idx = np.arange(start, min(start + _CHUNK, n), dtype=float)
        h = h0 + idx * step
        obj = (v[None, :] - h[:, None] * d[None, :]).max(axis=1)
        j = int(np.argmin(obj))
        if obj[j] < best:
            best = float(obj[j])
            best_i = start + j
    return best, best_i
