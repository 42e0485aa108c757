"""Vectorised Philox-4x64-10 block function (Salmon et al., SC'11).

Stateless: ``philox4x64(counter, key)`` maps a 256-bit counter and a
128-bit key to four 64-bit words.  The result is bit-identical to
``numpy.random.Philox`` for the same (counter, key), which the test suite
uses as an external known-answer check.
"""

from __future__ import annotations

import numpy as np

_M0 = np.uint64(0xD2E7470EE14C6C93)
_M1 = np.uint64(0xCA5A826395121157)
_W0 = np.uint64(0x9E3779B97F4A7C15)
_W1 = np.uint64(0xBB67AE8584CAA73B)
_MASK32 = np.uint64(0xFFFFFFFF)
_S32 = np.uint64(32)
ROUNDS = 10


def _mulhilo(a: np.uint64, b: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    # 64x64 -> 128 via 32-bit limbs; uint64 products wrap silently
    a_lo, a_hi = a & _MASK32, a >> _S32
    b_lo, b_hi = b & _MASK32, b >> _S32
    t = a_lo * b_lo
    k = t >> _S32
    t = a_hi * b_lo + k
    w1 = t & _MASK32
    w2 = t >> _S32
    t = a_lo * b_hi + w1
    k = t >> _S32
    hi = a_hi * b_hi + w2 + k
    lo = a * b
    return hi, lo


def philox4x64(c0, c1, c2, c3, k0, k1) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """Apply the 10-round block function elementwise over broadcast arrays."""
    with np.errstate(over="ignore"):
        c0, c1, c2, c3 = np.broadcast_arrays(*(np.asarray(c, dtype=np.uint64) for c in (c0, c1, c2, c3)))
        k0 = np.asarray(k0, dtype=np.uint64)
        k1 = np.asarray(k1, dtype=np.uint64)
        for r in range(ROUNDS):
            if r:
                k0 = k0 + _W0
                k1 = k1 + _W1
            hi0, lo0 = _mulhilo(_M0, c0)
            hi1, lo1 = _mulhilo(_M1, c2)
            c0, c1, c2, c3 = hi1 ^ c1 ^ k0, lo1, hi0 ^ c3 ^ k1, lo0
    return c0, c1, c2, c3
