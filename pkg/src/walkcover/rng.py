"""Counter-based random streams for reproducible parallel simulation.

Philox-4x32 (10 rounds), vectorized with numpy integer arithmetic.  The
64-bit seed forms the key; the 256-bit counter encodes ``(block, walk)``,
so every walk owns an independent stream addressed purely by its index.
Draws therefore depend only on ``(seed, walk, position-in-stream)`` and
results are identical under any batching or thread schedule.
"""

from __future__ import annotations

import numpy as np

_M0 = np.uint64(0xD2511F53)
_M1 = np.uint64(0xCD9E8D57)
_W0 = np.uint32(0x9E3779B9)
_W1 = np.uint32(0xBB67AE85)
_MASK32 = np.uint64(0xFFFFFFFF)


def philox4x32(c0, c1, c2, c3, k0, k1, rounds: int = 10):
    """One Philox-4x32 block per element; all inputs uint32 arrays of a
    common shape, returns the four output words."""
    x0 = np.asarray(c0, np.uint32)
    x1 = np.asarray(c1, np.uint32)
    x2 = np.asarray(c2, np.uint32)
    x3 = np.asarray(c3, np.uint32)
    key0 = np.asarray(k0, np.uint32).copy()
    key1 = np.asarray(k1, np.uint32).copy()
    for _ in range(rounds):
        p0 = _M0 * x0.astype(np.uint64)
        p1 = _M1 * x2.astype(np.uint64)
        hi0 = (p0 >> np.uint64(32)).astype(np.uint32)
        lo0 = (p0 & _MASK32).astype(np.uint32)
        hi1 = (p1 >> np.uint64(32)).astype(np.uint32)
        lo1 = (p1 & _MASK32).astype(np.uint32)
        x0, x1, x2, x3 = hi1 ^ x1 ^ key0, lo1, hi0 ^ x3 ^ key1, lo0
        key0 = key0 + _W0
        key1 = key1 + _W1
    return x0, x1, x2, x3


def walk_words(seed: int, walk_ids: np.ndarray, block0: int, nblocks: int) -> np.ndarray:
    """Raw uint32 words for each walk: words ``4*block0 .. 4*(block0 +
    nblocks) - 1`` of each walk's stream; shape (len(walk_ids), 4*nblocks)."""
    seed = int(seed) & 0xFFFFFFFFFFFFFFFF
    ids = np.asarray(walk_ids, np.uint64)
    W = ids.shape[0]
    blocks = block0 + np.arange(nblocks, dtype=np.uint64)[None, :]
    shape = (W, nblocks)
    c0 = np.broadcast_to((blocks & _MASK32).astype(np.uint32), shape)
    c1 = np.broadcast_to((blocks >> np.uint64(32)).astype(np.uint32), shape)
    c2 = np.broadcast_to((ids & _MASK32).astype(np.uint32)[:, None], shape)
    c3 = np.broadcast_to((ids >> np.uint64(32)).astype(np.uint32)[:, None], shape)
    k0 = np.full(shape, seed & 0xFFFFFFFF, np.uint32)
    k1 = np.full(shape, seed >> 32, np.uint32)
    x0, x1, x2, x3 = philox4x32(c0, c1, c2, c3, k0, k1)
    return np.stack([x0, x1, x2, x3], axis=-1).reshape(W, 4 * nblocks)


def walk_directions(seed: int, walk_ids: np.ndarray, step0: int, nsteps: int,
                    nsides: int) -> np.ndarray:
    """Steps ``step0 .. step0+nsteps-1`` of each walk as integers in
    ``[0, nsides)``; one word per step (modulo bias < nsides/2^32)."""
    block0, offset = divmod(step0, 4)
    nblocks = (offset + nsteps + 3) // 4
    words = walk_words(seed, walk_ids, block0, nblocks)
    return (words[:, offset:offset + nsteps] % np.uint32(nsides)).astype(np.int64)


def fresh_seed() -> int:
    """A seed drawn from the OS entropy pool (callers echo it back so
    nothing is silently irreproducible)."""
    import secrets

    return secrets.randbits(64)
