"""Counter-based uniforms: trial ``i`` of a stream is a pure function of (seed, stream, i).

Generator: Philox4x64-10 as shipped by numpy (``numpy.random.Philox``), keyed by
the two 64-bit words ``[seed, stream]``. One Philox block yields four 64-bit
words; a trial that needs ``w`` words owns blocks ``i*B .. i*B + B - 1`` with
``B = ceil(w / 4)``. A word ``x`` becomes the double ``(x >> 11) * 2**-53``.

numpy bumps the counter before each block, so block ``k`` is the Philox
function applied to the 256-bit counter ``k + 1``. ``PHILOX_VECTORS`` holds
block 0 for a few keys; a port reproduces them to confirm it draws the same
stream.
"""

from __future__ import annotations

import numpy as np

WORDS_PER_BLOCK = 4

# First block (counter 0) for a few keys, as produced by numpy.random.Philox.
PHILOX_VECTORS: dict[tuple[int, int], tuple[int, int, int, int]] = {
    (0, 0): (213000021201967259, 4455796210202625458, 2055444239878205049, 10411612076246414556),
    (42, 1): (8185685891515899014, 15059776042128308896, 9389875783783897555, 7150301906005111658),
    (2**64 - 1, 7): (1381310767821039646, 15666479065048238017, 17163218004391144968, 1300010762035837471),
}


def blocks_per_trial(words: int) -> int:
    return -(-words // WORDS_PER_BLOCK)


def raw_words(seed: int, stream: int, start: int, count: int, words: int) -> np.ndarray:
    """uint64 array of shape (count, words) for trials ``start .. start + count - 1``."""
    if not 0 <= seed < 2**64 or not 0 <= stream < 2**64:
        raise ValueError("seed and stream must be unsigned 64-bit integers")
    b = blocks_per_trial(words)
    gen = np.random.Philox(key=np.array([seed, stream], dtype=np.uint64), counter=start * b)
    raw = gen.random_raw(count * b * WORDS_PER_BLOCK)
    return raw.reshape(count, b * WORDS_PER_BLOCK)[:, :words]


def uniforms(seed: int, stream: int, start: int, count: int, words: int) -> np.ndarray:
    """Doubles in [0, 1) with 53 random bits, shape (count, words)."""
    return (raw_words(seed, stream, start, count, words) >> np.uint64(11)).astype(np.float64) * 2.0**-53


def below(u: np.ndarray, k) -> np.ndarray:
    """Map uniforms to integers in [0, k); ``k`` may be an array."""
    return np.minimum((u * k).astype(np.int64), np.asarray(k) - 1)
