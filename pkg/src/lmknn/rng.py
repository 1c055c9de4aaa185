"""PCG32 generator used for every random decision in the package.

This is the minimal ``pcg32`` recipe from pcg-random.org (XSH-RR output on a
64-bit LCG state), reproduced here so fold splits and landmark draws are
portable to any language that implements the same three routines:

* ``next_u32``:  ``old = state; state = old * 6364136223846793005 + inc``;
  output ``rotr32(((old >> 18) ^ old) >> 27, old >> 59)``.
* ``bounded(n)``: rejection sampling, drop draws below ``(2**32 - n) % n``,
  return ``r % n``.
* ``uniform()``: ``((a >> 5) * 2**26 + (b >> 6)) / 2**53`` from two draws.

Seeding follows ``pcg32_srandom(initstate, initseq)``.
"""

import numpy as np

_MASK64 = (1 << 64) - 1
_MASK32 = (1 << 32) - 1
_MULT = 6364136223846793005


class PCG32:
    __slots__ = ("state", "inc")

    def __init__(self, seed=0, stream=0):
        self.state = 0
        self.inc = ((int(stream) << 1) | 1) & _MASK64
        self.next_u32()
        self.state = (self.state + (int(seed) & _MASK64)) & _MASK64
        self.next_u32()

    def next_u32(self):
        old = self.state
        self.state = (old * _MULT + self.inc) & _MASK64
        xorshifted = (((old >> 18) ^ old) >> 27) & _MASK32
        rot = old >> 59
        return ((xorshifted >> rot) | (xorshifted << ((-rot) & 31))) & _MASK32

    def bounded(self, bound):
        """Uniform integer in ``[0, bound)`` without modulo bias."""
        if bound <= 0 or bound > _MASK32 + 1:
            raise ValueError(f"bound must be in [1, 2**32], got {bound}")
        threshold = ((_MASK32 + 1) - bound) % bound
        while True:
            r = self.next_u32()
            if r >= threshold:
                return r % bound

    def uniform(self):
        a = self.next_u32() >> 5
        b = self.next_u32() >> 6
        return (a * 67108864.0 + b) / 9007199254740992.0

    def shuffle(self, items):
        """In-place Fisher-Yates, walking from the front."""
        n = len(items)
        for i in range(n - 1):
            j = i + self.bounded(n - i)
            items[i], items[j] = items[j], items[i]
        return items

    def sample(self, population, n):
        """``n`` distinct elements via a partial Fisher-Yates pass."""
        pool = list(population)
        if n > len(pool):
            raise ValueError(f"cannot draw {n} items from a population of {len(pool)}")
        for i in range(n):
            j = i + self.bounded(len(pool) - i)
            pool[i], pool[j] = pool[j], pool[i]
        return pool[:n]

    def weighted_sample(self, population, weights, n, *, zero_weight="error"):
        """Draw ``n`` distinct elements, each draw proportional to weight.

        Draws are sequential: pick ``u * total`` on the running cumulative sum
        of the remaining weights, then zero the chosen weight.  When the
        remaining positive weight is exhausted, ``zero_weight="uniform"``
        continues with uniform draws among the zero-weight elements, and
        ``"error"`` raises.
        """
        population = np.asarray(population)
        w = np.asarray(weights, dtype=np.int64).copy()
        if w.shape != population.shape:
            raise ValueError("population and weights differ in length")
        if (w < 0).any():
            raise ValueError("weights must be nonnegative")
        if n > len(population):
            raise ValueError(f"cannot draw {n} items from a population of {len(population)}")
        taken = np.zeros(len(w), dtype=bool)
        chosen = []
        for _ in range(n):
            total = int(w.sum())
            if total > 0:
                cum = np.cumsum(w)
                target = self.uniform() * total
                idx = int(np.searchsorted(cum, target, side="right"))
            elif zero_weight == "uniform":
                rest = np.flatnonzero(~taken)
                idx = int(rest[self.bounded(len(rest))])
            else:
                raise ValueError(f"only {len(chosen)} elements carry positive weight; {n} requested")
            chosen.append(population[idx])
            taken[idx] = True
            w[idx] = 0
        return chosen
