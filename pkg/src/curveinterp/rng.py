"""Counter-based random numbers: draw k of stream (seed, index) is
SHA-256(seed:index:k).  Any language with SHA-256 reproduces the sequence."""
from __future__ import annotations

import hashlib


def draw(seed: int, index: int, k: int) -> int:
    h = hashlib.sha256(f"{seed}:{index}:{k}".encode()).digest()
    return int.from_bytes(h[:8], "big")


def below(seed: int, index: int, k: int, n: int) -> tuple[int, int]:
    """Uniform integer in [0, n) by rejection; returns (value, next k)."""
    limit = (1 << 64) - (1 << 64) % n
    while True:
        v = draw(seed, index, k)
        k += 1
        if v < limit:
            return v % n, k


def sample(seed: int, index: int, population: int, size: int) -> list[int]:
    """Sorted uniform ``size``-subset of range(population) (partial Fisher-Yates)."""
    if size > population:
        raise ValueError("sample larger than population")
    pool = list(range(population))
    k = 0
    for i in range(size):
        j, k = below(seed, index, k, population - i)
        pool[i], pool[i + j] = pool[i + j], pool[i]
    return sorted(pool[:size])
