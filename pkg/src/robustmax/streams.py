"""Reproducible, splittable random streams.

A stream is identified by a root seed plus a tuple of integer labels. Child
streams are derived by appending labels, so the numbers a Monte Carlo trial
or a bootstrap draw sees depend only on *which* trial or draw it is, never
on the order or the thread in which work is scheduled.
"""
from __future__ import annotations

import zlib

import numpy as np


def _label(x) -> int:
    if isinstance(x, (int, np.integer)):
        if x < 0:
            raise ValueError("stream labels must be non-negative")
        return int(x)
    if isinstance(x, str):
        return zlib.crc32(x.encode("utf-8"))
    raise TypeError(f"unsupported stream label {x!r}")


class RngStream:
    """Counter-based (Philox) generator keyed by ``(seed, *labels)``."""

    def __init__(self, seed: int, key: tuple = ()):
        if seed < 0 or seed >= 2**64:
            raise ValueError("seed must be an unsigned 64-bit integer")
        self.seed = int(seed)
        self.key = tuple(_label(k) for k in key)
        ss = np.random.SeedSequence(self.seed, spawn_key=self.key)
        self.generator = np.random.Generator(np.random.Philox(ss))

    def __repr__(self):
        return f"RngStream(seed={self.seed}, key={self.key})"

    def child(self, *labels) -> RngStream:
        return RngStream(self.seed, self.key + tuple(labels))

    def normal(self, size=None):
        return self.generator.standard_normal(size)

    def uniform(self, size=None):
        """Uniform draws on ``[0, 1)``."""
        return self.generator.random(size)


def as_stream(seed) -> RngStream:
    return seed if isinstance(seed, RngStream) else RngStream(int(seed))
