"""Timing of the tower word problem against word length."""

from __future__ import annotations

import random
import time
from dataclasses import dataclass

import numpy as np

from .tower import Tower
from .words import Word, letters_of, power, product_of


def random_word(alphabet, length: int, rng: random.Random) -> Word:
    letters = letters_of(alphabet)
    out: list = []
    while len(out) < length:
        l = rng.choice(letters)
        if out and out[-1] == (l[0], -l[1]):
            continue
        out.append(l)
    return Word(out, reduced=True)


def pinch_word(tower: Tower, length: int, rng: random.Random) -> Word:
    """Random letters interleaved with removable blocks ``t^e u^k t^-e``."""
    parts = []
    size = 0
    while size < length:
        if tower.levels and rng.random() < 0.5:
            lvl = rng.choice(tower.levels)
            e = rng.choice((1, -1))
            t = Word.gen(lvl.letter, e)
            block = product_of((t, power(lvl.center_of, rng.choice((1, -1, 2))), Word.gen(lvl.letter, -e)))
        else:
            block = random_word(tower.generators, rng.randint(1, 4), rng)
        parts.append(block)
        size += len(block)
    return product_of(parts)


@dataclass(frozen=True)
class BenchRow:
    length: int
    seconds: float
    samples: int


@dataclass(frozen=True)
class Fit:
    slope: float
    intercept: float
    r2: float


def fit_loglog(lengths, seconds) -> Fit:
    x = np.log(np.asarray(lengths, dtype=float))
    y = np.log(np.asarray(seconds, dtype=float))
    slope, intercept = np.polyfit(x, y, 1)
    pred = slope * x + intercept
    ss_res = float(np.sum((y - pred) ** 2))
    ss_tot = float(np.sum((y - y.mean()) ** 2))
    r2 = 1.0 - ss_res / ss_tot if ss_tot > 0 else 1.0
    return Fit(float(slope), float(intercept), r2)


def bench_wp(tower: Tower, lengths, samples: int = 5, seed: int = 0) -> list:
    """Mean wall time of ``tower.wp`` on random and pinch-heavy words."""
    rng = random.Random(seed)
    tower.wp(pinch_word(tower, 20, random.Random(seed + 1)))  # warm caches before timing
    rows = []
    for n in lengths:
        words = []
        for i in range(samples):
            w = random_word(tower.generators, n, rng) if i % 2 else pinch_word(tower, n, rng)
            words.append(w)
        start = time.perf_counter()
        for w in words:
            tower.wp(w)
        rows.append(BenchRow(n, (time.perf_counter() - start) / samples, samples))
    return rows
