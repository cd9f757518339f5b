"""Seeded, splittable randomness.

All sampling goes through ``numpy.random.Generator`` on the Philox
counter-based bit generator so a seed reproduces the same run on every
platform. Child seeds for trials come from ``SeedSequence.spawn``.
"""

from typing import List, Sequence, Tuple, TypeVar

import numpy as np

from lllcore.config.constants import EngineConfig

T = TypeVar("T")


def make_rng(seed: int) -> np.random.Generator:
    """Return a Philox generator for ``seed``."""
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(seed)))


def keyed_rng(seed: int, *key: int) -> np.random.Generator:
    """Return a generator determined by ``seed`` and an integer key path.

    The key is a spawn key, so the stream never coincides with
    ``make_rng(seed)`` or with another key path under the same seed.
    """
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(seed, spawn_key=tuple(key))))


def spawn_seeds(seed: int, count: int) -> List[int]:
    """Derive ``count`` independent 63-bit child seeds from a master seed."""
    children = np.random.SeedSequence(seed).spawn(count)
    return [int(child.generate_state(1, dtype=np.uint64)[0] >> np.uint64(1)) for child in children]


def rng_identity() -> str:
    return f"{EngineConfig.RNG_NAME} ({EngineConfig.RNG_VERSION})"


def choose_uniform(rng: np.random.Generator, options: Sequence[T]) -> T:
    """Pick one element uniformly."""
    return options[int(rng.integers(len(options)))]


def choose_weighted(rng: np.random.Generator, outcomes: Sequence[Tuple[T, object]]) -> Tuple[T, object]:
    """Pick an (outcome, probability) pair with the given probabilities.

    Probabilities may be Fractions; the draw compares one uniform double
    against the running cumulative sum.
    """
    u = rng.random()
    cumulative = 0.0
    for outcome, prob in outcomes:
        cumulative += float(prob)
        if u < cumulative:
            return outcome, prob
    # rounding can leave u just above the float total
    for outcome, prob in reversed(outcomes):
        if prob > 0:
            return outcome, prob
    raise ValueError("Cannot sample from an empty distribution")
