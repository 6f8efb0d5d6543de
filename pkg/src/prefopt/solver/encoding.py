"""Decision-vector encodings for the genetic search.

Two families:
  * MixedEncoding -- integer and real genes evolved directly (blend
    crossover, Gaussian mutation), optionally snapped to a grid.
  * KeyEncoding -- random-key vectors in [0,1)^n mapped through a
    problem-specific decoder that enforces constraints constructively.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from ..errors import InstanceError


def grid_axis(lo: float, hi: float, step: float) -> list[float]:
    """lo, lo+step, ... capped at hi; hi is always included."""
    if step <= 0:
        raise InstanceError(f"grid step must be positive, got {step}")
    values = []
    k = 0
    while True:
        v = lo + k * step
        if v > hi + 1e-9:
            break
        values.append(round(v, 10))
        k += 1
    if not values or values[-1] < hi - 1e-9:
        values.append(float(hi))
    return values


@dataclass(frozen=True)
class IntGene:
    lo: int
    hi: int

    def sample(self, rng: np.random.Generator) -> int:
        return int(rng.integers(self.lo, self.hi + 1))

    def crossover(self, a, b, rng: np.random.Generator):
        return a if rng.random() < 0.5 else b

    def mutate(self, value, rng: np.random.Generator):
        return self.sample(rng)


@dataclass(frozen=True)
class FloatGene:
    lo: float
    hi: float
    step: Optional[float] = None  # grid step; None keeps the gene continuous
    mutation_sigma_frac: float = 0.1
    _grid: tuple = field(init=False, default=(), repr=False, compare=False)

    def __post_init__(self):
        if self.step is not None:
            object.__setattr__(self, "_grid", tuple(grid_axis(self.lo, self.hi, self.step)))

    def snap(self, value: float) -> float:
        value = min(max(value, self.lo), self.hi)
        if self.step is None:
            return float(value)
        # nearest grid member, lower on ties
        return float(min(self._grid, key=lambda g: (abs(g - value), g)))

    def sample(self, rng: np.random.Generator) -> float:
        return self.snap(self.lo + rng.random() * (self.hi - self.lo))

    def crossover(self, a, b, rng: np.random.Generator):
        u = rng.random()  # blend crossover
        return self.snap(u * a + (1.0 - u) * b)

    def mutate(self, value, rng: np.random.Generator):
        sigma = self.mutation_sigma_frac * (self.hi - self.lo)
        return self.snap(value + rng.normal(0.0, sigma))


@dataclass(frozen=True)
class MixedEncoding:
    """Direct genotype over a fixed tuple of genes."""

    genes: tuple
    wrap: Callable[[tuple], object] = lambda t: t      # genotype -> decision object
    unwrap: Callable[[object], tuple] = lambda x: tuple(x)  # decision object -> genotype

    def sample(self, rng: np.random.Generator) -> tuple:
        return tuple(g.sample(rng) for g in self.genes)

    def crossover(self, a: tuple, b: tuple, rng: np.random.Generator) -> tuple:
        return tuple(g.crossover(x, y, rng) for g, x, y in zip(self.genes, a, b))

    def mutate(self, genotype: tuple, rng: np.random.Generator, rate: float) -> tuple:
        out = []
        for g, v in zip(self.genes, genotype):
            out.append(g.mutate(v, rng) if rng.random() < rate else v)
        return tuple(out)

    def decode(self, genotype: tuple) -> object:
        return self.wrap(genotype)

    def encode(self, x: object) -> tuple:
        genotype = self.unwrap(x)
        if len(genotype) != len(self.genes):
            raise InstanceError(
                f"initial solution has {len(genotype)} genes, encoding expects {len(self.genes)}"
            )
        return genotype


@dataclass(frozen=True)
class KeyEncoding:
    """Random-key genotype decoded into a decision vector.

    The decoder must be total over [0,1)^n and is expected to enforce the
    instance's hard constraints constructively.
    """

    length: int
    decoder: Callable[[np.ndarray], object]
    encoder: Optional[Callable[[object], np.ndarray]] = None

    def sample(self, rng: np.random.Generator) -> np.ndarray:
        return rng.random(self.length)

    def decode(self, keys: np.ndarray) -> object:
        if len(keys) != self.length:
            raise InstanceError(f"key vector length {len(keys)} != {self.length}")
        return self.decoder(keys)

    def encode(self, x: object) -> np.ndarray:
        if self.encoder is None:
            raise InstanceError("this encoding cannot embed user-supplied initial solutions")
        keys = np.asarray(self.encoder(x), dtype=float)
        if len(keys) != self.length:
            raise InstanceError(f"encoder produced {len(keys)} keys, expected {self.length}")
        return keys


def genotype_key(genotype) -> tuple:
    """Hashable, lexicographically comparable view of a genotype."""
    if isinstance(genotype, np.ndarray):
        return tuple(float(v) for v in genotype)
    return tuple(genotype)
