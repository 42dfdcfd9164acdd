"""Permutations of {1..n}, their orbits (loops) and the length statistic."""

from __future__ import annotations

import itertools
from dataclasses import dataclass


class InvalidPermutation(ValueError):
    pass


@dataclass(frozen=True)
class Permutation:
    """A bijection of {1..n}; images[i-1] = pi(i)."""

    images: tuple

    def __post_init__(self):
        n = len(self.images)
        object.__setattr__(self, "images", tuple(int(v) for v in self.images))
        if sorted(self.images) != list(range(1, n + 1)):
            raise InvalidPermutation(f"{self.images} is not a bijection of 1..{n}")

    @property
    def n(self) -> int:
        return len(self.images)

    def __call__(self, i: int) -> int:
        if not 1 <= i <= self.n:
            raise InvalidPermutation(f"index {i} out of range 1..{self.n}")
        return self.images[i - 1]

    def compose(self, other: "Permutation") -> "Permutation":
        """self after other: (self.compose(other))(i) = self(other(i))."""
        if other.n != self.n:
            raise InvalidPermutation("size mismatch in composition")
        return Permutation(tuple(self(other(i)) for i in range(1, self.n + 1)))

    @staticmethod
    def identity(n: int) -> "Permutation":
        return Permutation(tuple(range(1, n + 1)))

    @staticmethod
    def cycle(n: int) -> "Permutation":
        """The full cycle i -> i+1 (mod n)."""
        return Permutation(tuple(i % n + 1 for i in range(1, n + 1)))


@dataclass(frozen=True)
class LoopDecomposition:
    """Orbits of a permutation: disjoint sets covering {1..n}."""

    loops: tuple
    length: int
    cyclic: bool


def loop_decomposition(p: Permutation) -> LoopDecomposition:
    """Orbits of p, the maximal orbit size, and whether p is a single cycle."""
    seen = set()
    loops = []
    for start in range(1, p.n + 1):
        if start in seen:
            continue
        orbit = []
        i = start
        while i not in seen:
            seen.add(i)
            orbit.append(i)
            i = p(i)
        loops.append(frozenset(orbit))
    length = max(len(loop) for loop in loops)
    return LoopDecomposition(loops=tuple(loops), length=length, cyclic=(length == p.n))


def length(p: Permutation) -> int:
    return loop_decomposition(p).length


def parse_permutation(text: str) -> Permutation:
    """Parse the CLI form "2,1,3" meaning pi(1)=2, pi(2)=1, pi(3)=3."""
    try:
        images = tuple(int(tok) for tok in text.split(","))
    except ValueError as exc:
        raise InvalidPermutation(f"cannot parse permutation {text!r}") from exc
    return Permutation(images)


def to_text(p: Permutation) -> str:
    return ",".join(str(v) for v in p.images)


def all_permutations(n: int):
    """All n! permutations of {1..n}."""
    for images in itertools.permutations(range(1, n + 1)):
        yield Permutation(images)
