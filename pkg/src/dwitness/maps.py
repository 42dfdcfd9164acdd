"""The D-type map family, its Choi matrices and the induced witnesses.

A family member is parametrized by a strength t in [0, n] and a permutation
pi of {1..n}.  Acting on X it keeps (n-t) times the diagonal, adds t times
the pi-shuffled diagonal, and subtracts X itself; an optional conjugation
term C X C^dag can be subtracted on top, which is how candidate witness
improvements are represented throughout the package.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import linalg
from .linalg import DimensionMismatch, as_matrix, dagger, matrix_from_json, matrix_to_json
from .perm import Permutation, parse_permutation, to_text

MAX_N = 4


@dataclass(frozen=True)
class DTypeMap:
    """Family member with strength t, permutation pi, optional subtraction C."""

    n: int
    t: float
    pi: Permutation
    subtraction: Optional[np.ndarray] = None

    def __post_init__(self):
        if not 2 <= self.n <= MAX_N:
            raise DimensionMismatch(f"n={self.n} outside supported range 2..{MAX_N}")
        if not 0.0 <= self.t <= self.n:
            raise ValueError(f"t={self.t} outside [0, {self.n}]")
        if self.pi.n != self.n:
            raise DimensionMismatch(f"permutation acts on {self.pi.n} symbols, map needs {self.n}")
        if self.subtraction is not None:
            c = as_matrix(self.subtraction)
            if c.shape != (self.n, self.n):
                raise DimensionMismatch(f"subtraction term is {c.shape}, expected {(self.n, self.n)}")
            object.__setattr__(self, "subtraction", c)


@dataclass(frozen=True)
class Witness:
    """Hermitian bipartite operator with its tensor dimensions."""

    dim_a: int
    dim_b: int
    choi: np.ndarray

    def __post_init__(self):
        w = as_matrix(self.choi)
        d = self.dim_a * self.dim_b
        if w.shape != (d, d):
            raise DimensionMismatch(f"choi is {w.shape}, expected {(d, d)}")
        if not linalg.is_hermitian(w, rtol=1e-12):
            raise linalg.NonHermitianInput("choi matrix is not Hermitian within 1e-12")
        object.__setattr__(self, "choi", w)


def apply_map(m: DTypeMap, x) -> np.ndarray:
    """Evaluate the map on an n x n matrix.

    Output diagonal j is (n-t-1) x_jj + t x_{pi(j),pi(j)}; off-diagonal
    entries are negated; then C x C^dag is subtracted when present.
    """
    x = as_matrix(x)
    if x.shape != (m.n, m.n):
        raise DimensionMismatch(f"input is {x.shape}, expected {(m.n, m.n)}")
    out = -x.copy()
    for j in range(1, m.n + 1):
        pj = m.pi(j)
        out[j - 1, j - 1] += (m.n - m.t) * x[j - 1, j - 1] + m.t * x[pj - 1, pj - 1]
    if m.subtraction is not None:
        out -= m.subtraction @ x @ dagger(m.subtraction)
    return out


def choi_matrix(m: DTypeMap) -> Witness:
    """Block matrix whose (i, j) block is the map applied to |i><j|."""
    n = m.n
    w = np.zeros((n * n, n * n), dtype=np.complex128)
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            w[(i - 1) * n:i * n, (j - 1) * n:j * n] = apply_map(m, linalg.matrix_unit(i, j, n))
    return Witness(dim_a=n, dim_b=n, choi=w)


def max_entangled(n: int) -> np.ndarray:
    """Projector onto (|11> + ... + |nn>)/sqrt(n)."""
    if n < 2:
        raise DimensionMismatch("need n >= 2")
    psi = np.zeros(n * n, dtype=np.complex128)
    for i in range(n):
        psi[i * n + i] = 1.0 / np.sqrt(n)
    return np.outer(psi, np.conj(psi))


def subtracted_map(m: DTypeMap, c) -> DTypeMap:
    """The same map minus the conjugation X -> C X C^dag."""
    c = as_matrix(c)
    if c.shape != (m.n, m.n):
        raise DimensionMismatch(f"subtraction term is {c.shape}, expected {(m.n, m.n)}")
    return DTypeMap(n=m.n, t=m.t, pi=m.pi, subtraction=c)


def map_to_json(m: DTypeMap) -> dict:
    return {
        "n": m.n,
        "t": float(m.t),
        "pi": list(m.pi.images),
        "subtraction": None if m.subtraction is None else matrix_to_json(m.subtraction),
    }


def map_from_json(obj) -> DTypeMap:
    pi = Permutation(tuple(obj["pi"]))
    sub = obj.get("subtraction")
    return DTypeMap(
        n=int(obj["n"]),
        t=float(obj["t"]),
        pi=pi,
        subtraction=None if sub is None else matrix_from_json(sub),
    )


def map_from_text(n: int, t: float, pi_text: str, subtraction=None) -> DTypeMap:
    return DTypeMap(n=n, t=t, pi=parse_permutation(pi_text), subtraction=subtraction)


def describe(m: DTypeMap) -> str:
    tag = f"n={m.n}, t={m.t}, pi={to_text(m.pi)}"
    if m.subtraction is not None:
        tag += ", with subtraction"
    return tag
