"""Positivity of the map family: closed form, numerical search, CP and PPT.

The closed form (positive iff t <= n / l(pi)) is the ground truth for the
family.  The numerical route minimizes <e o f| W |e o f> over product unit
vectors by alternating eigenvector descent and can only certify violations;
a clean pass is reported as NoViolationFound, not as a proof.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Optional, Tuple

import numpy as np

from . import linalg
from .linalg import DimensionMismatch
from .maps import DTypeMap, Witness, choi_matrix
from .perm import Permutation, loop_decomposition

VIOLATION_TOL = 1e-8
PSD_TOL = 1e-10


class Status(str, Enum):
    NO_VIOLATION_FOUND = "NoViolationFound"
    VIOLATION_FOUND = "ViolationFound"
    CLOSED_FORM_POSITIVE = "ClosedFormPositive"
    CLOSED_FORM_NOT_POSITIVE = "ClosedFormNotPositive"


@dataclass(frozen=True)
class SearchConfig:
    restarts: int = 100
    max_iters: int = 200
    tol: float = 1e-12
    seed: int = 42

    def to_json(self) -> dict:
        return {"restarts": self.restarts, "max_iters": self.max_iters,
                "tol": self.tol, "seed": self.seed}

    @staticmethod
    def from_json(obj) -> "SearchConfig":
        return SearchConfig(restarts=int(obj.get("restarts", 100)),
                            max_iters=int(obj.get("max_iters", 200)),
                            tol=float(obj.get("tol", 1e-12)),
                            seed=int(obj.get("seed", 42)))


@dataclass(frozen=True)
class PositivityVerdict:
    status: Status
    min_value: float
    witness_pair: Optional[Tuple[np.ndarray, np.ndarray]]
    samples_used: int


def closed_form_positive(n: int, t: float, p: Permutation) -> bool:
    """Threshold test: the map is positive exactly when t <= n / l(pi)."""
    if not 0.0 <= t <= n:
        raise ValueError(f"t={t} outside [0, {n}]")
    return t <= n / loop_decomposition(p).length


def is_completely_positive(m: DTypeMap) -> Tuple[bool, float]:
    """CP test via the Choi matrix; returns (verdict, min eigenvalue)."""
    w = choi_matrix(m)
    lo = float(linalg.hermitian_eig(w.choi).eigenvalues[0])
    scale = max(linalg.operator_norm(w.choi), 1.0)
    return lo >= -PSD_TOL * scale, lo


def _random_units(dim: int, count: int, seed: int) -> np.ndarray:
    """count unit vectors, each from its own counter-derived generator."""
    out = np.empty((count, dim), dtype=np.complex128)
    for k in range(count):
        rng = np.random.default_rng([seed, k])
        v = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
        out[k] = v / np.linalg.norm(v)
    return out


def _min_eigvec_batch(mats: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    sym = (mats + np.conj(np.transpose(mats, (0, 2, 1)))) / 2.0
    w, v, _ = linalg._jacobi_batched(sym)
    return w[:, 0], v[:, :, 0]


def numeric_block_positivity(w: Witness, config: SearchConfig = SearchConfig()) -> PositivityVerdict:
    """Minimize the product-state quadratic form of w from many random starts.

    Each half-step contracts one factor out of w and takes the bottom
    eigenvector of the remaining small Hermitian matrix, so the sequence of
    values is non-increasing.  All restarts run in lockstep; the result is
    the minimum over restarts and is deterministic for a fixed seed.
    """
    da, db = w.dim_a, w.dim_b
    four = w.choi.reshape(da, db, da, db)
    e = _random_units(da, config.restarts, config.seed)
    vals = np.full(config.restarts, np.inf)
    f = None
    for _ in range(config.max_iters):
        a_e = np.einsum("bi,ijlk,bl->bjk", np.conj(e), four, e)
        _, f = _min_eigvec_batch(a_e)
        b_f = np.einsum("bj,ijlk,bk->bil", np.conj(f), four, f)
        cur, e = _min_eigvec_batch(b_f)
        if np.max(np.abs(vals - cur)) < config.tol:
            vals = cur
            break
        vals = cur
    best = int(np.argmin(vals))
    e_best, f_best = e[best], f[best]
    # report the value of the pair itself so verdict and pair always agree
    value = float(np.real(np.conj(np.kron(e_best, f_best)) @ w.choi @ np.kron(e_best, f_best)))
    if value < -VIOLATION_TOL:
        return PositivityVerdict(Status.VIOLATION_FOUND, value, (e_best, f_best), config.restarts)
    return PositivityVerdict(Status.NO_VIOLATION_FOUND, value, (e_best, f_best), config.restarts)


def is_ppt(m, dim_a: int, dim_b: int) -> bool:
    """Positive partial transpose: the partially transposed operator is PSD.

    An operator qualifies when its partial transpose has no negative
    spectrum, regardless of its own spectrum; the witness decompositions
    carry PPT parts that are themselves indefinite.
    """
    m = linalg.as_matrix(m)
    d = dim_a * dim_b
    if m.shape != (d, d):
        raise DimensionMismatch(f"matrix is {m.shape}, expected {(d, d)}")
    pt = linalg.partial_transpose(m, dim_a, dim_b, "B")
    lo = float(linalg.hermitian_eig(pt).eigenvalues[0])
    scale = max(linalg.operator_norm(pt), 1.0)
    return lo >= -PSD_TOL * scale
