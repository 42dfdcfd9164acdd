"""Self-contained dense complex linear algebra for small Hermitian problems.

Everything here is sized for matrices up to 16x16: the largest object the
package ever diagonalizes is the 16x16 Choi matrix of an n=4 map.  The
eigensolver is a cyclic Jacobi iteration on complex Hermitian input, which
at this scale is simple, provably convergent and accurate to near machine
precision; no external solver is involved.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

MAX_DIM = 16
HERMITICITY_RTOL = 1e-12
JACOBI_OFF_RTOL = 1e-14
JACOBI_MAX_SWEEPS = 100


class LinalgError(ValueError):
    """Base class for the numerical errors raised by this module."""


class DimensionMismatch(LinalgError):
    pass


class NonHermitianInput(LinalgError):
    pass


class NoConvergence(LinalgError):
    pass


class EmptyInput(LinalgError):
    pass


def as_matrix(data) -> np.ndarray:
    """Coerce to a 2-D complex128 array with finite entries."""
    m = np.asarray(data, dtype=np.complex128)
    if m.ndim != 2:
        raise DimensionMismatch(f"expected a 2-D matrix, got ndim={m.ndim}")
    if not np.all(np.isfinite(m.real)) or not np.all(np.isfinite(m.imag)):
        raise LinalgError("matrix contains NaN or Inf entries")
    return m


def dagger(m: np.ndarray) -> np.ndarray:
    return np.conj(np.transpose(m))


def frobenius(m: np.ndarray) -> float:
    return float(np.linalg.norm(m))


def matrix_unit(i: int, j: int, n: int) -> np.ndarray:
    """|i><j| in dimension n, 1-based indices."""
    if not (1 <= i <= n and 1 <= j <= n):
        raise DimensionMismatch(f"matrix unit ({i},{j}) out of range for n={n}")
    m = np.zeros((n, n), dtype=np.complex128)
    m[i - 1, j - 1] = 1.0
    return m


def hermitian_part(m: np.ndarray) -> np.ndarray:
    return (m + dagger(m)) / 2.0


def is_hermitian(m: np.ndarray, rtol: float = HERMITICITY_RTOL) -> bool:
    scale = max(frobenius(m), 1.0)
    return frobenius(m - dagger(m)) <= rtol * scale


@dataclass(frozen=True)
class HermitianEigenResult:
    """Eigenvalues sorted ascending; eigenvectors[:, k] pairs with eigenvalues[k]."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray


def _jacobi_batched(mats: np.ndarray, max_sweeps: int = JACOBI_MAX_SWEEPS,
                    off_rtol: float = JACOBI_OFF_RTOL):
    """Cyclic Jacobi on a batch of Hermitian matrices, shape (b, n, n).

    Returns (eigenvalues (b, n) ascending, eigenvectors (b, n, n) columns,
    converged flag).  All matrices in the batch are swept in lockstep;
    rotations for entries already below threshold degenerate to the identity.
    """
    a = np.array(mats, dtype=np.complex128)
    b, n, _ = a.shape
    v = np.broadcast_to(np.eye(n, dtype=np.complex128), (b, n, n)).copy()
    norms = np.maximum(np.linalg.norm(a, axis=(1, 2)), 1e-300)
    off_tol = off_rtol * norms
    converged = False
    for _ in range(max_sweeps):
        iu = np.triu_indices(n, k=1)
        off = np.sqrt(2.0 * np.sum(np.abs(a[:, iu[0], iu[1]]) ** 2, axis=1))
        if np.all(off <= off_tol):
            converged = True
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                g = a[:, p, q]
                absg = np.abs(g)
                active = absg > 1e-300
                phase = np.where(active, g / np.where(active, absg, 1.0), 1.0)
                diff = (a[:, q, q].real - a[:, p, p].real)
                tau = np.where(active, diff / (2.0 * np.where(active, absg, 1.0)), 0.0)
                sgn = np.where(tau >= 0.0, 1.0, -1.0)
                with np.errstate(over="ignore"):
                    # |tau| huge -> tan underflows to 0, the right limit
                    tan = np.where(active, sgn / (np.abs(tau) + np.sqrt(1.0 + tau * tau)), 0.0)
                c = 1.0 / np.sqrt(1.0 + tan * tan)
                s = (tan * c) * phase
                # A <- J^dag A J with J = [[c, s], [-conj(s), c]] at (p, q)
                col_p = a[:, :, p] * c[:, None] - a[:, :, q] * np.conj(s)[:, None]
                col_q = a[:, :, p] * s[:, None] + a[:, :, q] * c[:, None]
                a[:, :, p] = col_p
                a[:, :, q] = col_q
                row_p = c[:, None] * a[:, p, :] - s[:, None] * a[:, q, :]
                row_q = np.conj(s)[:, None] * a[:, p, :] + c[:, None] * a[:, q, :]
                a[:, p, :] = row_p
                a[:, q, :] = row_q
                a[:, p, q] = np.where(active, 0.0, a[:, p, q])
                a[:, q, p] = np.where(active, 0.0, a[:, q, p])
                vp = v[:, :, p] * c[:, None] - v[:, :, q] * np.conj(s)[:, None]
                vq = v[:, :, p] * s[:, None] + v[:, :, q] * c[:, None]
                v[:, :, p] = vp
                v[:, :, q] = vq
    if not converged:
        # the final sweep may have finished the job
        iu = np.triu_indices(n, k=1)
        off = np.sqrt(2.0 * np.sum(np.abs(a[:, iu[0], iu[1]]) ** 2, axis=1))
        converged = bool(np.all(off <= off_tol))
    w = np.diagonal(a, axis1=1, axis2=2).real.copy()
    order = np.argsort(w, axis=1, kind="stable")
    w = np.take_along_axis(w, order, axis=1)
    v = np.take_along_axis(v, order[:, None, :], axis=2)
    return w, v, converged


def hermitian_eig(m, tol: float = 1e-10) -> HermitianEigenResult:
    """Full eigendecomposition of a Hermitian matrix up to 16x16.

    Input within HERMITICITY_RTOL of Hermitian is symmetrized before the
    sweep; anything farther raises NonHermitianInput.
    """
    m = as_matrix(m)
    rows, cols = m.shape
    if rows != cols:
        raise DimensionMismatch(f"matrix is {rows}x{cols}, expected square")
    if rows > MAX_DIM:
        raise DimensionMismatch(f"dimension {rows} exceeds supported maximum {MAX_DIM}")
    if not is_hermitian(m):
        raise NonHermitianInput("matrix is not Hermitian within tolerance")
    sym = hermitian_part(m)
    w, v, converged = _jacobi_batched(sym[None, :, :])
    if not converged:
        raise NoConvergence(f"Jacobi sweep limit {JACOBI_MAX_SWEEPS} exceeded")
    result = HermitianEigenResult(eigenvalues=w[0], eigenvectors=v[0])
    recon = result.eigenvectors @ np.diag(result.eigenvalues) @ dagger(result.eigenvectors)
    if frobenius(recon - sym) > tol * max(frobenius(sym), 1.0):
        raise NoConvergence("reconstruction residual exceeds requested tolerance")
    return result


def operator_norm(m) -> float:
    """Largest |eigenvalue| of a Hermitian matrix."""
    res = hermitian_eig(m)
    return float(np.max(np.abs(res.eigenvalues)))


def min_eigenvalue(m) -> float:
    return float(hermitian_eig(m).eigenvalues[0])


def kron(a, b) -> np.ndarray:
    a = as_matrix(a)
    b = as_matrix(b)
    return np.kron(a, b)


def partial_transpose(m, dim_a: int, dim_b: int, subsystem: str = "B") -> np.ndarray:
    """Transpose one tensor factor of a (dim_a*dim_b)-dimensional operator."""
    m = as_matrix(m)
    d = dim_a * dim_b
    if m.shape != (d, d):
        raise DimensionMismatch(f"matrix is {m.shape}, expected {(d, d)} for dims ({dim_a},{dim_b})")
    four = m.reshape(dim_a, dim_b, dim_a, dim_b)
    if subsystem == "B":
        out = four.transpose(0, 3, 2, 1)
    elif subsystem == "A":
        out = four.transpose(2, 1, 0, 3)
    else:
        raise LinalgError(f"subsystem must be 'A' or 'B', got {subsystem!r}")
    return out.reshape(d, d).copy()


def numerical_rank(vectors, tol: float = 1e-8) -> int:
    """Rank of a vector family from the spectrum of its Gram matrix.

    Counts Gram eigenvalues above tol times the largest one.  Uses whichever
    of V^dag V / V V^dag is smaller so arbitrarily many vectors of dimension
    <= 16 are fine.
    """
    vecs = [np.asarray(v, dtype=np.complex128).reshape(-1) for v in vectors]
    if len(vecs) == 0:
        raise EmptyInput("no vectors given")
    dim = vecs[0].size
    for v in vecs:
        if v.size != dim:
            raise DimensionMismatch("vectors have mixed lengths")
    mat = np.stack(vecs, axis=1)  # dim x N
    if mat.shape[1] <= dim:
        gram = dagger(mat) @ mat
    else:
        gram = mat @ dagger(mat)
    if gram.shape[0] > MAX_DIM:
        raise DimensionMismatch(f"Gram dimension {gram.shape[0]} exceeds {MAX_DIM}")
    eigs = hermitian_eig(gram).eigenvalues
    top = float(eigs[-1])
    if top <= 0.0:
        return 0
    return int(np.sum(eigs > tol * top))


def matrix_to_json(m) -> dict:
    """Row-major {"rows", "cols", "data": [[re, im], ...]} encoding."""
    m = as_matrix(m)
    rows, cols = m.shape
    data = [[float(z.real), float(z.imag)] for z in m.reshape(-1)]
    return {"rows": rows, "cols": cols, "data": data}


def matrix_from_json(obj) -> np.ndarray:
    try:
        rows = int(obj["rows"])
        cols = int(obj["cols"])
        data = obj["data"]
    except (KeyError, TypeError) as exc:
        raise LinalgError(f"malformed matrix object: {exc}") from exc
    if rows <= 0 or cols <= 0:
        raise DimensionMismatch("matrix dimensions must be positive")
    if len(data) != rows * cols:
        raise DimensionMismatch(f"data length {len(data)} != rows*cols = {rows * cols}")
    flat = np.empty(rows * cols, dtype=np.complex128)
    for k, pair in enumerate(data):
        re, im = float(pair[0]), float(pair[1])
        if not (math.isfinite(re) and math.isfinite(im)):
            raise LinalgError("matrix entries must be finite")
        flat[k] = complex(re, im)
    return flat.reshape(rows, cols)


def matrix_dumps(m) -> str:
    return json.dumps(matrix_to_json(m))


def matrix_loads(text: str) -> np.ndarray:
    return matrix_from_json(json.loads(text))
