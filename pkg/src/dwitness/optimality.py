"""Witness optimality machinery for the n=3 family.

The verdict is a case split on the loop length of the permutation: loop
length 1 means the map is completely positive and induces no witness at
all; length 2 admits an explicit decomposition into a PSD part plus a part
with PSD partial transpose, so the witness is decomposable and not optimal;
length 3 is optimal exactly at t = 1, and below 1 a diagonal subtraction
diag(c, -c, 0) with c^2 <= 1-t keeps the map positive, which disqualifies
optimality.  The certificate is validated constructively: at every unit
vector x the identity and the subtraction operator are rewritten in terms
of the map's generators, and the resulting 2x6 local coefficient matrix
must be a contraction.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import List, Optional, Tuple

import numpy as np

from . import linalg
from .linalg import DimensionMismatch, as_matrix, matrix_unit
from .maps import DTypeMap, Witness, choi_matrix, subtracted_map
from .perm import Permutation, loop_decomposition
from .positivity import (PSD_TOL, SearchConfig, Status, closed_form_positive,
                         is_completely_positive, numeric_block_positivity)

ZERO_COMPONENT_TOL = 1e-12
UNIT_TOL = 1e-9
CONTRACTION_TOL = 1e-9
LOCUS_EIG_TOL = 1e-9
LOCUS_RANK_TOL = 1e-8
STATE_TOL = 1e-9
PROBE_SCALE_FLOOR = 0.05


class NotAWitness(ValueError):
    pass


class WrongLoopStructure(ValueError):
    pass


class OutOfCertificateRange(ValueError):
    pass


class NotUnitVector(ValueError):
    pass


class ContractionViolated(RuntimeError):
    def __init__(self, message, x=None, gram_eig=None):
        super().__init__(message)
        self.x = x
        self.gram_eig = gram_eig


class NotAState(ValueError):
    pass


class Reason(str, Enum):
    CYCLIC_T1 = "Cyclic_t1"
    COMPLETELY_POSITIVE = "CompletelyPositive"
    DECOMPOSABLE_L2 = "Decomposable_l2"
    CERTIFICATE_L3_SMALLT = "Certificate_l3_smallt"


class Branch(str, Enum):
    HIGH_T = "HighT"
    LOW_T = "LowT"


@dataclass(frozen=True)
class OptimalityVerdict:
    optimal: bool
    reason: Reason
    certificate: Optional[np.ndarray] = None


@dataclass(frozen=True)
class DecompositionSplit:
    positive_part: np.ndarray
    ppt_part: np.ndarray
    branch: Branch


@dataclass(frozen=True)
class CoefficientMatrix:
    """Rows (alpha, beta) and (delta, gamma) of the 2x6 local matrix at x."""

    alpha: np.ndarray
    beta: np.ndarray
    delta: np.ndarray
    gamma: np.ndarray
    subcase: int = 0

    @property
    def matrix(self) -> np.ndarray:
        return np.vstack([np.concatenate([self.alpha, self.beta]),
                          np.concatenate([self.delta, self.gamma])])

    @property
    def gram(self) -> np.ndarray:
        f = self.matrix
        return f @ np.conj(f.T)


def optimality_verdict(t: float, p: Permutation) -> OptimalityVerdict:
    """Optimal iff t = 1 and the permutation is a 3-cycle (n = 3)."""
    if p.n != 3:
        raise DimensionMismatch("the verdict is implemented for n = 3")
    ell = loop_decomposition(p).length
    if not 0.0 <= t <= 3.0 / ell:
        raise ValueError(f"t={t} outside the positivity range [0, {3.0 / ell}]")
    if ell == 1 or t == 0.0:
        raise NotAWitness("the map is completely positive, its Choi matrix is not a witness")
    if ell == 2:
        return OptimalityVerdict(optimal=False, reason=Reason.DECOMPOSABLE_L2)
    if t == 1.0:
        return OptimalityVerdict(optimal=True, reason=Reason.CYCLIC_T1)
    c = float(np.sqrt(1.0 - t))
    return OptimalityVerdict(optimal=False, reason=Reason.CERTIFICATE_L3_SMALLT,
                             certificate=c0_certificate(t, c))


def _canonical_transposition_split(t: float) -> Tuple[np.ndarray, np.ndarray]:
    """Split for the transposition swapping 1 and 2, valid on all (0, 3/2].

    The swapped pair's coupling is shared between the parts: weight t goes
    to the PPT part, weight 1-t stays with the positive part.  This single
    formula keeps the positive part PSD on the whole range, including
    t > 1 where the coupling it retains flips sign.
    """
    e = lambda i, j: np.kron(matrix_unit(i, j, 3), matrix_unit(i, j, 3))
    pos = ((2.0 - t) * np.kron(matrix_unit(1, 1, 3), matrix_unit(1, 1, 3))
           + (2.0 - t) * np.kron(matrix_unit(2, 2, 3), matrix_unit(2, 2, 3))
           + 2.0 * np.kron(matrix_unit(3, 3, 3), matrix_unit(3, 3, 3)))
    for i in range(1, 4):
        for j in range(1, 4):
            if i != j and {i, j} != {1, 2}:
                pos -= e(i, j)
    pos -= (1.0 - t) * (e(1, 2) + e(2, 1))
    ppt = t * (np.kron(matrix_unit(2, 2, 3), matrix_unit(1, 1, 3))
               + np.kron(matrix_unit(1, 1, 3), matrix_unit(2, 2, 3))
               - e(1, 2) - e(2, 1))
    return pos, ppt


def case2_split(t: float, p: Permutation) -> DecompositionSplit:
    """Decompose the witness of a transposition map into PSD + PPT parts."""
    if p.n != 3:
        raise DimensionMismatch("the split is implemented for n = 3")
    dec = loop_decomposition(p)
    if dec.length != 2:
        raise WrongLoopStructure(f"loop length is {dec.length}, the split needs 2")
    if not 0.0 < t <= 1.5:
        raise ValueError(f"t={t} outside (0, 3/2]")
    pos, ppt = _canonical_transposition_split(t)
    moved = sorted(next(s for s in dec.loops if len(s) == 2))
    fixed = next(iter(set(range(1, 4)) - set(moved)))
    relabel = (moved[0], moved[1], fixed)  # image of (1, 2, 3)
    if relabel != (1, 2, 3):
        perm_mat = np.zeros((3, 3))
        for k, target in enumerate(relabel):
            perm_mat[target - 1, k] = 1.0
        conj = np.kron(perm_mat, perm_mat)
        pos = conj @ pos @ conj.T
        ppt = conj @ ppt @ conj.T
    branch = Branch.HIGH_T if t >= 1.0 else Branch.LOW_T
    return DecompositionSplit(positive_part=pos, ppt_part=ppt, branch=branch)


def c0_certificate(t: float, c: float) -> np.ndarray:
    """diag(c, -c, 0), admissible when 0 < t < 1 and 0 < c^2 <= 1-t."""
    if not 0.0 < t < 1.0:
        raise OutOfCertificateRange(f"t={t} outside (0, 1)")
    if not 0.0 < c:
        raise OutOfCertificateRange(f"c={c} must be positive")
    if c * c > 1.0 - t + 1e-12:
        raise OutOfCertificateRange(f"c^2={c * c} exceeds 1-t={1.0 - t}")
    return np.diag([c, -c, 0.0]).astype(np.complex128)


def coefficient_matrix(x, t: float, c: float) -> CoefficientMatrix:
    """Local coefficients expressing x and C0 x through the map's generators.

    Component i of the two reconstruction identities reads

        x_i     = alpha_i sqrt(3-t) x_i + beta_i  sqrt(t) x_{i+1}
        (C0 x)_i = delta_i sqrt(3-t) x_i + gamma_i sqrt(t) x_{i+1}

    with indices mod 3 and C0 = diag(c, -c, 0).  The solution picked per
    zero-pattern of x makes the 2x2 Gram of the stacked coefficient rows as
    small as possible; coefficients that multiply a vanishing component are
    set to zero.
    """
    x = np.asarray(x, dtype=np.complex128).reshape(-1)
    if x.size != 3:
        raise NotUnitVector(f"expected a vector in C^3, got length {x.size}")
    if abs(np.linalg.norm(x) - 1.0) > UNIT_TOL:
        raise NotUnitVector(f"norm {np.linalg.norm(x)} is not 1 within {UNIT_TOL}")
    if not 0.0 < t < 1.0:
        raise ValueError(f"t={t} outside (0, 1)")
    if c <= 0.0:
        raise ValueError(f"c={c} must be positive")
    zero = np.abs(x) < ZERO_COMPONENT_TOL
    nonzero = int(3 - zero.sum())
    sq3t = np.sqrt(3.0 - t)
    sqt = np.sqrt(t)
    alpha = np.zeros(3, dtype=np.complex128)
    beta = np.zeros(3, dtype=np.complex128)
    delta = np.zeros(3, dtype=np.complex128)
    gamma = np.zeros(3, dtype=np.complex128)
    if nonzero == 3:
        ratios = np.array([x[0] / x[1], x[1] / x[2], x[2] / x[0]])
        moduli2 = np.abs(ratios) ** 2
        den = t + (3.0 - t) * moduli2
        alpha = sq3t * moduli2 / den
        beta = sqt * ratios / den
        delta = np.array([c * alpha[0], -c * alpha[1], 0.0])
        gamma = np.array([c * beta[0], -c * beta[1], 0.0])
        equal = np.allclose(np.abs(x), 1.0 / np.sqrt(3.0), atol=ZERO_COMPONENT_TOL)
        subcase = 1 if equal else 2
    elif nonzero == 2:
        if zero[0]:
            ratio = x[1] / x[2]
            den = t + (3.0 - t) * abs(ratio) ** 2
            alpha[1] = sq3t * abs(ratio) ** 2 / den
            alpha[2] = 1.0 / sq3t
            beta[1] = sqt * ratio / den
            delta[1] = -c * alpha[1]
            gamma[1] = -c * beta[1]
            subcase = 3
        elif zero[1]:
            ratio = x[2] / x[0]
            den = t + (3.0 - t) * abs(ratio) ** 2
            alpha[0] = 1.0 / sq3t
            alpha[2] = sq3t * abs(ratio) ** 2 / den
            beta[2] = sqt * ratio / den
            delta[0] = c / sq3t
            subcase = 4
        else:
            ratio = x[0] / x[1]
            den = t + (3.0 - t) * abs(ratio) ** 2
            alpha[0] = sq3t * abs(ratio) ** 2 / den
            alpha[1] = 1.0 / sq3t
            beta[0] = sqt * ratio / den
            delta[0] = c * alpha[0]
            delta[1] = -c / sq3t
            gamma[0] = c * beta[0]
            subcase = 5
    elif nonzero == 1:
        k = int(np.argmax(~zero))
        alpha[k] = 1.0 / sq3t
        if k == 0:
            delta[0] = c / sq3t
            subcase = 8
        elif k == 1:
            delta[1] = -c / sq3t
            subcase = 7
        else:
            subcase = 6
    else:
        raise NotUnitVector("the zero vector has no unit normalization")
    return CoefficientMatrix(alpha=alpha, beta=beta, delta=delta, gamma=gamma, subcase=subcase)


def reconstruction_residual(x, coeffs: CoefficientMatrix, t: float, c: float) -> Tuple[float, float]:
    """Norms of the two reconstruction identity residuals at x."""
    x = np.asarray(x, dtype=np.complex128).reshape(-1)
    if x.size != 3 or abs(np.linalg.norm(x) - 1.0) > UNIT_TOL:
        raise NotUnitVector("x must be a unit vector in C^3")
    sq3t = np.sqrt(3.0 - t)
    sqt = np.sqrt(t)
    first = x.copy()
    second = np.array([c * x[0], -c * x[1], 0.0], dtype=np.complex128)
    for i in range(3):
        nxt = (i + 1) % 3
        first[i] -= coeffs.alpha[i] * sq3t * x[i] + coeffs.beta[i] * sqt * x[nxt]
        second[i] -= coeffs.delta[i] * sq3t * x[i] + coeffs.gamma[i] * sqt * x[nxt]
    return (float(np.linalg.norm(first)), float(np.linalg.norm(second)))


def gram_contraction(coeffs: CoefficientMatrix) -> Tuple[float, bool]:
    """Largest eigenvalue of the 2x2 Gram, closed form, and the <= 1 test."""
    g = coeffs.gram
    a = float(g[0, 0].real)
    d = float(g[1, 1].real)
    b = g[0, 1]
    half_gap = (a - d) / 2.0
    top = (a + d) / 2.0 + np.sqrt(half_gap * half_gap + abs(b) ** 2)
    return (float(top), bool(top <= 1.0 + CONTRACTION_TOL))


DEGENERATE_PATTERNS = (
    np.array([1.0, 1.0, 1.0], dtype=np.complex128) / np.sqrt(3.0),
    np.array([0.0, 0.8 * np.exp(0.7j), 0.6 * np.exp(-0.2j)], dtype=np.complex128),
    np.array([0.8, 0.0, 0.6 * np.exp(1.1j)], dtype=np.complex128),
    np.array([0.6 * np.exp(-0.4j), 0.8, 0.0], dtype=np.complex128),
    np.array([0.0, 0.0, np.exp(0.3j)], dtype=np.complex128),
    np.array([0.0, np.exp(-1.2j), 0.0], dtype=np.complex128),
    np.array([np.exp(0.9j), 0.0, 0.0], dtype=np.complex128),
)


@dataclass(frozen=True)
class SweepReport:
    t: float
    c: float
    samples: int
    seed: int
    max_gram_eig: float
    max_residual: float
    violations: List[dict] = field(default_factory=list)

    def to_json(self) -> dict:
        return {"t": self.t, "c": self.c, "samples": self.samples, "seed": self.seed,
                "max_gram_eig": self.max_gram_eig, "max_residual": self.max_residual,
                "violations": self.violations}


def certificate_sweep(t: float, c: float, samples: int, seed: int) -> SweepReport:
    """Check contractivity of the local coefficients over random unit x.

    Runs `samples` random vectors plus the seven deterministic degenerate
    zero-patterns; every coefficient matrix must be contractive and must
    satisfy the reconstruction identities.  A violation raises, since the
    underlying inequality guarantees success whenever c^2 <= 1-t.
    """
    if not 0.0 < t < 1.0:
        raise OutOfCertificateRange(f"t={t} outside (0, 1)")
    if not 0.0 < c * c <= 1.0 - t + 1e-12:
        raise OutOfCertificateRange(f"c^2={c * c} outside (0, 1-t]")
    max_eig = 0.0
    max_resid = 0.0
    worst_x = None
    for k in range(samples + len(DEGENERATE_PATTERNS)):
        if k < samples:
            rng = np.random.default_rng([seed, k])
            x = rng.standard_normal(3) + 1j * rng.standard_normal(3)
        else:
            x = DEGENERATE_PATTERNS[k - samples].copy()
        x = x / np.linalg.norm(x)
        coeffs = coefficient_matrix(x, t, c)
        top, contractive = gram_contraction(coeffs)
        resid = max(reconstruction_residual(x, coeffs, t, c))
        max_resid = max(max_resid, resid)
        if top > max_eig:
            max_eig = top
            worst_x = x
        if not contractive:
            raise ContractionViolated(
                f"coefficient matrix at x={x} has Gram eigenvalue {top}",
                x=x, gram_eig=top)
    return SweepReport(t=t, c=c, samples=samples, seed=seed,
                       max_gram_eig=max_eig, max_residual=max_resid, violations=[])


def _locus_samples(dim: int, start: int, stop: int, seed: int) -> np.ndarray:
    """Mixture sampler: generic Gaussian, equal-modulus phases, zero patterns.

    The annihilating product vectors of a boundary witness form a measure
    zero set, so purely generic sampling never lands on them; the structured
    families are what make the scan informative.  Indexing is global so any
    chunking yields the same stream.
    """
    out = np.empty((stop - start, dim), dtype=np.complex128)
    for k in range(start, stop):
        rng = np.random.default_rng([seed, k])
        kind = k % 4
        if kind == 1:
            v = np.exp(1j * rng.uniform(0.0, 2.0 * np.pi, dim))
        elif kind == 2:
            support = rng.integers(0, 2, dim).astype(bool)
            if not support.any():
                support[rng.integers(0, dim)] = True
            v = np.where(support, rng.standard_normal(dim) + 1j * rng.standard_normal(dim), 0.0)
        else:
            v = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
        out[k - start] = v / np.linalg.norm(v)
    return out


def zero_locus_span(w: Witness, config: SearchConfig = SearchConfig()) -> Tuple[int, List[np.ndarray]]:
    """Dimension spanned by sampled product vectors annihilating the form.

    config.restarts counts the sampled left factors e; for each, the right
    factor is read off the near-kernel of the contracted small matrix.
    """
    da, db = w.dim_a, w.dim_b
    four = w.choi.reshape(da, db, da, db)
    collected: List[np.ndarray] = []
    count = config.restarts
    chunk = 1024
    start = 0
    while start < count:
        stop = min(start + chunk, count)
        es = _locus_samples(da, start, stop, config.seed)
        a_e = np.einsum("bi,ijlk,bl->bjk", np.conj(es), four, es)
        sym = (a_e + np.conj(np.transpose(a_e, (0, 2, 1)))) / 2.0
        evals, evecs, _ = linalg._jacobi_batched(sym)
        for b in range(stop - start):
            for idx in range(db):
                if evals[b, idx] < LOCUS_EIG_TOL:
                    collected.append(np.kron(es[b], evecs[b, :, idx]))
        start = stop
    if not collected:
        return 0, []
    return linalg.numerical_rank(collected, tol=LOCUS_RANK_TOL), collected


def detect_value(w: Witness, rho) -> float:
    """Tr(W rho) for a density matrix rho; negative means detected."""
    rho = as_matrix(rho)
    d = w.dim_a * w.dim_b
    if rho.shape != (d, d):
        raise DimensionMismatch(f"state is {rho.shape}, expected {(d, d)}")
    if not linalg.is_hermitian(rho, rtol=STATE_TOL):
        raise NotAState("state is not Hermitian")
    if abs(np.trace(rho).real - 1.0) > STATE_TOL:
        raise NotAState(f"state trace {np.trace(rho).real} is not 1")
    if float(linalg.hermitian_eig(rho).eigenvalues[0]) < -STATE_TOL:
        raise NotAState("state has a negative eigenvalue")
    return float(np.trace(w.choi @ rho).real)


@dataclass(frozen=True)
class ProbeResult:
    found: bool
    best_c: Optional[np.ndarray]
    best_scale: float
    trials: int


_PROBE_CONFIG = SearchConfig(restarts=24, max_iters=150, tol=1e-12, seed=0)


def _passes(m: DTypeMap, c: np.ndarray, seed: int) -> bool:
    sub = subtracted_map(m, c)
    cfg = SearchConfig(restarts=_PROBE_CONFIG.restarts, max_iters=_PROBE_CONFIG.max_iters,
                       tol=_PROBE_CONFIG.tol, seed=seed)
    verdict = numeric_block_positivity(choi_matrix(sub), cfg)
    return verdict.status is Status.NO_VIOLATION_FOUND


def subtraction_probe(m: DTypeMap, trials: int, seed: int) -> ProbeResult:
    """Search for a nonzero C whose subtraction keeps the map positive.

    Alternates a structured family of diagonal candidates (including the
    trace-balanced pairs diag(a, -a, 0) and their slot permutations, the
    only diagonal shape that can survive on the equal-modulus zero locus)
    with Gaussian directions rescaled by bisection onto the numerical
    positivity boundary.  A candidate counts only when its scale stays
    above a floor, so tolerance-level subtractions are not reported as
    findings.  A clean failure to find anything is consistency evidence
    for optimality, not a proof.
    """
    if not closed_form_positive(m.n, m.t, m.pi):
        raise ValueError("the probe requires a positive map")
    found = False
    best_c = None
    best_scale = 0.0
    slot_pairs = [(0, 1), (1, 2), (0, 2)]
    for k in range(trials):
        rng = np.random.default_rng([seed, k])
        check_seed = seed + 104729 + k
        if k % 2 == 0:
            i, j = slot_pairs[(k // 2) % 3]
            a = rng.uniform(0.1, 1.1)
            if k % 4 == 0:
                b = -a
            else:
                b = rng.uniform(-1.1, 1.1)
            diag = np.zeros(m.n)
            diag[i], diag[j] = a, b
            cand = np.diag(diag).astype(np.complex128)
            scale = float(np.linalg.norm(cand))
            if scale < PROBE_SCALE_FLOOR:
                continue
            if _passes(m, cand, check_seed):
                found = True
                if scale > best_scale:
                    best_scale, best_c = scale, cand
        else:
            g = rng.standard_normal((m.n, m.n)) + 1j * rng.standard_normal((m.n, m.n))
            direction = g / np.linalg.norm(g)
            if not _passes(m, PROBE_SCALE_FLOOR * direction, check_seed):
                continue
            lo, hi = PROBE_SCALE_FLOOR, 2.0
            for _ in range(20):
                mid = (lo + hi) / 2.0
                if _passes(m, mid * direction, check_seed):
                    lo = mid
                else:
                    hi = mid
            found = True
            if lo > best_scale:
                best_scale, best_c = lo, lo * direction
    return ProbeResult(found=found, best_c=best_c, best_scale=best_scale, trials=trials)
