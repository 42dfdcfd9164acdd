"""D-type positive maps and the entanglement witnesses they induce."""

from .linalg import (DimensionMismatch, EmptyInput, HermitianEigenResult,
                     NoConvergence, NonHermitianInput, hermitian_eig, kron,
                     matrix_from_json, matrix_to_json, matrix_unit,
                     numerical_rank, operator_norm, partial_transpose)
from .maps import DTypeMap, Witness, apply_map, choi_matrix, max_entangled, subtracted_map
from .optimality import (CoefficientMatrix, ContractionViolated, DecompositionSplit,
                         NotAState, NotAWitness, OptimalityVerdict, OutOfCertificateRange,
                         ProbeResult, WrongLoopStructure, c0_certificate, case2_split,
                         certificate_sweep, coefficient_matrix, detect_value,
                         gram_contraction, optimality_verdict, reconstruction_residual,
                         subtraction_probe, zero_locus_span)
from .inequality import (ConstraintPoint, DegeneratePoint, constrained_scan, f_value,
                         g_value, lagrange_residual, quartic_factor_check, subcase_bound)
from .perm import InvalidPermutation, LoopDecomposition, Permutation, loop_decomposition, parse_permutation
from .positivity import (PositivityVerdict, SearchConfig, Status, closed_form_positive,
                         is_completely_positive, is_ppt, numeric_block_positivity)

__version__ = "0.1.0"
