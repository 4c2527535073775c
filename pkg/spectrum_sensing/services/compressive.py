"""
compressive.py
Sub-Nyquist sensing: sparsity bases, random measurement matrices, mutual
coherence, the linear measurement model, orthogonal matching pursuit and
the reconstruct-then-detect pipeline.
"""

import logging
from typing import List, Optional, Sequence, Tuple

import numpy as np
from scipy import linalg

from spectrum_sensing.errors import DegenerateSupportError
from spectrum_sensing.schemas.cs_schemas import (
    BasisKind,
    CsDiagnostics,
    KnownSparsity,
    MeasurementKind,
    MeasurementMatrix,
    Measurements,
    RecoveryResult,
    ResidualTol,
    SparsityBasis,
    StopRule,
)
from spectrum_sensing.schemas.detector_schemas import ChannelDecision, ThresholdPolicy
from spectrum_sensing.services.detectors import (
    channelize,
    decide_energies,
    threshold_for_pfa,
)
from spectrum_sensing.services.seeding import derive_rng

logger = logging.getLogger(__name__)

# relative size below which a new atom is taken as linearly dependent
_RANK_TOL = 1e-10


def make_basis(L: int, kind: BasisKind) -> SparsityBasis:
    if L < 2:
        raise ValueError("Basis dimension must be at least 2")
    kind = BasisKind(kind)
    if kind == BasisKind.IDENTITY:
        matrix = np.eye(L)
    else:
        matrix = linalg.dft(L, scale="sqrtn")
    return SparsityBasis(kind=kind, matrix=matrix)


def make_measurement_matrix(
    M: int, L: int, kind: MeasurementKind, seed: int
) -> MeasurementMatrix:
    if not 1 <= M <= L:
        raise ValueError(f"Need 1 <= M <= L, got M={M}, L={L}")
    kind = MeasurementKind(kind)
    rng = derive_rng(seed, "theta", kind.value)
    if kind == MeasurementKind.GAUSSIAN_IID:
        matrix = rng.standard_normal((M, L)) / np.sqrt(M)
    elif kind == MeasurementKind.BERNOULLI_PM1:
        matrix = rng.choice([-1.0, 1.0], size=(M, L)) / np.sqrt(M)
    else:
        matrix = np.eye(M, L)
    return MeasurementMatrix(kind=kind, seed=seed, matrix=matrix)


def _matrix(theta) -> np.ndarray:
    return theta.matrix if isinstance(theta, MeasurementMatrix) else np.asarray(theta)


def _basis(basis) -> np.ndarray:
    return basis.matrix if isinstance(basis, SparsityBasis) else np.asarray(basis)


def coherence(theta, basis) -> float:
    """max |<row_i, col_j>| / (|row_i| |col_j|) over rows of Theta, columns of B."""
    t = _matrix(theta)
    b = _basis(basis)
    if t.shape[1] != b.shape[0]:
        raise ValueError(f"Theta has {t.shape[1]} columns, basis has {b.shape[0]} rows")
    row_norms = np.linalg.norm(t, axis=1)
    col_norms = np.linalg.norm(b, axis=0)
    if np.any(row_norms == 0) or np.any(col_norms == 0):
        raise ValueError("Coherence is undefined for zero rows or columns")
    gram = np.abs(t @ b) / np.outer(row_norms, col_norms)
    return float(min(1.0, gram.max()))


def measure(theta, signal: np.ndarray) -> Measurements:
    t = _matrix(theta)
    signal = np.asarray(signal)
    if signal.ndim != 1 or signal.size != t.shape[1]:
        raise ValueError(f"Signal length {signal.size} does not match L={t.shape[1]}")
    return Measurements(vector=t @ signal)


def reconstruct_omp(
    measurements: Measurements,
    theta,
    basis,
    stop: StopRule,
) -> RecoveryResult:
    """Orthogonal matching pursuit over the dictionary A = Theta B.

    The selected atoms are orthogonalized incrementally (Gram-Schmidt with
    one re-orthogonalization pass), so each iteration solves the support
    least-squares problem exactly through the triangular factor.
    """
    m = np.asarray(measurements.vector, dtype=complex)
    b = _basis(basis)
    dictionary = _matrix(theta) @ b
    n_rows, n_atoms = dictionary.shape
    if m.size != n_rows:
        raise ValueError(f"{m.size} measurements for a {n_rows}-row matrix")

    atom_norms = np.linalg.norm(dictionary, axis=0)
    usable = atom_norms > 0
    scale = np.where(usable, atom_norms, 1.0)

    if isinstance(stop, KnownSparsity):
        budget = min(stop.sparsity, n_rows, n_atoms)
        tolerance = None
    else:
        budget = min(stop.max_iter, n_rows, n_atoms)
        tolerance = stop.epsilon * np.linalg.norm(m)

    q = np.zeros((n_rows, budget), dtype=complex)
    r = np.zeros((budget, budget), dtype=complex)
    support: List[int] = []
    residual = m.copy()
    residual_norms = [float(np.linalg.norm(residual))]
    selected = np.zeros(n_atoms, dtype=bool)

    while len(support) < budget:
        if tolerance is not None and residual_norms[-1] <= tolerance:
            break
        correlation = np.abs(dictionary.conj().T @ residual) / scale
        correlation[selected | ~usable] = -np.inf
        # argmax returns the lowest index among ties
        atom = int(np.argmax(correlation))
        if not np.isfinite(correlation[atom]):
            break

        k = len(support)
        column = dictionary[:, atom]
        coeffs = q[:, :k].conj().T @ column
        v = column - q[:, :k] @ coeffs
        again = q[:, :k].conj().T @ v
        v = v - q[:, :k] @ again
        coeffs = coeffs + again
        norm = np.linalg.norm(v)
        if norm <= _RANK_TOL * atom_norms[atom]:
            raise DegenerateSupportError(
                f"Atom {atom} is linearly dependent on the selected support",
                support + [atom],
            )
        q[:, k] = v / norm
        r[:k, k] = coeffs
        r[k, k] = norm
        support.append(atom)
        selected[atom] = True

        projection = q[:, : k + 1].conj().T @ m
        residual = m - q[:, : k + 1] @ projection
        residual_norms.append(float(np.linalg.norm(residual)))

    coefficients = np.zeros(n_atoms, dtype=complex)
    if support:
        n_sel = len(support)
        rhs = q[:, :n_sel].conj().T @ m
        coefficients[support] = linalg.solve_triangular(r[:n_sel, :n_sel], rhs)

    converged = (
        True if tolerance is None else residual_norms[-1] <= tolerance
    )
    if not converged:
        logger.info(
            f"OMP stopped after {len(support)} atoms with residual "
            f"{residual_norms[-1]:.3e} above tolerance {tolerance:.3e}"
        )
    return RecoveryResult(
        coefficients=coefficients,
        signal=b @ coefficients,
        support=support,
        residual_norms=residual_norms,
        iterations=len(support),
        converged=converged,
    )


def support_least_squares(
    measurements: Measurements, theta, basis, support: Sequence[int]
) -> Tuple[np.ndarray, float]:
    """Least-squares coefficients on a fixed support and the residual norm."""
    dictionary = _matrix(theta) @ _basis(basis)
    m = np.asarray(measurements.vector, dtype=complex)
    sub = dictionary[:, list(support)]
    coeffs, *_ = linalg.lstsq(sub, m)
    return coeffs, float(np.linalg.norm(m - sub @ coeffs))


def spectrum_vector(
    per_channel_samples: Sequence[np.ndarray], n_fft: int
) -> np.ndarray:
    """r = [R_1^T ... R_K^T]^T from the per-channel FFTs."""
    return np.concatenate([s.bins for s in channelize(per_channel_samples, n_fft)])


def default_stop(
    M: int, L: int, sparsity: Optional[int] = None, max_atoms_fraction: float = 0.5
) -> StopRule:
    if M == L:
        return ResidualTol(epsilon=1e-10, max_iter=M)
    if sparsity is not None:
        return KnownSparsity(sparsity=min(int(sparsity), M))
    return ResidualTol(epsilon=1e-10, max_iter=max(1, int(max_atoms_fraction * M)))


def cs_sense_pipeline(
    per_channel_samples: Sequence[np.ndarray],
    compression_ratio: float,
    basis_kind: BasisKind,
    detector_policy: ThresholdPolicy,
    seed: int,
    measurement_kind: MeasurementKind = MeasurementKind.GAUSSIAN_IID,
    max_atoms_fraction: float = 0.5,
    stop: Optional[StopRule] = None,
    trial: int = 0,
    sparsity: Optional[int] = None,
) -> Tuple[List[ChannelDecision], CsDiagnostics]:
    """Compress the stacked channel spectra, recover them and run per-channel
    energy decisions on the reconstruction.

    Without an explicit stop rule: M = L runs OMP to a 1e-10 relative
    residual over all L atoms; otherwise a known `sparsity` selects that many
    atoms (at most M), and without one OMP runs to the 1e-10 residual capped
    at max_atoms_fraction * M atoms.
    """
    if not 0 < compression_ratio <= 1:
        raise ValueError("compression_ratio must lie in (0, 1]")
    n_fft = detector_policy.n_fft
    r_hat = spectrum_vector(per_channel_samples, n_fft)
    L = r_hat.size
    M = max(1, int(round(compression_ratio * L)))

    basis = make_basis(L, basis_kind)
    theta = make_measurement_matrix(M, L, measurement_kind, seed)
    measurements = measure(theta, r_hat)
    if stop is None:
        stop = default_stop(M, L, sparsity, max_atoms_fraction)
    result = reconstruct_omp(measurements, theta, basis, stop)

    recovered = np.asarray(result.signal)
    segments = recovered.reshape(len(per_channel_samples), n_fft)
    energies = [float(np.sum(np.abs(segment) ** 2)) for segment in segments]
    decisions = decide_energies(energies, threshold_for_pfa(detector_policy))

    signal_norm = np.linalg.norm(r_hat)
    rel_error = (
        float(np.linalg.norm(recovered - r_hat) / signal_norm) if signal_norm > 0 else 0.0
    )
    diagnostics = CsDiagnostics(
        trial=trial,
        m_rows=M,
        l_cols=L,
        mu=coherence(theta, basis),
        rel_error=rel_error,
        iterations=result.iterations,
        converged=result.converged,
    )
    return decisions, diagnostics
