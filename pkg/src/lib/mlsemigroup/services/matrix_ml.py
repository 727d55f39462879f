import logging
import math
from pathlib import Path
from typing import Optional, Sequence, Union

import numpy as np

from ..exceptions import DomainError, EigenConvergenceError, MLError
from ..schemas import DefectGrid, SeriesConfig, Spectrum
from .mlf_core import ml_e, ml_value
from .semigroup import fill_grid

logger = logging.getLogger(__name__)

MAX_SWEEPS = 100
SYMMETRY_TOL = 1e-12
OFF_DIAGONAL_TOL = 1e-12
RECONSTRUCTION_TOL = 1e-8


def _square(A, name: str = "matrix") -> np.ndarray:
    a = np.array(A, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] == 0:
        raise DomainError(f"expected a non-empty square matrix, got shape {a.shape}", parameter=name)
    return a


def _off_diagonal_mass(a: np.ndarray) -> float:
    return float(np.linalg.norm(a - np.diag(np.diag(a))))


def eig_symmetric(A) -> Spectrum:
    """Eigen-decomposition of a real symmetric matrix by cyclic Jacobi rotations."""
    a = _square(A)
    asymmetry = float(np.max(np.abs(a - a.T)))
    if asymmetry > SYMMETRY_TOL:
        raise DomainError(f"matrix is not symmetric (max |A - A^T| = {asymmetry:.3e})", parameter="matrix")
    a = 0.5 * (a + a.T)
    source = a.copy()
    n = a.shape[0]
    basis = np.eye(n)
    scale = max(1.0, float(np.linalg.norm(a)))

    sweeps = 0
    while _off_diagonal_mass(a) > OFF_DIAGONAL_TOL * scale:
        if sweeps == MAX_SWEEPS:
            raise EigenConvergenceError(
                f"off-diagonal mass {_off_diagonal_mass(a):.3e} after {MAX_SWEEPS} sweeps",
                parameter="matrix",
            )
        sweeps += 1
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if apq == 0.0:
                    continue
                theta = (a[q, q] - a[p, p]) / (2.0 * apq)
                # smaller root of t**2 + 2 theta t - 1 = 0
                t = math.copysign(1.0, theta) / (abs(theta) + math.sqrt(theta * theta + 1.0))
                c = 1.0 / math.sqrt(t * t + 1.0)
                s = t * c
                rotation = np.array([[c, s], [-s, c]])
                pair = [p, q]
                a[:, pair] = a[:, pair] @ rotation
                a[pair, :] = rotation.T @ a[pair, :]
                a[p, q] = a[q, p] = 0.0
                basis[:, pair] = basis[:, pair] @ rotation

    logger.debug("Jacobi converged in %d sweeps for a %dx%d matrix", sweeps, n, n)
    spectrum = Spectrum(order=n, eigenvalues=np.diag(a).copy(), basis=basis, basis_inverse=basis.T.copy())
    mismatch = float(np.max(np.abs(spectrum.reconstruct() - source)))
    if mismatch > RECONSTRUCTION_TOL * scale:
        raise EigenConvergenceError(f"reconstruction error {mismatch:.3e}", parameter="matrix")
    return spectrum


def spectrum_from_eigenpairs(eigenvalues: Sequence[float], basis) -> Spectrum:
    """Spectrum of a diagonalizable matrix from its eigenvalues and the matching eigenvector columns."""
    basis = _square(basis, name="basis")
    try:
        inverse = np.linalg.inv(basis)
    except np.linalg.LinAlgError as exc:
        raise DomainError("eigenvector basis is singular", parameter="basis") from exc
    return Spectrum(order=basis.shape[0], eigenvalues=eigenvalues, basis=basis, basis_inverse=inverse)


def ml_matrix(alpha: float, spectrum: Spectrum, t: float, cfg: Optional[SeriesConfig] = None) -> np.ndarray:
    """E_alpha(A t**alpha) = P diag(E_alpha(lambda_j t**alpha)) P^-1."""
    if not t >= 0.0:
        raise DomainError(f"must be nonnegative, got {t!r}", parameter="t")
    if t == 0.0:
        return np.eye(spectrum.order)

    power = t ** alpha
    values = np.empty(spectrum.order)
    for j, lam in enumerate(spectrum.eigenvalues):
        try:
            values[j] = ml_value(ml_e(alpha, float(lam) * power, cfg))
        except MLError as exc:
            raise type(exc)(f"eigenvalue {float(lam)!r}: {exc.detail}", parameter=f"eigenvalue[{j}]") from exc
    return (spectrum.basis * values) @ spectrum.basis_inverse


def matrix_defect(
    alpha: float, spectrum: Spectrum, t: float, s: float, cfg: Optional[SeriesConfig] = None
) -> float:
    """Max-entry norm of E_alpha(A (t+s)**alpha) - E_alpha(A t**alpha) E_alpha(A s**alpha)."""
    joint = ml_matrix(alpha, spectrum, t + s, cfg)
    product = ml_matrix(alpha, spectrum, t, cfg) @ ml_matrix(alpha, spectrum, s, cfg)
    return float(np.max(np.abs(joint - product)))


def matrix_defect_grid(
    alpha: float,
    spectrum: Spectrum,
    t_values: Sequence[float],
    s_values: Sequence[float],
    cfg: Optional[SeriesConfig] = None,
) -> DefectGrid:
    return fill_grid(lambda t, s: matrix_defect(alpha, spectrum, t, s, cfg), t_values, s_values)


def read_matrix_csv(path: Union[str, Path]) -> np.ndarray:
    """Read a square matrix stored row-major as comma-separated reals."""
    try:
        matrix = np.loadtxt(path, delimiter=",", ndmin=2, comments="#")
    except OSError as exc:
        raise DomainError(f"cannot read {path}: {exc}", parameter="matrix") from exc
    except ValueError as exc:
        raise DomainError(f"{path} is not a table of reals: {exc}", parameter="matrix") from exc
    return _square(matrix)
