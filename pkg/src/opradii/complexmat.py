"""Dense complex matrix kernels.

Matrices are plain 2-D ``numpy`` arrays of dtype ``complex128``; every routine
here is a pure function of its inputs.
"""
from __future__ import annotations

import json
import math
import warnings
from dataclasses import dataclass
from typing import Sequence

import numpy as np
import scipy.linalg

__all__ = [
    "Tolerances", "TOLERANCES", "LinAlgError", "NotHermitian", "NoConvergence",
    "Singular", "DimensionOverflow", "HermEigResult", "as_cmat", "herm_eig",
    "op_norm", "inverse", "solve", "kron", "spectral_radius", "real_part",
    "poly_eval", "mobius_factor_eval", "matrix_from_json", "matrix_to_json",
    "load_matrix", "random_unitary",
]


@dataclass(frozen=True)
class Tolerances:
    eig: float = 1e-10
    inverse_residual: float = 1e-8
    pivot: float = 1e-12
    max_dim: int = 5000


TOLERANCES = Tolerances()


class LinAlgError(ValueError):
    """Base class for the kernel errors."""


class NotHermitian(LinAlgError):
    pass


class NoConvergence(LinAlgError):
    pass


class Singular(LinAlgError):
    pass


class DimensionOverflow(LinAlgError):
    pass


@dataclass(frozen=True)
class HermEigResult:
    eigenvalues: np.ndarray
    residual: float


def as_cmat(M, square: bool = False) -> np.ndarray:
    """Coerce to a finite complex128 2-D array, optionally checking squareness."""
    A = np.asarray(M, dtype=np.complex128)
    if A.ndim == 0:
        A = A.reshape(1, 1)
    if A.ndim != 2:
        raise ValueError(f"expected a 2-D matrix, got shape {A.shape}")
    if A.size == 0:
        raise ValueError("empty matrix")
    if not np.all(np.isfinite(A)):
        raise ValueError("matrix has non-finite entries")
    if square and A.shape[0] != A.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {A.shape}")
    return A


def herm_eig(M, tol: float = TOLERANCES.eig) -> HermEigResult:
    """All eigenvalues of a Hermitian matrix, ascending.

    The residual ``max ||Mv - lambda v||`` is measured on the returned
    eigenpairs and checked against ``tol * max(1, ||M||_max)``.
    """
    A = as_cmat(M, square=True)
    scale = max(1.0, float(np.max(np.abs(A))))
    asym = float(np.max(np.abs(A - A.conj().T)))
    if asym > tol * scale:
        raise NotHermitian(f"||M - M*||_max = {asym:.3e} exceeds {tol:.1e}")
    H = (A + A.conj().T) / 2
    try:
        w, V = np.linalg.eigh(H)
    except np.linalg.LinAlgError as exc:
        raise NoConvergence(str(exc)) from exc
    residual = float(np.max(np.linalg.norm(H @ V - V * w, axis=0)))
    if residual > tol * scale:
        raise NoConvergence(f"eigen residual {residual:.3e} exceeds tolerance")
    return HermEigResult(eigenvalues=w, residual=residual)


def op_norm(M) -> float:
    """Largest singular value."""
    A = as_cmat(M)
    if not np.any(A):
        return 0.0
    try:
        return float(np.linalg.norm(A, 2))
    except np.linalg.LinAlgError as exc:
        raise NoConvergence(str(exc)) from exc


def _lu(A: np.ndarray, pivot: float):
    with warnings.catch_warnings():
        # exact singularity is reported through the pivot test below
        warnings.simplefilter("ignore", scipy.linalg.LinAlgWarning)
        lu, piv = scipy.linalg.lu_factor(A, check_finite=False)
    row_scale = float(np.max(np.linalg.norm(A, axis=1)))
    if row_scale == 0.0 or np.min(np.abs(np.diag(lu))) < pivot * row_scale:
        raise Singular("pivot below threshold in LU factorisation")
    return lu, piv


def solve(A, B, tol: Tolerances = TOLERANCES) -> np.ndarray:
    """Solve ``A X = B`` with partial pivoting; raises Singular on tiny pivots."""
    A = as_cmat(A, square=True)
    B = np.asarray(B, dtype=np.complex128)
    lu, piv = _lu(A, tol.pivot)
    return scipy.linalg.lu_solve((lu, piv), B, check_finite=False)


def inverse(M, tol: Tolerances = TOLERANCES) -> np.ndarray:
    A = as_cmat(M, square=True)
    n = A.shape[0]
    X = solve(A, np.eye(n, dtype=np.complex128), tol)
    res = float(np.max(np.abs(A @ X - np.eye(n))))
    if res > tol.inverse_residual:
        raise Singular(f"inverse residual {res:.3e} exceeds {tol.inverse_residual:.1e}")
    return X


def kron(A, B, max_dim: int = TOLERANCES.max_dim) -> np.ndarray:
    A = as_cmat(A)
    B = as_cmat(B)
    rows, cols = A.shape[0] * B.shape[0], A.shape[1] * B.shape[1]
    if max(rows, cols) > max_dim:
        raise DimensionOverflow(f"kron result {rows}x{cols} exceeds cap {max_dim}")
    return np.kron(A, B)


def _gelfand_radius(T: np.ndarray, tol: float, max_squarings: int = 60) -> float:
    # r(T) = lim ||T^k||^(1/k); repeated squaring with renormalisation
    log_scale = 0.0
    P = T.copy()
    prev = math.inf
    k = 1
    for _ in range(max_squarings):
        nrm = np.linalg.norm(P, 2)
        if nrm == 0.0:
            return 0.0
        est = math.exp((log_scale + math.log(nrm)) / k)
        if abs(est - prev) <= tol * max(1.0, est):
            return est
        prev = est
        P = P / nrm
        log_scale += math.log(nrm)
        P = P @ P
        log_scale *= 2
        k *= 2
    raise NoConvergence("Gelfand iteration did not settle")


def spectral_radius(T, tol: float = TOLERANCES.eig) -> float:
    """max |lambda| over the spectrum (Hessenberg QR via LAPACK, Gelfand fallback)."""
    A = as_cmat(T, square=True)
    try:
        ev = np.linalg.eigvals(A)
    except np.linalg.LinAlgError:
        return _gelfand_radius(A, tol)
    return float(np.max(np.abs(ev)))


def real_part(A) -> np.ndarray:
    """(A + A*)/2, symmetrised so the result is exactly Hermitian."""
    A = as_cmat(A, square=True)
    H = (A + A.conj().T) / 2
    return (H + H.conj().T) / 2


def poly_eval(coeffs: Sequence[complex], T) -> np.ndarray:
    """Horner evaluation of sum c_k T^k."""
    A = as_cmat(T, square=True)
    n = A.shape[0]
    c = np.asarray(coeffs, dtype=np.complex128).ravel()
    if c.size == 0:
        return np.zeros((n, n), dtype=np.complex128)
    R = c[-1] * np.eye(n, dtype=np.complex128)
    for ck in c[-2::-1]:
        R = R @ A
        R[np.diag_indices(n)] += ck
    return R


def mobius_factor_eval(a: complex, zeta: complex, T, tol: Tolerances = TOLERANCES) -> np.ndarray:
    """zeta (T - aI)(I - conj(a) T)^{-1}."""
    A = as_cmat(T, square=True)
    if abs(a) >= 1:
        raise ValueError("Mobius zero must lie in the open unit disc")
    n = A.shape[0]
    eye = np.eye(n, dtype=np.complex128)
    if a == 0:
        return zeta * A
    # the two factors commute, so a left solve is enough
    return zeta * solve(eye - np.conj(a) * A, A - a * eye, tol)


def random_unitary(d: int, rng: np.random.Generator) -> np.ndarray:
    Z = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    Q, R = np.linalg.qr(Z)
    return Q * (np.diag(R) / np.abs(np.diag(R)))


def matrix_from_json(obj) -> np.ndarray:
    """Parse ``{"rows", "cols", "entries": [[re, im], ...]}`` (row-major)."""
    try:
        rows, cols = int(obj["rows"]), int(obj["cols"])
        entries = obj["entries"]
    except (KeyError, TypeError, ValueError) as exc:
        raise ValueError(f"malformed matrix object: {exc}") from exc
    if rows <= 0 or cols <= 0:
        raise ValueError("rows and cols must be positive")
    if len(entries) != rows * cols:
        raise ValueError(f"expected {rows * cols} entries, got {len(entries)}")
    vals = []
    for e in entries:
        if len(e) != 2:
            raise ValueError("each entry must be a [re, im] pair")
        re, im = float(e[0]), float(e[1])
        if not (math.isfinite(re) and math.isfinite(im)):
            raise ValueError("matrix entries must be finite")
        vals.append(complex(re, im))
    return np.array(vals, dtype=np.complex128).reshape(rows, cols)


def matrix_to_json(M) -> dict:
    A = as_cmat(M)
    return {
        "rows": A.shape[0],
        "cols": A.shape[1],
        "entries": [[float(z.real), float(z.imag)] for z in A.ravel()],
    }


def _reject_constant(name):
    raise ValueError(f"non-finite JSON constant {name}")


def load_matrix(path) -> np.ndarray:
    with open(path) as fh:
        return matrix_from_json(json.load(fh, parse_constant=_reject_constant))
