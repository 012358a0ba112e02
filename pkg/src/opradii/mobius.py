"""Disc geometry and the closed-form constants relating norms to w_rho radii.

``D_K`` is the image of the disc of radius ``1/K`` under the Cayley-type map
``z -> (1+z)/(1-z)``.  For ``K = 1`` it degenerates to a half-plane, so every
disc-based routine here demands ``K > 1`` while the scalar conversions accept
``K = 1`` and return the trivial constant.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .complexmat import as_cmat, solve

__all__ = [
    "DomainError", "Disc", "MobiusMap", "ConversionRecord", "ktilde_from_k",
    "k_from_ktilde", "disc_dk", "homothety_alpha", "disc_automorphism_b",
    "drury_constant", "conversion_record", "cayley", "cayley_k", "homothety",
]


class DomainError(ValueError):
    pass


@dataclass(frozen=True)
class Disc:
    center: complex
    radius: float

    def __post_init__(self):
        if not (self.radius > 0 and math.isfinite(self.radius)):
            raise DomainError(f"disc radius must be positive and finite, got {self.radius}")

    def contains(self, z: complex, tol: float = 0.0) -> bool:
        return abs(z - self.center) < self.radius + tol


@dataclass(frozen=True)
class MobiusMap:
    """z -> (a z + b) / (c z + d)."""

    a: complex
    b: complex
    c: complex
    d: complex

    def __post_init__(self):
        if self.a * self.d - self.b * self.c == 0:
            raise DomainError("degenerate Mobius map (ad - bc = 0)")

    @classmethod
    def from_matrix(cls, M) -> "MobiusMap":
        M = np.asarray(M, dtype=np.complex128)
        # normalise to unit determinant so composed coefficients stay O(1)
        s = np.sqrt(M[0, 0] * M[1, 1] - M[0, 1] * M[1, 0])
        M = M / s
        return cls(complex(M[0, 0]), complex(M[0, 1]), complex(M[1, 0]), complex(M[1, 1]))

    def matrix(self) -> np.ndarray:
        return np.array([[self.a, self.b], [self.c, self.d]], dtype=np.complex128)

    def __call__(self, z):
        return (self.a * z + self.b) / (self.c * z + self.d)

    def compose(self, inner: "MobiusMap") -> "MobiusMap":
        """self o inner."""
        return MobiusMap.from_matrix(self.matrix() @ inner.matrix())

    def inverse(self) -> "MobiusMap":
        return MobiusMap(self.d, -self.b, -self.c, self.a)

    def apply_matrix(self, X) -> np.ndarray:
        """(aX + bI)(cX + dI)^{-1}; both factors are polynomials in X, so they commute."""
        X = as_cmat(X, square=True)
        eye = np.eye(X.shape[0], dtype=np.complex128)
        num = self.a * X + self.b * eye
        if self.c == 0:
            return num / self.d
        return solve(self.c * X + self.d * eye, num)


@dataclass(frozen=True)
class ConversionRecord:
    K: float
    rho: float
    Ktilde: float
    alpha: float


def _check_k_rho(K: float, rho: float) -> None:
    if not (math.isfinite(K) and K >= 1):
        raise DomainError(f"K must be >= 1, got {K}")
    if not (math.isfinite(rho) and rho >= 1):
        raise DomainError(f"rho must be >= 1, got {rho}")


def ktilde_from_k(K: float, rho: float) -> float:
    """The w_rho constant matching a K-spectral constant.

    The discriminant ``(K^2+1)^2 - 4 rho (2-rho) K^2`` is evaluated in the
    cancellation-free form ``(K^2-1)^2 + 4 K^2 (rho-1)^2``.
    """
    _check_k_rho(K, rho)
    if K == 1:
        return 1.0
    if rho == 1:
        return float(K)
    K2 = K * K
    disc = (K2 - 1) ** 2 + 4 * K2 * (rho - 1) ** 2
    return (K2 + 1 + math.sqrt(disc)) / (2 * rho * K)


def k_from_ktilde(Ktilde: float, rho: float) -> float:
    """Inverse of :func:`ktilde_from_k`: the root ``K >= Ktilde`` of
    ``Ktilde K^2 - (rho Ktilde^2 + 2 - rho) K + Ktilde = 0``."""
    _check_k_rho(Ktilde, rho)
    if Ktilde == 1:
        return 1.0
    B = rho * Ktilde * Ktilde + 2 - rho
    # B^2 - 4 Kt^2 = (B - 2Kt)(B + 2Kt) with B - 2Kt = (Kt - 1)(rho Kt + rho - 2)
    disc = (Ktilde - 1) * (rho * Ktilde + rho - 2) * (B + 2 * Ktilde)
    return (B + math.sqrt(max(disc, 0.0))) / (2 * Ktilde)


def disc_dk(K: float) -> Disc:
    if not (math.isfinite(K) and K > 1):
        raise DomainError(f"D_K needs K > 1, got {K}")
    K2 = K * K
    return Disc(center=complex((K2 + 1) / (K2 - 1)), radius=2 * K / (K2 - 1))


def homothety_alpha(K: float, rho: float) -> float:
    """Scale factor of the homothety ``z -> alpha z + (1 - rho)`` taking D_K onto D_Ktilde."""
    _check_k_rho(K, rho)
    Kt = ktilde_from_k(K, rho)
    if Kt * Kt - 1 == 0:
        raise DomainError("Ktilde = 1: the target disc degenerates")
    return Kt / (Kt * Kt - 1) * (K * K - 1) / K


def cayley() -> MobiusMap:
    """(1 + z)/(1 - z)."""
    return MobiusMap(1, 1, -1, 1)


def cayley_k(K: float) -> MobiusMap:
    """(1 + z/K)/(1 - z/K) = (z + K)/(-z + K), a biholomorphism of the unit disc onto D_K."""
    return MobiusMap(1, K, -1, K)


def homothety(alpha: float, rho: float) -> MobiusMap:
    return MobiusMap(alpha, 1 - rho, 0, 1)


def disc_automorphism_b(K: float, rho: float) -> MobiusMap:
    """cayley_k(Ktilde)^{-1} o homothety o cayley_k(K), composed on coefficients."""
    _check_k_rho(K, rho)
    if K <= 1:
        raise DomainError(f"disc automorphism needs K > 1, got {K}")
    if rho == 1:
        return MobiusMap(1, 0, 0, 1)
    Kt = ktilde_from_k(K, rho)
    alpha = homothety_alpha(K, rho)
    return cayley_k(Kt).inverse().compose(homothety(alpha, rho)).compose(cayley_k(K))


def drury_constant(rho: float) -> float:
    """(rho^2 + 1 + (rho - 1) sqrt(5 rho^2 + 2 rho + 1)) / (2 rho^2)."""
    if not (math.isfinite(rho) and rho >= 1):
        raise DomainError(f"rho must be >= 1, got {rho}")
    return (rho * rho + 1 + (rho - 1) * math.sqrt(5 * rho * rho + 2 * rho + 1)) / (2 * rho * rho)


def conversion_record(K: float, rho: float) -> ConversionRecord:
    Kt = ktilde_from_k(K, rho)
    alpha = 1.0 if K == 1 else homothety_alpha(K, rho)
    return ConversionRecord(K=K, rho=rho, Ktilde=Kt, alpha=alpha)
