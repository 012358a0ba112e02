"""Numerical radius and the Sz.-Nagy--Foias operator radii w_rho.

``w_rho(T)`` is the gauge of the class C_rho.  Membership of a matrix with
spectrum inside the open disc is decided through the resolvent condition

    min_{|zeta|=1} lambda_min Re((I - zeta T)^{-1}(I + zeta T)) >= 1 - rho,

and the gauge is then found by bisection on the scale.  An independent lower
bound comes from the variational formula over unit vectors.
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from typing import Optional

import numpy as np

from .complexmat import as_cmat, op_norm, spectral_radius

__all__ = [
    "RadiusReport", "RhoParams", "SpectrumOnBoundary", "CrhoMargin",
    "numerical_radius", "crho_margin", "in_class_crho", "w_rho",
    "w_rho_variational", "variational_objective",
]

_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


class SpectrumOnBoundary(ValueError):
    """The spectrum touches the unit circle, where the resolvent test is undefined."""


@dataclass(frozen=True)
class RhoParams:
    rho: float = 2.0
    zeta_samples: int = 256
    refine_depth: int = 24

    def __post_init__(self):
        if not self.rho >= 1:
            raise ValueError(f"rho must be >= 1, got {self.rho}")
        n = self.zeta_samples
        if n < 16 or n & (n - 1):
            raise ValueError("zeta_samples must be a power of two >= 16")
        if self.refine_depth < 0:
            raise ValueError("refine_depth must be >= 0")


@dataclass
class RadiusReport:
    value: float
    lower: float
    upper: float
    method: str
    iterations: int = 0
    zeta_grid: int = 0
    converged: bool = True
    boundary_hits: int = 0
    previous: Optional[float] = None
    conv_gap: Optional[float] = None
    notes: list = field(default_factory=list)

    def to_dict(self) -> dict:
        return asdict(self)


# --------------------------------------------------------------------------
# numerical radius


def _top_eig_rotated(T: np.ndarray, thetas: np.ndarray) -> np.ndarray:
    """lambda_max(Re(e^{i theta} T)) for each theta (batched)."""
    R = np.exp(1j * thetas)[:, None, None] * T[None]
    H = (R + np.conj(np.swapaxes(R, 1, 2))) / 2
    return np.linalg.eigvalsh(H)[:, -1]


def numerical_radius(T, tol: float = 1e-9, grid: int = 64, max_brackets: int = 16) -> RadiusReport:
    """w(T) = max_theta lambda_max(Re(e^{i theta} T)).

    Coarse scan on ``grid`` angles, then simultaneous golden-section search
    on every coarse local maximum that could still beat the best sample
    (pruned with the Lipschitz constant ||T|| of the scanned function).
    """
    T = as_cmat(T, square=True)
    L = op_norm(T)
    if L == 0.0:
        return RadiusReport(0.0, 0.0, 0.0, "theta-scan", zeta_grid=grid)
    grid = max(int(grid), 64)
    h = 2 * math.pi / grid
    thetas = h * np.arange(grid)
    vals = _top_eig_rotated(T, thetas)
    best = float(vals.max())
    left, right = np.roll(vals, 1), np.roll(vals, -1)
    cand = np.nonzero((vals >= left) & (vals >= right) & (vals + L * h >= best))[0]
    cand = cand[np.argsort(-vals[cand], kind="stable")][:max_brackets]

    a = thetas[cand] - h
    b = thetas[cand] + h
    c = b - _GOLDEN * (b - a)
    d = a + _GOLDEN * (b - a)
    fc = _top_eig_rotated(T, c)
    fd = _top_eig_rotated(T, d)
    target = max(tol / (4 * L), 1e-13)
    it = 0
    while np.max(b - a) > target and it < 200:
        it += 1
        up = fc >= fd  # keep [a, d]
        b = np.where(up, d, b)
        a = np.where(up, a, c)
        new_c = b - _GOLDEN * (b - a)
        new_d = a + _GOLDEN * (b - a)
        pts = np.where(up, new_c, new_d)
        fp = _top_eig_rotated(T, pts)
        c, d, fc, fd = (
            np.where(up, new_c, d), np.where(up, c, new_d),
            np.where(up, fp, fd), np.where(up, fc, fp),
        )
    refined = float(max(fc.max(), fd.max()))
    value = max(best, refined)
    width = float(np.max(b - a))
    upper = value + L * width
    return RadiusReport(
        value=value, lower=value, upper=upper, method="theta-scan",
        iterations=it, zeta_grid=grid, converged=upper - value <= tol,
    )


# --------------------------------------------------------------------------
# class C_rho membership


@dataclass(frozen=True)
class CrhoMargin:
    minimum: float      # min over sampled zeta of lambda_min(Re(...))
    margin: float       # minimum - (1 - rho)
    theta: float        # argument of the minimising zeta
    uncertainty: float  # improvement made by the last refinement level
    evaluations: int


def _min_eig_poisson(T: np.ndarray, thetas: np.ndarray) -> np.ndarray:
    """lambda_min(Re((I - zeta T)^{-1}(I + zeta T))) for zeta = e^{i theta}."""
    d = T.shape[0]
    eye = np.eye(d, dtype=np.complex128)
    zT = np.exp(1j * thetas)[:, None, None] * T[None]
    X = np.linalg.solve(eye - zT, eye + zT)
    H = (X + np.conj(np.swapaxes(X, 1, 2))) / 2
    return np.linalg.eigvalsh(H)[:, 0]


def crho_margin(T, params: RhoParams, n_minima: int = 4) -> CrhoMargin:
    """Sample the resolvent condition on the circle and refine near its minima.

    Refinement halves the spacing around each running minimum, evaluating
    only the midpoints of the two adjacent intervals, for ``refine_depth``
    levels.  The caller is responsible for checking r(T) < 1.
    """
    T = as_cmat(T, square=True)
    n = params.zeta_samples
    h = 2 * math.pi / n
    thetas = h * np.arange(n)
    vals = _min_eig_poisson(T, thetas)
    evals = n
    left, right = np.roll(vals, 1), np.roll(vals, -1)
    idx = np.nonzero((vals <= left) & (vals <= right))[0]
    idx = idx[np.argsort(vals[idx], kind="stable")][:n_minima]
    if idx.size == 0:
        idx = np.array([int(np.argmin(vals))])
    centers = thetas[idx]
    fc = vals[idx]
    running = float(fc.min())
    last_gain = 0.0
    step = h
    for _ in range(params.refine_depth):
        step /= 2
        pts = np.concatenate([centers - step, centers + step])
        fp = _min_eig_poisson(T, pts)
        evals += pts.size
        k = centers.size
        stack_f = np.vstack([fc, fp[:k], fp[k:]])
        stack_t = np.vstack([centers, centers - step, centers + step])
        choice = np.argmin(stack_f, axis=0)
        cols = np.arange(k)
        fc = stack_f[choice, cols]
        centers = stack_t[choice, cols]
        new_min = float(fc.min())
        last_gain = running - new_min
        running = new_min
    j = int(np.argmin(fc))
    return CrhoMargin(
        minimum=running,
        margin=running - (1 - params.rho),
        theta=float(centers[j] % (2 * math.pi)),
        uncertainty=max(last_gain, 0.0),
        evaluations=evals,
    )


def in_class_crho(T, params: RhoParams, tol: float = 1e-9) -> bool:
    """True iff T (with spectrum in the open disc) passes the sampled resolvent test."""
    T = as_cmat(T, square=True)
    r = spectral_radius(T)
    if r >= 1 - tol:
        raise SpectrumOnBoundary(f"spectral radius {r:.12g} is not below 1 - tol")
    return crho_margin(T, params).margin >= -tol


# --------------------------------------------------------------------------
# w_rho by bisection


def w_rho(T, params: RhoParams, tol: float = 1e-8) -> RadiusReport:
    """inf{lambda > 0 : T / lambda in C_rho} by bisection on lambda.

    The upper end starts at ||T|| (always admissible since w_rho <= w_1);
    the lower end is found by halving until membership fails.  Scales at
    which T/lambda has spectral radius >= 1 - tol are classified as outside
    the class and counted in ``boundary_hits``.
    """
    T = as_cmat(T, square=True)
    hi = op_norm(T)
    n = params.zeta_samples
    if hi == 0.0:
        return RadiusReport(0.0, 0.0, 0.0, "bisection", zeta_grid=n)
    r_T = spectral_radius(T)
    hits = 0
    uncertain = 0
    iters = 0

    def member(lam: float) -> bool:
        nonlocal hits, uncertain, iters
        iters += 1
        if r_T / lam >= 1 - tol:
            hits += 1
            return False
        m = crho_margin(T / lam, params)
        if abs(m.margin) <= m.uncertainty and m.uncertainty > tol:
            uncertain += 1
        return m.margin >= -tol

    lo = hi / 2
    while member(lo):
        hi = lo
        lo /= 2
        if lo < tol * hi:
            lo = 0.0
            break
    width_target = tol * max(1.0, hi)
    while hi - lo > width_target:
        mid = 0.5 * (lo + hi)
        if member(mid):
            hi = mid
        else:
            lo = mid
    notes = []
    if hits:
        notes.append("bisection touched scales with spectrum on the unit circle")
    if uncertain:
        notes.append(f"{uncertain} membership decisions within zeta-grid uncertainty")
    return RadiusReport(
        value=0.5 * (lo + hi), lower=lo, upper=hi, method="bisection",
        iterations=iters, zeta_grid=n, converged=uncertain == 0,
        boundary_hits=hits, notes=notes,
    )


# --------------------------------------------------------------------------
# variational lower bound


def variational_objective(A: np.ndarray, h: np.ndarray, rho: float) -> float:
    """Bracketed w_rho expression at a unit vector h; -inf outside the admissible set."""
    Ah = A @ h
    q = abs(np.vdot(h, Ah))
    c = 1 - 1 / rho
    rad = c * c * q * q + (2 / rho - 1) * float(np.vdot(Ah, Ah).real)
    if rad < 0:
        return -math.inf
    return c * q + math.sqrt(rad)


def _unpack(x: np.ndarray, d: int) -> np.ndarray:
    return x[:d] + 1j * x[d:]


def w_rho_variational(T, rho: float, restarts: int = 50, steps: int = 200,
                      seed: int = 0, fd_step: float = 1e-6) -> float:
    """Lower bound on w_rho(T) by random-start projected ascent on the unit sphere.

    Gradients are central finite differences in the real coordinates of h.
    For rho > 2 points outside the admissible set score -inf, so starts are
    resampled until admissible and infeasible steps are rejected.
    """
    A = as_cmat(T, square=True)
    if rho < 1:
        raise ValueError("rho must be >= 1")
    if not np.any(A):
        return 0.0
    d = A.shape[0]
    rng = np.random.default_rng(seed)

    def F(x):
        return variational_objective(A, _unpack(x, d), rho)

    best = -math.inf
    for _ in range(restarts):
        x = None
        for _ in range(100):
            y = rng.standard_normal(2 * d)
            y /= np.linalg.norm(y)
            if F(y) > -math.inf:
                x = y
                break
        if x is None:
            continue
        fx = F(x)
        step = 0.1
        for _ in range(steps):
            g = np.zeros(2 * d)
            for k in range(2 * d):
                e = np.zeros(2 * d)
                e[k] = fd_step
                fp, fm = F(x + e), F(x - e)
                if fp > -math.inf and fm > -math.inf:
                    g[k] = (fp - fm) / (2 * fd_step)
                elif fp > -math.inf:
                    g[k] = (fp - fx) / fd_step
                elif fm > -math.inf:
                    g[k] = (fx - fm) / fd_step
            g -= np.dot(g, x) * x
            gn = np.linalg.norm(g)
            if gn == 0.0:
                break
            g /= gn
            s = min(0.1, 2 * step)
            moved = False
            for _ in range(9):
                y = x + s * g
                y /= np.linalg.norm(y)
                fy = F(y)
                if fy > fx:
                    x, fx, step, moved = y, fy, s, True
                    break
                s /= 2
            if not moved:
                break
        best = max(best, fx)
    return float(best) if best > -math.inf else 0.0
