"""Scalar and matrix-valued test functions on the closed unit disc.

Three kinds of scalar function are used: polynomials, finite Blaschke
products (modulus one on the circle, so their sup norm is exactly 1), and a
Mobius map applied on top of another function.  Each evaluates both at
complex points and at square matrices through the rational functional
calculus.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np

from .complexmat import as_cmat, mobius_factor_eval, op_norm, poly_eval
from .mobius import MobiusMap

__all__ = [
    "Polynomial", "Blaschke", "Composite", "RationalFn", "MatrixFn",
    "sup_norm_disc", "eval_fn", "amplify_eval", "disc_automorphism",
    "scaled", "mobius_family", "blaschke_family", "composite_family",
    "polynomial_family", "polynomial_matrix_family", "parse_family",
]

_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


def _c(z) -> list:
    return [float(np.real(z)), float(np.imag(z))]


@dataclass(frozen=True)
class Polynomial:
    coeffs: tuple  # ascending powers

    def __post_init__(self):
        object.__setattr__(self, "coeffs", tuple(complex(c) for c in self.coeffs))

    def __call__(self, z):
        return np.polynomial.polynomial.polyval(z, np.array(self.coeffs))

    def at(self, T) -> np.ndarray:
        return poly_eval(self.coeffs, T)

    def to_dict(self) -> dict:
        return {"kind": "polynomial", "coeffs": [_c(c) for c in self.coeffs]}


@dataclass(frozen=True)
class Blaschke:
    zeros: tuple
    phase: complex = 1.0

    def __post_init__(self):
        zeros = tuple(complex(a) for a in self.zeros)
        if any(abs(a) >= 1 for a in zeros):
            raise ValueError("Blaschke zeros must lie in the open unit disc")
        if abs(abs(self.phase) - 1) > 1e-12:
            raise ValueError("Blaschke phase must be unimodular")
        object.__setattr__(self, "zeros", zeros)
        object.__setattr__(self, "phase", complex(self.phase))

    def __call__(self, z):
        out = self.phase * np.ones_like(np.asarray(z, dtype=np.complex128))
        for a in self.zeros:
            out = out * (z - a) / (1 - np.conj(a) * z)
        return out

    def at(self, T) -> np.ndarray:
        T = as_cmat(T, square=True)
        R = self.phase * np.eye(T.shape[0], dtype=np.complex128)
        for a in self.zeros:
            R = R @ mobius_factor_eval(a, 1.0, T)
        return R

    def to_dict(self) -> dict:
        return {"kind": "blaschke", "zeros": [_c(a) for a in self.zeros], "phase": _c(self.phase)}


@dataclass(frozen=True)
class Composite:
    """outer o inner, with ``outer`` a Mobius map."""

    outer: MobiusMap
    inner: "RationalFn"

    def __call__(self, z):
        return self.outer(self.inner(z))

    def at(self, T) -> np.ndarray:
        return self.outer.apply_matrix(self.inner.at(T))

    def to_dict(self) -> dict:
        o = self.outer
        return {"kind": "composite", "outer": [_c(o.a), _c(o.b), _c(o.c), _c(o.d)],
                "inner": self.inner.to_dict()}


RationalFn = Union[Polynomial, Blaschke, Composite]


def _is_inner(f: RationalFn) -> bool:
    """Unimodular on the circle: Blaschke products and disc automorphisms of them."""
    if isinstance(f, Blaschke):
        return True
    if isinstance(f, Composite):
        return _preserves_circle(f.outer) and _is_inner(f.inner)
    return False


def _preserves_circle(m: MobiusMap) -> bool:
    # M* J M = c J with c > 0, J = diag(1, -1)
    M = m.matrix()
    J = np.diag([1.0, -1.0])
    G = M.conj().T @ J @ M
    c = G[0, 0].real
    return c > 0 and np.allclose(G, c * J, atol=1e-13 * abs(c))


def sup_norm_disc(f: RationalFn, grid: int = 4096) -> float:
    """sup |f| over the closed disc, i.e. over the circle.

    Unimodular functions short-circuit to 1.  Otherwise the circle is
    sampled on ``grid`` points and the best local maxima are polished by
    golden-section search, so the result is a (tight) lower bound.
    """
    if _is_inner(f):
        return 1.0
    h = 2 * math.pi / grid
    th = h * np.arange(grid)
    vals = np.abs(f(np.exp(1j * th)))
    best = float(vals.max())
    left, right = np.roll(vals, 1), np.roll(vals, -1)
    idx = np.nonzero((vals >= left) & (vals >= right))[0]
    idx = idx[np.argsort(-vals[idx], kind="stable")][:8]
    for i in idx:
        a, b = th[i] - h, th[i] + h
        c, d = b - _GOLDEN * (b - a), a + _GOLDEN * (b - a)
        fc, fd = abs(f(np.exp(1j * c))), abs(f(np.exp(1j * d)))
        while b - a > 1e-12:
            if fc >= fd:
                b, d, fd = d, c, fc
                c = b - _GOLDEN * (b - a)
                fc = abs(f(np.exp(1j * c)))
            else:
                a, c, fc = c, d, fd
                d = a + _GOLDEN * (b - a)
                fd = abs(f(np.exp(1j * d)))
        best = max(best, float(fc), float(fd))
    return best


def eval_fn(f: RationalFn, T) -> np.ndarray:
    return f.at(T)


@dataclass(frozen=True)
class MatrixFn:
    """k x k matrix whose entries are scalar test functions."""

    entries: tuple  # tuple of row tuples

    def __post_init__(self):
        rows = tuple(tuple(r) for r in self.entries)
        k = len(rows)
        if k < 1 or any(len(r) != k for r in rows):
            raise ValueError("MatrixFn entries must form a non-empty square array")
        object.__setattr__(self, "entries", rows)

    @property
    def k(self) -> int:
        return len(self.entries)

    def __call__(self, z: complex) -> np.ndarray:
        return np.array([[complex(f(z)) for f in row] for row in self.entries])

    def sup_norm(self, grid: int = 1024) -> float:
        th = 2 * math.pi * np.arange(grid) / grid
        zs = np.exp(1j * th)
        vals = np.empty((grid, self.k, self.k), dtype=np.complex128)
        for i, row in enumerate(self.entries):
            for j, f in enumerate(row):
                vals[:, i, j] = f(zs)
        return float(np.max(np.linalg.norm(vals, 2, axis=(1, 2))))

    def to_dict(self) -> dict:
        return {"kind": "matrix", "entries": [[f.to_dict() for f in row] for row in self.entries]}


def amplify_eval(F: MatrixFn, T) -> np.ndarray:
    """Block matrix with (i, j) block f_ij(T)."""
    if F.k == 1:
        return eval_fn(F.entries[0][0], T)
    return np.block([[eval_fn(f, T) for f in row] for row in F.entries])


# --------------------------------------------------------------------------
# families


def disc_automorphism(a: complex, zeta: complex = 1.0) -> MobiusMap:
    """zeta (z - a)/(1 - conj(a) z)."""
    return MobiusMap(zeta, -zeta * a, -np.conj(a), 1.0)


def scaled(f: RationalFn, c: complex) -> Composite:
    return Composite(MobiusMap(c, 0.0, 0.0, 1.0), f)


def mobius_family(radii: Sequence[float] = (0.0, 0.2, 0.4, 0.6, 0.8), angles: int = 16) -> list:
    """Single Mobius factors with zeros on a radial-angular grid."""
    fam = []
    for r in radii:
        if r == 0:
            fam.append(Blaschke((0.0,)))
            continue
        for k in range(angles):
            fam.append(Blaschke((r * np.exp(2j * math.pi * k / angles),)))
    return fam


def _random_disc_point(rng: np.random.Generator, rmax: float = 0.95) -> complex:
    r = rmax * math.sqrt(rng.uniform())
    return complex(r * np.exp(2j * math.pi * rng.uniform()))


def blaschke_family(max_degree: int, count: int, rng: np.random.Generator) -> list:
    fam = []
    for _ in range(count):
        deg = int(rng.integers(1, max_degree + 1))
        zeros = tuple(_random_disc_point(rng) for _ in range(deg))
        phase = complex(np.exp(2j * math.pi * rng.uniform()))
        fam.append(Blaschke(zeros, phase))
    return fam


def composite_family(max_degree: int, count: int, rng: np.random.Generator) -> list:
    """Disc automorphisms applied to random Blaschke products."""
    inner = blaschke_family(max_degree, count, rng)
    out = []
    for b in inner:
        a = _random_disc_point(rng, 0.9)
        zeta = complex(np.exp(2j * math.pi * rng.uniform()))
        out.append(Composite(disc_automorphism(a, zeta), b))
    return out


def polynomial_family(degree: int, count: int, rng: np.random.Generator,
                      zero_constant: bool = False) -> list:
    fam = []
    for _ in range(count):
        c = rng.standard_normal(degree + 1) + 1j * rng.standard_normal(degree + 1)
        if zero_constant:
            c[0] = 0.0
        fam.append(Polynomial(tuple(c)))
    return fam


def polynomial_matrix_family(k: int, degree: int, count: int, rng: np.random.Generator) -> list:
    """U diag(z^{n_l}) V with U, V unitary: polynomial entries and sup norm exactly 1."""
    from .complexmat import random_unitary

    fam = []
    for _ in range(count):
        U, V = random_unitary(k, rng), random_unitary(k, rng)
        powers = rng.integers(0, degree + 1, size=k)
        rows = []
        for i in range(k):
            row = []
            for j in range(k):
                c = np.zeros(degree + 1, dtype=np.complex128)
                for l in range(k):
                    c[powers[l]] += U[i, l] * V[l, j]
                row.append(Polynomial(tuple(c)))
            rows.append(tuple(row))
        fam.append(MatrixFn(tuple(rows)))
    return fam


def parse_family(spec: str, seed: int) -> list:
    """Build a family from specs such as ``mobius+blaschke:deg=4,count=32``.

    Parts: ``mobius``, ``blaschke``, ``composite`` (keys ``deg``, ``count``)
    and ``poly`` (keys ``deg``, ``count``, ``zero``).
    """
    rng = np.random.default_rng(seed)
    fam = []
    for part in spec.split("+"):
        name, _, args = part.strip().partition(":")
        opts = {}
        for kv in filter(None, args.split(",")):
            key, _, val = kv.partition("=")
            opts[key.strip()] = int(val)
        deg = opts.get("deg", 2)
        count = opts.get("count", 32)
        if name == "mobius":
            fam.extend(mobius_family())
        elif name == "blaschke":
            fam.extend(blaschke_family(deg, count, rng))
        elif name == "composite":
            fam.extend(composite_family(deg, count, rng))
        elif name == "poly":
            fam.extend(polynomial_family(deg, count, rng, zero_constant=bool(opts.get("zero", 0))))
        else:
            raise ValueError(f"unknown family part {name!r}")
    if not fam:
        raise ValueError("empty family")
    return fam
