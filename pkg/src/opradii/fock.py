"""Truncated full Fock space over n generators.

Words over the letters 1..n are ordered by length, then lexicographically,
so the words of length k occupy one contiguous block and a word's position
inside its block is its base-n code.  Truncating at length m keeps words of
length <= m; creation operators send top-length words to zero, which makes
every truncated operator a compression of the full one.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Mapping, Optional, Sequence

import numpy as np

from .complexmat import DimensionOverflow, TOLERANCES, as_cmat, op_norm
from .radii import RadiusReport, numerical_radius

__all__ = [
    "Word", "FockTruncation", "NcPoly", "DegreeOverflow", "creation_matrix",
    "creation_matrices", "eval_nc_poly", "nc_sup_norm", "coeff_l2_bound",
    "fock_operator", "joint_numerical_radius", "joint_radius_variational",
    "series_length", "nc_mobius_series", "check_popescu_bounds", "ncpoly_from_json",
    "ncpoly_to_json",
]

Word = tuple  # letters in 1..n; () is the empty word


class DegreeOverflow(ValueError):
    pass


def _block_size(n: int, k: int) -> int:
    return n ** k


def _offset(n: int, k: int) -> int:
    """Number of words of length < k."""
    return k if n == 1 else (n ** k - 1) // (n - 1)


def word_code(w: Word, n: int) -> int:
    c = 0
    for letter in w:
        c = c * n + (letter - 1)
    return c


@dataclass(frozen=True)
class FockTruncation:
    n: int
    m: int
    basis: tuple = field(init=False, repr=False)

    def __post_init__(self):
        if self.n < 1 or self.m < 0:
            raise ValueError("need n >= 1 and m >= 0")
        words = [()]
        layer = [()]
        for _ in range(self.m):
            layer = [w + (i,) for w in layer for i in range(1, self.n + 1)]
            words.extend(layer)
        object.__setattr__(self, "basis", tuple(words))

    @property
    def size(self) -> int:
        return _offset(self.n, self.m + 1)

    def index(self, w: Word) -> int:
        if len(w) > self.m or any(not 1 <= x <= self.n for x in w):
            raise KeyError(w)
        return _offset(self.n, len(w)) + word_code(w, self.n)

    def child_indices(self, i: int) -> tuple:
        """(parents, children): indices of alpha with |alpha| < m and of g_i alpha."""
        n = self.n
        parents, children = [], []
        for k in range(self.m):
            base = np.arange(_block_size(n, k))
            parents.append(_offset(n, k) + base)
            children.append(_offset(n, k + 1) + (i - 1) * n ** k + base)
        if not parents:
            return np.zeros(0, dtype=int), np.zeros(0, dtype=int)
        return np.concatenate(parents), np.concatenate(children)


def creation_matrix(trunc: FockTruncation, i: int) -> np.ndarray:
    """Left creation operator e_alpha -> e_{g_i alpha}, compressed to the truncation."""
    if not 1 <= i <= trunc.n:
        raise ValueError(f"generator index {i} outside 1..{trunc.n}")
    S = np.zeros((trunc.size, trunc.size), dtype=np.complex128)
    par, ch = trunc.child_indices(i)
    S[ch, par] = 1.0
    return S


def creation_matrices(trunc: FockTruncation) -> list:
    return [creation_matrix(trunc, i) for i in range(1, trunc.n + 1)]


# --------------------------------------------------------------------------
# noncommutative polynomials


class NcPoly:
    """sum_alpha a_alpha e_alpha over words in n letters; zero coefficients are dropped."""

    __slots__ = ("n", "coeffs")

    def __init__(self, n: int, coeffs: Mapping[Word, complex]):
        if n < 1:
            raise ValueError("n must be >= 1")
        clean = {}
        for w, a in coeffs.items():
            w = tuple(int(x) for x in w)
            if any(not 1 <= x <= n for x in w):
                raise ValueError(f"word {w} uses letters outside 1..{n}")
            a = complex(a)
            if a != 0:
                clean[w] = clean.get(w, 0) + a
        self.n = n
        self.coeffs = {w: a for w, a in sorted(clean.items(), key=lambda t: (len(t[0]), t[0])) if a != 0}

    @property
    def degree(self) -> int:
        return max((len(w) for w in self.coeffs), default=0)

    @property
    def constant(self) -> complex:
        return self.coeffs.get((), 0j)

    def is_constant(self) -> bool:
        return all(len(w) == 0 for w in self.coeffs)

    def __eq__(self, other):
        return isinstance(other, NcPoly) and self.n == other.n and self.coeffs == other.coeffs

    def __repr__(self):
        return f"NcPoly(n={self.n}, coeffs={self.coeffs!r})"

    def __add__(self, other: "NcPoly") -> "NcPoly":
        out = dict(self.coeffs)
        for w, a in other.coeffs.items():
            out[w] = out.get(w, 0) + a
        return NcPoly(self.n, out)

    def __sub__(self, other: "NcPoly") -> "NcPoly":
        return self + other.scale(-1)

    def scale(self, c: complex) -> "NcPoly":
        return NcPoly(self.n, {w: c * a for w, a in self.coeffs.items()})

    def graded(self, cap: int) -> list:
        """Coefficient arrays per length 0..cap, indexed by word code."""
        g = [np.zeros(self.n ** k, dtype=np.complex128) for k in range(cap + 1)]
        for w, a in self.coeffs.items():
            if len(w) <= cap:
                g[len(w)][word_code(w, self.n)] = a
        return g

    @classmethod
    def from_graded(cls, n: int, g: Sequence[np.ndarray]) -> "NcPoly":
        coeffs = {}
        for k, arr in enumerate(g):
            for code in np.nonzero(arr)[0]:
                w, c = [], int(code)
                for _ in range(k):
                    c, r = divmod(c, n)
                    w.append(r + 1)
                coeffs[tuple(reversed(w))] = arr[code]
        return cls(n, coeffs)

    def mul(self, other: "NcPoly", cap: Optional[int] = None) -> "NcPoly":
        """Concatenation product, dropping words longer than ``cap``."""
        cap = self.degree + other.degree if cap is None else cap
        return NcPoly.from_graded(self.n, _graded_mul(self.graded(cap), other.graded(cap), cap))

    __mul__ = mul

    def to_dict(self) -> dict:
        return ncpoly_to_json(self)


def _graded_mul(x: list, y: list, cap: int) -> list:
    out = [np.zeros_like(x[k]) for k in range(cap + 1)]
    for a in range(cap + 1):
        if not np.any(x[a]):
            continue
        for b in range(cap + 1 - a):
            if np.any(y[b]):
                out[a + b] += np.outer(x[a], y[b]).ravel()
    return out


def ncpoly_from_json(obj) -> NcPoly:
    try:
        n = int(obj["n"])
        terms = obj["terms"]
        coeffs = {}
        for t in terms:
            z = complex(float(t["re"]), float(t.get("im", 0.0)))
            if not (math.isfinite(z.real) and math.isfinite(z.imag)):
                raise ValueError("non-finite coefficient")
            w = tuple(int(x) for x in t["word"])
            coeffs[w] = coeffs.get(w, 0) + z
    except (KeyError, TypeError) as exc:
        raise ValueError(f"malformed polynomial object: {exc}") from exc
    return NcPoly(n, coeffs)


def ncpoly_to_json(p: NcPoly) -> dict:
    return {"n": p.n, "terms": [{"word": list(w), "re": a.real, "im": a.imag}
                                for w, a in p.coeffs.items()]}


def eval_nc_poly(p: NcPoly, Ts: Sequence) -> np.ndarray:
    """sum a_alpha T_alpha with T_alpha = T_{i1} T_{i2} ... T_{ik} and T_() = I."""
    Ts = [as_cmat(T, square=True) for T in Ts]
    if len(Ts) != p.n:
        raise ValueError(f"expected {p.n} operators, got {len(Ts)}")
    d = Ts[0].shape[0]
    if any(T.shape != (d, d) for T in Ts):
        raise ValueError("DimensionMismatch: operators must share one square shape")
    eye = np.eye(d, dtype=np.complex128)
    cache = {(): eye}

    def word_op(w):
        if w not in cache:
            cache[w] = word_op(w[:-1]) @ Ts[w[-1] - 1]
        return cache[w]

    out = np.zeros((d, d), dtype=np.complex128)
    for w, a in p.coeffs.items():
        out += a * word_op(w)
    return out


def nc_sup_norm(p: NcPoly, m_max: int, max_dim: int = TOLERANCES.max_dim):
    """(||p(S)|| on the length-``m_max`` truncation, increase over ``m_max - 1``).

    The value is a lower bound for the norm of p in the noncommutative disc
    algebra and is nondecreasing in ``m_max``.
    """
    if m_max < p.degree + 2:
        raise ValueError("m_max must be at least degree(p) + 2")
    vals = []
    for m in (m_max - 1, m_max):
        trunc = FockTruncation(p.n, m)
        if trunc.size > max_dim:
            raise DimensionOverflow(f"Fock truncation of size {trunc.size} exceeds {max_dim}")
        vals.append(op_norm(eval_nc_poly(p, creation_matrices(trunc))))
    return vals[1], vals[1] - vals[0]


def coeff_l2_bound(p: NcPoly) -> float:
    """sqrt(sum |a_alpha|^2) = ||p(S) e_()||, a lower bound for ||p(S)||."""
    return math.sqrt(sum(abs(a) ** 2 for a in p.coeffs.values()))


# --------------------------------------------------------------------------
# joint numerical radius


def fock_operator(Ts: Sequence, m: int, max_dim: int = TOLERANCES.max_dim) -> np.ndarray:
    """sum_i S_i (x) T_i^* on the length-m truncation."""
    Ts = [as_cmat(T, square=True) for T in Ts]
    d = Ts[0].shape[0]
    if any(T.shape != (d, d) for T in Ts):
        raise ValueError("DimensionMismatch: operators must share one square shape")
    trunc = FockTruncation(len(Ts), m)
    if trunc.size * d > max_dim:
        raise DimensionOverflow(f"Fock operator of size {trunc.size * d} exceeds {max_dim}")
    A = np.zeros((trunc.size * d, trunc.size * d), dtype=np.complex128)
    for i, T in enumerate(Ts, start=1):
        A += np.kron(creation_matrix(trunc, i), T.conj().T)
    return A


def _graded_radius(A: np.ndarray) -> float:
    # A raises the Fock degree by one, so e^{it} A is unitarily equivalent to A
    # and w(A) = lambda_max(Re A)
    H = (A + A.conj().T) / 2
    return max(float(np.linalg.eigvalsh(H)[-1]), 0.0)


def joint_numerical_radius(Ts: Sequence, m: int, tol: float = 1e-9,
                           method: str = "graded") -> RadiusReport:
    """w(sum S_i (x) T_i^*) on the length-m truncation, with the m-1 value as diagnostic.

    ``method="graded"`` uses the circular symmetry of degree-raising operators;
    ``method="theta-scan"`` runs the general numerical-radius search.
    """
    if m < 2:
        raise ValueError("m must be >= 2")
    vals = []
    for mm in (m - 1, m):
        A = fock_operator(Ts, mm)
        if method == "graded":
            vals.append(_graded_radius(A))
        elif method == "theta-scan":
            vals.append(numerical_radius(A, tol=tol).value)
        else:
            raise ValueError(f"unknown method {method!r}")
    value, prev = vals[1], vals[0]
    # levels [j, j+m] carry a copy of the truncated operator tensored with an
    # identity; averaging sine windows over j gives w_J <= value / cos(pi/(m+2))
    upper = value / math.cos(math.pi / (m + 2))
    return RadiusReport(value=value, lower=value, upper=upper, method=method,
                        previous=prev, conv_gap=value - prev,
                        converged=upper - value <= tol)


def joint_radius_variational(Ts: Sequence, trunc: FockTruncation, restarts: int = 20,
                             steps: int = 400, seed: int = 0) -> float:
    """Lower bound on w_J by ascent over families {h_alpha : |alpha| <= m}.

    Objective |sum_alpha sum_j <h_alpha, T_j h_{g_j alpha}>| with
    sum ||h_alpha||^2 = 1, evaluated from the word index maps directly
    (no Fock matrix is formed).  Each step moves along the Wirtinger gradient
    of the phase-aligned real part and renormalises.
    """
    Ts = [as_cmat(T, square=True) for T in Ts]
    if len(Ts) != trunc.n:
        raise ValueError("tuple length must match the truncation's n")
    if not any(np.any(T) for T in Ts):
        return 0.0
    d = Ts[0].shape[0]
    links = [trunc.child_indices(j) for j in range(1, trunc.n + 1)]
    eta = 1.0 / sum(op_norm(T) for T in Ts)
    rng = np.random.default_rng(seed)

    def pairing(H):
        s = 0j
        for (par, ch), T in zip(links, Ts):
            s += np.sum(np.conj(H[par]) * (H[ch] @ T.T))
        return s

    best = 0.0
    for _ in range(restarts):
        H = rng.standard_normal((trunc.size, d)) + 1j * rng.standard_normal((trunc.size, d))
        H /= np.linalg.norm(H)
        s = pairing(H)
        for _ in range(steps):
            phase = s / abs(s) if s != 0 else 1.0
            G = np.zeros_like(H)
            for (par, ch), T in zip(links, Ts):
                G[par] += np.conj(phase) * (H[ch] @ T.T)
                G[ch] += phase * (H[par] @ np.conj(T))
            H = H + eta * G
            H /= np.linalg.norm(H)
            s = pairing(H)
        best = max(best, abs(s))
    return float(best)


# --------------------------------------------------------------------------
# Mobius series and the disc-algebra bounds


def series_length(a0: complex, target: float = 1e-8, cap: int = 200) -> int:
    """Smallest N with |a0|^{N+1} / (1 - |a0|) < target, at most ``cap``."""
    r = abs(a0)
    if r == 0:
        return 0
    for N in range(cap + 1):
        if r ** (N + 1) / (1 - r) < target:
            return N
    return cap


def nc_mobius_series(p: NcPoly, N_terms: Optional[int] = None, degree_cap: int = 8,
                     max_terms: int = 200_000) -> NcPoly:
    """h_N = q sum_{k=0}^{N} (conj(a0) p)^k, a truncation of (p - a0)(1 - conj(a0) p)^{-1}.

    ``q = p - a0`` has no constant term, so neither does h_N.  Words longer
    than ``degree_cap`` are dropped from every product.
    """
    a0 = p.constant
    if abs(a0) >= 1:
        raise ValueError("constant coefficient must lie in the open unit disc")
    if _offset(p.n, degree_cap + 1) > max_terms:
        raise DegreeOverflow(f"degree cap {degree_cap} needs more than {max_terms} coefficients")
    N = series_length(a0) if N_terms is None else int(N_terms)
    cap = degree_cap
    q = p.graded(cap)
    q[0][:] = 0
    if a0 == 0 or N == 0:
        return NcPoly.from_graded(p.n, q)
    ap = [np.conj(a0) * g for g in p.graded(cap)]
    # Horner: S <- 1 + (conj(a0) p) S, N times
    S = [np.zeros(p.n ** k, dtype=np.complex128) for k in range(cap + 1)]
    S[0][0] = 1.0
    for _ in range(N):
        S = _graded_mul(ap, S, cap)
        S[0][0] += 1.0
    return NcPoly.from_graded(p.n, _graded_mul(q, S, cap))


def check_popescu_bounds(Ts: Sequence, poly_family: Sequence[NcPoly], m: int = 6,
                         tol: float = 1e-6, bound_scale: float = 1.0,
                         series: bool = True) -> dict:
    """Check, for a tuple with w_J <= 1 (caller normalises):

    (a) p(0) = 0:  w(p(T)) <= ||p(S)|| + gap
    (b)            w(p(T)) <= 5/4 (||p(S)|| + gap)
    (c)            ||p(T)|| <= 2 (||p(S)|| + gap)

    With ``series`` set, clause (a) is also run on the Mobius series h_N of
    every non-constant p after normalising ||p(S)|| to 1.
    """
    checks = []

    def record(name, margin, p):
        checks.append({"name": name, "margin": float(margin), "passed": bool(margin >= -tol),
                       "witness": ncpoly_to_json(p)})

    for p in poly_family:
        s, gap = nc_sup_norm(p, max(m, p.degree + 2))
        bound = s + max(gap, 0.0)
        P = eval_nc_poly(p, Ts)
        wP = numerical_radius(P, tol=1e-10).value
        if abs(p.constant) <= 1e-14:
            record("popescu_berger_stampfli", bound_scale * bound - wP, p)
        record("popescu_drury", bound_scale * 1.25 * bound - wP, p)
        record("popescu_okubo_ando", bound_scale * 2 * bound - op_norm(P), p)
        if series and not p.is_constant() and s > 0:
            pn = p.scale(1 / bound)
            if abs(pn.constant) < 1:
                h = nc_mobius_series(pn, degree_cap=max(p.degree, 4))
                hs, hgap = nc_sup_norm(h, h.degree + 2)
                wh = numerical_radius(eval_nc_poly(h, Ts), tol=1e-10).value
                record("popescu_series_h_N", bound_scale * (hs + max(hgap, 0.0)) - wh, h)
    return {"hard_checks": checks, "violations": [c for c in checks if not c["passed"]]}
