"""Estimates of K-spectral and K-w_rho constants over the unit disc, and
desk checks of the inequalities tying them together.

All constants computed here are lower bounds: they maximise a ratio over a
finite family of test functions.  Theorem-level checks therefore go one
way only (estimate <= certified bound) and report a margin for each.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .complexmat import Singular, as_cmat, inverse, op_norm, real_part, spectral_radius
from .functions import MatrixFn, RationalFn, amplify_eval, eval_fn, sup_norm_disc
from .mobius import drury_constant, ktilde_from_k
from .radii import RhoParams, crho_margin, numerical_radius, w_rho

__all__ = [
    "ConstantEstimate", "operator_radius", "estimate_constant", "make_similarity_model",
    "check_positivity_lemmas", "verify_main_theorem", "check_named_inequalities",
    "check_complete_okubo_ando",
]


@dataclass
class ConstantEstimate:
    value: float
    witness: object
    family_size: int
    is_lower_bound: bool = True

    def to_dict(self) -> dict:
        w = self.witness.to_dict() if self.witness is not None else None
        return {"value": self.value, "witness": w, "family_size": self.family_size,
                "is_lower_bound": self.is_lower_bound}


def operator_radius(A, rho: float, params: Optional[RhoParams] = None, tol: float = 1e-9) -> float:
    """w_rho(A), using the norm and the numerical radius for rho = 1 and 2."""
    if rho == 1:
        return op_norm(A)
    if rho == 2:
        return numerical_radius(A, tol=tol).value
    params = params or RhoParams(rho=rho)
    if params.rho != rho:
        params = RhoParams(rho, params.zeta_samples, params.refine_depth)
    return w_rho(A, params, tol=tol).value


def _radius_upper(A, rho: float, params: Optional[RhoParams], tol: float) -> float:
    if rho == 1:
        return op_norm(A)
    if rho == 2:
        return numerical_radius(A, tol=tol).upper
    params = RhoParams(rho, *(params.zeta_samples, params.refine_depth) if params else ())
    return w_rho(A, params, tol=tol).upper


def estimate_constant(T, rho: float, family: Sequence[RationalFn],
                      params: Optional[RhoParams] = None, tol: float = 1e-9) -> ConstantEstimate:
    """max over the family of w_rho(f(T)) / ||f||."""
    T = as_cmat(T, square=True)
    best, witness = -math.inf, None
    for f in family:
        nf = sup_norm_disc(f)
        if nf == 0:
            continue
        ratio = operator_radius(eval_fn(f, T), rho, params, tol) / nf
        if ratio > best:
            best, witness = ratio, f
    return ConstantEstimate(value=float(best), witness=witness, family_size=len(family))


def make_similarity_model(C, L):
    """T = L C L^{-1} together with the condition number ||L|| ||L^{-1}||.

    When ``C`` is a contraction the disc is a complete ``kappa(L)``-spectral
    set for ``T``.
    """
    C = as_cmat(C, square=True)
    L = as_cmat(L, square=True)
    if op_norm(C) > 1 + 1e-12:
        raise ValueError("C must be a contraction")
    Linv = inverse(L)
    return L @ C @ Linv, op_norm(L) * op_norm(Linv)


def _min_real_eig(A: np.ndarray) -> float:
    return float(np.linalg.eigvalsh(real_part(A))[0])


def check_positivity_lemmas(T, K: float, h_family: Sequence[RationalFn], tol: float = 1e-6,
                            params: Optional[RhoParams] = None) -> dict:
    """Check both positivity characterisations for f = (1 + h)/(1 - h).

    Per h:  lambda_min Re f(T) >= 0       <=>  ||h(T)|| <= 1
            min_zeta lambda_min Re f_zeta(T) >= -1  <=>  w(h(T)) <= 1
    where f_zeta uses zeta h.  Sides within ``tol`` of their threshold are
    counted as agreeing with either outcome.
    """
    T = as_cmat(T, square=True)
    if K <= 1:
        raise ValueError("K must exceed 1")
    params = params or RhoParams(rho=2.0)
    rows, violations = [], []
    d = T.shape[0]
    eye = np.eye(d, dtype=np.complex128)
    for idx, h in enumerate(h_family):
        nh = sup_norm_disc(h)
        H = eval_fn(h, T)
        norm_h = op_norm(H)
        try:
            F = (eye + H) @ inverse(eye - H)
            lam_f = _min_real_eig(F)
        except Singular:
            lam_f = -math.inf
        w_h = numerical_radius(H).value
        if spectral_radius(H) >= 1 - 1e-12:
            lam_rot = -math.inf
        else:
            lam_rot = crho_margin(H, params).minimum
        row = {
            "index": idx,
            "sup_norm": nh,
            "within_ball": nh <= 1 / K + tol,
            "lemma_norm": {"re_f_min": lam_f, "norm_h": norm_h,
                           "f_side": lam_f >= -tol, "h_side": norm_h <= 1 + tol},
            "lemma_radius": {"re_f_min": lam_rot, "w_h": w_h,
                             "f_side": lam_rot >= -1 - tol, "h_side": w_h <= 1 + tol},
        }
        ok_norm = (row["lemma_norm"]["f_side"] == row["lemma_norm"]["h_side"]
                   or abs(lam_f) <= tol or abs(norm_h - 1) <= tol)
        ok_rad = (row["lemma_radius"]["f_side"] == row["lemma_radius"]["h_side"]
                  or abs(lam_rot + 1) <= tol or abs(w_h - 1) <= tol)
        row["agree"] = bool(ok_norm and ok_rad)
        rows.append(row)
        if not row["agree"]:
            violations.append({"index": idx, "witness": h.to_dict()})
    return {"K": K, "rows": rows, "violations": violations}


def verify_main_theorem(T, rho: float, family: Sequence[RationalFn],
                        K_known: Optional[float] = None, tol: float = 1e-6,
                        params: Optional[RhoParams] = None, bound_scale: float = 1.0) -> dict:
    """Compare the family estimates of K and Ktilde with the closed-form conversion.

    The hard check ``Ktilde_est <= ktilde_from_k(K_known, rho)`` is only made
    when a certified upper bound ``K_known`` is supplied; the sharpness ratio
    ``Ktilde_est / ktilde_from_k(K_est, rho)`` is reported either way.
    """
    T = as_cmat(T, square=True)
    k_est = estimate_constant(T, 1.0, family, params)
    kt_est = estimate_constant(T, rho, family, params)
    k_for_pred = K_known if K_known is not None else max(k_est.value, 1.0)
    kt_pred = ktilde_from_k(k_for_pred, rho)
    report = {
        "rho": rho,
        "K_est": k_est.to_dict(),
        "Ktilde_est": kt_est.to_dict(),
        "K_known": K_known,
        "Ktilde_predicted": kt_pred,
        "sharpness_ratio": kt_est.value / ktilde_from_k(max(k_est.value, 1.0), rho),
        "hard_checks": [],
    }
    if K_known is not None:
        margin = bound_scale * ktilde_from_k(K_known, rho) - kt_est.value
        report["hard_checks"].append({
            "name": "ktilde_upper_bound",
            "margin": margin,
            "passed": margin >= -tol,
            "witness": kt_est.to_dict()["witness"],
        })
    return report


def check_named_inequalities(T, rho: float, family: Sequence[RationalFn], tol: float = 1e-6,
                             params: Optional[RhoParams] = None, bound_scale: float = 1.0,
                             normalize: bool = False) -> dict:
    """Per family member, check the clauses whose hypothesis T satisfies:

    (a) w(T) <= 1, f(0) = 0:  w(f(T)) <= ||f||
    (b) w(T) <= 1:            w(f(T)) <= 5/4 ||f||
    (c) w_rho(T) <= 1:        ||f(T)|| <= rho ||f||
    (d) w_rho(T) <= 1:        w_rho(f(T)) <= C(rho) ||f||

    With ``normalize`` the clauses (a, b) run on T / w(T) and (c, d) on
    T / w_rho(T), using the upper ends of the computed brackets.
    """
    T = as_cmat(T, square=True)
    params = RhoParams(rho, *(params.zeta_samples, params.refine_depth) if params else ())
    w_up = numerical_radius(T, tol=1e-10).upper
    wr_up = _radius_upper(T, rho, params, 1e-9)
    if normalize:
        T_w = T / w_up if w_up > 0 else T
        T_r = T / wr_up if wr_up > 0 else T
        w_ok = wr_ok = True
    else:
        T_w = T_r = T
        w_ok = w_up <= 1 + 1e-9
        wr_ok = wr_up <= 1 + 1e-9
    C = drury_constant(rho)
    checks = []

    def record(name, margin, f):
        checks.append({"name": name, "margin": float(margin), "passed": bool(margin >= -tol),
                       "witness": f.to_dict()})

    for f in family:
        nf = sup_norm_disc(f)
        if w_ok:
            wf = numerical_radius(eval_fn(f, T_w), tol=1e-10).value
            if abs(complex(f(0.0))) <= 1e-12:
                record("berger_stampfli", bound_scale * nf - wf, f)
            record("drury", bound_scale * 1.25 * nf - wf, f)
        if wr_ok:
            F = eval_fn(f, T_r)
            record("okubo_ando", bound_scale * rho * nf - op_norm(F), f)
            record("drury_w_rho", bound_scale * C * nf - operator_radius(F, rho, params), f)
    return {
        "rho": rho,
        "numerical_radius": w_up,
        "w_rho": wr_up,
        "drury_C": C,
        "hard_checks": checks,
        "violations": [c for c in checks if not c["passed"]],
    }


def check_complete_okubo_ando(T, rho: float, matrix_family: Sequence[MatrixFn],
                              tol: float = 1e-6, params: Optional[RhoParams] = None) -> dict:
    """Matrix-amplified Okubo--Ando and w_rho bounds for T normalised to w_rho(T) = 1:
    ||F(T)|| <= rho ||F|| and w_rho(F(T)) <= C(rho) ||F|| for k x k polynomial F."""
    T = as_cmat(T, square=True)
    params = RhoParams(rho, *(params.zeta_samples, params.refine_depth) if params else ())
    T = T / _radius_upper(T, rho, params, 1e-9)
    C = drury_constant(rho)
    checks = []
    for F in matrix_family:
        if F.k > 4:
            raise ValueError("complete variants are limited to k <= 4")
        nF = F.sup_norm()
        A = amplify_eval(F, T)
        for name, margin in (("complete_okubo_ando", rho * nF - op_norm(A)),
                             ("complete_drury_w_rho", C * nF - operator_radius(A, rho, params))):
            checks.append({"name": name, "margin": float(margin), "passed": bool(margin >= -tol),
                           "witness": F.to_dict()})
    return {"rho": rho, "hard_checks": checks,
            "violations": [c for c in checks if not c["passed"]]}
