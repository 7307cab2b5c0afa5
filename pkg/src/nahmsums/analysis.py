"""Numerical consistency checks for the central-charge formula.

The saddle value of a generalized Nahm sum as q -> 1 is governed by the
unique interior solution of the algebraic system 1 - X_i = prod_j X_j^a_ij;
the effective central charge is (6/pi^2) * sum_i L(1 - x_i)/d_i with L the
Rogers dilogarithm.  The same system applies to the symmetrizable case
because (A D)_ij / d_j = A_ij.  B and C shift only subleading asymptotics
and are ignored here.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .qseries import QSeries

__all__ = [
    "AnalysisError",
    "NoConvergence",
    "DomainError",
    "InsufficientData",
    "NahmSolution",
    "solve_nahm_equation",
    "rogers_dilogarithm",
    "saddle_central_charge",
    "cardy_estimate",
]


class AnalysisError(Exception):
    pass


class NoConvergence(AnalysisError):
    pass


class DomainError(AnalysisError):
    pass


class InsufficientData(AnalysisError):
    pass


@dataclass(frozen=True)
class NahmSolution:
    x: tuple[float, ...]
    residual: float
    iterations: int


def _as_float_matrix(a) -> np.ndarray:
    return np.array([[float(x) for x in row] for row in a], dtype=float)


def solve_nahm_equation(a, tol: float = 1e-12,
                        max_iterations: int = 100_000) -> NahmSolution:
    """Solve 1 - x_i = prod_j x_j^a_ij in (0,1)^r.

    Damped fixed-point iteration from x = (1/2, ..., 1/2); the step is
    shortened whenever it would leave (0,1)^r.  A Newton polish on the
    logarithmic form kicks in once the iterate is close, which keeps the
    stiff non-symmetric cases fast without changing the contract.
    """
    mat = _as_float_matrix(a)
    r = mat.shape[0]
    x = np.full(r, 0.5)

    def g(vec: np.ndarray) -> np.ndarray:
        logs = np.minimum(mat @ np.log(vec), 700.0)
        return 1.0 - np.exp(logs)

    def residual_of(vec: np.ndarray) -> float:
        logs = np.minimum(mat @ np.log(vec), 700.0)
        return float(np.max(np.abs(1.0 - vec - np.exp(logs))))

    damping = 1.0
    iterations = 0
    res = residual_of(x)
    while res >= tol and iterations < max_iterations:
        target = g(x)
        step = target - x
        trial = x + damping * step
        while np.any(trial <= 0.0) or np.any(trial >= 1.0):
            damping *= 0.5
            if damping < 1e-16:
                raise NoConvergence("damping underflow before convergence")
            trial = x + damping * step
        new_res = residual_of(trial)
        if new_res > res and damping > 1e-8:
            damping *= 0.5
            iterations += 1
            continue
        x = trial
        res = new_res
        damping = min(1.0, damping * 1.4)
        iterations += 1
        if res < 1e-4:
            x, extra = _newton_polish(mat, x, tol)
            iterations += extra
            res = residual_of(x)
            break
    if res >= tol:
        x, extra = _newton_polish(mat, x, tol)
        iterations += extra
        res = residual_of(x)
    if res >= tol:
        raise NoConvergence(f"residual {res:g} after {iterations} iterations")
    return NahmSolution(tuple(float(v) for v in x), res, iterations)


def _newton_polish(mat: np.ndarray, x: np.ndarray,
                   tol: float) -> tuple[np.ndarray, int]:
    """Newton iteration on F_i = log(1 - x_i) - sum_j a_ij log x_j."""
    r = mat.shape[0]
    steps = 0
    for _ in range(60):
        fx = np.log(1.0 - x) - mat @ np.log(x)
        if np.max(np.abs(fx)) < tol * 1e-2:
            break
        jac = -np.diag(1.0 / (1.0 - x)) - mat / x[np.newaxis, :]
        try:
            delta = np.linalg.solve(jac, -fx)
        except np.linalg.LinAlgError as exc:
            raise NoConvergence("singular Jacobian in Newton polish") from exc
        scale = 1.0
        while np.any(x + scale * delta <= 0.0) or np.any(x + scale * delta >= 1.0):
            scale *= 0.5
            if scale < 1e-16:
                raise NoConvergence("Newton step collapsed")
        x = x + scale * delta
        steps += 1
    return x, steps


def rogers_dilogarithm(x: float) -> float:
    """L(x) = Li2(x) + log(x) log(1-x) / 2 for 0 < x < 1."""
    if not 0.0 < x < 1.0:
        raise DomainError(f"argument {x} outside (0,1)")
    return _li2(x) + 0.5 * math.log(x) * math.log1p(-x)


def _li2(x: float) -> float:
    # Reflection onto [0, 1/2], then the defining series; the tail after
    # 120 terms is below 2^-120 there.
    if x > 0.5:
        return (math.pi ** 2) / 6.0 - math.log(x) * math.log1p(-x) - _li2(1.0 - x)
    total = 0.0
    power = 1.0
    for k in range(1, 120):
        power *= x
        term = power / (k * k)
        total += term
        if term < 1e-20 * max(total, 1e-30):
            break
    return total


def saddle_central_charge(a, d=None, tol: float = 1e-12) -> float:
    """(6/pi^2) * sum_i L(1 - x_i)/d_i at the interior Nahm-equation solution."""
    mat = _as_float_matrix(a)
    r = mat.shape[0]
    dvec = [1] * r if d is None else [int(v) for v in d]
    sol = solve_nahm_equation(a, tol=tol)
    total = sum(rogers_dilogarithm(1.0 - xi) / di
                for xi, di in zip(sol.x, dvec))
    return 6.0 / (math.pi ** 2) * total


def cardy_estimate(series: QSeries, window: tuple[int, int]) -> float:
    """Coarse effective central charge from coefficient growth.

    Least-squares fit of log a_n against 2 pi sqrt(n/6) over the integer
    exponents in [window[0], window[1]], with log-n and constant nuisance
    terms absorbing the universal subleading corrections.  Intended as a
    +-10% sanity check only.
    """
    lo, hi = window
    if hi - lo < 20 or hi < 50:
        raise InsufficientData("window too short for a growth fit")
    rows = []
    ys = []
    for n in range(lo, hi + 1):
        e = Fraction(n)
        u = e * series.grain
        if u.denominator != 1:
            continue
        idx = int(u) - series.min_exp
        if idx < 0 or int(u) >= series.order:
            continue
        c = series.coeffs[idx]
        if c <= 0:
            raise InsufficientData(f"non-positive coefficient at exponent {n}")
        rows.append([2.0 * math.pi * math.sqrt(n / 6.0), math.log(n), 1.0])
        ys.append(math.log(c))
    if len(rows) < 20:
        raise InsufficientData("too few usable coefficients in the window")
    coeffs, *_ = np.linalg.lstsq(np.array(rows), np.array(ys), rcond=None)
    slope = float(coeffs[0])
    return slope * slope
