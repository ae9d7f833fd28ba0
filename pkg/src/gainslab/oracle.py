"""Independent verification paths for the semiclassical solver.

Direct adaptive Runge-Kutta integration of the slab wave equation with the
exact complex potential, plus the closed-form uniform-barrier condition.
Never used inside the root search; only as a post-hoc certificate.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np
from numba import njit

from .errors import IntegratorError, SingularConfigurationError
from .medium import GainMedium, PumpScheme, dimensionless_state

DEFAULT_RTOL = 1.0e-12
DEFAULT_ATOL = 1.0e-12

_PUMP_CODE = {PumpScheme.UNIFORM: 0, PumpScheme.SINGLE: 1, PumpScheme.DOUBLE: 2}

from ._rk_tableau import A as _A
from ._rk_tableau import B as _B
from ._rk_tableau import C as _C
from ._rk_tableau import E3 as _E3
from ._rk_tableau import E5 as _E5

_MAX_STEPS = 50_000_000
_MIN_STEP = 1.0e-16


@njit(cache=True)
def _f_shape(pump_code: int, nu: float, z: float) -> float:
    if pump_code == 0 or nu == 0.0:
        return 0.0
    if pump_code == 1:
        return math.expm1(-nu * z)
    return math.cosh(nu * (z - 0.5)) / math.cosh(0.5 * nu) - 1.0


@njit(cache=True)
def _rhs(pump_code, nu, z1, z2, K2, t, y, out):
    w = z1 + z2 * _f_shape(pump_code, nu, t) - K2
    out[0] = y[1]
    out[1] = w * y[0]
    out[2] = y[3]
    out[3] = w * y[2]


@njit(cache=True)
def _integrate_system(pump_code, nu, z1, z2, K2, y0, rtol, atol, targets,
                      A, B, C, E3, E5):
    """Adaptive Dormand-Prince 8(5,3) over [0, 1], landing on every target.

    Error per step is the Hairer combination of the embedded 5th- and
    3rd-order estimates.  Returns (states at targets, accepted step count,
    status) with status 0 = ok, 1 = step-size underflow, 2 = step budget
    exhausted.
    """
    n_stages = B.shape[0]
    n_t = targets.shape[0]
    out = np.empty((n_t, 4), np.complex128)
    k = np.empty((n_stages + 1, 4), np.complex128)
    y = y0.copy()
    y_new = np.empty(4, np.complex128)
    ytmp = np.empty(4, np.complex128)
    t = 0.0
    _rhs(pump_code, nu, z1, z2, K2, t, y, k[0])
    h_nat = 1.0e-4
    n_accept = 0
    n_total = 0
    for it in range(n_t):
        target = targets[it]
        while t < target - 1.0e-15:
            n_total += 1
            if n_total > _MAX_STEPS:
                return out, n_accept, 2
            h = h_nat
            if t + h > target:
                h = target - t
            if h < _MIN_STEP:
                return out, n_accept, 1
            for i in range(1, n_stages):
                for c in range(4):
                    acc = 0.0 + 0.0j
                    for j in range(i):
                        acc += A[i, j] * k[j, c]
                    ytmp[c] = y[c] + h * acc
                _rhs(pump_code, nu, z1, z2, K2, t + C[i] * h, ytmp, k[i])
            for c in range(4):
                acc = 0.0 + 0.0j
                for j in range(n_stages):
                    acc += B[j] * k[j, c]
                y_new[c] = y[c] + h * acc
            _rhs(pump_code, nu, z1, z2, K2, t + h, y_new, k[n_stages])
            err5_sq = 0.0
            err3_sq = 0.0
            for c in range(4):
                e5 = 0.0 + 0.0j
                e3 = 0.0 + 0.0j
                for j in range(n_stages + 1):
                    e5 += E5[j] * k[j, c]
                    e3 += E3[j] * k[j, c]
                sc = atol + rtol * max(abs(y[c]), abs(y_new[c]))
                err5_sq += (abs(e5) / sc) ** 2
                err3_sq += (abs(e3) / sc) ** 2
            if err5_sq == 0.0 and err3_sq == 0.0:
                err = 0.0
            else:
                err = h * err5_sq / math.sqrt((err5_sq + 0.01 * err3_sq) * 4.0)
            if err <= 1.0:
                t += h
                for c in range(4):
                    y[c] = y_new[c]
                    k[0, c] = k[n_stages, c]  # FSAL
                n_accept += 1
                factor = 10.0 if err == 0.0 else min(10.0, max(0.2, 0.9 * err ** -0.125))
                h_nat = h * factor
            else:
                h_nat = h * max(0.2, 0.9 * err ** -0.125)
        for c in range(4):
            out[it, c] = y[c]
    return out, n_accept, 0


def _run(pump_code, nu, z1, z2, K, y0, rtol, atol, targets):
    states, n_steps, status = _integrate_system(
        pump_code, nu, complex(z1), complex(z2), K * K,
        np.asarray(y0, dtype=complex), rtol, atol,
        np.asarray(targets, dtype=float), _A, _B, _C, _E3, _E5,
    )
    if status == 1:
        raise IntegratorError(f"step size underflow after {n_steps} accepted steps")
    if status == 2:
        raise IntegratorError(f"step budget exhausted ({_MAX_STEPS} trial steps)")
    return states, n_steps


@dataclass(frozen=True)
class OdeSolution:
    """Endpoint data of the direct integration.

    ``est_error`` bounds the endpoint state error (difference against a
    100x-looser companion run); ``wronskian_max_defect`` is the largest
    | |W| - K | over the 32 conservation checkpoints, W being the Wronskian
    of the two fundamental solutions (|W| = K exactly for the continuum
    problem).
    """

    phi1_at_1: complex
    dphi1_at_1: complex
    est_error: float
    wronskian_max_defect: float
    n_steps: int


def integrate_phi1(
    medium: GainMedium,
    omega_hat: float,
    g_star: float | None = None,
    rtol: float = DEFAULT_RTOL,
    atol: float = DEFAULT_ATOL,
) -> OdeSolution:
    """Integrate the slab wave equation with initial values (1, -iK).

    A second fundamental solution with initial values (1, 0) rides along so
    the conserved Wronskian certifies the integration.  ``g_star`` (cm^-1)
    overrides the medium's entry gain, matching the solver's probing
    semantics.
    """
    state = dimensionless_state(medium, omega_hat, g_star=g_star)
    K = state.K
    y0 = np.array([1.0, -1j * K, 1.0, 0.0], dtype=complex)
    code = _PUMP_CODE[medium.pump]
    checkpoints = np.linspace(0.0, 1.0, 32)
    states, n_steps = _run(code, medium.nu, state.z1, state.z2, K, y0, rtol, atol, checkpoints)
    loose, _ = _run(
        code, medium.nu, state.z1, state.z2, K, y0,
        min(rtol * 100.0, 1e-6), min(atol * 100.0, 1e-6), np.array([1.0]),
    )
    est_error = float(np.max(np.abs(states[-1] - loose[-1]))) + 1.0e-15 * (1.0 + K)
    wron = states[:, 0] * states[:, 3] - states[:, 1] * states[:, 2]
    defect = float(np.max(np.abs(np.abs(wron) - K)))
    return OdeSolution(
        phi1_at_1=complex(states[-1, 0]),
        dphi1_at_1=complex(states[-1, 1]),
        est_error=est_error,
        wronskian_max_defect=defect,
        n_steps=int(n_steps),
    )


def ode_jost(medium: GainMedium, omega_hat: float, g_star: float | None = None) -> complex:
    """Jost function F = iK phi1(1) - phi1'(1) from the direct integration.

    F vanishes exactly at a true spectral singularity; its normalized
    modulus is the final certificate applied to solver output.
    """
    state = dimensionless_state(medium, omega_hat, g_star=g_star)
    sol = integrate_phi1(medium, omega_hat, g_star=g_star)
    return 1j * state.K * sol.phi1_at_1 - sol.dphi1_at_1


def exact_uniform_condition(n_complex: complex, K: float) -> complex:
    """Residual of the closed-form uniform-barrier singularity condition.

    exp(2iKn) - ((n+1)/(n-1))^2; its zeros over real K are the uniform
    slab's spectral singularities, where the semiclassical treatment is
    exact.
    """
    if n_complex == 1.0:
        raise SingularConfigurationError("refractive index 1 makes the condition singular")
    return cmath.exp(2.0j * K * n_complex) - ((n_complex + 1.0) / (n_complex - 1.0)) ** 2
