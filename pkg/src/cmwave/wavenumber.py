"""Complex modulus, wave number and dispersion-attenuation function.

All evaluators live on the cut complex plane |arg p| < pi and use principal
branches throughout.  Because the complex modulus of a completely monotonic
relaxation modulus maps the upper half-plane into itself and is positive on
the positive real axis, its values never cross the negative real axis and
the principal square root yields the analytic branch with
Re kappa(-i omega) >= 0.  A one-time sign test at p = -i/tau guards that
convention per model.

The branch-cut limit of kappa(p)/p recovers the spectral density: the jump
oracle here is the independent cross-check against the closed-form densities
of :mod:`cmwave.measures`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .measures import (
    ColeCole,
    ColeDavidson,
    HavriliakNegami,
    SpectralMeasure,
    StandardLinearSolid,
    spectral_measure,
)

__all__ = [
    "MeasureMedium",
    "branch_cut_density",
    "complex_modulus",
    "dispersion_attenuation",
    "wave_number",
    "JumpExtrapolationError",
]


class JumpExtrapolationError(RuntimeError):
    """Richardson extrapolation toward the branch cut did not contract."""


@dataclass(frozen=True)
class MeasureMedium:
    """Wave medium specified directly by a spectral measure.

    ``c_inf`` may be ``inf`` (no wavefront; kappa(p) = beta(p)).  The
    measure must carry a closed-form ``beta_fn`` for off-axis evaluation.
    """

    measure: SpectralMeasure
    c_inf: float
    rho: float = 1.0

    def __post_init__(self):
        if not (self.c_inf > 0.0):
            raise ValueError("c_inf must be positive (possibly inf)")
        if self.measure.beta_fn is None:
            raise ValueError("MeasureMedium requires a measure with a "
                             "closed-form dispersion-attenuation function")

    @property
    def c0(self) -> float | None:
        from .measures import measure_D_constant

        d = measure_D_constant(self.measure)
        if math.isinf(d):
            return None
        inv = d + (0.0 if math.isinf(self.c_inf) else 1.0 / self.c_inf)
        return 1.0 / inv if inv > 0 else None

    def spectral_measure(self) -> SpectralMeasure:
        return self.measure


def _check_cut(p: np.ndarray) -> None:
    on_cut = (p.real <= 0.0) & (p.imag == 0.0)
    if np.any(on_cut):
        raise ValueError("p on the closed negative real axis (branch cut)")


def complex_modulus(model, p):
    """Q(p) = p * (Laplace transform of the relaxation modulus)."""
    p = np.asarray(p, dtype=complex)
    _check_cut(p)
    if isinstance(model, (ColeCole, StandardLinearSolid)):
        alpha = model.alpha if isinstance(model, ColeCole) else 1.0
        xa = np.power(model.tau * p, alpha)
        q = model.g_inf * (1.0 + model.a * xa) / (1.0 + xa)
    elif isinstance(model, (HavriliakNegami, ColeDavidson)):
        alpha = model.alpha if isinstance(model, HavriliakNegami) else 1.0
        xa = np.power(model.tau * p, alpha)
        q = model.g0 * (1.0 - model.b * np.power(1.0 + xa, -model.gamma))
    elif isinstance(model, MeasureMedium):
        kap = wave_number(model, p)
        q = model.rho * (p / kap) ** 2
    else:
        raise TypeError(f"no complex modulus for {type(model).__name__}")
    return q if q.shape else complex(q)


@lru_cache(maxsize=None)
def _branch_sign(model) -> float:
    p0 = -1j / model.tau
    kap = math.sqrt(model.rho) * p0 / np.sqrt(complex(complex_modulus(model, p0)))
    return 1.0 if kap.real >= 0.0 else -1.0


def wave_number(model, p):
    """kappa(p) = sqrt(rho) * p / sqrt(Q(p)), branch with Re kappa(-i w) >= 0."""
    p = np.asarray(p, dtype=complex)
    _check_cut(p)
    if isinstance(model, MeasureMedium):
        beta = model.measure.beta_fn(p)
        if math.isinf(model.c_inf):
            kap = np.asarray(beta, dtype=complex)
        else:
            kap = p / model.c_inf + beta
        return kap if kap.shape else complex(kap)
    q = complex_modulus(model, p)
    kap = _branch_sign(model) * math.sqrt(model.rho) * p / np.sqrt(q)
    return kap if np.asarray(kap).shape else complex(kap)


def dispersion_attenuation(model, p):
    """beta(p) = kappa(p) - p/c_inf; Re beta >= 0 on the closed right half-plane."""
    p = np.asarray(p, dtype=complex)
    if isinstance(model, MeasureMedium):
        beta = np.asarray(model.measure.beta_fn(p), dtype=complex)
        _check_cut(p)
        return beta if beta.shape else complex(beta)
    c_inf = model.c_inf
    if not math.isfinite(c_inf):
        raise ValueError("model has no finite wavefront speed")
    beta = wave_number(model, p) - p / c_inf
    beta = np.asarray(beta)
    return beta if beta.shape else complex(beta)


def attenuation_from_wavenumber(model, omega):
    """A(omega) = Re beta(-i omega): closed-form path, cross-checks the engine."""
    return np.real(dispersion_attenuation(model, -1j * np.asarray(omega, float)))


def dispersion_from_wavenumber(model, omega):
    """D(omega) = -Im beta(-i omega)."""
    return -np.imag(dispersion_attenuation(model, -1j * np.asarray(omega, float)))


def branch_cut_density(model, r, eps: float = 1e-3):
    """Spectral density from the branch-cut jump of kappa(p)/p.

    Evaluates -Im[kappa(z)/z]/pi at z = r exp(i(pi - eps)) and Richardson-
    extrapolates eps -> 0 over eps, eps/2, eps/4.  This is the oracle the
    closed-form densities are validated against.

    Raises
    ------
    JumpExtrapolationError
        when successive extrapolation differences do not contract.
    """
    if not (0.0 < eps <= 1e-3):
        raise ValueError("eps must lie in (0, 1e-3]")
    r = np.asarray(r, dtype=float)
    if np.any(r <= 0.0):
        raise ValueError("r must be positive")
    vals = []
    for e in (eps, eps / 2.0, eps / 4.0):
        z = r * np.exp(1j * (math.pi - e))
        lam = wave_number(model, z) / z
        vals.append(-np.imag(lam) / math.pi)
    v0, v1, v2 = (np.asarray(v) for v in vals)
    r1a = 2.0 * v1 - v0
    r1b = 2.0 * v2 - v1
    out = (4.0 * r1b - r1a) / 3.0
    # the first-order extrapolants agree to O(eps^2) wherever the boundary
    # value is smooth; a large spread means eps cannot resolve this point
    # (e.g. next to a band-edge singularity)
    scale = np.abs(v0) + np.abs(v1) + np.abs(v2) + np.abs(out) \
        + 1e-9 * np.max(np.abs(out)) + 1e-300
    if np.any(np.abs(r1b - r1a) > 0.05 * scale):
        raise JumpExtrapolationError(
            "no contraction while approaching the branch cut")
    return out if out.shape else float(out)


def beta_at_infinity(model) -> float:
    """Limit of beta(p) as p -> +inf along the real axis; inf when the
    measure has infinite mass (algebraically decaying density).

    Uses a three-point Richardson fit beta = b - b1/p + b2/p^2 at moderate
    p: far larger arguments lose the limit in the kappa - p/c_inf
    cancellation noise.
    """
    measure = model.spectral_measure() if not isinstance(model, MeasureMedium) \
        else model.measure
    if not measure.all_moments_finite:
        return math.inf
    p0 = 1e4 * measure.r_scale

    def b(p):
        return float(np.real(dispersion_attenuation(model, p + 0.0j)))

    return (8.0 * b(4.0 * p0) - 6.0 * b(2.0 * p0) + b(p0)) / 3.0
