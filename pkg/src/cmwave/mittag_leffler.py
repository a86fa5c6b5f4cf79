"""Two-parameter Mittag-Leffler function on the negative real axis and the
time-domain Cole-Cole relaxation modulus.

Evaluation follows the classic two-representation scheme: the defining
power series up to a crossover |z|, and the algebraic asymptotic series

    E_{a,b}(z) = - sum_{k>=1} z^-k / Gamma(b - a k)

beyond it, truncated at its smallest term.  The power series suffers
catastrophic cancellation on the negative axis in double precision, so it
is summed in arbitrary precision (mpmath) with the working precision set
from the largest term, |z|^{1/a} digits up to a constant.  The crossover is
placed where the asymptotic tail bound drops below the target accuracy and
is validated on an overlap window the first time each (alpha, beta) pair is
used; if validation fails the crossover moves outward.

Only real z <= 0 is supported: that is all the Cole-Cole relaxation modulus
and the wavefront computations need.
"""

from __future__ import annotations

import math
from functools import lru_cache

import mpmath
import numpy as np
from scipy.special import rgamma

from .measures import ColeCole

__all__ = ["MLToleranceError", "cole_cole_relaxation_modulus",
           "mittag_leffler", "ml_e1_neg"]

_TOL = 1e-8          # relative accuracy contract of the evaluator
_OVERLAP = (1.0, 1.8)  # validation window, in units of the crossover


class MLToleranceError(RuntimeError):
    """Requested tolerance unachievable; carries the achieved estimate."""

    def __init__(self, achieved: float):
        super().__init__(f"Mittag-Leffler tolerance not met "
                         f"(achieved {achieved:.2e} relative)")
        self.achieved = achieved


def _series_mp(alpha: float, beta: float, z: float) -> float:
    """Defining power series, summed with enough guard digits.

    The largest term is ~exp(|z|^(1/alpha)), so the working precision
    scales with |z|^(1/alpha); past the peak the terms decay and a small
    relative term ends the sum.
    """
    w = abs(z) ** (1.0 / alpha)
    dps = 35 + int(w)
    with mpmath.workdps(dps):
        zz = mpmath.mpf(z)
        # the gamma argument must be formed in working precision: a double
        # alpha*k is off by ~1e-16 relatively, which the e^|z|-sized terms
        # amplify above the result
        al = mpmath.mpf(alpha)
        be = mpmath.mpf(beta)
        total = mpmath.mpf(0)
        term_floor = mpmath.mpf(10) ** (-dps + 5)
        k = 0
        zk = mpmath.mpf(1)
        while True:
            term = zk * mpmath.rgamma(al * k + be)
            total += term
            k += 1
            zk *= zz
            if k > 8 and alpha * (k - 1) > w \
                    and abs(term) < term_floor * (1 + abs(total)):
                break
            if k > 500000:
                raise MLToleranceError(float(abs(term)))
        return float(total)


def _asymptotic(alpha: float, beta: float, z: float) -> tuple[float, float]:
    """Asymptotic series with smallest-term truncation.

    Returns (value, absolute error estimate = first omitted term).
    """
    total = 0.0
    prev = math.inf
    k = 1
    inv = 1.0 / z
    zk = inv
    est = math.inf
    while k < 400:
        term = -zk * rgamma(beta - alpha * k)
        mag = abs(term)
        if mag > prev and k > 2:
            est = prev
            break
        total += term
        prev = mag if mag > 0.0 else prev
        zk *= inv
        k += 1
        if mag != 0.0 and mag < 1e-18 * (abs(total) + 1e-300):
            est = mag
            break
    else:
        est = prev
    return total, est


@lru_cache(maxsize=None)
def _crossover(alpha: float, beta: float) -> float:
    """Validated series/asymptotic crossover for one parameter pair.

    Starts at max(5, 24^alpha) (asymptotic tail ~ exp(-|z|^(1/alpha))) and
    moves outward until both representations agree to the tolerance on the
    overlap window.
    """
    zs = max(5.0, 24.0 ** alpha)
    if (zs * _OVERLAP[0]) ** (1.0 / alpha) > 2000.0:
        # asymptotic truncation error ~ exp(-|z|^(1/alpha)) is already far
        # below any float scale; overlap validation would cost more than it
        # could reveal
        return zs
    for _ in range(12):
        ok = True
        for f in np.linspace(_OVERLAP[0], _OVERLAP[1], 5):
            z = -zs * f
            a_val, a_est = _asymptotic(alpha, beta, z)
            s_val = _series_mp(alpha, beta, z)
            scale = max(abs(s_val), 1e-300)
            if abs(a_val - s_val) > _TOL * scale or a_est > _TOL * scale:
                ok = False
                break
        if ok:
            return zs
        zs *= 1.3
    return math.inf  # asymptotic unusable (e.g. exponential decay): series only


def mittag_leffler(alpha: float, beta_param: float, z: float) -> float:
    """E_{alpha,beta}(z) for real z <= 0, alpha in (0, 1], beta > 0.

    Relative accuracy 1e-8 or better; raises MLToleranceError (carrying the
    achieved estimate) if that cannot be met.
    """
    if not 0.0 < alpha <= 1.0:
        raise ValueError("alpha must lie in (0, 1]")
    if not beta_param > 0.0:
        raise ValueError("beta must be positive")
    if z > 0.0:
        raise ValueError("only z <= 0 is supported")
    if z == 0.0:
        return float(rgamma(beta_param))
    zs = _crossover(alpha, beta_param)
    if abs(z) <= zs:
        return _series_mp(alpha, beta_param, z)
    val, est = _asymptotic(alpha, beta_param, z)
    if est > _TOL * max(abs(val), 1e-300):
        # crossover gap: fall back to the (slower) high-precision series
        try:
            return _series_mp(alpha, beta_param, z)
        except MLToleranceError:
            raise MLToleranceError(est / max(abs(val), 1e-300)) from None
    return val


def cole_cole_relaxation_modulus(model: ColeCole, t: float) -> float:
    """G(t) = G_inf [1 + (a - 1) E_alpha(-(t/tau)^alpha)] for t > 0.

    The time constant under the fractional power is tau^alpha, which is
    what makes the Laplace transform reproduce the Cole-Cole modulus.
    """
    if t <= 0.0:
        raise ValueError("t must be positive")
    e = mittag_leffler(model.alpha, 1.0, -((t / model.tau) ** model.alpha))
    return model.g_inf * (1.0 + (model.a - 1.0) * e)


def ml_e1_neg(beta_param: float, y):
    """Vectorised E_{1,beta}(-y) for y >= 0 and 1 < beta <= 2.

    Float-precision path for analytic wavefront-tail terms: the defining
    series below y = 4, the cancellation-free integral representation

        E_{1,b}(-y) = (1/Gamma(b-1)) int_0^1 (1-u)^(b-2) exp(-y u) du

    on 4 <= y < 30 (split with the substitution 1-u = t^(1/(b-1)) to open
    the algebraic endpoint), and the algebraic asymptotic series beyond.
    """
    if not 1.0 < beta_param <= 2.0:
        raise ValueError("ml_e1_neg supports 1 < beta <= 2")
    y = np.asarray(y, dtype=float)
    if np.any(y < 0.0):
        raise ValueError("y must be >= 0")
    out = np.empty_like(y)

    small = y < 4.0
    if np.any(small):
        ys = -y[small]
        acc = np.zeros_like(ys)
        zk = np.ones_like(ys)
        for k in range(0, 40):
            acc += zk * rgamma(k + beta_param)
            zk *= ys
        out[small] = acc

    mid = (~small) & (y < 30.0)
    if np.any(mid):
        out[mid] = _e1b_integral(beta_param, y[mid])

    big = y >= 30.0
    if np.any(big):
        yl = y[big]
        acc = np.zeros_like(yl)
        inv = -1.0 / yl
        zk = inv.copy()
        for k in range(1, 16):
            acc -= zk * rgamma(beta_param - k)
            zk *= inv
        out[big] = acc
    return out if out.shape else float(out)


def _e1b_integral(beta: float, y: np.ndarray) -> np.ndarray:
    # int_0^1 (1-u)^(b-2) e^{-yu} du, split at u = 0.7; overall positive
    # integrand, no cancellation
    mu = 1.0 / (beta - 1.0)
    xs, ws = np.polynomial.legendre.leggauss(120)
    # smooth part u in [0, 0.7]
    u1 = 0.35 * (xs + 1.0)
    w1 = 0.35 * ws
    part1 = ((1.0 - u1) ** (beta - 2.0) * w1) @ np.exp(-np.outer(u1, y))
    # endpoint part: 1-u = t^mu, u in [0.7, 1] -> t in [0, 0.3^(1/mu)]
    t_max = 0.3 ** (1.0 / mu)
    t2 = 0.5 * t_max * (xs + 1.0)
    w2 = 0.5 * t_max * ws
    part2 = (mu * w2) @ np.exp(-np.outer(1.0 - t2 ** mu, y))
    return (part1 + part2) * rgamma(beta - 1.0)
