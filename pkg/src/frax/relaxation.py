"""Relaxation laws: the probability psi(t) that a Brownian-type process
has not yet crossed an independent random boundary by time t.

Each model is a frozen dataclass carrying its parameters plus a
``diffusion_scale`` tag naming the Brownian variance convention its closed
form is paired with (``var2t`` for Var B(t) = 2t, ``var_t`` for
Var B(t) = t; pure counting laws carry ``none``).  The tag is what the
simulator in :mod:`frax.stochsim` keys its conventions on.

Evaluation strategy: every law has an explicit series/closed form used
wherever it holds full accuracy in doubles; the laws that lose the series
at large arguments (gamma-type boundaries, distributed orders) fall back
to stabilized Gaver-Stehfest inversion of their exact Laplace transforms.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Callable, Union

from .errors import DomainError, NonConvergence, Unsupported
from .fraccalc import laplace_invert
from .specfun import (
    DEFAULT_POLICY,
    MLParams,
    SeriesPolicy,
    _gml_raw,
    bessel_i,
    mittag_leffler,
)

_SQRT2 = math.sqrt(2.0)

__all__ = [
    "Regime",
    "SmallT",
    "LargeT",
    "Standard",
    "Fractional",
    "Sojourn",
    "FirstPassage",
    "BesselSq",
    "Elastic",
    "GammaBoundary",
    "ElasticGamma",
    "Distributed",
    "RelaxationModel",
    "TimeGrid",
    "first_passage_rate",
    "psi",
    "psi_grid",
    "psi_laplace",
    "asymptote",
]


class Regime(enum.Enum):
    """Asymptotic regime selector for :func:`asymptote`."""

    SmallT = "small_t"
    LargeT = "large_t"


SmallT = Regime.SmallT
LargeT = Regime.LargeT


def _require(cond: bool, msg: str) -> None:
    if not cond:
        raise DomainError(msg)


def _positive(name: str, v: float) -> None:
    _require(isinstance(v, (int, float)) and math.isfinite(v) and v > 0.0, f"{name} must be positive and finite, got {v!r}")


@dataclass(frozen=True)
class Standard:
    """Exponential relaxation exp(-lam*t) (constant-rate crossing)."""

    lam: float
    diffusion_scale = "none"

    def __post_init__(self) -> None:
        _positive("Standard.lam", self.lam)


@dataclass(frozen=True)
class Fractional:
    """Reflected-Brownian-type crossing of an exponential boundary.

    psi(t) = E_nu(-lam * t**nu); the nu = 1/2 case is a reflecting
    Brownian motion with Var B(t) = 2t, smaller nu arise from iterated
    composition of reflected motions.
    """

    nu: float
    lam: float
    diffusion_scale = "var2t"

    def __post_init__(self) -> None:
        _require(0.0 < self.nu < 1.0, f"Fractional.nu must lie in (0, 1), got {self.nu!r}")
        _positive("Fractional.lam", self.lam)


@dataclass(frozen=True)
class Sojourn:
    """Crossing of an exponential boundary by the occupation time of the
    positive half-line, psi(t) = exp(-lam*t/2) * I0(lam*t/2)."""

    lam: float
    diffusion_scale = "var_t"

    def __post_init__(self) -> None:
        _positive("Sojourn.lam", self.lam)


@dataclass(frozen=True)
class FirstPassage:
    """Crossing by an n-fold first-passage-time chain of Brownian motions.

    psi(t) = exp(-rate * t) with rate = 2**(1 - 2**-n) * lam**(2**-n);
    n = 1 is the plain first-passage time, giving exp(-t*sqrt(2*lam)).
    """

    lam: float
    n: int = 1
    diffusion_scale = "var_t"

    def __post_init__(self) -> None:
        _positive("FirstPassage.lam", self.lam)
        _require(isinstance(self.n, int) and self.n >= 1, f"FirstPassage.n must be an integer >= 1, got {self.n!r}")


@dataclass(frozen=True)
class BesselSq:
    """Crossing of an exponential boundary by a squared Bessel process of
    dimension ``gamma``, psi(t) = (2*lam*t + 1)**(-gamma/2)."""

    gamma: float
    lam: float
    diffusion_scale = "var_t"

    def __post_init__(self) -> None:
        _positive("BesselSq.gamma", self.gamma)
        _positive("BesselSq.lam", self.lam)


@dataclass(frozen=True)
class Elastic:
    """Crossing of an exponential boundary by elastic Brownian motion
    (reflected motion killed at rate alpha per unit local time)."""

    alpha: float
    lam: float
    diffusion_scale = "var_t"

    def __post_init__(self) -> None:
        _positive("Elastic.alpha", self.alpha)
        _positive("Elastic.lam", self.lam)


@dataclass(frozen=True)
class GammaBoundary:
    """Reflected-Brownian crossing of a gamma(k, lam) boundary (integer k)."""

    k: int
    lam: float
    diffusion_scale = "var2t"

    def __post_init__(self) -> None:
        _require(isinstance(self.k, int) and self.k >= 1, f"GammaBoundary.k must be an integer >= 1, got {self.k!r}")
        _positive("GammaBoundary.lam", self.lam)


@dataclass(frozen=True)
class ElasticGamma:
    """Elastic-Brownian crossing of a gamma(k, lam) boundary (integer k)."""

    k: int
    alpha: float
    lam: float
    diffusion_scale = "var_t"

    def __post_init__(self) -> None:
        _require(isinstance(self.k, int) and self.k >= 1, f"ElasticGamma.k must be an integer >= 1, got {self.k!r}")
        _positive("ElasticGamma.alpha", self.alpha)
        _positive("ElasticGamma.lam", self.lam)


@dataclass(frozen=True)
class Distributed:
    """Two-order distributed relaxation with weights n1, n2 (n1 + n2 = 1)
    on Caputo orders nu1 < nu2; the crossing process is the inverse of the
    corresponding weighted stable subordinator."""

    nu1: float
    nu2: float
    n1: float
    n2: float
    lam: float
    diffusion_scale = "var2t"

    def __post_init__(self) -> None:
        _require(0.0 < self.nu1 < self.nu2 <= 1.0, f"Distributed requires 0 < nu1 < nu2 <= 1, got nu1={self.nu1!r}, nu2={self.nu2!r}")
        _require(self.n1 >= 0.0 and self.n2 > 0.0, f"Distributed requires n1 >= 0 and n2 > 0, got n1={self.n1!r}, n2={self.n2!r}")
        _require(abs(self.n1 + self.n2 - 1.0) <= 1e-12, f"Distributed weights must satisfy n1 + n2 = 1, got {self.n1!r} + {self.n2!r}")
        _positive("Distributed.lam", self.lam)


RelaxationModel = Union[
    Standard,
    Fractional,
    Sojourn,
    FirstPassage,
    BesselSq,
    Elastic,
    GammaBoundary,
    ElasticGamma,
    Distributed,
]


@dataclass(frozen=True)
class TimeGrid:
    """Strictly increasing grid of positive evaluation times."""

    ts: tuple[float, ...]

    def __post_init__(self) -> None:
        _require(len(self.ts) >= 1, "TimeGrid needs at least one point")
        _require(all(math.isfinite(t) and t > 0.0 for t in self.ts), "TimeGrid points must be positive and finite")
        _require(all(b > a for a, b in zip(self.ts[:-1], self.ts[1:])), "TimeGrid points must be strictly increasing")

    @classmethod
    def span(cls, start: float, stop: float, count: int, scale: str = "linear") -> "TimeGrid":
        _require(count >= 1, f"TimeGrid.span count must be >= 1, got {count}")
        _require(0.0 < start <= stop, f"TimeGrid.span requires 0 < start <= stop, got {start}, {stop}")
        if count == 1:
            return cls(ts=(start,))
        _require(start < stop, f"TimeGrid.span with count > 1 requires start < stop, got start = stop = {start}")
        if scale == "linear":
            step = (stop - start) / (count - 1)
            return cls(ts=tuple(start + i * step for i in range(count)))
        if scale == "log":
            la, lb = math.log(start), math.log(stop)
            step = (lb - la) / (count - 1)
            return cls(ts=tuple(math.exp(la + i * step) for i in range(count)))
        raise DomainError(f"TimeGrid.span scale must be 'linear' or 'log', got {scale!r}")


def first_passage_rate(lam: float, n: int) -> float:
    """Decay rate of the n-fold first-passage chain: 2**(1-2**-n) * lam**(2**-n)."""
    return 2.0 ** (1.0 - 0.5**n) * lam ** (0.5**n)


def _i0_scaled(x: float) -> float:
    """exp(-x) * I0(x), overflow-free for all x >= 0.

    Below the series/asymptotic crossover of :func:`frax.specfun.bessel_i`
    the plain product is exact; above it the exponentially scaled
    asymptotic series 1/sqrt(2 pi x) * sum_m c_m / x**m is used directly.
    """
    if x <= 20.0:
        return math.exp(-x) * bessel_i(0.0, x)
    c = 1.0
    s = 1.0
    prev = 1.0
    for m in range(1, 40):
        c *= (2.0 * m - 1.0) ** 2 / (8.0 * m)
        term = c / x**m
        if term >= prev:
            break
        s += term
        prev = term
        if term <= 1e-17 * s:
            break
    return s / math.sqrt(2.0 * math.pi * x)


def _clip01(v: float) -> float:
    """Snap values a rounding error outside [0, 1] back onto the interval."""
    if -1e-9 <= v < 0.0:
        return 0.0
    if 1.0 < v <= 1.0 + 1e-9:
        return 1.0
    return v


def _psi_by_inversion(model: RelaxationModel, t: float) -> float:
    return _clip01(laplace_invert(lambda eta: psi_laplace(model, eta), t))


_EPS = 2.220446049250313e-16
# Log-space term evaluation inside the inner series loses a few tens of
# ulps per term; the inner error estimates are inflated by this factor
# before being amplified by the outer coefficients.
_INNER_ERR_SAFETY = 64.0


def _outer_series(
    inner: "Callable[[int], tuple[float, float, bool]]",
    ratio: float,
    scale: float,
    policy: SeriesPolicy,
) -> float:
    """Sum an outer series sum_r (-ratio)**r * inner(r) with error tracking.

    ``inner(r)`` returns an inner-series value with its raw error estimate;
    the propagated bound sums |ratio|**r times those estimates (they are
    amplified, not cancelled, by the alternating outer coefficients) plus
    the outer cancellation term.  ``scale`` is the prefactor the caller
    multiplies the sum by; the law being a probability, the scaled error
    must stay below 1e-9 or :class:`NonConvergence` is raised.
    """
    s = 0.0
    comp = 0.0
    absum = 0.0
    errb = 0.0
    small = 0
    coeff = 1.0
    done = False
    for r in range(policy.max_terms):
        g, est, ok = inner(r)
        if not ok:
            raise NonConvergence(f"inner series failed at outer index {r}")
        term = coeff * g
        y = term - comp
        tt = s + y
        comp = (tt - s) - y
        s = tt
        absum += abs(term)
        errb += abs(coeff) * est * _INNER_ERR_SAFETY
        if not (math.isfinite(absum) and math.isfinite(errb)):
            raise NonConvergence("outer series overflowed")
        if abs(term) <= policy.rel_tol * (abs(s) + 1e-300):
            small += 1
            if small >= 3 and r >= 8:
                done = True
                break
        else:
            small = 0
        coeff *= -ratio
    if not done:
        raise NonConvergence(f"outer series did not converge within {policy.max_terms} terms")
    total = scale * (errb + _EPS * absum)
    if total > 1e-9:
        raise NonConvergence(f"outer series propagated error {total:.3g} exceeds target")
    return s


def _gml_scaled(p: MLParams, z: float, scale: float, policy: SeriesPolicy) -> float:
    """Inner series value whose ``scale``-multiplied error must fit the law.

    The single-series laws subtract ``scale * value`` from 1, so what has
    to be small is the absolute error of that product, not the relative
    error of the series; the acceptance gate matches the one used for the
    outer-series laws (propagated error below 1e-9).
    """
    val, est, ok = _gml_raw(p, z, policy)
    if not ok or scale * (est * _INNER_ERR_SAFETY + _EPS * abs(val)) > 1e-9:
        raise NonConvergence(
            f"series for E^{p.gamma}_({p.alpha},{p.beta})({z}) is not accurate enough "
            f"at scale {scale:.3g}"
        )
    return val


def _psi_elastic_equal(lam: float, t: float, policy: SeriesPolicy) -> float:
    y = lam * math.sqrt(t) / _SQRT2
    return 1.0 - y * _gml_scaled(MLParams(0.5, 1.5, 2.0), -y, y, policy)


def _psi_gamma_boundary(model: GammaBoundary, t: float, policy: SeriesPolicy) -> float:
    x = model.lam * math.sqrt(t)
    p = MLParams(0.5, 0.5 * model.k + 1.0, float(model.k))
    return 1.0 - x**model.k * _gml_scaled(p, -x, x**model.k, policy)


def _psi_elastic_gamma_series(model: ElasticGamma, t: float, policy: SeriesPolicy) -> float:
    y = model.lam * math.sqrt(t) / _SQRT2
    a = model.alpha * math.sqrt(t) / _SQRT2
    k = model.k

    def inner(ell: int) -> tuple[float, float, bool]:
        return _gml_raw(MLParams(0.5, 0.5 * (ell + k) + 1.0, float(k)), -y, policy)

    return 1.0 - y**k * _outer_series(inner, a, y**k, policy)


def _psi_distributed_series(model: Distributed, t: float, policy: SeriesPolicy) -> float:
    delta = model.nu2 - model.nu1
    x = model.lam * t**model.nu2 / model.n2
    q = model.n1 * t**delta / model.n2

    def inner(r: int) -> tuple[float, float, bool]:
        return _gml_raw(MLParams(model.nu2, model.nu2 + delta * r + 1.0, r + 1.0), -x, policy)

    return 1.0 - x * _outer_series(inner, q, x, policy)


def _psi_distributed_halfline(model: Distributed, t: float) -> float:
    """Crossing probability for orders (1/2, 1) by direct quadrature.

    The inverse of the weighted subordinator n1 * (stable 1/2) + n2 * t
    has the explicit endpoint density

        q(y, t) = n1 (t - n2 y / 2) / (sqrt(pi) (t - n2 y)^(3/2))
                      * exp(-n1^2 y^2 / (4 (t - n2 y)))

    on (0, t/n2), so psi(t) = int exp(-lam y) q(y, t) dy.  This covers the
    mid-to-large times where the double series has cancelled and the
    transform inversion converges too slowly through its stability gate.
    """
    from scipy.integrate import quad

    n1, n2, lam = model.n1, model.n2, model.lam

    def f(y: float) -> float:
        gap = t - n2 * y
        if gap <= 0.0:
            return 0.0
        arg = n1 * n1 * y * y / (4.0 * gap) + lam * y
        if arg > 700.0:
            return 0.0
        return n1 * (t - 0.5 * n2 * y) / (math.sqrt(math.pi) * gap**1.5) * math.exp(-arg)

    val, _err = quad(f, 0.0, t / n2, limit=200, epsabs=1e-12, epsrel=1e-11)
    return val


def psi(model: RelaxationModel, t: float, policy: SeriesPolicy = DEFAULT_POLICY) -> float:
    """Survival probability psi(t) of the crossing problem ``model``.

    psi(0) = 1 exactly; for t > 0 the closed form of the law is evaluated,
    with a stabilized Laplace-inversion fallback for the series-form laws
    at arguments where double-precision summation loses accuracy.
    """
    if not (isinstance(t, (int, float)) and math.isfinite(t) and t >= 0.0):
        raise DomainError(f"psi requires finite t >= 0, got {t!r}")
    if t == 0.0:
        return 1.0
    if isinstance(model, Standard):
        return math.exp(-model.lam * t)
    if isinstance(model, Fractional):
        return _clip01(mittag_leffler(MLParams(model.nu, 1.0), -model.lam * t**model.nu, policy))
    if isinstance(model, Sojourn):
        return _i0_scaled(0.5 * model.lam * t)
    if isinstance(model, FirstPassage):
        return math.exp(-first_passage_rate(model.lam, model.n) * t)
    if isinstance(model, BesselSq):
        return (2.0 * model.lam * t + 1.0) ** (-0.5 * model.gamma)
    if isinstance(model, Elastic):
        lam, alpha = model.lam, model.alpha
        if abs(alpha - lam) < 1e-8 * lam:
            try:
                return _clip01(_psi_elastic_equal(lam, t, policy))
            except NonConvergence:
                return _psi_by_inversion(model, t)
        ml = MLParams(0.5, 1.0)
        ea = mittag_leffler(ml, -alpha * math.sqrt(t) / _SQRT2, policy)
        el = mittag_leffler(ml, -lam * math.sqrt(t) / _SQRT2, policy)
        return _clip01(1.0 - lam / (lam - alpha) * (ea - el))
    if isinstance(model, GammaBoundary):
        try:
            return _clip01(_psi_gamma_boundary(model, t, policy))
        except NonConvergence:
            return _psi_by_inversion(model, t)
    if isinstance(model, ElasticGamma):
        lam, alpha = model.lam, model.alpha
        if abs(alpha - lam) < 1e-8 * lam:
            y = lam * math.sqrt(t) / _SQRT2
            p = MLParams(0.5, 0.5 * model.k + 1.0, model.k + 1.0)
            try:
                return _clip01(1.0 - y**model.k * _gml_scaled(p, -y, y**model.k, policy))
            except NonConvergence:
                return _psi_by_inversion(model, t)
        try:
            return _clip01(_psi_elastic_gamma_series(model, t, policy))
        except NonConvergence:
            return _psi_by_inversion(model, t)
    if isinstance(model, Distributed):
        if model.n1 == 0.0:
            if model.nu2 == 1.0:
                return math.exp(-model.lam * t / model.n2)
            return psi(Fractional(model.nu2, model.lam / model.n2), t, policy)
        try:
            return _clip01(_psi_distributed_series(model, t, policy))
        except NonConvergence:
            if model.nu1 == 0.5 and model.nu2 == 1.0:
                return _clip01(_psi_distributed_halfline(model, t))
            return _psi_by_inversion(model, t)
    raise Unsupported(f"psi has no law for {type(model).__name__}")


def psi_grid(model: RelaxationModel, grid: TimeGrid, policy: SeriesPolicy = DEFAULT_POLICY) -> list[tuple[float, float]]:
    """Evaluate psi over a time grid, returning (t, psi(t)) pairs."""
    return [(t, psi(model, t, policy)) for t in grid.ts]


def psi_laplace(model: RelaxationModel, eta: float) -> float:
    """Exact Laplace transform of psi at eta > 0, where a closed form exists.

    The squared-Bessel law has no elementary transform and raises
    :class:`Unsupported`.
    """
    if not (math.isfinite(eta) and eta > 0.0):
        raise DomainError(f"psi_laplace requires eta > 0, got {eta!r}")
    if isinstance(model, Standard):
        return 1.0 / (eta + model.lam)
    if isinstance(model, Fractional):
        return eta ** (model.nu - 1.0) / (eta**model.nu + model.lam)
    if isinstance(model, Sojourn):
        return 1.0 / math.sqrt(eta * (eta + model.lam))
    if isinstance(model, FirstPassage):
        return 1.0 / (eta + first_passage_rate(model.lam, model.n))
    if isinstance(model, Elastic):
        lam, alpha = model.lam, model.alpha
        num = alpha * lam / eta + _SQRT2 * alpha / math.sqrt(eta) + 2.0
        den = (math.sqrt(2.0 * eta) + alpha) * (math.sqrt(2.0 * eta) + lam)
        return num / den
    if isinstance(model, GammaBoundary):
        lam, k = model.lam, model.k
        se = math.sqrt(eta)
        return ((se + lam) ** k - lam**k) / (eta * (se + lam) ** k)
    if isinstance(model, ElasticGamma):
        lam, alpha, k = model.lam, model.alpha, model.k
        s2e = math.sqrt(2.0 * eta)
        return 1.0 / eta - _SQRT2 * lam**k / (math.sqrt(eta) * (s2e + alpha) * (s2e + lam) ** k)
    if isinstance(model, Distributed):
        w = model.n1 * eta**model.nu1 + model.n2 * eta**model.nu2
        return w / (eta * (model.lam + w))
    if isinstance(model, BesselSq):
        raise Unsupported("psi_laplace: the squared-Bessel law has no closed transform here")
    raise Unsupported(f"psi_laplace has no transform for {type(model).__name__}")


def asymptote(model: RelaxationModel, regime: Regime, t: float) -> float:
    """Leading small-t or large-t behaviour of psi for ``model``.

    Where the law is already elementary (pure exponentials, the squared
    Bessel power law) the exact expression is returned in both regimes.
    """
    if not (math.isfinite(t) and t > 0.0):
        raise DomainError(f"asymptote requires t > 0, got {t!r}")
    if not isinstance(regime, Regime):
        raise DomainError(f"asymptote regime must be a Regime member, got {regime!r}")
    small = regime is Regime.SmallT
    if isinstance(model, Standard):
        return 1.0 - model.lam * t if small else math.exp(-model.lam * t)
    if isinstance(model, Fractional):
        nu, lam = model.nu, model.lam
        if small:
            return 1.0 - lam * t**nu / math.gamma(1.0 + nu)
        return 1.0 / (lam * t**nu * math.gamma(1.0 - nu))
    if isinstance(model, Sojourn):
        return 1.0 - 0.5 * model.lam * t if small else 1.0 / math.sqrt(model.lam * math.pi * t)
    if isinstance(model, FirstPassage):
        rate = first_passage_rate(model.lam, model.n)
        return 1.0 - rate * t if small else math.exp(-rate * t)
    if isinstance(model, BesselSq):
        return (2.0 * model.lam * t + 1.0) ** (-0.5 * model.gamma)
    if isinstance(model, Elastic):
        if small:
            return 1.0 - model.lam * math.sqrt(2.0 * t / math.pi)
        return 1.0 - _SQRT2 / (model.alpha * math.sqrt(math.pi * t))
    if isinstance(model, GammaBoundary):
        k, lam = model.k, model.lam
        if small:
            return 1.0 - (lam * math.sqrt(t)) ** k / math.gamma(0.5 * k + 1.0)
        return k / (lam * math.sqrt(math.pi * t))
    if isinstance(model, ElasticGamma):
        k, lam = model.k, model.lam
        if small:
            return 1.0 - (lam * math.sqrt(t) / _SQRT2) ** k / math.gamma(0.5 * k + 1.0)
        return 1.0 - _SQRT2 / (model.alpha * math.sqrt(math.pi * t))
    if isinstance(model, Distributed):
        if small:
            return 1.0 - model.lam * t**model.nu2 / (model.n2 * math.gamma(1.0 + model.nu2))
        if model.n1 == 0.0:
            inner = Fractional(model.nu2, model.lam / model.n2) if model.nu2 < 1.0 else Standard(model.lam / model.n2)
            return asymptote(inner, regime, t)
        return model.n1 / (model.lam * t**model.nu1 * math.gamma(1.0 - model.nu1))
    raise Unsupported(f"asymptote has no expansion for {type(model).__name__}")
