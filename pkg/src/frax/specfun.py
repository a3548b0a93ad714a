"""Special-function evaluators used by the relaxation laws.

All evaluators return IEEE double results and follow the same convergence
discipline: power series are summed with compensated (Kahan) addition, a
term is accepted as negligible only after three consecutive terms fall
below ``rel_tol`` relative to the running sum, and a cancellation estimate
``eps * sum(|term|)`` is carried along so that catastrophic alternating
series are detected instead of silently returned.  When a series cannot
reach the target accuracy, each evaluator either switches to an integral
representation valid in that regime or raises :class:`NonConvergence`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Iterable, Iterator

from scipy.integrate import quad
from scipy.special import gammaln, rgamma

from .errors import DomainError, NonConvergence

_EPS = 2.220446049250313e-16
# Partial sums of absolute values beyond this magnitude cannot leave any
# significant digits in a double; treat the series as failed.
_ABSUM_CAP = 1e280
# exp() overflows just above this; used to guard integrand exponents.
_EXP_CAP = 700.0

__all__ = [
    "MLParams",
    "SeriesPolicy",
    "DEFAULT_POLICY",
    "mittag_leffler",
    "gml",
    "wright_m",
    "airy_ai",
    "bessel_i",
    "kummer_1f1",
]


@dataclass(frozen=True)
class MLParams:
    """Parameter triple (alpha, beta, gamma) of the Mittag-Leffler family.

    ``alpha`` is the fractional order, ``beta`` the second parameter and
    ``gamma`` the Prabhakar exponent; ``gamma=1`` gives the two-parameter
    function.  All three must be positive and finite.
    """

    alpha: float
    beta: float = 1.0
    gamma: float = 1.0

    def __post_init__(self) -> None:
        for name in ("alpha", "beta", "gamma"):
            v = getattr(self, name)
            if not (isinstance(v, (int, float)) and math.isfinite(v) and v > 0.0):
                raise DomainError(f"MLParams.{name} must be positive and finite, got {v!r}")


@dataclass(frozen=True)
class SeriesPolicy:
    """Convergence policy shared by the series evaluators.

    ``rel_tol`` is the target relative term size (must lie in (0, 1e-6]),
    ``max_terms`` caps the number of summed terms (at least 64), and
    ``switch_threshold`` is the |z| at which ``mittag_leffler`` abandons
    the power series for the integral representation on the negative axis.
    """

    rel_tol: float = 1e-14
    max_terms: int = 600
    switch_threshold: float = 5.0

    def __post_init__(self) -> None:
        if not (0.0 < self.rel_tol <= 1e-6):
            raise DomainError(f"SeriesPolicy.rel_tol must lie in (0, 1e-6], got {self.rel_tol!r}")
        if self.max_terms < 64:
            raise DomainError(f"SeriesPolicy.max_terms must be >= 64, got {self.max_terms!r}")
        if not (math.isfinite(self.switch_threshold) and self.switch_threshold > 0.0):
            raise DomainError(
                f"SeriesPolicy.switch_threshold must be positive, got {self.switch_threshold!r}"
            )


DEFAULT_POLICY = SeriesPolicy()


def _sum_series(terms: Iterable[float], rel_tol: float) -> tuple[float, float, bool]:
    """Kahan-sum ``terms`` until three consecutive terms are negligible.

    Returns ``(value, cancellation_estimate, converged)``.  The estimate is
    ``eps * sum(|term|)``; a non-finite term or an absolute-value sum beyond
    ``_ABSUM_CAP`` marks the series as failed (estimate ``inf``).  Isolated
    zero terms (e.g. at poles of a reciprocal-gamma weight) do not count
    toward the stop criterion on their own: three in a row are required,
    and no stop is accepted before eight terms.
    """
    s = 0.0
    comp = 0.0
    absum = 0.0
    small = 0
    for j, term in enumerate(terms):
        if not math.isfinite(term):
            return s, math.inf, False
        y = term - comp
        tt = s + y
        comp = (tt - s) - y
        s = tt
        absum += abs(term)
        if absum > _ABSUM_CAP:
            return s, math.inf, False
        if abs(term) <= rel_tol * (abs(s) + 1e-300):
            small += 1
            if small >= 3 and j >= 8:
                return s, _EPS * absum, True
        else:
            small = 0
    return s, math.inf, False


def _ml_terms(alpha: float, beta: float, gamma: float, z: float, max_terms: int) -> Iterator[float]:
    """Terms of the three-parameter Mittag-Leffler series in log space.

    Term j is ``poch(gamma, j) * z**j / (j! * Gamma(alpha*j + beta))`` with
    the Pochhammer symbol evaluated as a difference of log-gammas, so that
    moderate parameter values never overflow intermediate products.
    """
    lg_gamma0 = gammaln(gamma)
    loga = math.log(abs(z)) if z != 0.0 else -math.inf
    sign_z = 1.0 if z >= 0.0 else -1.0
    for j in range(max_terms):
        lg = (
            gammaln(gamma + j)
            - lg_gamma0
            + j * loga
            - gammaln(j + 1.0)
            - gammaln(alpha * j + beta)
        )
        if lg > _EXP_CAP:
            yield math.inf
            return
        yield (sign_z**j) * math.exp(lg)


def _ml_integral(alpha: float, beta: float, c: float, policy: SeriesPolicy) -> float:
    """Two-parameter Mittag-Leffler on the negative axis by quadrature.

    Evaluates E_{alpha,beta}(-c) for c > 0 and 0 < alpha < 1 from its real
    integral representation.  After the substitution u = r**alpha the
    integrand is

        (1/(alpha*pi)) * u**((1-beta)/alpha) * exp(-u**(1/alpha))
            * (u*sin(beta*pi) + c*sin((beta-alpha)*pi))
            / (u**2 + 2*u*c*cos(alpha*pi) + c**2),

    which is smooth on (0, R] and negligible once u**(1/alpha) > 50.  The
    endpoint power is integrable for beta < 1 + alpha, which covers every
    beta used by the relaxation laws.
    """
    if not (0.0 < alpha < 1.0):
        raise NonConvergence(
            f"mittag_leffler series failed and the integral representation "
            f"requires 0 < alpha < 1 (alpha={alpha}, z={-c})"
        )
    if beta >= 1.0 + alpha:
        raise NonConvergence(
            f"mittag_leffler integral representation needs beta < 1 + alpha "
            f"(alpha={alpha}, beta={beta}, z={-c})"
        )
    sb = math.sin(beta * math.pi)
    sba = math.sin((beta - alpha) * math.pi)
    ca = math.cos(alpha * math.pi)
    inv_alpha = 1.0 / alpha
    pw = (1.0 - beta) * inv_alpha

    def f(u: float) -> float:
        e = u**inv_alpha
        if e > _EXP_CAP:
            return 0.0
        num = u * sb + c * sba
        den = u * u + 2.0 * u * c * ca + c * c
        return u**pw * math.exp(-e) * num / den

    upper = 50.0**alpha
    val, _err = quad(f, 0.0, upper, limit=200, epsabs=1e-14, epsrel=1e-12)
    return val / (alpha * math.pi)


def mittag_leffler(p: MLParams, z: float, policy: SeriesPolicy = DEFAULT_POLICY) -> float:
    """Two-parameter Mittag-Leffler function E_{alpha,beta}(z).

    Requires ``p.gamma == 1``.  For z <= 0 with |z| at or beyond
    ``policy.switch_threshold`` the real integral representation is used
    when its parameter constraints (0 < alpha < 1, beta < 1 + alpha) hold;
    otherwise the power series is summed and, when its cancellation
    estimate exceeds the accuracy target on the negative axis, the
    evaluator still falls back to the integral form.  A failed series with
    no admissible integral raises :class:`NonConvergence`.
    """
    if p.gamma != 1.0:
        raise DomainError(f"mittag_leffler requires gamma=1, got gamma={p.gamma}")
    if not math.isfinite(z):
        raise DomainError(f"mittag_leffler argument must be finite, got {z!r}")
    if z == 0.0:
        return float(rgamma(p.beta))
    admissible = 0.0 < p.alpha < 1.0 and p.beta < 1.0 + p.alpha
    if z < 0.0 and -z >= policy.switch_threshold and admissible:
        return _ml_integral(p.alpha, p.beta, -z, policy)
    val, est, ok = _sum_series(_ml_terms(p.alpha, p.beta, 1.0, z, policy.max_terms), policy.rel_tol)
    if ok and est <= 1e-13 * max(abs(val), 1.0):
        return val
    if z < 0.0:
        return _ml_integral(p.alpha, p.beta, -z, policy)
    raise NonConvergence(
        f"mittag_leffler series did not converge for alpha={p.alpha}, beta={p.beta}, "
        f"z={z} (cancellation estimate {est:.3g})"
    )


def _gml_raw(p: MLParams, z: float, policy: SeriesPolicy) -> tuple[float, float, bool]:
    """Three-parameter Mittag-Leffler series with its raw error estimate.

    Returns ``(value, error_estimate, converged)`` without an acceptance
    decision, so callers that sum these values against growing outer
    coefficients can accumulate the propagated error honestly.
    """
    if z == 0.0:
        return float(rgamma(p.beta)), _EPS, True
    return _sum_series(_ml_terms(p.alpha, p.beta, p.gamma, z, policy.max_terms), policy.rel_tol)


def gml(p: MLParams, z: float, policy: SeriesPolicy = DEFAULT_POLICY) -> float:
    """Three-parameter (Prabhakar) Mittag-Leffler function E^gamma_{alpha,beta}(z).

    Summed by its power series with the Pochhammer symbol computed in log
    space.  The series is accurate for moderate |z|; when cancellation on
    the negative axis destroys the target accuracy, :class:`NonConvergence`
    is raised and callers with a Laplace-transform representation are
    expected to fall back to numerical inversion.
    """
    if not math.isfinite(z):
        raise DomainError(f"gml argument must be finite, got {z!r}")
    val, est, ok = _gml_raw(p, z, policy)
    if ok and est <= 1e-13 * max(abs(val), 1.0):
        return val
    raise NonConvergence(
        f"gml series did not converge for alpha={p.alpha}, beta={p.beta}, "
        f"gamma={p.gamma}, z={z} (cancellation estimate {est:.3g})"
    )


def _wright_terms(nu: float, x: float, max_terms: int) -> Iterator[float]:
    """Terms (-x)**j / (j! * Gamma(-nu*j + 1 - nu)) of the M-Wright series.

    The reciprocal gamma is evaluated directly (it is entire, vanishing at
    the poles of gamma), so single zero terms occur at those poles and are
    handled by the three-in-a-row stop rule of :func:`_sum_series`.
    """
    p = 1.0
    for j in range(max_terms):
        yield p * float(rgamma(1.0 - nu * (j + 1.0)))
        if abs(p) > 1e250:
            yield math.inf
            return
        p *= -x / (j + 1.0)


def _wright_stable_integral(nu: float, x: float) -> float:
    """M-Wright density for large x via the one-sided stable density.

    M_nu(x) = (1/nu) * x**(-1-1/nu) * g_nu(x**(-1/nu)) where g_nu is the
    unit one-sided stable density of index nu, evaluated by the standard
    trigonometric integral

        g_nu(z) = (e/(pi)) * z**(-1-e) * int_0^pi A(phi) exp(-z**(-e) A(phi)) dphi,
        A(phi) = sin(nu*phi)**e * sin((1-nu)*phi) / sin(phi)**(1/(1-nu)),
        e = nu/(1-nu).

    The integrand is bell-shaped; integrating over four subintervals of
    (0, pi) with an absolute tolerance scaled to the integrand's peak keeps
    the quadrature at machine accuracy for all nu in (0, 1).
    """
    z = x ** (-1.0 / nu)
    e = nu / (1.0 - nu)
    hscale = z ** (-e)
    a0 = (1.0 - nu) * nu**e  # A(0+), the integrand's scale at the left end
    if hscale * a0 >= _EXP_CAP:
        return 0.0
    scale = math.exp(-hscale * a0)

    def f(phi: float) -> float:
        a = (
            math.sin(nu * phi) ** e
            * math.sin((1.0 - nu) * phi)
            / math.sin(phi) ** (1.0 / (1.0 - nu))
        )
        w = hscale * a
        return a * math.exp(-w) if w < _EXP_CAP else 0.0

    knots = (0.0, 0.25 * math.pi, 0.5 * math.pi, 0.75 * math.pi, math.pi)
    total = 0.0
    for lo, hi in zip(knots[:-1], knots[1:]):
        v, _err = quad(f, lo, hi, limit=100, epsabs=1e-3 * scale * a0, epsrel=1e-12)
        total += v
    g = e * z ** (-e - 1.0) * total / math.pi
    return (1.0 / nu) * x ** (-1.0 - 1.0 / nu) * g


def wright_m(nu: float, x: float, policy: SeriesPolicy = DEFAULT_POLICY) -> float:
    """M-Wright probability density M_nu(x) for nu in (0, 1), x >= 0.

    The power series in x alternates with reciprocal-gamma weights and is
    used while its cancellation estimate stays below the accuracy target;
    for larger x the evaluator switches to the exact one-sided stable
    integral form, which covers the tail down to (and past) the double
    underflow threshold.  The result is clamped to [0, inf).
    """
    if not (0.0 < nu < 1.0):
        raise DomainError(f"wright_m requires nu in (0, 1), got {nu!r}")
    if not (math.isfinite(x) and x >= 0.0):
        raise DomainError(f"wright_m requires finite x >= 0, got {x!r}")
    if x == 0.0:
        return float(rgamma(1.0 - nu))
    val, est, ok = _sum_series(_wright_terms(nu, x, policy.max_terms), policy.rel_tol)
    if ok and est <= 1e-13 * abs(val) and est < 1e-4:
        return val if val > 0.0 else 0.0
    return _wright_stable_integral(nu, x)


def _bessel_i_series(order: float, x: float, max_terms: int = 200) -> float:
    """Ascending series of I_order(x) in log space (x > 0, order > -1)."""
    lh = math.log(0.5 * x)
    s = 0.0
    for k in range(max_terms):
        lg = (2.0 * k + order) * lh - gammaln(k + 1.0) - gammaln(k + order + 1.0)
        term = math.exp(lg)
        s += term
        if term <= 1e-17 * s and k >= 4:
            return s
    raise NonConvergence(f"bessel_i series failed for order={order}, x={x}")


def _bessel_i_asymptotic(order: float, x: float) -> float:
    """Large-x expansion I_order(x) ~ e^x/sqrt(2 pi x) * sum_m c_m / x**m.

    The coefficients follow c_0 = 1, c_m = c_{m-1} * ((2m-1)**2 - 4*order**2)
    / (8m); the expansion is truncated at its smallest term.
    """
    mu = 4.0 * order * order
    c = 1.0
    s = 1.0
    prev = 1.0
    for m in range(1, 40):
        c *= ((2.0 * m - 1.0) ** 2 - mu) / (8.0 * m)
        term = c / x**m
        if abs(term) >= abs(prev):
            break
        s += term
        prev = term
        if abs(term) <= 1e-17 * abs(s):
            break
    if x > _EXP_CAP:
        return math.inf
    return math.exp(x) * s / math.sqrt(2.0 * math.pi * x)


_BESSEL_ORDERS = (0.0, 1.0 / 3.0, -1.0 / 3.0)


def bessel_i(order: float, x: float) -> float:
    """Modified Bessel function I_order(x) for order in {0, 1/3, -1/3}, x >= 0.

    Uses the ascending series for x <= 20 and the standard large-x
    asymptotic expansion above; the crossover keeps both branches at
    machine accuracy.  Returns inf when e^x overflows the double range.
    """
    canonical = None
    for o in _BESSEL_ORDERS:
        if abs(order - o) <= 1e-12:
            canonical = o
            break
    if canonical is None:
        raise DomainError(f"bessel_i supports orders 0 and +/-1/3, got {order!r}")
    if not (math.isfinite(x) and x >= 0.0):
        raise DomainError(f"bessel_i requires finite x >= 0, got {x!r}")
    if x == 0.0:
        return 1.0 if canonical == 0.0 else (math.inf if canonical < 0.0 else 0.0)
    if x <= 20.0:
        return _bessel_i_series(canonical, x)
    return _bessel_i_asymptotic(canonical, x)


_AIRY_ZERO = float(rgamma(2.0 / 3.0)) / 3.0 ** (2.0 / 3.0)


def _airy_k_integral(zeta: float) -> float:
    """Scaled Bessel-K factor K_{1/3}(zeta) * e^zeta by direct quadrature.

    Integrates exp(-zeta*(cosh u - 1)) * cosh(u/3) over u in (0, 40); the
    integrand decays doubly exponentially, so the finite upper limit is
    exact at double precision for zeta >= 1.
    """

    def f(u: float) -> float:
        w = zeta * (math.cosh(u) - 1.0)
        if w > _EXP_CAP:
            return 0.0
        return math.exp(-w) * math.cosh(u / 3.0)

    val, _err = quad(f, 0.0, 40.0, limit=200, epsabs=1e-280, epsrel=1e-12)
    return val


def airy_ai(w: float) -> float:
    """Airy function Ai(w) for w >= 0.

    For small arguments Ai is assembled from the difference of modified
    Bessel functions of orders -1/3 and +1/3 of zeta = (2/3) w**(3/2); for
    zeta > 2 it switches to the exponentially scaled Bessel-K integral,
    which avoids the cancellation of the I-difference at large zeta.
    """
    if not (math.isfinite(w) and w >= 0.0):
        raise DomainError(f"airy_ai requires finite w >= 0, got {w!r}")
    if w == 0.0:
        return _AIRY_ZERO
    zeta = (2.0 / 3.0) * w**1.5
    if zeta <= 2.0:
        im = _bessel_i_series(-1.0 / 3.0, zeta)
        ip = _bessel_i_series(1.0 / 3.0, zeta)
        return math.sqrt(w) / 3.0 * (im - ip)
    if zeta > _EXP_CAP:
        return 0.0
    return math.sqrt(w / 3.0) / math.pi * math.exp(-zeta) * _airy_k_integral(zeta)


def kummer_1f1(a: float, c: float, x: float, policy: SeriesPolicy = DEFAULT_POLICY) -> float:
    """Confluent hypergeometric function 1F1(a; c; x).

    The defining series is summed with the exact term recurrence
    t_{j+1} = t_j * (a+j)/(c+j) * x/(j+1).  Negative arguments are routed
    through the reflection 1F1(a;c;x) = e^x 1F1(c-a;c;-x), which turns the
    alternating sum into an essentially positive one; for x < -50 the
    leading algebraic asymptotic Gamma(c)/Gamma(c-a) * (-x)**(-a) is used.
    """
    if not math.isfinite(x):
        raise DomainError(f"kummer_1f1 argument must be finite, got {x!r}")
    if c <= 0.0 and c == math.floor(c):
        raise DomainError(f"kummer_1f1 requires c not a non-positive integer, got {c!r}")
    if x == 0.0:
        return 1.0
    if x < -50.0:
        return math.gamma(c) / math.gamma(c - a) * (-x) ** (-a)
    if x < 0.0:
        return math.exp(x) * _kummer_series(c - a, c, -x, policy)
    return _kummer_series(a, c, x, policy)


def _kummer_series(a: float, c: float, x: float, policy: SeriesPolicy) -> float:
    def terms() -> Iterator[float]:
        t = 1.0
        j = 0
        while j < policy.max_terms:
            yield t
            t *= (a + j) / (c + j) * x / (j + 1.0)
            j += 1

    val, est, ok = _sum_series(terms(), policy.rel_tol)
    if ok and est <= 1e-12 * max(abs(val), 1e-300):
        return val
    raise NonConvergence(
        f"kummer_1f1 series did not converge for a={a}, c={c}, x={x} "
        f"(cancellation estimate {est:.3g})"
    )
