"""Monte Carlo and quadrature oracles for the boundary-crossing laws.

Every process here admits exact sampling of its time-t endpoint (no path
discretization), so a crossing estimate is a plain Bernoulli mean with a
binomial standard error and no discretization bias.  Sampling is
deterministic by construction: paths are grouped into fixed-size blocks,
each block draws from its own counter-based stream keyed by
``(seed, block_index)``, and draws within a block follow a fixed order.
The result is bit-identical for a given seed regardless of how many
worker threads (``FRAX_THREADS``) are used.

Heavy-tailed waiting-time processes without exact samplers (the inverse
stable, Airy, and distributed-order subordinators) are handled by
quadrature against their explicit densities instead of Monte Carlo.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Union

import numpy as np
from scipy.integrate import quad
from scipy.special import erfcx, gammaincc

from .errors import DomainError, Unsupported
from .specfun import airy_ai, wright_m

DEFAULT_SEED = 0xF12AC7
_BLOCK = 1 << 18

__all__ = [
    "ReflectedBM",
    "IteratedBM",
    "SojournTime",
    "FirstPassageChain",
    "BesselSquared",
    "ElasticBM",
    "WrightTime",
    "AiryTime",
    "DistributedTime",
    "ProcessSpec",
    "Exponential",
    "Gamma",
    "BoundarySpec",
    "CrossingEstimate",
    "DEFAULT_SEED",
    "sample_process",
    "estimate_crossing",
    "quadrature_crossing",
    "density",
    "elastic_atom",
]


def _positive(name: str, v: float) -> None:
    if not (isinstance(v, (int, float)) and math.isfinite(v) and v > 0.0):
        raise DomainError(f"{name} must be positive and finite, got {v!r}")


@dataclass(frozen=True)
class ReflectedBM:
    """Reflected Brownian motion |B(t)|.

    ``diffusion_scale`` selects the variance convention: ``var2t`` gives
    Var B(t) = 2t (the convention of the fractional relaxation laws),
    ``var_t`` the standard Var B(t) = t.
    """

    diffusion_scale: str = "var2t"

    def __post_init__(self) -> None:
        if self.diffusion_scale not in ("var2t", "var_t"):
            raise DomainError(f"ReflectedBM.diffusion_scale must be 'var2t' or 'var_t', got {self.diffusion_scale!r}")


@dataclass(frozen=True)
class IteratedBM:
    """n-fold composition |B_1(|B_2(... |B_n(t)|)|)| of reflected motions
    (each with Var = 2t), whose endpoint law has fractional order 2**-n."""

    n: int

    def __post_init__(self) -> None:
        if not (isinstance(self.n, int) and self.n >= 1):
            raise DomainError(f"IteratedBM.n must be an integer >= 1, got {self.n!r}")


@dataclass(frozen=True)
class SojournTime:
    """Occupation time of (0, inf) up to t by a Brownian motion, which
    follows the arcsine law t * Beta(1/2, 1/2)."""


@dataclass(frozen=True)
class FirstPassageChain:
    """n-fold iteration of Brownian first-passage times through a level:
    one step maps a level s to the passage time s**2 / Z**2, Z ~ N(0,1)."""

    n: int

    def __post_init__(self) -> None:
        if not (isinstance(self.n, int) and self.n >= 1):
            raise DomainError(f"FirstPassageChain.n must be an integer >= 1, got {self.n!r}")


@dataclass(frozen=True)
class BesselSquared:
    """Squared Bessel process of dimension gamma built from unit-variance
    components; its time-t endpoint is 2t * Gamma(gamma/2, 1)."""

    gamma: float

    def __post_init__(self) -> None:
        _positive("BesselSquared.gamma", self.gamma)


@dataclass(frozen=True)
class ElasticBM:
    """Elastic Brownian motion: reflected motion (Var = t) killed at rate
    alpha per unit of local time at the origin.  Killed paths are treated
    as having crossed (the sampled endpoint is 0)."""

    alpha: float

    def __post_init__(self) -> None:
        _positive("ElasticBM.alpha", self.alpha)


@dataclass(frozen=True)
class WrightTime:
    """Inverse stable subordinator of index nu: endpoint density
    t**-nu * M_nu(y / t**nu).  Quadrature only."""

    nu: float

    def __post_init__(self) -> None:
        if not (0.0 < self.nu < 1.0):
            raise DomainError(f"WrightTime.nu must lie in (0, 1), got {self.nu!r}")


@dataclass(frozen=True)
class AiryTime:
    """Order-1/3 waiting process with endpoint density
    (9/t)**(1/3) * Ai(y / (3t)**(1/3)).  Quadrature only."""


@dataclass(frozen=True)
class DistributedTime:
    """Inverse of the weighted subordinator n1 * (stable 1/2) + n2 * t;
    the endpoint has an explicit density on (0, t/n2).  Quadrature only."""

    n1: float
    n2: float

    def __post_init__(self) -> None:
        _positive("DistributedTime.n1", self.n1)
        _positive("DistributedTime.n2", self.n2)
        if abs(self.n1 + self.n2 - 1.0) > 1e-12:
            raise DomainError(f"DistributedTime weights must satisfy n1 + n2 = 1, got {self.n1!r} + {self.n2!r}")


ProcessSpec = Union[
    ReflectedBM,
    IteratedBM,
    SojournTime,
    FirstPassageChain,
    BesselSquared,
    ElasticBM,
    WrightTime,
    AiryTime,
    DistributedTime,
]

_MC_CAPABLE = (ReflectedBM, IteratedBM, SojournTime, FirstPassageChain, BesselSquared, ElasticBM)


@dataclass(frozen=True)
class Exponential:
    """Exponential(lam) random boundary."""

    lam: float

    def __post_init__(self) -> None:
        _positive("Exponential.lam", self.lam)


@dataclass(frozen=True)
class Gamma:
    """Gamma(k, lam) random boundary with integer shape k (Erlang)."""

    k: int
    lam: float

    def __post_init__(self) -> None:
        if not (isinstance(self.k, int) and self.k >= 1):
            raise DomainError(f"Gamma.k must be an integer >= 1, got {self.k!r}")
        _positive("Gamma.lam", self.lam)


BoundarySpec = Union[Exponential, Gamma]


@dataclass(frozen=True)
class CrossingEstimate:
    """Crossing-probability estimate with its uncertainty and provenance."""

    p_hat: float
    stderr: float
    n_paths: int
    seed: int
    method: str


def _require_time(t: float) -> None:
    if not (isinstance(t, (int, float)) and math.isfinite(t) and t > 0.0):
        raise DomainError(f"time t must be positive and finite, got {t!r}")


def _sample_block(spec: ProcessSpec, t: float, rng: np.random.Generator, size: int) -> np.ndarray:
    """Draw ``size`` exact endpoint samples of ``spec`` at time t."""
    if isinstance(spec, ReflectedBM):
        var = 2.0 * t if spec.diffusion_scale == "var2t" else t
        return np.abs(rng.standard_normal(size)) * math.sqrt(var)
    if isinstance(spec, IteratedBM):
        s = np.full(size, t)
        for _ in range(spec.n):
            s = np.abs(rng.standard_normal(size)) * np.sqrt(2.0 * s)
        return s
    if isinstance(spec, SojournTime):
        return t * rng.beta(0.5, 0.5, size)
    if isinstance(spec, FirstPassageChain):
        s = np.full(size, t)
        for _ in range(spec.n):
            z = rng.standard_normal(size)
            with np.errstate(divide="ignore", over="ignore"):
                s = (s / z) ** 2
        return s
    if isinstance(spec, BesselSquared):
        return 2.0 * t * rng.standard_gamma(0.5 * spec.gamma, size)
    if isinstance(spec, ElasticBM):
        # Joint draw of (|B_t|, L_t) via the running-maximum identity:
        # with R = 2S - B ~ Maxwell(sqrt(t)) and S | R ~ Uniform(0, R),
        # (S - B, S) has the law of (|B_t|, L_t).  Kill with prob 1 - e^(-alpha L).
        r = np.sqrt(2.0 * t * rng.standard_gamma(1.5, size))
        s = r * rng.random(size)
        killed = rng.random(size) >= np.exp(-spec.alpha * s)
        endpoint = r - s
        endpoint[killed] = 0.0
        return endpoint
    raise DomainError(
        f"{type(spec).__name__} has no exact path sampler; use quadrature_crossing"
    )


def sample_process(spec: ProcessSpec, t: float, rng: np.random.Generator) -> float:
    """Draw one exact endpoint sample of ``spec`` at time t."""
    _require_time(t)
    return float(_sample_block(spec, t, rng, 1)[0])


def _boundary_block(boundary: BoundarySpec, rng: np.random.Generator, size: int) -> np.ndarray:
    if isinstance(boundary, Exponential):
        return rng.exponential(1.0 / boundary.lam, size)
    if isinstance(boundary, Gamma):
        return rng.gamma(boundary.k, 1.0 / boundary.lam, size)
    raise DomainError(f"unknown boundary spec {type(boundary).__name__}")


def _workers() -> int:
    raw = os.environ.get("FRAX_THREADS", "")
    try:
        w = int(raw) if raw else 1
    except ValueError:
        raise DomainError(f"FRAX_THREADS must be an integer, got {raw!r}")
    return max(1, w)


def estimate_crossing(
    spec: ProcessSpec,
    boundary: BoundarySpec,
    t: float,
    n_paths: int,
    seed: int = DEFAULT_SEED,
) -> CrossingEstimate:
    """Monte Carlo estimate of P(process endpoint < boundary) at time t.

    Paths are processed in fixed blocks of 2**18, each with its own
    counter-based stream keyed by (seed, block index); the estimate is
    independent of thread count and bit-identical across runs.
    """
    _require_time(t)
    if not isinstance(spec, _MC_CAPABLE):
        raise DomainError(
            f"{type(spec).__name__} has no exact path sampler; use quadrature_crossing"
        )
    if n_paths < 1000:
        raise DomainError(f"estimate_crossing requires n_paths >= 1000, got {n_paths}")
    n_blocks = (n_paths + _BLOCK - 1) // _BLOCK

    def run_block(b: int) -> int:
        m = min(_BLOCK, n_paths - b * _BLOCK)
        rng = np.random.Generator(np.random.Philox(key=[seed, b]))
        values = _sample_block(spec, t, rng, m)
        bounds = _boundary_block(boundary, rng, m)
        return int(np.count_nonzero(values < bounds))

    w = _workers()
    if w > 1 and n_blocks > 1:
        with ThreadPoolExecutor(max_workers=w) as pool:
            count = sum(pool.map(run_block, range(n_blocks)))
    else:
        count = sum(run_block(b) for b in range(n_blocks))
    p = count / n_paths
    stderr = math.sqrt(max(p * (1.0 - p), 1e-300) / n_paths)
    return CrossingEstimate(p_hat=p, stderr=stderr, n_paths=n_paths, seed=seed, method="monte_carlo")


def _exp_survivor(boundary: BoundarySpec, y: float) -> float:
    """P(boundary > y) for the supported boundary laws."""
    if isinstance(boundary, Exponential):
        return math.exp(-boundary.lam * y)
    if isinstance(boundary, Gamma):
        return float(gammaincc(boundary.k, boundary.lam * y))
    raise DomainError(f"unknown boundary spec {type(boundary).__name__}")


def quadrature_crossing(spec: ProcessSpec, boundary: BoundarySpec, t: float) -> CrossingEstimate:
    """Crossing probability by quadrature against an explicit endpoint density.

    Supported: WrightTime with exponential or gamma boundaries; AiryTime
    and DistributedTime with exponential boundaries.
    """
    _require_time(t)
    if isinstance(spec, WrightTime):
        nu = spec.nu
        tn = t**nu
        lam_eff = boundary.lam * tn if isinstance(boundary, Exponential) else 0.0
        b = (1.0 - nu) * nu ** (nu / (1.0 - nu))
        c = 1.0 / (1.0 - nu)
        x_hi = 1.0
        while lam_eff * x_hi + b * x_hi**c < 45.0 and x_hi < 1e6:
            x_hi *= 1.25

        def f(x: float) -> float:
            return _exp_survivor(boundary, tn * x) * wright_m(nu, x)

        val, err = quad(f, 0.0, x_hi, limit=300, epsabs=1e-10, epsrel=1e-10)
        return CrossingEstimate(p_hat=val, stderr=err, n_paths=1, seed=0, method="quadrature")
    if isinstance(spec, AiryTime):
        if not isinstance(boundary, Exponential):
            raise Unsupported("AiryTime quadrature supports exponential boundaries only")
        scale = boundary.lam * (3.0 * t) ** (1.0 / 3.0)

        def f(w: float) -> float:
            return math.exp(-scale * w) * airy_ai(w)

        val, err = quad(f, 0.0, 18.0, limit=300, epsabs=1e-12, epsrel=1e-10)
        return CrossingEstimate(p_hat=3.0 * val, stderr=3.0 * err, n_paths=1, seed=0, method="quadrature")
    if isinstance(spec, DistributedTime):
        if not isinstance(boundary, Exponential):
            raise Unsupported("DistributedTime quadrature supports exponential boundaries only")
        lam = boundary.lam

        def f(y: float) -> float:
            return math.exp(-lam * y) * density(spec, y, t)

        upper = t / spec.n2
        val, err = quad(f, 0.0, upper, limit=300, epsabs=1e-12, epsrel=1e-10)
        return CrossingEstimate(p_hat=val, stderr=err, n_paths=1, seed=0, method="quadrature")
    raise Unsupported(f"quadrature_crossing does not support {type(spec).__name__}")


def density(spec: ProcessSpec, y: float, t: float) -> float:
    """Endpoint density of ``spec`` at time t, where one is available.

    For ElasticBM this is the continuous part only; the killed mass is
    exposed separately by :func:`elastic_atom`.
    """
    _require_time(t)
    if not (isinstance(y, (int, float)) and math.isfinite(y)):
        raise DomainError(f"density requires finite y, got {y!r}")
    if isinstance(spec, ReflectedBM):
        if y < 0.0:
            return 0.0
        var = 2.0 * t if spec.diffusion_scale == "var2t" else t
        return math.sqrt(2.0 / (math.pi * var)) * math.exp(-y * y / (2.0 * var))
    if isinstance(spec, SojournTime):
        if not (0.0 < y < t):
            return 0.0
        return 1.0 / (math.pi * math.sqrt(y * (t - y)))
    if isinstance(spec, BesselSquared):
        if y <= 0.0:
            return 0.0
        g = spec.gamma
        return (
            y ** (0.5 * g - 1.0)
            * math.exp(-y / (2.0 * t))
            / ((2.0 * t) ** (0.5 * g) * math.gamma(0.5 * g))
        )
    if isinstance(spec, ElasticBM):
        if y < 0.0:
            return 0.0
        a = spec.alpha
        return math.exp(-y * y / (2.0 * t)) * (
            math.sqrt(2.0 / (math.pi * t)) - a * float(erfcx((y + a * t) / math.sqrt(2.0 * t)))
        )
    if isinstance(spec, WrightTime):
        if y < 0.0:
            return 0.0
        tn = t**spec.nu
        return wright_m(spec.nu, y / tn) / tn
    if isinstance(spec, AiryTime):
        if y < 0.0:
            return 0.0
        cube = (3.0 * t) ** (1.0 / 3.0)
        return (9.0 / t) ** (1.0 / 3.0) * airy_ai(y / cube)
    if isinstance(spec, DistributedTime):
        n1, n2 = spec.n1, spec.n2
        if not (0.0 < y < t / n2):
            return 0.0
        gap = t - n2 * y
        return (
            n1
            * (t - 0.5 * n2 * y)
            / (math.sqrt(math.pi) * gap**1.5)
            * math.exp(-n1 * n1 * y * y / (4.0 * gap))
        )
    raise Unsupported(f"density is not available for {type(spec).__name__}")


def elastic_atom(spec: ElasticBM, t: float) -> float:
    """Probability that the elastic motion has been killed by time t:
    1 - exp(alpha**2 t / 2) * erfc(alpha sqrt(t/2)), in stable form."""
    _require_time(t)
    return 1.0 - float(erfcx(spec.alpha * math.sqrt(0.5 * t)))
