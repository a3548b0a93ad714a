"""Crossing probabilities of random boundaries by Brownian-type processes.

The package couples three views of the same family of laws:

- :mod:`frax.specfun` / :mod:`frax.relaxation`: closed-form survival
  probabilities built on Mittag-Leffler-type functions;
- :mod:`frax.fraccalc`: the fractional differential equations those laws
  satisfy, with discrete operators and Laplace-transform machinery to
  check them numerically;
- :mod:`frax.stochsim`: exact-sampling Monte Carlo and density quadrature
  that reproduce the same probabilities from the process side.

:mod:`frax.verify` bundles the cross-checks; :mod:`frax.cli` exposes
evaluation, simulation, and verification as a command line tool.
"""

from .errors import DomainError, FraxError, NonConvergence, Unstable, Unsupported

__version__ = "0.1.0"

__all__ = [
    "DomainError",
    "FraxError",
    "NonConvergence",
    "Unstable",
    "Unsupported",
    "__version__",
]
