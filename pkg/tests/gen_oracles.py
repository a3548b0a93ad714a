"""Regenerate the high-precision reference values frozen into the tests.

Run directly (``python3 tests/gen_oracles.py``) to print every constant
used as an expected value in the test suite, each tagged with the test
that consumes it.  The evaluations here use mpmath arbitrary-precision
arithmetic and are deliberately independent of the package's own series
and quadrature code; mpmath is a test-only dependency.

Conventions that matter for correctness:

- Near-pole gamma arguments are built from exact fractions, never from
  binary floats that merely round to them.
- Alternating series are summed at a working precision that covers the
  largest intermediate term, then rounded once at the end.
"""

from __future__ import annotations

from fractions import Fraction

import mpmath as mp


def ml(alpha, beta, z, dps: int = 60) -> mp.mpf:
    """Two- or three-parameter Mittag-Leffler by direct summation."""
    return gml(alpha, beta, 1, z, dps=dps)


def gml(alpha, beta, gamma, z, dps: int = 60) -> mp.mpf:
    with mp.workdps(dps):
        alpha = mp.mpf(Fraction(alpha).numerator) / Fraction(alpha).denominator
        beta = mp.mpf(Fraction(beta).numerator) / Fraction(beta).denominator
        zz = mp.mpf(z)

        def term(j):
            j = int(j)
            return (
                mp.rf(gamma, j)
                / mp.factorial(j)
                * zz**j
                * mp.rgamma(alpha * j + beta)
            )

        return mp.nsum(term, [0, mp.inf])


def wright_m(nu, x, dps: int = 80) -> mp.mpf:
    """M-Wright density M_nu(x) = sum (-x)^j / (j! Gamma(-nu j + 1 - nu)).

    Summed by an explicit loop: the vanishing terms at the rgamma poles
    make the term pattern irregular enough to derail mp.nsum's series
    acceleration in the tail region (it returned values off by orders of
    magnitude for M_{1/2}(5), where the closed form exp(-x^2/4)/sqrt(pi)
    is known).  The working precision covers the pre-cancellation peak;
    the loop stops once terms fall 10^(dps) below the running maximum.
    """
    fr = Fraction(nu)
    with mp.workdps(2 * dps):
        nu_ = mp.mpf(fr.numerator) / fr.denominator
        xx = mp.mpf(x)
        total = mp.mpf(0)
        peak = mp.mpf(0)
        threshold = mp.mpf(10) ** (-2 * dps)
        small_run = 0
        j = 0
        while True:
            term = (-xx) ** j / mp.factorial(j) * mp.rgamma(-nu_ * j + 1 - nu_)
            total += term
            peak = max(peak, abs(term))
            j += 1
            # zero terms at the rgamma poles must not end the loop early, so
            # demand a sustained run of negligible terms before stopping
            if j > 16 and abs(term) < peak * threshold:
                small_run += 1
                if small_run >= 8:
                    break
            else:
                small_run = 0
            if j > 100000:
                raise RuntimeError("wright_m oracle did not converge")
        return total


def psi_distributed(n1, n2, lam, t, dps: int = 60) -> mp.mpf:
    """Two-order law with (nu1, nu2) = (1/2, 1): double series in mpmath."""
    with mp.workdps(dps):
        n1_, n2_, lam_, t_ = (mp.mpf(v) for v in (n1, n2, lam, t))
        x = lam_ * t_ / n2_
        q = n1_ * mp.sqrt(t_) / n2_

        def outer(r):
            r = int(r)
            # beta = nu2 + delta*r + 1 with nu2 = 1, delta = 1/2
            inner = gml(1, 2 + Fraction(r, 2), r + 1, -x, dps=dps)
            return (-q) ** r * inner

        return 1 - x * mp.nsum(outer, [0, mp.inf])


def main() -> None:
    mp.mp.dps = 40
    out: list[tuple[str, str, mp.mpf]] = []

    # --- test_specfun: Mittag-Leffler level-crossing values (quadrature targets)
    for nu_num, nu_den in ((3, 10), (1, 2), (7, 10)):
        nu = Fraction(nu_num, nu_den)
        for t in ("0.5", "1", "2"):
            z = -mp.mpf(t) ** (mp.mpf(nu_num) / nu_den)
            out.append((f"E_{nu}(-{t}^{nu})", "test_specfun/test_acceptance", ml(nu, 1, z)))

    # --- test_specfun: order-1/4 and order-1/3 values
    out.append(("E_{1/4}(-1)", "test_specfun", ml(Fraction(1, 4), 1, -1)))
    out.append(("E_{1/3}(-1)", "test_specfun", ml(Fraction(1, 3), 1, -1)))
    for t in ("0.5", "2"):
        z = -mp.mpf(t) ** (mp.mpf(1) / 3)
        out.append((f"E_{{1/3}}(-{t}^(1/3))", "test_stochsim airy crossing", ml(Fraction(1, 3), 1, z)))

    # --- test_specfun: two-parameter and three-parameter points
    out.append(("E_{1/2,2}(-1)", "test_specfun", ml(Fraction(1, 2), 2, -1)))
    out.append(("E_{3/4,5/4}(-2)", "test_specfun", ml(Fraction(3, 4), Fraction(5, 4), -2)))
    out.append(("E^2_{1/2,3/2}(-1)", "test_specfun", gml(Fraction(1, 2), Fraction(3, 2), 2, -1)))
    out.append(("E^3_{3/5,11/10}(-3/2)", "test_specfun", gml(Fraction(3, 5), Fraction(11, 10), 3, mp.mpf("-1.5"))))
    out.append(("E_{1/2}(-8) deep integral region", "test_specfun", ml(Fraction(1, 2), 1, -8)))

    # --- test_specfun: M-Wright values (body and tails)
    out.append(("M_{1/2}(1)", "test_specfun", wright_m(Fraction(1, 2), 1)))
    out.append(("M_{1/3}(1/2)", "test_specfun", wright_m(Fraction(1, 3), mp.mpf("0.5"))))
    out.append(("M_{0.3}(2)", "test_specfun", wright_m(Fraction(3, 10), 2)))
    out.append(("M_{0.3}(20)", "test_specfun tail", wright_m(Fraction(3, 10), 20, dps=120)))
    out.append(("M_{1/2}(5)", "test_specfun tail", wright_m(Fraction(1, 2), 5, dps=120)))
    out.append(("M_{0.7}(4)", "test_specfun tail", wright_m(Fraction(7, 10), 4, dps=120)))

    # --- test_specfun: Airy, Bessel, Kummer
    out.append(("Ai(0)", "test_specfun", mp.airyai(0)))
    out.append(("Ai(1)", "test_specfun", mp.airyai(1)))
    out.append(("Ai(5)", "test_specfun", mp.airyai(5)))
    out.append(("I_0(1)", "test_specfun", mp.besseli(0, 1)))
    out.append(("I_{1/3}(2)", "test_specfun", mp.besseli(mp.mpf(1) / 3, 2)))
    out.append(("I_{-1/3}(25)", "test_specfun crossover", mp.besseli(-mp.mpf(1) / 3, 25)))
    out.append(("1F1(1/2;1;-2)", "test_specfun", mp.hyp1f1(mp.mpf(1) / 2, 1, -2)))
    out.append(("1F1(3/2;2;-15) reflected", "test_specfun", mp.hyp1f1(mp.mpf(3) / 2, 2, -15)))

    # --- test_relaxation: law values
    out.append(("sojourn psi(1), lam=1", "test_relaxation", mp.e ** mp.mpf("-0.5") * mp.besseli(0, mp.mpf("0.5"))))
    y = 1 / mp.sqrt(2)
    out.append(("elastic equal-rate psi(1), alpha=lam=1", "test_relaxation", 1 - y * gml(Fraction(1, 2), Fraction(3, 2), 2, -y)))
    out.append(("gamma-boundary psi(1), k=2 lam=1", "test_relaxation", 1 - gml(Fraction(1, 2), 2, 2, -1)))
    out.append(("distributed psi(1), (0.5,0.5) lam=1", "test_relaxation", psi_distributed("0.5", "0.5", 1, 1)))
    out.append(("distributed psi(2), (0.2,0.8) lam=1", "test_relaxation", psi_distributed("0.2", "0.8", 1, 2)))
    a, lam_, t_ = mp.mpf("0.7"), mp.mpf("1.3"), mp.mpf(2)
    ea = ml(Fraction(1, 2), 1, -a * mp.sqrt(t_ / 2))
    el = ml(Fraction(1, 2), 1, -lam_ * mp.sqrt(t_ / 2))
    out.append(("elastic psi(2), alpha=0.7 lam=1.3", "test_relaxation", 1 - lam_ / (lam_ - a) * (ea - el)))

    # --- test_fraccalc: Riemann-Liouville integral of f(t) = t at order 1/2
    out.append(("RL-1/2 of t: coefficient of t^{3/2}", "test_fraccalc", mp.gamma(2) / mp.gamma(mp.mpf("2.5"))))

    for name, consumer, value in out:
        print(f"{name}  [{consumer}]\n    {mp.nstr(value, 22)}")


if __name__ == "__main__":
    main()
