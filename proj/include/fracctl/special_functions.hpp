#pragma once

// Gamma, two-parameter Mittag-Leffler and the one-sided stable density.
// All functions are pure and thread-safe.

namespace fracctl {

/// Euler's gamma function. Throws PoleError at 0, -1, -2, ...
double gamma_fn(double x);

/// 1/Gamma(x); zero at the poles of Gamma.
double rgamma(double x);

/// sin(pi*x) with exact zeros at the integers.
double sin_pi(double x);

/// E_{p,q}(z) = sum_k z^k / Gamma(p k + q) for real z and p > 0.
///
/// Evaluation strategy, by region:
///   |z| <= 1 or z > 0      compensated power series in double precision
///   p < 1, z < 0, large    algebraic asymptotic expansion, used only when the
///                          envelope of the first omitted term certifies it
///   p < 1, z < 0, middle   integral representation over (0, inf) with
///                          adaptive Gauss-Kronrod (index q reduced below 1+p
///                          by the recurrence E_{p,q} = 1/Gamma(q) + z E_{p,q+p})
///   p >= 1, z < -1         exp / closed recurrences for p = 1 and integer q,
///                          otherwise the power series summed in MPFR with a
///                          precision sized to the cancellation
/// Throws ConvergenceError when none of the routes certifies ~1e-11 relative
/// accuracy (e.g. overflow for large positive z and small p).
double mittag_leffler(double p, double q, double z);

/// One-sided stable density
///   psi_a(theta) = (1/pi) sum_{n>=1} (-1)^{n-1} theta^{-a n - 1} Gamma(n a + 1)/n! sin(n pi a).
/// Summation stops when the term envelope drops below 1e-16 of the running
/// sum. Where the series would lose more than six digits to cancellation
/// (theta close to 0), or has not converged after 500 terms, Kanter's integral
/// representation is used instead. PrecisionLossError when that integral
/// cannot be certified.
double psi_alpha(double alpha, double theta);

/// phi_a(theta) = (1/a) theta^{-1-1/a} psi_a(theta^{-1/a}).
double phi_alpha(double alpha, double theta);

/// int_0^inf theta^nu phi_a(theta) dtheta = Gamma(1+nu)/Gamma(1+a nu).
double phi_alpha_moment(double alpha, double nu);

}  // namespace fracctl
