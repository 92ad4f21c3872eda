#include "fracctl/special_functions.hpp"

#include "fracctl/errors.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <mpfr.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <sstream>
#include <vector>

namespace fracctl {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kInf = std::numeric_limits<double>::infinity();

// Neumaier's variant of Kahan summation.
class CompensatedSum {
public:
    void add(double x) {
        const double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x)) {
            comp_ += (sum_ - t) + x;
        } else {
            comp_ += (x - t) + sum_;
        }
        sum_ = t;
    }
    double value() const { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

bool is_nonpositive_integer(double x) { return x <= 0.0 && x == std::floor(x); }

std::string ml_args(double p, double q, double z) {
    std::ostringstream os;
    os.precision(17);
    os << "(p=" << p << ", q=" << q << ", z=" << z << ")";
    return os.str();
}

// Power series in double precision. nullopt when cancellation would cost more
// than ~1e-11 relative accuracy.
std::optional<double> ml_series(double p, double q, double z) {
    constexpr int kMaxTerms = 20000;
    const double log_abs_z = std::log(std::abs(z));
    CompensatedSum sum;
    double max_term = 0.0;
    double prev_log = -kInf;
    bool decreasing = false;
    for (int k = 0; k < kMaxTerms; ++k) {
        const double arg = p * k + q;
        double term = 0.0;
        double log_mag = -kInf;
        if (arg <= 0.0) {
            term = std::pow(z, k) * rgamma(arg);
            log_mag = term == 0.0 ? -kInf : std::log(std::abs(term));
        } else {
            log_mag = k * log_abs_z - std::lgamma(arg);
            if (log_mag > 700.0) {
                throw ConvergenceError("mittag_leffler: power series overflows " + ml_args(p, q, z));
            }
            term = std::exp(log_mag);
            if (z < 0.0 && (k % 2 == 1)) term = -term;
        }
        sum.add(term);
        max_term = std::max(max_term, std::abs(term));
        if (arg > 1.5 && log_mag < prev_log) decreasing = true;
        prev_log = log_mag;
        const double s = std::abs(sum.value());
        if (decreasing && (std::abs(term) <= 1e-17 * s || std::abs(term) <= 1e-20 * max_term)) {
            const double value = sum.value();
            if (z < 0.0 && max_term * 1e-16 > 1e-12 * std::abs(value)) return std::nullopt;
            return value;
        }
    }
    throw ConvergenceError("mittag_leffler: power series did not converge " + ml_args(p, q, z));
}

// Algebraic asymptotic expansion on the negative axis, p < 1:
//   E_{p,q}(z) ~ -sum_{k>=1} z^{-k} / Gamma(q - p k).
// The series diverges; it is accepted only if a term envelope falls below
// 1e-14 of the sum before the envelope turns upward.
std::optional<double> ml_asymptotic(double p, double q, double z) {
    const double x = -z;
    if (std::pow(x, 1.0 / p) < 30.0) return std::nullopt;
    const double log_x = std::log(x);
    CompensatedSum sum;
    double prev_env = kInf;
    for (int k = 1; k < 2000; ++k) {
        const double arg = q - p * k;
        double env = 0.0;
        double term = 0.0;
        if (arg > 0.0) {
            env = 1.2 * std::exp(-k * log_x);
            term = std::exp(-k * log_x) * rgamma(arg);
        } else {
            const double log_env = std::lgamma(1.0 - arg) - std::log(kPi) - k * log_x;
            env = std::exp(log_env);
            term = env * sin_pi(arg);
        }
        // -(z^{-k}) = -(-1)^k x^{-k}
        if (k % 2 == 0) term = -term;
        sum.add(term);
        const double s = std::abs(sum.value());
        if (s > 0.0 && env <= 1e-14 * s) return sum.value();
        if (arg < 0.0 && env > prev_env) return std::nullopt;
        prev_env = env;
    }
    return std::nullopt;
}

// Integral representation, valid for 0 < p < 1, q < 1 + p and z < 0:
//   E_{p,q}(z) = int_0^inf K(chi) dchi,
//   K = chi^{(1-q)/p} exp(-chi^{1/p}) (chi sin(pi(1-q)) - z sin(pi(1-q+p)))
//       / (p pi (chi^2 - 2 chi z cos(pi p) + z^2)).
double ml_integral(double p, double q, double z) {
    using boost::math::quadrature::gauss_kronrod;
    const double e = (1.0 - q) / p;
    const double cos_a = std::cos(kPi * p);
    const double sin_a = std::sin(kPi * p);
    const double s1 = sin_pi(1.0 - q);
    const double s2 = sin_pi(1.0 - q + p);
    const double inv_p = 1.0 / p;
    auto smooth_part = [&](double chi) {
        const double num = chi * s1 - z * s2;
        // Sum of squares; the expanded quadratic cancels badly near the peak.
        const double d = chi - z * cos_a;
        const double den = d * d + z * z * sin_a * sin_a;
        return std::exp(-std::pow(chi, inv_p)) * num / (den * p * kPi);
    };
    const double chi_max = std::pow(745.0, p);

    // Lorentzian-like peak near chi = |z| |cos(pi p)| when p > 1/2.
    std::vector<double> pts{0.0, std::min(1.0, 0.5 * chi_max), chi_max};
    if (cos_a < 0.0) {
        const double peak = -z * -cos_a;
        const double width = -z * sin_a;
        for (double c : {peak - 20.0 * width, peak - 2.0 * width, peak, peak + 2.0 * width, peak + 20.0 * width}) {
            if (c > 0.0 && c < chi_max) pts.push_back(c);
        }
    }
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());

    double total = 0.0;
    double total_err = 0.0;
    double total_l1 = 0.0;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
        const double a = pts[i];
        const double b = pts[i + 1];
        double err = 0.0;
        double l1 = 0.0;
        double val = 0.0;
        if (a == 0.0) {
            // chi^e and exp(-chi^{1/p}) are not smooth at 0; tanh-sinh copes with both.
            auto f = [&](double chi) { return chi <= 0.0 ? 0.0 : std::pow(chi, e) * smooth_part(chi); };
            static thread_local boost::math::quadrature::tanh_sinh<double> integrator(12);
            val = integrator.integrate(f, a, b, 1e-14, &err, &l1);
        } else {
            auto f = [&](double chi) { return std::pow(chi, e) * smooth_part(chi); };
            val = gauss_kronrod<double, 31>::integrate(f, a, b, 15, 1e-10, &err, &l1);
        }
        total += val;
        total_err += err;
        total_l1 += l1;
    }
    if (!std::isfinite(total) || total_err > 1e-9 * std::max(std::abs(total), 1e-3 * total_l1)) {
        throw ConvergenceError("mittag_leffler: integral representation not certified " + ml_args(p, q, z));
    }
    return total;
}

double ml_integral_reduced(double p, double q, double z) {
    if (q < 1.0 + p) return ml_integral(p, q, z);
    return (ml_integral_reduced(p, q - p, z) - rgamma(q - p)) / z;
}

class Mpfr {
public:
    explicit Mpfr(mpfr_prec_t bits) { mpfr_init2(v, bits); }
    ~Mpfr() { mpfr_clear(v); }
    Mpfr(const Mpfr&) = delete;
    Mpfr& operator=(const Mpfr&) = delete;
    mpfr_t v;
};

// Power series with a working precision sized so that the largest term's
// cancellation leaves ~25 significant digits.
double ml_series_mpfr(double p, double q, double z) {
    const double log_abs_z = std::log(std::abs(z));
    double log_max = -kInf;
    int k_end = 0;
    for (int k = 0; k < 100000; ++k) {
        const double arg = p * k + q;
        if (arg <= 0.0) continue;
        const double lm = k * log_abs_z - std::lgamma(arg);
        log_max = std::max(log_max, lm);
        if (arg > 2.0 && lm < log_max - 120.0) {
            k_end = k;
            break;
        }
    }
    if (k_end == 0) throw ConvergenceError("mittag_leffler: series peak not found " + ml_args(p, q, z));
    const double max_digits = std::max(0.0, log_max / std::log(10.0));
    const double digits = (z < 0.0 ? 2.0 * max_digits : max_digits) + 30.0;
    if (digits > 1500.0) {
        throw ConvergenceError("mittag_leffler: required precision too large " + ml_args(p, q, z));
    }
    const auto bits = static_cast<mpfr_prec_t>(digits * 3.33 + 32);

    Mpfr zz(bits), zk(bits), arg(bits), g(bits), term(bits), sum(bits), pp(bits), qq(bits), thresh(53);
    mpfr_set_d(zz.v, z, MPFR_RNDN);
    mpfr_set_d(pp.v, p, MPFR_RNDN);
    mpfr_set_d(qq.v, q, MPFR_RNDN);
    mpfr_set_ui(zk.v, 1, MPFR_RNDN);
    mpfr_set_zero(sum.v, 1);
    // Stop once terms are below 10^(log_max_digits - digits + 5).
    const double log10_thresh = max_digits - digits + 5.0;
    for (int k = 0;; ++k) {
        const double arg_d = p * k + q;
        if (!is_nonpositive_integer(arg_d)) {
            mpfr_mul_ui(arg.v, pp.v, static_cast<unsigned long>(k), MPFR_RNDN);
            mpfr_add(arg.v, arg.v, qq.v, MPFR_RNDN);
            mpfr_gamma(g.v, arg.v, MPFR_RNDN);
            mpfr_div(term.v, zk.v, g.v, MPFR_RNDN);
            mpfr_add(sum.v, sum.v, term.v, MPFR_RNDN);
            if (k >= k_end / 2 && arg_d > 2.0) {
                long exp2 = 0;
                const double mant = mpfr_get_d_2exp(&exp2, term.v, MPFR_RNDN);
                const double log10_term =
                    mant == 0.0 ? -kInf : (std::log10(std::abs(mant)) + exp2 * std::log10(2.0));
                if (log10_term < log10_thresh) break;
            }
        }
        mpfr_mul(zk.v, zk.v, zz.v, MPFR_RNDN);
        if (k > 200000) throw ConvergenceError("mittag_leffler: mpfr series did not converge " + ml_args(p, q, z));
    }
    return mpfr_get_d(sum.v, MPFR_RNDN);
}

}  // namespace

double sin_pi(double x) {
    const double r = std::remainder(x, 2.0);
    if (r == 0.0 || r == 1.0 || r == -1.0) return 0.0;
    return std::sin(kPi * r);
}

double gamma_fn(double x) {
    if (std::isnan(x)) throw DomainError("gamma_fn: NaN argument");
    if (is_nonpositive_integer(x)) {
        std::ostringstream os;
        os << "gamma_fn: pole at x=" << x;
        throw PoleError(os.str());
    }
    const double g = std::tgamma(x);
    if (!std::isfinite(g)) {
        std::ostringstream os;
        os << "gamma_fn: overflow at x=" << x;
        throw DomainError(os.str());
    }
    return g;
}

double rgamma(double x) {
    if (std::isnan(x)) throw DomainError("rgamma: NaN argument");
    if (is_nonpositive_integer(x)) return 0.0;
    if (x > 0.0) {
        if (x < 170.0) return 1.0 / std::tgamma(x);
        return std::exp(-std::lgamma(x));
    }
    // 1/Gamma(x) = sin(pi x) Gamma(1 - x) / pi
    const double s = sin_pi(x);
    if (1.0 - x < 170.0) return s * std::tgamma(1.0 - x) / kPi;
    return std::copysign(std::exp(std::lgamma(1.0 - x) + std::log(std::abs(s)) - std::log(kPi)), s);
}

double mittag_leffler(double p, double q, double z) {
    if (!(p > 0.0) || !std::isfinite(p) || !std::isfinite(q) || !std::isfinite(z)) {
        throw DomainError("mittag_leffler: requires finite arguments and p > 0 " + ml_args(p, q, z));
    }
    if (z == 0.0) return rgamma(q);
    if (p == 1.0 && q == 1.0) return std::exp(z);
    if (z > 0.0 || z >= -1.0) {
        if (auto v = ml_series(p, q, z)) return *v;
    }
    if (p < 1.0) {
        if (auto v = ml_asymptotic(p, q, z)) return *v;
        return ml_integral_reduced(p, q, z);
    }
    if (p == 1.0 && (q == 2.0 || q == 3.0)) {
        double e = std::exp(z);
        for (double m = 1.0; m < q; m += 1.0) e = (e - rgamma(m)) / z;
        return e;
    }
    return ml_series_mpfr(p, q, z);
}

namespace {

// Kanter's representation: a positive integrand over (0, pi), used where the
// alternating series cancels (theta near 0).
//   psi(x) = a/(1-a) x^{-1/(1-a)} (1/pi) int_0^pi A(f) exp(-x^{-a/(1-a)} A(f)) df
//   A(f)   = (sin(a f)/sin f)^{1/(1-a)} sin((1-a) f)/sin(a f)
double psi_kanter(double alpha, double theta) {
    const double r = 1.0 / (1.0 - alpha);
    const double s = std::pow(theta, -alpha * r);
    // A is increasing on (0, pi); factoring out exp(-s A(0)) keeps the integral O(1).
    const double a0 = (1.0 - alpha) * std::pow(alpha, alpha * r);
    const double log_scale = std::log(alpha * r / kPi) - r * std::log(theta) - s * a0;
    if (log_scale < -760.0) return 0.0;  // below the smallest subnormal for any O(1) integral
    auto f = [&](double phi) {
        const double sa = std::sin(alpha * phi);
        const double la = r * (std::log(sa) - std::log(std::sin(phi))) + std::log(std::sin((1.0 - alpha) * phi)) -
                          std::log(sa);
        const double e = la - s * (std::exp(la) - a0);
        return e < -745.0 ? 0.0 : std::exp(e);
    };
    // For large s the mass sits in a peak of width ~ 1/sqrt(s) at phi = 0. The
    // exponent carries rounding noise of order s * 1e-16, so the tolerance
    // stays well above it.
    const double cut = std::min(0.5 * kPi, 8.0 / std::sqrt(s));
    double err0 = 0.0, err1 = 0.0;
    using GK = boost::math::quadrature::gauss_kronrod<double, 61>;
    const double integral = GK::integrate(f, 0.0, cut, 12, 1e-11, &err0) + GK::integrate(f, cut, kPi, 12, 1e-11, &err1);
    const double err = err0 + err1;
    if (!std::isfinite(integral) || !(integral > 0.0) || err > 1e-9 * integral) {
        throw PrecisionLossError("psi_alpha: integral representation not certified");
    }
    return std::exp(log_scale) * integral;
}

}  // namespace

double psi_alpha(double alpha, double theta) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("psi_alpha: alpha must lie strictly in (0,1)");
    if (!(theta > 0.0) || !std::isfinite(theta)) throw DomainError("psi_alpha: theta must be positive and finite");
    constexpr int kMaxTerms = 500;
    const double log_theta = std::log(theta);
    CompensatedSum sum;
    double max_env = 0.0;
    double prev_env = kInf;
    for (int n = 1; n <= kMaxTerms; ++n) {
        const double log_env = std::lgamma(n * alpha + 1.0) - std::lgamma(n + 1.0) - (alpha * n + 1.0) * log_theta;
        if (log_env > 700.0) return psi_kanter(alpha, theta);
        const double env = std::exp(log_env) / kPi;
        double term = env * sin_pi(n * alpha);
        if (n % 2 == 0) term = -term;
        sum.add(term);
        max_env = std::max(max_env, env);
        const double s = std::abs(sum.value());
        if (n > 1 && env < prev_env && env <= 1e-16 * s) {
            const double value = sum.value();
            // More than six digits lost to cancellation.
            if (max_env > 1e6 * std::abs(value) || value < 0.0) return psi_kanter(alpha, theta);
            return value;
        }
        prev_env = env;
    }
    // Slow convergence only happens for small theta, where the integral form is accurate.
    return psi_kanter(alpha, theta);
}

double phi_alpha(double alpha, double theta) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("phi_alpha: alpha must lie strictly in (0,1)");
    if (!(theta > 0.0) || !std::isfinite(theta)) throw DomainError("phi_alpha: theta must be positive and finite");
    const double s = std::pow(theta, -1.0 / alpha);
    if (s == 0.0) return 0.0;  // psi decays faster than any power at 0
    if (!std::isfinite(s)) return rgamma(1.0 - alpha);  // limit at theta = 0
    return std::pow(theta, -1.0 - 1.0 / alpha) * psi_alpha(alpha, s) / alpha;
}

double phi_alpha_moment(double alpha, double nu) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("phi_alpha_moment: alpha must lie strictly in (0,1)");
    if (!(nu >= 0.0) || !std::isfinite(nu)) throw DomainError("phi_alpha_moment: nu must be non-negative");
    if (nu < 100.0) return gamma_fn(1.0 + nu) / gamma_fn(1.0 + alpha * nu);
    return std::exp(std::lgamma(1.0 + nu) - std::lgamma(1.0 + alpha * nu));
}

}  // namespace fracctl
