#pragma once

// Test-side reference computations. Each one follows a different route from
// the library code it checks: plain adaptive quadrature of a defining
// integral, a closed form, or a dense solve of the full optimality system.

#include <cmath>
#include <functional>
#include <numbers>
#include <random>
#include <stdexcept>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <Eigen/Dense>

#include "fracctl/special_functions.hpp"

namespace oracle {

inline constexpr double pi = std::numbers::pi;

/// Adaptive Gauss-Kronrod on a finite interval with a smooth integrand.
inline double integrate(const std::function<double(double)>& f, double a, double b, double tol = 1e-13) {
    double err = 0.0;
    const double v = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, a, b, 15, tol, &err);
    if (!std::isfinite(v)) throw std::runtime_error("oracle::integrate: non-finite result");
    return v;
}

/// Double-exponential rule; tolerates integrable endpoint singularities.
inline double integrate_singular(const std::function<double(double)>& f, double a, double b, double tol = 1e-13) {
    static thread_local boost::math::quadrature::tanh_sinh<double> ts(15);
    return ts.integrate(f, a, b, tol);
}

/// int_0^inf f via theta = tan(pi s / 2), split at s = 1/2 so that each
/// piece stays smooth.
inline double integrate_half_line(const std::function<double(double)>& f, double tol = 1e-12) {
    auto g = [&](double s) {
        if (s <= 0.0 || s >= 1.0) return 0.0;
        const double th = std::tan(0.5 * pi * s);
        const double c = std::cos(0.5 * pi * s);
        const double v = f(th) * 0.5 * pi / (c * c);
        return std::isfinite(v) ? v : 0.0;
    };
    double total = 0.0;
    const double cuts[] = {0.0, 0.1, 0.25, 0.5, 0.75, 0.9, 0.97, 0.995, 1.0};
    for (int k = 0; k + 1 < 9; ++k) total += integrate_singular(g, cuts[k], cuts[k + 1], tol);
    return total;
}

/// Convolution kernel of one mode, s^{a-1} E_{a,a}(lambda s^a).
inline double mode_kernel(double alpha, double lambda, double s) {
    return std::pow(s, alpha - 1.0) * fracctl::mittag_leffler(alpha, alpha, lambda * std::pow(s, alpha));
}

/// Weight of the cell [(m-1)h, mh] by direct quadrature of the kernel.
inline double cell_weight(double alpha, double lambda, double h, int m) {
    auto f = [&](double s) { return mode_kernel(alpha, lambda, s); };
    if (m == 1) return integrate_singular(f, 0.0, h, 1e-14);
    return integrate(f, (m - 1) * h, m * h, 1e-12);
}

/// Uniform [lo, hi) doubles from a seeded engine.
class Rng {
public:
    explicit Rng(unsigned seed) : eng_(seed) {}
    double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(eng_); }
    int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(eng_); }
    Eigen::VectorXd normal(Eigen::Index n) {
        std::normal_distribution<double> d;
        Eigen::VectorXd v(n);
        for (Eigen::Index k = 0; k < n; ++k) v[k] = d(eng_);
        return v;
    }

private:
    std::mt19937_64 eng_;
};

}  // namespace oracle
