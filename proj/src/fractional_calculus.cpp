#include "fracctl/fractional_calculus.hpp"

#include <cmath>
#include <string>

#include "fracctl/errors.hpp"
#include "fracctl/special_functions.hpp"

namespace fracctl {

namespace {

void require_order(double alpha, bool unit_interval) {
    if (!std::isfinite(alpha) || alpha <= 0.0 || (unit_interval && alpha >= 1.0)) {
        throw DomainError("fractional order out of range: " + std::to_string(alpha));
    }
}

// Product-trapezoid weight for a node at distance d from the evaluation point
// when the integration span covers K >= 1 cells.
double trapezoid_weight(std::size_t d, std::size_t K, double alpha) {
    const double a1 = alpha + 1.0;
    const double dd = static_cast<double>(d);
    if (d == 0) return 1.0;
    if (d == K) {
        const double k = static_cast<double>(K);
        return std::pow(k - 1.0, a1) - (k - a1) * std::pow(k, alpha);
    }
    return std::pow(dd + 1.0, a1) - 2.0 * std::pow(dd, a1) + std::pow(dd - 1.0, a1);
}

// Derivative of samples on a uniform grid.
std::vector<double> gradient(const std::vector<double>& v, double h) {
    const std::size_t n = v.size();
    std::vector<double> d(n);
    d[0] = (-3.0 * v[0] + 4.0 * v[1] - v[2]) / (2.0 * h);
    d[n - 1] = (3.0 * v[n - 1] - 4.0 * v[n - 2] + v[n - 3]) / (2.0 * h);
    for (std::size_t k = 1; k + 1 < n; ++k) d[k] = (v[k + 1] - v[k - 1]) / (2.0 * h);
    return d;
}

}  // namespace

SampledSignal::SampledSignal(std::vector<double> values, double t0, double t1)
    : values_(std::move(values)), t0_(t0), t1_(t1) {
    if (values_.size() < 3) throw ValidationError("values", "a sampled signal needs at least 3 samples");
    if (!std::isfinite(t0) || !std::isfinite(t1) || !(t1 > t0)) {
        throw ValidationError("t1", "interval end must exceed its start");
    }
    for (double v : values_) {
        if (!std::isfinite(v)) throw ValidationError("values", "samples must be finite");
    }
}

SampledSignal caputo_left(const SampledSignal& sig, double alpha) {
    require_order(alpha, true);
    const std::size_t n = sig.size();
    const double beta = 1.0 - alpha;
    std::vector<double> b(n);
    for (std::size_t m = 0; m < n; ++m) {
        b[m] = std::pow(static_cast<double>(m + 1), beta) - std::pow(static_cast<double>(m), beta);
    }
    const double scale = std::pow(sig.step(), -alpha) * rgamma(2.0 - alpha);
    const auto& z = sig.values();
    std::vector<double> out(n, 0.0);
    for (std::size_t k = 1; k < n; ++k) {
        double acc = 0.0;
        for (std::size_t j = 0; j < k; ++j) acc += b[k - 1 - j] * (z[j + 1] - z[j]);
        out[k] = scale * acc;
    }
    return {std::move(out), sig.t0(), sig.t1()};
}

SampledSignal rl_integral_left(const SampledSignal& sig, double alpha) {
    require_order(alpha, false);
    const std::size_t n = sig.size();
    const double scale = std::pow(sig.step(), alpha) * rgamma(alpha + 2.0);
    const auto& z = sig.values();
    std::vector<double> out(n, 0.0);
    for (std::size_t k = 1; k < n; ++k) {
        double acc = 0.0;
        for (std::size_t j = 0; j <= k; ++j) acc += trapezoid_weight(k - j, k, alpha) * z[j];
        out[k] = scale * acc;
    }
    return {std::move(out), sig.t0(), sig.t1()};
}

SampledSignal rl_integral_right(const SampledSignal& sig, double alpha) {
    require_order(alpha, false);
    const std::size_t n = sig.size();
    const double scale = std::pow(sig.step(), alpha) * rgamma(alpha + 2.0);
    const auto& z = sig.values();
    std::vector<double> out(n, 0.0);
    for (std::size_t k = 0; k + 1 < n; ++k) {
        const std::size_t span = n - 1 - k;
        double acc = 0.0;
        for (std::size_t j = k; j < n; ++j) acc += trapezoid_weight(j - k, span, alpha) * z[j];
        out[k] = scale * acc;
    }
    return {std::move(out), sig.t0(), sig.t1()};
}

SampledSignal rl_deriv_left(const SampledSignal& sig, double alpha) {
    require_order(alpha, true);
    const SampledSignal integral = rl_integral_left(sig, 1.0 - alpha);
    return {gradient(integral.values(), sig.step()), sig.t0(), sig.t1()};
}

SampledSignal rl_deriv_right(const SampledSignal& sig, double alpha) {
    require_order(alpha, true);
    const SampledSignal integral = rl_integral_right(sig, 1.0 - alpha);
    std::vector<double> d = gradient(integral.values(), sig.step());
    for (double& v : d) v = -v;
    return {std::move(d), sig.t0(), sig.t1()};
}

SampledSignal reflect(const SampledSignal& sig) {
    return {std::vector<double>(sig.values().rbegin(), sig.values().rend()), sig.t0(), sig.t1()};
}

}  // namespace fracctl
