#pragma once

// Discrete Caputo and Riemann-Liouville operators on uniformly sampled
// signals. Left-sided operators integrate from t0, right-sided ones toward t1.

#include <cstddef>
#include <vector>

namespace fracctl {

/// Samples of a function on the uniform grid t0 = s_0 < ... < s_{n-1} = t1.
class SampledSignal {
public:
    /// Throws ValidationError unless n >= 3, t1 > t0 and every value is finite.
    SampledSignal(std::vector<double> values, double t0, double t1);

    const std::vector<double>& values() const noexcept { return values_; }
    double t0() const noexcept { return t0_; }
    double t1() const noexcept { return t1_; }
    std::size_t size() const noexcept { return values_.size(); }
    double step() const noexcept { return (t1_ - t0_) / static_cast<double>(values_.size() - 1); }
    double node(std::size_t k) const noexcept { return t0_ + static_cast<double>(k) * step(); }
    double operator[](std::size_t k) const noexcept { return values_[k]; }

private:
    std::vector<double> values_;
    double t0_;
    double t1_;
};

/// L1 scheme: the kernel (t-s)^{-a}/Gamma(1-a) is integrated exactly against
/// the piecewise-linear interpolant of the samples. Requires a in (0,1).
SampledSignal caputo_left(const SampledSignal& sig, double alpha);

/// Product trapezoid rule for (1/Gamma(a)) int_{t0}^t (t-s)^{a-1} z(s) ds,
/// exact for piecewise-linear z. Requires a > 0.
SampledSignal rl_integral_left(const SampledSignal& sig, double alpha);

/// (1/Gamma(a)) int_t^{t1} (s-t)^{a-1} z(s) ds, mirror of rl_integral_left.
SampledSignal rl_integral_right(const SampledSignal& sig, double alpha);

/// d/dt of the left integral of order 1-a; a in (0,1). Differences are
/// centered inside and second-order one-sided at both ends.
SampledSignal rl_deriv_left(const SampledSignal& sig, double alpha);

/// -d/dt of the right integral of order 1-a; a in (0,1).
SampledSignal rl_deriv_right(const SampledSignal& sig, double alpha);

/// (Q z)(t) = z(t0 + t1 - t): the reversed sample array.
SampledSignal reflect(const SampledSignal& sig);

}  // namespace fracctl
