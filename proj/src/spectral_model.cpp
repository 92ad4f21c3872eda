#include "fracctl/spectral_model.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "fracctl/errors.hpp"
#include "fracctl/special_functions.hpp"

namespace fracctl {

namespace {

void require_alpha(double alpha) {
    if (!std::isfinite(alpha) || alpha <= 0.0 || alpha > 1.0) {
        throw DomainError("alpha must lie in (0,1], got " + std::to_string(alpha));
    }
}

}  // namespace

double eigenvalue(int i) {
    const double w = i * std::numbers::pi;
    return -w * w;
}

double eigenfunction(int i, double x) { return std::numbers::sqrt2 * sin_pi(i * x); }

TimeGrid::TimeGrid(double T, int n_steps) : T_(T), n_(n_steps) {
    if (!std::isfinite(T) || T <= 0.0) throw ValidationError("T", "horizon must be positive");
    if (n_steps < 2) throw ValidationError("n_steps", "need at least 2 time steps");
}

ControlSignal::ControlSignal(TimeGrid g, Eigen::VectorXd v) : grid(g), values(std::move(v)) {
    if (values.size() != grid.size()) {
        throw ValidationError("control", "expected " + std::to_string(grid.size()) + " samples, got " +
                                             std::to_string(values.size()));
    }
    if (!values.allFinite()) throw ValidationError("control", "samples must be finite");
}

ControlSignal ControlSignal::zero(const TimeGrid& grid) { return {grid, Eigen::VectorXd::Zero(grid.size())}; }

SpectralField apply_R(double alpha, double t, const SpectralField& state) {
    require_alpha(alpha);
    if (!(t >= 0.0)) throw DomainError("apply_R needs t >= 0");
    SpectralField out(state.size());
    const double ta = std::pow(t, alpha);
    for (Eigen::Index i = 0; i < state.size(); ++i) {
        out[i] = mittag_leffler(alpha, 1.0, eigenvalue(static_cast<int>(i) + 1) * ta) * state[i];
    }
    return out;
}

SpectralField apply_K(double alpha, double t, const SpectralField& state) {
    require_alpha(alpha);
    if (!(t > 0.0)) throw DomainError("apply_K needs t > 0");
    SpectralField out(state.size());
    const double ta = std::pow(t, alpha);
    for (Eigen::Index i = 0; i < state.size(); ++i) {
        out[i] = mittag_leffler(alpha, alpha, eigenvalue(static_cast<int>(i) + 1) * ta) * state[i];
    }
    return out;
}

ModalKernel::ModalKernel(double alpha, const TimeGrid& grid, int n_modes)
    : alpha_(alpha), grid_(grid), R_(grid.size(), n_modes), G_(grid.size(), n_modes) {
    require_alpha(alpha);
    if (n_modes < 1) throw ValidationError("n_modes", "need at least one mode");
    const int n = grid.steps();
    Eigen::VectorXd ta(n + 1);
    for (int k = 0; k <= n; ++k) ta[k] = std::pow(grid.node(k), alpha);
    for (int i = 0; i < n_modes; ++i) {
        const double lam = eigenvalue(i + 1);
        double prev = 0.0;  // antiderivative at s = 0
        R_(0, i) = 1.0;
        G_(0, i) = 0.0;
        for (int k = 1; k <= n; ++k) {
            const double z = lam * ta[k];
            R_(k, i) = mittag_leffler(alpha, 1.0, z);
            const double anti = ta[k] * mittag_leffler(alpha, alpha + 1.0, z);
            G_(k, i) = anti - prev;
            prev = anti;
            if (!std::isfinite(R_(k, i)) || !std::isfinite(G_(k, i))) {
                throw ConvergenceError("mode " + std::to_string(i + 1) + ": non-finite kernel weight at step " +
                                       std::to_string(k));
            }
        }
    }
}

Eigen::MatrixXd cell_average_matrix(int n_steps) {
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n_steps, n_steps + 1);
    for (int j = 0; j < n_steps; ++j) {
        A(j, j) = 0.5;
        A(j, j + 1) = 0.5;
    }
    return A;
}

Trajectory mild_solution(const ModalKernel& kernel, const SpectralField& y0, const Eigen::VectorXd& influence,
                         const ControlSignal& u) {
    const int N = kernel.modes();
    const int n = kernel.grid().steps();
    if (y0.size() != N) throw ValidationError("y0", "length must equal the number of modes");
    if (influence.size() != N) throw ValidationError("actuator", "influence length must equal the number of modes");
    if (!(u.grid == kernel.grid())) throw ValidationError("control", "control grid differs from the model grid");

    Eigen::VectorXd ubar(n);
    for (int j = 0; j < n; ++j) ubar[j] = 0.5 * (u.values[j] + u.values[j + 1]);

    Trajectory traj{kernel.grid(), Eigen::MatrixXd(n + 1, N)};
    for (int i = 0; i < N; ++i) {
        for (int k = 0; k <= n; ++k) {
            double conv = 0.0;
            if (influence[i] != 0.0) {
                for (int j = 0; j < k; ++j) conv += kernel.G(i, k - j) * ubar[j];
            }
            const double v = kernel.R(i, k) * y0[i] + influence[i] * conv;
            if (!std::isfinite(v)) throw ConvergenceError("mode " + std::to_string(i + 1) + ": non-finite state");
            traj.coeffs(k, i) = v;
        }
    }
    return traj;
}

}  // namespace fracctl
