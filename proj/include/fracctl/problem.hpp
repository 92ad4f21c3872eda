#pragma once

// Problem description shared by the RHUM synthesis, the penalized optimizer
// and the CLI, plus its discretization on a uniform time grid.

#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "fracctl/actuators_targets.hpp"
#include "fracctl/spectral_model.hpp"

namespace fracctl {

struct ActuatorSpec {
    Actuator::Kind kind = Actuator::Kind::Pointwise;
    double a = 0.0;
    double b = 0.5;
    std::optional<std::vector<double>> profile;  // zone only: <f, w_i> coefficients

    bool operator==(const ActuatorSpec&) const = default;
};

struct Tolerances {
    double gramian_rank = 1e-10;     // relative cut for dead modes and Gramian rank
    double verify_distance = 1e-4;   // ||P y(T)|| / ||y0|| accepted by verify
    double quadrature = 1e-10;       // relative residual accepted for the Gramian solve

    bool operator==(const Tolerances&) const = default;
};

struct ProblemConfig {
    double alpha = 0.5;
    double T = 1.0;
    int n_modes = 20;
    int n_steps = 256;
    std::vector<double> y0;
    ActuatorSpec actuator;
    TargetSpec target;
    Tolerances tolerances;

    bool operator==(const ProblemConfig&) const = default;
};

Actuator build_actuator(const ActuatorSpec& spec, int n_modes);

/// Everything the solvers need about one configuration, computed once.
///
/// Controls are node samples u_0..u_n. The final state is affine in u:
///   y(T) = R(T) y0 + H u,   H(i,:) = b_i l_i^T A,   l_i(j) = G_i(n - j),
/// with A the cell-average matrix. The energy is (1/2) u^T W u with
/// trapezoid weights W.
class DiscreteProblem {
public:
    explicit DiscreteProblem(const ProblemConfig& config);
    /// From already-built parts; config() then describes G by its basis.
    DiscreteProblem(double alpha, const TimeGrid& grid, Actuator actuator, TargetSubspace target, SpectralField y0,
                    Tolerances tolerances = {});

    const ProblemConfig& config() const noexcept { return config_; }
    const TimeGrid& grid() const noexcept { return kernel_.grid(); }
    const ModalKernel& kernel() const noexcept { return kernel_; }
    const Actuator& actuator() const noexcept { return actuator_; }
    const TargetSubspace& target() const noexcept { return target_; }
    const SpectralField& y0() const noexcept { return y0_; }

    /// Trapezoid weights (diagonal of W).
    const Eigen::VectorXd& weights() const noexcept { return weights_; }
    /// N x (n+1) control-to-final-state map.
    const Eigen::MatrixXd& H() const noexcept { return H_; }
    /// l_i for mode i (0-based): kernel weights of each cell seen from T.
    Eigen::VectorXd terminal_row(int mode) const;

    /// R(T) y0.
    SpectralField free_final_state() const;
    Trajectory simulate(const ControlSignal& u) const;

private:
    void assemble();

    ProblemConfig config_;
    ModalKernel kernel_;
    Actuator actuator_;
    TargetSubspace target_;
    SpectralField y0_;
    Eigen::VectorXd weights_;
    Eigen::MatrixXd H_;
};

}  // namespace fracctl
