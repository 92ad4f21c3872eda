#include "fracctl/problem.hpp"

#include "fracctl/errors.hpp"

namespace fracctl {

Actuator build_actuator(const ActuatorSpec& spec, int n_modes) {
    if (spec.kind == Actuator::Kind::Zone) return make_zone(spec.a, spec.b, n_modes, spec.profile);
    return make_pointwise(spec.b, n_modes);
}

namespace {

SpectralField initial_state(const ProblemConfig& c) {
    if (static_cast<int>(c.y0.size()) != c.n_modes) {
        throw ValidationError("y0", "length must equal n_modes");
    }
    SpectralField y0 = Eigen::Map<const Eigen::VectorXd>(c.y0.data(), c.n_modes);
    if (!y0.allFinite()) throw ValidationError("y0", "coefficients must be finite");
    return y0;
}

}  // namespace

DiscreteProblem::DiscreteProblem(const ProblemConfig& config)
    : config_(config),
      kernel_(config.alpha, TimeGrid(config.T, config.n_steps), config.n_modes),
      actuator_(build_actuator(config.actuator, config.n_modes)),
      target_(make_target(config.target, config.n_modes)),
      y0_(initial_state(config)) {
    assemble();
}

DiscreteProblem::DiscreteProblem(double alpha, const TimeGrid& grid, Actuator actuator, TargetSubspace target,
                                 SpectralField y0, Tolerances tolerances)
    : kernel_(alpha, grid, static_cast<int>(y0.size())),
      actuator_(std::move(actuator)),
      target_(std::move(target)),
      y0_(std::move(y0)) {
    const int N = static_cast<int>(y0_.size());
    if (actuator_.influence.size() != N || target_.modes() != N) {
        throw ValidationError("n_modes", "actuator, target and y0 disagree on the mode count");
    }
    config_.alpha = alpha;
    config_.T = grid.horizon();
    config_.n_modes = N;
    config_.n_steps = grid.steps();
    config_.y0.assign(y0_.data(), y0_.data() + N);
    config_.actuator.kind = actuator_.kind;
    config_.actuator.a = actuator_.a;
    config_.actuator.b = actuator_.b;
    config_.actuator.profile = actuator_.profile_coeffs;
    config_.target.kind = TargetSpec::Kind::Basis;
    for (Eigen::Index j = 0; j < target_.basis().cols(); ++j) {
        const auto col = target_.basis().col(j);
        config_.target.vectors.emplace_back(col.data(), col.data() + N);
    }
    config_.tolerances = tolerances;
    assemble();
}

void DiscreteProblem::assemble() {
    const int n = config_.n_steps;
    const int N = config_.n_modes;
    const double h = grid().step();
    weights_ = Eigen::VectorXd::Constant(n + 1, h);
    weights_[0] = weights_[n] = 0.5 * h;

    H_ = Eigen::MatrixXd::Zero(N, n + 1);
    for (int i = 0; i < N; ++i) {
        const double b = actuator_.influence[i];
        if (b == 0.0) continue;
        const Eigen::VectorXd l = terminal_row(i);
        for (int j = 0; j < n; ++j) {
            H_(i, j) += 0.5 * b * l[j];
            H_(i, j + 1) += 0.5 * b * l[j];
        }
    }
}

Eigen::VectorXd DiscreteProblem::terminal_row(int mode) const {
    const int n = config_.n_steps;
    Eigen::VectorXd l(n);
    for (int j = 0; j < n; ++j) l[j] = kernel_.G(mode, n - j);
    return l;
}

SpectralField DiscreteProblem::free_final_state() const {
    const int n = config_.n_steps;
    SpectralField y(config_.n_modes);
    for (int i = 0; i < config_.n_modes; ++i) y[i] = kernel_.R(i, n) * y0_[i];
    return y;
}

Trajectory DiscreteProblem::simulate(const ControlSignal& u) const {
    return mild_solution(kernel_, y0_, actuator_.influence, u);
}

}  // namespace fracctl
