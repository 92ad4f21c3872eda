#include "fracctl/rhum_synthesis.hpp"

#include <cmath>
#include <cstdio>
#include <limits>

#include "fracctl/errors.hpp"
#include "fracctl/special_functions.hpp"

namespace fracctl {

namespace {

// Modes carrying the polar directions whose Gramian diagonal has collapsed.
std::vector<int> weak_modes(const Eigen::MatrixXd& lambda, const Eigen::MatrixXd& Q, double tol) {
    std::vector<int> modes;
    const double scale = lambda.diagonal().cwiseAbs().maxCoeff();
    for (Eigen::Index j = 0; j < lambda.rows(); ++j) {
        if (lambda(j, j) > tol * scale) continue;
        Eigen::Index i = 0;
        Q.col(j).cwiseAbs().maxCoeff(&i);
        modes.push_back(static_cast<int>(i) + 1);
    }
    return modes;
}

double relative_distance(const DiscreteProblem& problem, double distance) {
    const double y0n = problem.y0().norm();
    return y0n > 0.0 ? distance / y0n : distance;
}

}  // namespace

SpectralField AdjointState::at(double t) const {
    if (!(t > 0.0)) throw DomainError("adjoint state needs t > 0");
    SpectralField out(phi0.size());
    const double ta = std::pow(t, alpha);
    const double pre = std::pow(t, alpha - 1.0);
    for (Eigen::Index i = 0; i < phi0.size(); ++i) {
        out[i] = phi0[i] == 0.0 ? 0.0
                                : pre * mittag_leffler(alpha, alpha, eigenvalue(static_cast<int>(i) + 1) * ta) * phi0[i];
    }
    return out;
}

double observation(const Actuator& actuator, const AdjointState& adjoint, double t) {
    if (actuator.influence.size() != adjoint.phi0.size()) {
        throw ValidationError("actuator", "mode count differs from the adjoint state");
    }
    return actuator.influence.dot(adjoint.at(t));
}

double Gramian::condition() const {
    if (matrix.rows() == 0) return 1.0;
    if (!(min_eigenvalue > 0.0)) return std::numeric_limits<double>::infinity();
    return max_eigenvalue / min_eigenvalue;
}

Gramian assemble_gramian(const DiscreteProblem& problem) {
    const Eigen::MatrixXd S = problem.target().polar_basis().transpose() * problem.H();
    const Eigen::VectorXd winv = problem.weights().cwiseInverse();
    Gramian g;
    g.matrix = S * winv.asDiagonal() * S.transpose();
    g.matrix = 0.5 * (g.matrix + g.matrix.transpose()).eval();
    if (g.matrix.rows() > 0) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(g.matrix, Eigen::EigenvaluesOnly);
        g.min_eigenvalue = es.eigenvalues().minCoeff();
        g.max_eigenvalue = es.eigenvalues().maxCoeff();
    }
    return g;
}

Gramian assemble_gramian(const Actuator& actuator, const TargetSubspace& target, double alpha, double T, int quad_n) {
    if (quad_n < 32) throw ValidationError("quad_n", "Gramian quadrature needs at least 32 steps");
    const DiscreteProblem problem(alpha, TimeGrid(T, quad_n), actuator, target,
                                  SpectralField::Zero(actuator.influence.size()));
    return assemble_gramian(problem);
}

ReachabilityData reachability(const DiscreteProblem& problem) {
    const Eigen::MatrixXd& Q = problem.target().polar_basis();
    return {Q.transpose() * problem.H(), Q.transpose() * problem.free_final_state()};
}

SpectralField final_free_state(const ProblemConfig& config) {
    const SpectralField y0 = Eigen::Map<const Eigen::VectorXd>(config.y0.data(), config.y0.size());
    return apply_R(config.alpha, config.T, y0);
}

TransferCheck verify_transfer(const DiscreteProblem& problem, const ControlSignal& u) {
    const Trajectory traj = problem.simulate(u);
    TransferCheck out;
    out.y_T = traj.final_state();
    out.distance_to_G = (problem.target().projector() * out.y_T).norm();
    return out;
}

TransferCheck verify_transfer(const ProblemConfig& config, const ControlSignal& u) {
    return verify_transfer(DiscreteProblem(config), u);
}

RhumResult solve_rhum(const DiscreteProblem& problem) {
    const Tolerances& tol = problem.config().tolerances;
    const StrategicReport strat = is_strategic(problem.actuator(), problem.target(), tol.gramian_rank);
    if (!strat.strategic) {
        std::string list;
        for (int m : strat.dead_modes) list += (list.empty() ? "" : ",") + std::to_string(m);
        throw NonStrategicError("actuator is not strategic: dead modes " + list, strat.dead_modes);
    }

    const Eigen::MatrixXd& Q = problem.target().polar_basis();
    const ReachabilityData rd = reachability(problem);
    const Gramian gram = assemble_gramian(problem);
    const Eigen::Index m = Q.cols();
    const double cn = rd.c.norm();

    RhumResult res{SpectralField::Zero(problem.y0().size()), Eigen::VectorXd::Zero(m),
                   ControlSignal::zero(problem.grid()), 0.0, 0.0, false, {}};
    res.condition = gram.condition();
    if (m == 0 || cn == 0.0) return res;

    if (!(gram.min_eigenvalue > tol.gramian_rank * gram.max_eigenvalue)) {
        throw SingularGramianError("Gramian is singular on the polar space",
                                   weak_modes(gram.matrix, Q, tol.gramian_rank));
    }
    Eigen::LLT<Eigen::MatrixXd> llt(gram.matrix);
    if (llt.info() == Eigen::Success) {
        res.phi = llt.solve(-rd.c);
    } else {
        Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(gram.matrix);
        if (cod.rank() < m) {
            throw SingularGramianError("Gramian is rank deficient", weak_modes(gram.matrix, Q, tol.gramian_rank));
        }
        res.phi = cod.solve(-rd.c);
        res.warnings.emplace_back("Cholesky failed; used the rank-revealing solve");
    }
    res.residual = (gram.matrix * res.phi + rd.c).norm() / cn;
    if (res.condition > 1e12) {
        char buf[96];
        std::snprintf(buf, sizeof buf, "Gramian condition number %.3e exceeds 1e12", res.condition);
        res.warnings.emplace_back(buf);
    }
    if (res.residual > tol.quadrature) {
        char buf[96];
        std::snprintf(buf, sizeof buf, "Gramian solve residual %.3e exceeds %.3e", res.residual, tol.quadrature);
        res.warnings.emplace_back(buf);
    }
    res.phi0 = Q * res.phi;

    // u* = W^{-1} S^T phi samples the observation of the adjoint at T - t_k.
    Eigen::VectorXd u = problem.weights().cwiseInverse().asDiagonal() * (rd.S.transpose() * res.phi);
    res.u_star = ControlSignal(problem.grid(), u);
    const double d = relative_distance(problem, verify_transfer(problem, res.u_star).distance_to_G);
    if (d > tol.verify_distance) {
        const ControlSignal flipped(problem.grid(), -u);
        if (relative_distance(problem, verify_transfer(problem, flipped).distance_to_G) < d) {
            res.u_star = flipped;
            res.sign_flipped = true;
        }
    }
    return res;
}

RhumResult solve_rhum(const ProblemConfig& config) { return solve_rhum(DiscreteProblem(config)); }

}  // namespace fracctl
