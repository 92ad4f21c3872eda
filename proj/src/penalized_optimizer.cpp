#include "fracctl/penalized_optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "fracctl/errors.hpp"
#include "fracctl/rhum_synthesis.hpp"

namespace fracctl {

namespace {

double weighted_norm(const Eigen::VectorXd& v, const Eigen::VectorXd& w) {
    return std::sqrt(v.cwiseProduct(v).dot(w));
}

std::string mode_list(const std::vector<int>& modes) {
    std::string s;
    for (int m : modes) s += (s.empty() ? "" : ",") + std::to_string(m);
    return s;
}

}  // namespace

double energy(const ControlSignal& u) {
    const double h = u.grid.step();
    const Eigen::VectorXd& v = u.values;
    const Eigen::Index n = v.size() - 1;
    double s = 0.5 * (v[0] * v[0] + v[n] * v[n]);
    for (Eigen::Index k = 1; k < n; ++k) s += v[k] * v[k];
    return 0.5 * h * s;
}

PenalizedSolution solve_penalized(const PenalizedProblem& pp) {
    if (pp.problem == nullptr) throw ValidationError("problem", "missing discretized problem");
    if (!std::isfinite(pp.epsilon) || pp.epsilon <= 0.0) throw ValidationError("epsilon", "must be positive");
    const DiscreteProblem& P = *pp.problem;
    const int N = P.config().n_modes;
    const int n = P.grid().steps();
    const double h = P.grid().step();
    const double eps = pp.epsilon;
    const Eigen::MatrixXd& Q = P.target().polar_basis();
    const Eigen::VectorXd& b = P.actuator().influence;
    const Eigen::VectorXd winv = P.weights().cwiseInverse();

    const ReachabilityData rd = reachability(P);
    if (!eec_criterion(rd)) {
        const StrategicReport rep = is_strategic(P.actuator(), P.target(), P.config().tolerances.gramian_rank);
        throw InfeasibleError("terminal constraint unreachable by the discrete dynamics; dead modes " +
                                  mode_list(rep.dead_modes),
                              rep.dead_modes);
    }

    std::vector<Eigen::VectorXd> l(N);
    Eigen::VectorXd lnorm2(N);
    for (int i = 0; i < N; ++i) {
        l[i] = P.terminal_row(i);
        lnorm2[i] = l[i].squaredNorm();
    }
    const Eigen::MatrixXd lambda = rd.S * winv.asDiagonal() * rd.S.transpose();
    const Eigen::MatrixXd SD = Q.transpose() * lnorm2.asDiagonal() * Q;
    Eigen::MatrixXd M = lambda + (eps / h) * SD;
    M = 0.5 * (M + M.transpose()).eval();

    Eigen::VectorXd eta = Eigen::VectorXd::Zero(Q.cols());
    if (Q.cols() > 0) {
        Eigen::LLT<Eigen::MatrixXd> llt(M);
        if (llt.info() == Eigen::Success) {
            eta = llt.solve(rd.c);
        } else {
            eta = M.completeOrthogonalDecomposition().solve(rd.c);
        }
    }
    const Eigen::VectorXd u = -(winv.asDiagonal() * (rd.S.transpose() * eta));
    const Eigen::VectorXd coef = Q * eta;  // per-mode multiplier weights

    PenalizedSolution sol{ControlSignal(P.grid(), u), Trajectory{P.grid(), Eigen::MatrixXd(n + 1, N)}};
    Eigen::VectorXd ubar(n);
    for (int j = 0; j < n; ++j) ubar[j] = 0.5 * (u[j] + u[j + 1]);

    double pen = 0.0;
    double kkt_shape = 0.0;
    double p_norm2 = 0.0;
    Eigen::VectorXd grad_u = P.weights().cwiseProduct(u);  // W u + h sum_i b_i A^T p_i
    for (int i = 0; i < N; ++i) {
        const Eigen::VectorXd delta = -(eps / h) * coef[i] * l[i];
        pen += delta.squaredNorm();
        const Eigen::VectorXd w = b[i] * ubar + delta;
        for (int k = 0; k <= n; ++k) {
            double conv = 0.0;
            for (int j = 0; j < k; ++j) conv += P.kernel().G(i, k - j) * w[j];
            sol.z_eps.coeffs(k, i) = P.kernel().R(i, k) * P.y0()[i] + conv;
        }
        // Multiplier p_i = -r_i / eps, and its projection on l_i.
        const Eigen::VectorXd p = -delta / eps;
        const double fit = lnorm2[i] > 0.0 ? p.dot(l[i]) / lnorm2[i] : 0.0;
        kkt_shape += (p - fit * l[i]).squaredNorm();
        p_norm2 += p.squaredNorm();
        for (int j = 0; j < n; ++j) {
            grad_u[j] += 0.5 * h * b[i] * p[j];
            grad_u[j + 1] += 0.5 * h * b[i] * p[j];
        }
    }
    sol.J_eps = energy(sol.u_eps) + 0.5 * h / eps * pen;
    sol.residual_norm = std::sqrt(h * pen);
    sol.terminal_violation = (P.target().projector() * sol.z_eps.final_state()).norm();

    auto rel = [](double num, double den) { return den > 0.0 ? num / den : num; };
    const Eigen::VectorXd off_polar = coef - P.target().projector() * coef;
    sol.kkt_residual = std::max({rel(std::sqrt(kkt_shape), std::sqrt(p_norm2)), rel(off_polar.norm(), coef.norm()),
                                 rel(grad_u.norm(), P.weights().cwiseProduct(u).norm())});
    return sol;
}

SweepResult epsilon_sweep(const DiscreteProblem& problem, const std::vector<double>& eps_list) {
    if (eps_list.empty()) throw ValidationError("eps", "epsilon list must not be empty");
    for (std::size_t k = 0; k < eps_list.size(); ++k) {
        if (!std::isfinite(eps_list[k]) || eps_list[k] <= 0.0) throw ValidationError("eps", "values must be positive");
        if (k > 0 && !(eps_list[k] < eps_list[k - 1])) {
            throw ValidationError("eps", "values must be strictly decreasing");
        }
    }
    const StrategicReport rep =
        is_strategic(problem.actuator(), problem.target(), problem.config().tolerances.gramian_rank);
    if (!rep.strategic) {
        throw InfeasibleError("actuator is not strategic; dead modes " + mode_list(rep.dead_modes), rep.dead_modes);
    }
    const RhumResult rhum = solve_rhum(problem);
    SweepResult out;
    out.J_rhum = energy(rhum.u_star);
    const Eigen::VectorXd& w = problem.weights();
    const double un = weighted_norm(rhum.u_star.values, w);
    for (double eps : eps_list) {
        const PenalizedSolution sol = solve_penalized({&problem, eps});
        SweepRow row;
        row.epsilon = eps;
        row.J_eps = sol.J_eps;
        const double diff = weighted_norm(sol.u_eps.values - rhum.u_star.values, w);
        row.rel_control_err = un > 0.0 ? diff / un : diff;
        row.residual_norm = sol.residual_norm;
        row.fitted_C = sol.residual_norm / std::sqrt(eps);
        if (!out.rows.empty() && row.J_eps < out.rows.back().J_eps - 1e-10 * std::max(1.0, std::abs(row.J_eps))) {
            out.monotone = false;
        }
        out.rows.push_back(row);
    }
    return out;
}

SweepResult epsilon_sweep(const ProblemConfig& config, const std::vector<double>& eps_list) {
    return epsilon_sweep(DiscreteProblem(config), eps_list);
}

}  // namespace fracctl
