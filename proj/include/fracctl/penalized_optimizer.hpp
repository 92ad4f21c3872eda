#pragma once

// Minimum-energy control through the penalized problem
//   min (1/2) int u^2 + (1/(2 eps)) int |D^a z - A z - B u|^2   s.t.  P z(T) = 0,
// discretized with the same kernel weights as the simulator.
//
// Unknowns are u (node samples) and, per mode, the discrete right-hand side
// w_i = L_i^{-1}(z_i - R_i y0_i) where L_i is the lower-triangular Toeplitz
// matrix of kernel weights G_i. The dynamics residual is r_i = w_i - b_i A u,
// which vanishes exactly on the mild solution. Eliminating u and r leaves a
// dense system on the polar space:
//   (Lambda + (eps/h) S_D) eta = c,   S_D = Q^T diag(||l_i||^2) Q,
//   u = -W^{-1} S^T eta,   r_i = -(eps/h) l_i (Q eta)_i.

#include <vector>

#include <Eigen/Dense>

#include "fracctl/problem.hpp"

namespace fracctl {

/// (1/2) int_0^T u^2 dt by the trapezoid rule.
double energy(const ControlSignal& u);

struct PenalizedProblem {
    const DiscreteProblem* problem = nullptr;
    double epsilon = 1.0;
};

struct PenalizedSolution {
    ControlSignal u_eps;
    Trajectory z_eps;
    double J_eps = 0.0;
    double residual_norm = 0.0;   // sqrt(h sum_i ||r_i||^2)
    double terminal_violation = 0.0;  // ||P z(T)||
    /// Optimality check: the multiplier p = -r/eps must be, per mode, a
    /// multiple of the terminal kernel row l_i, with coefficients in G°.
    double kkt_residual = 0.0;
};

/// Throws InfeasibleError when the terminal constraint is outside the reach of
/// the exact discrete dynamics.
PenalizedSolution solve_penalized(const PenalizedProblem& pp);

struct SweepRow {
    double epsilon = 0.0;
    double J_eps = 0.0;
    double rel_control_err = 0.0;  // ||u_eps - u_rhum|| / ||u_rhum|| in the energy norm
    double residual_norm = 0.0;
    double fitted_C = 0.0;         // residual_norm / sqrt(eps)
};

struct SweepResult {
    std::vector<SweepRow> rows;
    double J_rhum = 0.0;
    bool monotone = true;  // J_eps non-decreasing as eps decreases (1e-10 slack)
};

/// eps_list must be non-empty, positive and strictly decreasing. A
/// non-strategic configuration raises InfeasibleError.
SweepResult epsilon_sweep(const DiscreteProblem& problem, const std::vector<double>& eps_list);
SweepResult epsilon_sweep(const ProblemConfig& config, const std::vector<double>& eps_list);

}  // namespace fracctl
