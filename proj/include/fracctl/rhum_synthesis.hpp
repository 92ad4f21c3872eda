#pragma once

// Reverse HUM on the polar space G°: seed an adjoint state from G°, form the
// Gramian of its observation, solve Lambda phi = -Q^T R(T) y0 and read the
// control off the adjoint observation.

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "fracctl/actuators_targets.hpp"
#include "fracctl/problem.hpp"

namespace fracctl {

/// phi(t)_i = t^{a-1} E_{a,a}(lambda_i t^a) phi0_i. The customary leading minus
/// sign is dropped; the control sign is settled by verify_transfer instead.
struct AdjointState {
    SpectralField phi0;
    double alpha = 0.5;
    double T = 1.0;

    SpectralField at(double t) const;
};

/// B* phi(t) = sum_i b_i phi(t)_i (zone and pointwise alike, through the
/// influence coefficients). Blows up like t^{a-1} as t -> 0.
double observation(const Actuator& actuator, const AdjointState& adjoint, double t);

struct Gramian {
    Eigen::MatrixXd matrix;  // over the polar basis
    double min_eigenvalue = 0.0;
    double max_eigenvalue = 0.0;
    /// max/min eigenvalue; infinity when singular.
    double condition() const;
};

/// Lambda = S W^{-1} S^T with S = Q^T H: the Gramian of the discrete
/// observation map, exact for the simulator's own quadrature and finite for
/// every alpha in (0,1].
Gramian assemble_gramian(const DiscreteProblem& problem);

/// Convenience form building the discretization from its ingredients;
/// quad_n is the number of time steps (>= 32).
Gramian assemble_gramian(const Actuator& actuator, const TargetSubspace& target, double alpha, double T, int quad_n);

ReachabilityData reachability(const DiscreteProblem& problem);

/// R(T) y0.
SpectralField final_free_state(const ProblemConfig& config);

struct TransferCheck {
    double distance_to_G = 0.0;  // ||P y(T)||
    SpectralField y_T;
};

TransferCheck verify_transfer(const DiscreteProblem& problem, const ControlSignal& u);
TransferCheck verify_transfer(const ProblemConfig& config, const ControlSignal& u);

struct RhumResult {
    SpectralField phi0;        // in G°, full coordinates
    Eigen::VectorXd phi;       // polar-basis coordinates
    ControlSignal u_star;
    double residual = 0.0;     // ||Lambda phi + c|| / ||c||
    double condition = 0.0;    // of Lambda
    bool sign_flipped = false;
    std::vector<std::string> warnings;
};

/// Throws NonStrategicError when a polar mode is dead and SingularGramianError
/// when Lambda is numerically singular.
RhumResult solve_rhum(const DiscreteProblem& problem);
RhumResult solve_rhum(const ProblemConfig& config);

}  // namespace fracctl
