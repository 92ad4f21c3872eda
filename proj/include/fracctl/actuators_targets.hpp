#pragma once

// Actuators (zone or pointwise) through their modal influence coefficients,
// and target subspaces G of R^N with the polar space G° = G⊥.

#include <functional>
#include <optional>
#include <vector>

#include <Eigen/Dense>

namespace fracctl {

struct Actuator {
    enum class Kind { Zone, Pointwise };

    Kind kind = Kind::Pointwise;
    double a = 0.0;  // zone start
    double b = 0.0;  // zone end, or the pointwise location
    std::optional<std::vector<double>> profile_coeffs;  // <f, w_i> over [a,b] when given

    /// b_i = <B*, w_i>; entries at or below 64 eps max|b| are stored as exact zeros.
    Eigen::VectorXd influence;
};

/// Zone actuator on [a,b]. Without a profile f = 1 and
///   b_i = sqrt(2)/(i pi) (cos(i pi a) - cos(i pi b)).
/// With profile_coeffs, b_i = profile_coeffs[i-1] (must have N entries).
Actuator make_zone(double a, double b, int n_modes, std::optional<std::vector<double>> profile_coeffs = std::nullopt);

/// Zone actuator with a profile function; b_i = int_a^b f(x) w_i(x) dx by
/// adaptive quadrature.
Actuator make_zone(double a, double b, int n_modes, const std::function<double(double)>& profile);

/// Dirac actuator at b in (0,1): b_i = sqrt(2) sin(i pi b).
Actuator make_pointwise(double b, int n_modes);

/// How a target subspace is described.
struct TargetSpec {
    enum class Kind { Modes, PolarModes, Basis };

    Kind kind = Kind::Modes;
    std::vector<int> indices;                 // 1-based mode indices (Modes, PolarModes)
    std::vector<std::vector<double>> vectors;  // columns spanning G (Basis)

    bool operator==(const TargetSpec&) const = default;
};

class TargetSubspace {
public:
    TargetSubspace(Eigen::MatrixXd basis, Eigen::MatrixXd polar_basis);

    int modes() const noexcept { return static_cast<int>(P_.rows()); }
    /// Orthonormal columns spanning G.
    const Eigen::MatrixXd& basis() const noexcept { return basis_; }
    /// Orthonormal columns spanning G°.
    const Eigen::MatrixXd& polar_basis() const noexcept { return polar_; }
    /// Orthogonal projector onto G⊥; ||P y|| is the distance from y to G.
    const Eigen::MatrixXd& projector() const noexcept { return P_; }

private:
    Eigen::MatrixXd basis_;
    Eigen::MatrixXd polar_;
    Eigen::MatrixXd P_;
};

/// Throws ValidationError on out-of-range indices or a rank-deficient basis.
TargetSubspace make_target(const TargetSpec& spec, int n_modes);

struct StrategicReport {
    bool strategic = true;
    std::vector<int> dead_modes;  // 1-based
};

/// A mode is dead when |b_i| <= tol max|b| while some polar-basis vector has
/// a component on it.
StrategicReport is_strategic(const Actuator& actuator, const TargetSubspace& target, double tol = 1e-10);

/// The projected terminal equation in polar coordinates. S maps the control
/// unknowns to Q^T y(T); c = Q^T R(T) y0 is the free final state.
struct ReachabilityData {
    Eigen::MatrixXd S;
    Eigen::VectorXd c;
};

/// True iff some control makes S x + c = 0, judged by the least-squares
/// residual relative to ||c||.
bool eec_criterion(const ReachabilityData& data, double tol = 1e-8);

}  // namespace fracctl
