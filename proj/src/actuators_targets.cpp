#include "fracctl/actuators_targets.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "fracctl/errors.hpp"
#include "fracctl/special_functions.hpp"
#include "fracctl/spectral_model.hpp"

namespace fracctl {

namespace {

void require_zone(double a, double b) {
    if (!std::isfinite(a) || !std::isfinite(b) || a < 0.0 || b > 1.0 || !(a < b)) {
        throw ValidationError("actuator", "zone must satisfy 0 <= a < b <= 1, got [" + std::to_string(a) + ", " +
                                              std::to_string(b) + "]");
    }
}

void require_modes(int n_modes) {
    if (n_modes < 1) throw ValidationError("n_modes", "need at least one mode");
}

// Symmetry zeros come out as rounding noise; make them exact.
void snap_zeros(Eigen::VectorXd& v) {
    const double cut = 64.0 * std::numeric_limits<double>::epsilon() * v.cwiseAbs().maxCoeff();
    for (double& x : v) {
        if (std::abs(x) <= cut) x = 0.0;
    }
}

}  // namespace

Actuator make_zone(double a, double b, int n_modes, std::optional<std::vector<double>> profile_coeffs) {
    require_zone(a, b);
    require_modes(n_modes);
    Actuator act;
    act.kind = Actuator::Kind::Zone;
    act.a = a;
    act.b = b;
    act.influence.resize(n_modes);
    if (profile_coeffs) {
        if (static_cast<int>(profile_coeffs->size()) != n_modes) {
            throw ValidationError("actuator.profile", "expected " + std::to_string(n_modes) + " coefficients");
        }
        for (int i = 0; i < n_modes; ++i) {
            const double c = (*profile_coeffs)[i];
            if (!std::isfinite(c)) throw ValidationError("actuator.profile", "coefficients must be finite");
            act.influence[i] = c;
        }
        act.profile_coeffs = std::move(profile_coeffs);
    } else {
        for (int i = 1; i <= n_modes; ++i) {
            // cos(pi x) = sin(pi (x + 1/2))
            act.influence[i - 1] = std::numbers::sqrt2 / (i * std::numbers::pi) *
                                   (sin_pi(i * a + 0.5) - sin_pi(i * b + 0.5));
        }
    }
    snap_zeros(act.influence);
    return act;
}

Actuator make_zone(double a, double b, int n_modes, const std::function<double(double)>& profile) {
    require_zone(a, b);
    require_modes(n_modes);
    std::vector<double> coeffs(n_modes);
    for (int i = 1; i <= n_modes; ++i) {
        auto f = [&](double x) { return profile(x) * eigenfunction(i, x); };
        double err = 0.0;
        coeffs[i - 1] = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, a, b, 15, 1e-13, &err);
        if (!std::isfinite(coeffs[i - 1])) throw ConvergenceError("zone profile quadrature failed");
    }
    return make_zone(a, b, n_modes, std::move(coeffs));
}

Actuator make_pointwise(double b, int n_modes) {
    if (!std::isfinite(b) || b <= 0.0 || b >= 1.0) {
        throw ValidationError("actuator", "pointwise location must lie in (0,1), got " + std::to_string(b));
    }
    require_modes(n_modes);
    Actuator act;
    act.kind = Actuator::Kind::Pointwise;
    act.b = b;
    act.influence.resize(n_modes);
    for (int i = 1; i <= n_modes; ++i) act.influence[i - 1] = eigenfunction(i, b);
    snap_zeros(act.influence);
    return act;
}

TargetSubspace::TargetSubspace(Eigen::MatrixXd basis, Eigen::MatrixXd polar_basis)
    : basis_(std::move(basis)), polar_(std::move(polar_basis)) {
    P_ = polar_ * polar_.transpose();
}

TargetSubspace make_target(const TargetSpec& spec, int n_modes) {
    require_modes(n_modes);
    const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(n_modes, n_modes);

    if (spec.kind == TargetSpec::Kind::Basis) {
        const int M = static_cast<int>(spec.vectors.size());
        if (M > n_modes) throw ValidationError("target.basis", "more vectors than modes");
        Eigen::MatrixXd V(n_modes, M);
        for (int j = 0; j < M; ++j) {
            if (static_cast<int>(spec.vectors[j].size()) != n_modes) {
                throw ValidationError("target.basis", "vector " + std::to_string(j) + " has the wrong length");
            }
            for (int i = 0; i < n_modes; ++i) V(i, j) = spec.vectors[j][i];
        }
        if (!V.allFinite()) throw ValidationError("target.basis", "entries must be finite");
        if (M == 0) return {Eigen::MatrixXd(n_modes, 0), I};
        Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(V);
        qr.setThreshold(1e-10);
        if (qr.rank() < M) throw ValidationError("target.basis", "basis vectors are linearly dependent");
        const Eigen::MatrixXd Q = qr.householderQ() * I;
        return {Q.leftCols(M), Q.rightCols(n_modes - M)};
    }

    std::vector<bool> picked(n_modes, false);
    for (int idx : spec.indices) {
        if (idx < 1 || idx > n_modes) {
            throw ValidationError("target.indices", "mode index " + std::to_string(idx) + " outside 1.." +
                                                        std::to_string(n_modes));
        }
        if (picked[idx - 1]) throw ValidationError("target.indices", "duplicate mode index " + std::to_string(idx));
        picked[idx - 1] = true;
    }
    const bool picked_is_G = spec.kind == TargetSpec::Kind::Modes;
    std::vector<int> in_G, in_polar;
    for (int i = 0; i < n_modes; ++i) (picked[i] == picked_is_G ? in_G : in_polar).push_back(i);
    Eigen::MatrixXd G(n_modes, in_G.size()), Q(n_modes, in_polar.size());
    for (std::size_t j = 0; j < in_G.size(); ++j) G.col(j) = I.col(in_G[j]);
    for (std::size_t j = 0; j < in_polar.size(); ++j) Q.col(j) = I.col(in_polar[j]);
    return {G, Q};
}

StrategicReport is_strategic(const Actuator& actuator, const TargetSubspace& target, double tol) {
    const Eigen::VectorXd& b = actuator.influence;
    if (b.size() != target.modes()) throw ValidationError("actuator", "mode count differs from the target");
    const double scale = b.cwiseAbs().maxCoeff();
    StrategicReport report;
    const Eigen::MatrixXd& Q = target.polar_basis();
    for (int i = 0; i < b.size(); ++i) {
        const bool relevant = Q.cols() > 0 && Q.row(i).cwiseAbs().maxCoeff() > 1e-12;
        if (relevant && !(std::abs(b[i]) > tol * scale)) report.dead_modes.push_back(i + 1);
    }
    report.strategic = report.dead_modes.empty();
    return report;
}

bool eec_criterion(const ReachabilityData& data, double tol) {
    const double cn = data.c.norm();
    if (cn == 0.0) return true;
    if (data.S.rows() != data.c.size()) throw ValidationError("reachability", "dimension mismatch");
    if (data.S.cols() == 0) return false;
    Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(data.S);
    const Eigen::VectorXd x = cod.solve(-data.c);
    return (data.S * x + data.c).norm() <= tol * cn;
}

}  // namespace fracctl
