#pragma once

// Truncated eigen-coordinates of the Dirichlet Laplacian on [0,1]:
//   lambda_i = -(i pi)^2,  w_i(x) = sqrt(2) sin(i pi x),  i = 1..N.
// Orders alpha in (0,1] are accepted; alpha = 1 is the classical heat flow.

#include <Eigen/Dense>

namespace fracctl {

/// Coordinates of a state against w_1..w_N.
using SpectralField = Eigen::VectorXd;

double eigenvalue(int i);
double eigenfunction(int i, double x);

/// Uniform grid t_k = k T / n_steps, k = 0..n_steps.
class TimeGrid {
public:
    TimeGrid(double T, int n_steps);
    double horizon() const noexcept { return T_; }
    int steps() const noexcept { return n_; }
    int size() const noexcept { return n_ + 1; }
    double step() const noexcept { return T_ / n_; }
    double node(int k) const noexcept { return k == n_ ? T_ : T_ * k / n_; }
    bool operator==(const TimeGrid& o) const noexcept { return T_ == o.T_ && n_ == o.n_; }

private:
    double T_;
    int n_;
};

/// Scalar control sampled at every node of a grid.
struct ControlSignal {
    ControlSignal(TimeGrid grid, Eigen::VectorXd values);
    static ControlSignal zero(const TimeGrid& grid);

    TimeGrid grid;
    Eigen::VectorXd values;
};

/// Snapshots y(t_k); row k holds the coefficients at t_k.
struct Trajectory {
    TimeGrid grid;
    Eigen::MatrixXd coeffs;

    SpectralField at(int k) const { return coeffs.row(k).transpose(); }
    SpectralField final_state() const { return at(grid.steps()); }
};

/// Coefficient i times E_{a,1}(lambda_i t^a). t >= 0.
SpectralField apply_R(double alpha, double t, const SpectralField& state);

/// Coefficient i times E_{a,a}(lambda_i t^a). t > 0.
SpectralField apply_K(double alpha, double t, const SpectralField& state);

/// Per-mode quantities of the mild solution on one grid.
///
/// The control is taken piecewise constant, u = (u_j + u_{j+1})/2 on cell j,
/// and the kernel s^{a-1} E_{a,a}(lambda s^a) is integrated exactly over each
/// cell through its antiderivative s^a E_{a,a+1}(lambda s^a). Hence
///   y_i(t_k) = R_i(k) y0_i + b_i sum_{j<k} G_i(k-j) (u_j + u_{j+1})/2.
class ModalKernel {
public:
    ModalKernel(double alpha, const TimeGrid& grid, int n_modes);

    double alpha() const noexcept { return alpha_; }
    const TimeGrid& grid() const noexcept { return grid_; }
    int modes() const noexcept { return static_cast<int>(R_.cols()); }

    /// E_{a,1}(lambda_i t_k^a), 0-based mode index.
    double R(int mode, int k) const { return R_(k, mode); }
    /// Cell weight for lag m = 1..n_steps.
    double G(int mode, int m) const { return G_(m, mode); }
    const Eigen::MatrixXd& G_table() const noexcept { return G_; }

private:
    double alpha_;
    TimeGrid grid_;
    Eigen::MatrixXd R_;  // (n+1) x N
    Eigen::MatrixXd G_;  // (n+1) x N, row 0 unused
};

/// Maps node samples u_0..u_n to the cell averages of the piecewise-constant
/// control: an n x (n+1) matrix.
Eigen::MatrixXd cell_average_matrix(int n_steps);

/// Mild solution with influence coefficients b (one per mode).
Trajectory mild_solution(const ModalKernel& kernel, const SpectralField& y0, const Eigen::VectorXd& influence,
                         const ControlSignal& u);

}  // namespace fracctl
