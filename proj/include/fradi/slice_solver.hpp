#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

#include "fradi/errors.hpp"
#include "fradi/fractional_operator.hpp"

namespace fradi {

/// One factorized per-slice system I - (dt/2) * [(1-r) A^- + r A^+].
///
/// The matrix is diagonally dominant for small enough dt, but the solver
/// pivots regardless. Couplings to the two slice-boundary points are kept
/// apart as load columns already scaled by dt/2, so a solve with boundary
/// values u_0, u_N uses rhs + boundary_lo*u_0 + boundary_hi*u_N.
class SliceSystem {
public:
    SliceSystem(Eigen::MatrixXd matrix, Eigen::VectorXd boundary_lo,
                Eigen::VectorXd boundary_hi, Axis direction, std::size_t slice_index)
        : matrix_(std::move(matrix)),
          boundary_lo_(std::move(boundary_lo)),
          boundary_hi_(std::move(boundary_hi)),
          direction_(direction), slice_index_(slice_index),
          lu_(matrix_) {
        // PartialPivLU never fails outright; detect a (near-)singular U instead.
        const double scale = matrix_.cwiseAbs().maxCoeff();
        const double pivot_min = lu_.matrixLU().diagonal().cwiseAbs().minCoeff();
        if (!(pivot_min > scale * 1e-14))
            throw SolverError("build_slice_system: singular slice system "
                              "(dt or coefficients outside the scheme's usable range)");
    }

    const Eigen::MatrixXd& matrix() const { return matrix_; }
    const Eigen::PartialPivLU<Eigen::MatrixXd>& factorization() const { return lu_; }
    const Eigen::VectorXd& boundary_lo() const { return boundary_lo_; }
    const Eigen::VectorXd& boundary_hi() const { return boundary_hi_; }
    Axis direction() const { return direction_; }
    std::size_t slice_index() const { return slice_index_; }
    std::size_t dim() const { return static_cast<std::size_t>(matrix_.rows()); }

private:
    Eigen::MatrixXd matrix_;
    Eigen::VectorXd boundary_lo_, boundary_hi_;
    Axis direction_;
    std::size_t slice_index_;
    Eigen::PartialPivLU<Eigen::MatrixXd> lu_;
};

/// Assembles and factorizes the implicit half-step system for one slice.
/// dt = 0 degenerates to the identity.
inline SliceSystem build_slice_system(Axis dir, std::size_t slice_index, double dt,
                                      double r, const FractionalOperator& op_minus,
                                      const FractionalOperator& op_plus,
                                      const GrunwaldWeights& weights,
                                      std::size_t interior_count) {
    if (!(dt >= 0.0))
        throw std::invalid_argument("build_slice_system: dt must be >= 0");
    if (!(r >= 0.0 && r <= 1.0))
        throw std::invalid_argument("build_slice_system: r must lie in [0, 1]");
    if (op_minus.axis != dir || op_plus.axis != dir)
        throw std::invalid_argument("build_slice_system: operator axis does not match direction");

    OperatorMatrix c = combined_matrix(op_minus, op_plus, weights, slice_index,
                                       interior_count, r, dt / 2.0);
    const auto n = static_cast<Eigen::Index>(interior_count);
    Eigen::MatrixXd m = Eigen::MatrixXd::Identity(n, n) - c.interior;
    return SliceSystem(std::move(m), std::move(c.boundary_lo), std::move(c.boundary_hi),
                       dir, slice_index);
}

/// Solves sys * u = rhs for one slice with zero boundary values.
inline std::vector<double> solve_slice(const SliceSystem& sys, std::span<const double> rhs) {
    if (rhs.size() != sys.dim())
        throw std::invalid_argument("solve_slice: rhs length does not match system dimension");
    Eigen::Map<const Eigen::VectorXd> b(rhs.data(), static_cast<Eigen::Index>(rhs.size()));
    Eigen::VectorXd u = sys.factorization().solve(b);
    return {u.data(), u.data() + u.size()};
}

/// Solve with prescribed slice-boundary values folded into the right side.
inline std::vector<double> solve_slice(const SliceSystem& sys, std::span<const double> rhs,
                                       double u_lo, double u_hi) {
    if (rhs.size() != sys.dim())
        throw std::invalid_argument("solve_slice: rhs length does not match system dimension");
    Eigen::Map<const Eigen::VectorXd> b(rhs.data(), static_cast<Eigen::Index>(rhs.size()));
    Eigen::VectorXd full = b + u_lo * sys.boundary_lo() + u_hi * sys.boundary_hi();
    Eigen::VectorXd u = sys.factorization().solve(full);
    return {u.data(), u.data() + u.size()};
}

} // namespace fradi
