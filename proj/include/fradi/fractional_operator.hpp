#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "fradi/field.hpp"
#include "fradi/grunwald.hpp"

namespace fradi {

enum class Axis { x, y };

/// Which one-sided derivative the operator discretizes.
/// `minus` is the delta^- form whose stencil reaches toward increasing
/// index (it discretizes the right-sided derivative d^a/d(-x)^a);
/// `plus` is delta^+ reaching toward decreasing index (left-sided
/// derivative d^a/dx^a).
enum class Side { minus, plus };

/// Diffusion coefficient, either spatially constant or per grid cell.
class CoefficientField {
public:
    CoefficientField(double constant_value) : constant_(constant_value) {
        if (constant_value < 0.0)
            throw std::invalid_argument("CoefficientField: coefficient must be >= 0");
    }

    static CoefficientField constant(double value) { return CoefficientField(value); }

    static CoefficientField per_cell(Field2D values) {
        for (double v : values.data())
            if (v < 0.0)
                throw std::invalid_argument("CoefficientField: coefficient must be >= 0");
        CoefficientField c(0.0);
        c.cells_ = std::move(values);
        c.varying_ = true;
        return c;
    }

    bool is_constant() const { return !varying_; }

    double at(std::size_t i, std::size_t j) const {
        return varying_ ? cells_(i, j) : constant_;
    }

private:
    double constant_ = 0.0;
    bool varying_ = false;
    Field2D cells_;
};

/// A one-dimensional shifted Grunwald difference operator along one axis,
/// scaled by coeff/(spacing^alpha). Application is linear in the field.
struct FractionalOperator {
    double alpha;
    Side side;
    Axis axis;
    double spacing;
    CoefficientField coeff;

    FractionalOperator(double alpha_, Side side_, Axis axis_, double spacing_,
                       CoefficientField coeff_)
        : alpha(alpha_), side(side_), axis(axis_), spacing(spacing_),
          coeff(std::move(coeff_)) {
        if (!(alpha > 1.0 && alpha <= 2.0))
            throw std::invalid_argument("FractionalOperator: alpha must lie in (1, 2]");
        if (!(spacing > 0.0))
            throw std::invalid_argument("FractionalOperator: spacing must be > 0");
    }

    double scale_at(std::size_t i, std::size_t j) const {
        return coeff.at(i, j) / std::pow(spacing, alpha);
    }
};

namespace detail {

inline void check_weights(const FractionalOperator& op, const GrunwaldWeights& w,
                          std::size_t interior) {
    if (w.alpha != op.alpha)
        throw std::invalid_argument("fractional operator: weight order does not match operator order");
    // stencils reach weight index N = interior+1 at the slice ends
    if (w.size() < interior + 2)
        throw std::invalid_argument("fractional operator: weight table too short for this grid");
}

} // namespace detail

/// Applies the operator to one slice of the field at the interior points
/// p = 1..interior, where the slice is row j = slice_index (axis x) or
/// column i = slice_index (axis y). Boundary values stored in the field
/// enter where the stencil reaches index 0 or N; at interior evaluation
/// points the shifted sums never leave [0, N].
inline std::vector<double> apply_shifted(const FractionalOperator& op,
                                         const GrunwaldWeights& weights,
                                         const Field2D& field,
                                         std::size_t slice_index) {
    const bool along_x = (op.axis == Axis::x);
    const std::size_t interior = along_x ? field.nx() : field.ny();
    const std::size_t cross = along_x ? field.ny() : field.nx();
    if (slice_index > cross + 1)
        throw std::invalid_argument("apply_shifted: slice index out of range");
    detail::check_weights(op, weights, interior);

    const std::size_t last = interior + 1; // index N of the far boundary point
    auto value = [&](std::size_t p) {
        return along_x ? field(p, slice_index) : field(slice_index, p);
    };

    std::vector<double> out(interior);
    const auto& g = weights.coeffs;
    for (std::size_t p = 1; p <= interior; ++p) {
        double sum = 0.0;
        if (op.side == Side::minus) {
            // sum_{k=0}^{N-p+1} g_k u_{p+k-1}
            for (std::size_t k = 0; k <= last - p + 1; ++k)
                sum += g[k] * value(p + k - 1);
        } else {
            // sum_{k=0}^{p+1} g_k u_{p-k+1}
            for (std::size_t k = 0; k <= p + 1; ++k)
                sum += g[k] * value(p - k + 1);
        }
        const std::size_t ci = along_x ? p : slice_index;
        const std::size_t cj = along_x ? slice_index : p;
        out[p - 1] = op.scale_at(ci, cj) * sum;
    }
    return out;
}

/// Assembled form of the shifted operator over the interior points of one
/// slice. `interior(r, c)` holds the coupling of interior point r+1 to
/// interior point c+1; couplings to the two boundary points are excluded
/// from the matrix and reported as the load columns, so that
///   apply_shifted == interior * u_int + boundary_lo * u_0 + boundary_hi * u_N.
struct OperatorMatrix {
    Eigen::MatrixXd interior;
    Eigen::VectorXd boundary_lo;
    Eigen::VectorXd boundary_hi;
};

inline OperatorMatrix operator_matrix(const FractionalOperator& op,
                                      const GrunwaldWeights& weights,
                                      std::size_t slice_index,
                                      std::size_t interior_count) {
    detail::check_weights(op, weights, interior_count);
    const auto n = static_cast<Eigen::Index>(interior_count);
    const std::size_t last = interior_count + 1;

    OperatorMatrix m;
    m.interior = Eigen::MatrixXd::Zero(n, n);
    m.boundary_lo = Eigen::VectorXd::Zero(n);
    m.boundary_hi = Eigen::VectorXd::Zero(n);

    const auto& g = weights.coeffs;
    for (std::size_t p = 1; p <= interior_count; ++p) {
        const std::size_t ci = (op.axis == Axis::x) ? p : slice_index;
        const std::size_t cj = (op.axis == Axis::x) ? slice_index : p;
        const double s = op.scale_at(ci, cj);
        const auto r = static_cast<Eigen::Index>(p - 1);
        if (op.side == Side::minus) {
            // row p couples to u_q with weight g_{q-p+1}, q = p-1..N
            for (std::size_t q = (p == 1 ? 0 : p - 1); q <= last; ++q) {
                const double w = s * g[q - p + 1];
                if (q == 0)
                    m.boundary_lo[r] += w;
                else if (q == last)
                    m.boundary_hi[r] += w;
                else
                    m.interior(r, static_cast<Eigen::Index>(q - 1)) = w;
            }
        } else {
            // row p couples to u_q with weight g_{p-q+1}, q = 0..p+1
            for (std::size_t q = 0; q <= std::min(p + 1, last); ++q) {
                const double w = s * g[p - q + 1];
                if (q == 0)
                    m.boundary_lo[r] += w;
                else if (q == last)
                    m.boundary_hi[r] += w;
                else
                    m.interior(r, static_cast<Eigen::Index>(q - 1)) = w;
            }
        }
    }
    return m;
}

/// Weighted two-sided combination c * ((1-r) * minus + r * plus) used by
/// both the implicit and explicit halves of the scheme.
inline OperatorMatrix combined_matrix(const FractionalOperator& op_minus,
                                      const FractionalOperator& op_plus,
                                      const GrunwaldWeights& weights,
                                      std::size_t slice_index,
                                      std::size_t interior_count,
                                      double r, double scale = 1.0) {
    if (op_minus.side != Side::minus || op_plus.side != Side::plus)
        throw std::invalid_argument("combined_matrix: operators passed in wrong order");
    if (op_minus.axis != op_plus.axis || op_minus.alpha != op_plus.alpha)
        throw std::invalid_argument("combined_matrix: operators must share axis and order");
    OperatorMatrix a = operator_matrix(op_minus, weights, slice_index, interior_count);
    OperatorMatrix b = operator_matrix(op_plus, weights, slice_index, interior_count);
    a.interior = scale * ((1.0 - r) * a.interior + r * b.interior);
    a.boundary_lo = scale * ((1.0 - r) * a.boundary_lo + r * b.boundary_lo);
    a.boundary_hi = scale * ((1.0 - r) * a.boundary_hi + r * b.boundary_hi);
    return a;
}

} // namespace fradi
