#pragma once

#include <cassert>
#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

namespace fradi {

/// One scalar compartment field on the interior+boundary grid.
///
/// The grid has nx*ny interior points plus a one-point Dirichlet rim:
/// valid indices are i = 0..nx+1, j = 0..ny+1, with i = 0, i = nx+1,
/// j = 0 and j = ny+1 being boundary points. Storage is contiguous with
/// fixed-j rows, so x-direction slices are contiguous.
class Field2D {
public:
    Field2D() = default;

    Field2D(std::size_t nx_interior, std::size_t ny_interior, double value = 0.0)
        : nx_(nx_interior), ny_(ny_interior),
          values_((nx_interior + 2) * (ny_interior + 2), value) {}

    std::size_t nx() const { return nx_; }
    std::size_t ny() const { return ny_; }
    std::size_t points_x() const { return nx_ + 2; }
    std::size_t points_y() const { return ny_ + 2; }

    double& operator()(std::size_t i, std::size_t j) {
        assert(i < points_x() && j < points_y());
        return values_[j * points_x() + i];
    }

    double operator()(std::size_t i, std::size_t j) const {
        assert(i < points_x() && j < points_y());
        return values_[j * points_x() + i];
    }

    std::span<double> data() { return values_; }
    std::span<const double> data() const { return values_; }

    /// Contiguous row j including both boundary points.
    std::span<const double> row(std::size_t j) const {
        assert(j < points_y());
        return {values_.data() + j * points_x(), points_x()};
    }

    bool same_shape(const Field2D& other) const {
        return nx_ == other.nx_ && ny_ == other.ny_;
    }

    double max_abs() const {
        double m = 0.0;
        for (double v : values_) m = std::max(m, std::abs(v));
        return m;
    }

    void fill(double value) {
        for (double& v : values_) v = value;
    }

    /// Overwrite all rim points with the given value.
    void set_boundary(double value) {
        for (std::size_t i = 0; i < points_x(); ++i) {
            (*this)(i, 0) = value;
            (*this)(i, ny_ + 1) = value;
        }
        for (std::size_t j = 0; j < points_y(); ++j) {
            (*this)(0, j) = value;
            (*this)(nx_ + 1, j) = value;
        }
    }

private:
    std::size_t nx_ = 0, ny_ = 0;
    std::vector<double> values_;
};

} // namespace fradi
