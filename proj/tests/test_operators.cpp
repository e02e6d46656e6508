#include <catch2/catch_amalgamated.hpp>

#include <random>
#include <vector>

#include "fradi/fractional_operator.hpp"
#include "fradi/grunwald.hpp"

using namespace fradi;

namespace {

Field2D random_field(std::size_t nx, std::size_t ny, unsigned seed,
                     bool zero_boundary = true) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    Field2D f(nx, ny);
    for (std::size_t j = 0; j < f.points_y(); ++j)
        for (std::size_t i = 0; i < f.points_x(); ++i)
            f(i, j) = uni(rng);
    if (zero_boundary)
        f.set_boundary(0.0);
    return f;
}

} // namespace

TEST_CASE("alpha = 2 reduces to the second difference") {
    // interior slice [0, 1, 0], zero boundaries, spacing 1, coeff 1
    Field2D f(3, 3);
    f(2, 2) = 1.0;
    const auto w = grunwald_weights(2.0, 6);
    for (Side side : {Side::minus, Side::plus}) {
        FractionalOperator op(2.0, side, Axis::x, 1.0, 1.0);
        const auto r = apply_shifted(op, w, f, 2);
        REQUIRE(r.size() == 3);
        CHECK(r[0] == 1.0);
        CHECK(r[1] == -2.0);
        CHECK(r[2] == 1.0);
    }
}

TEST_CASE("zero field maps to zero") {
    Field2D f(5, 4);
    const auto w = grunwald_weights(1.7, 10);
    FractionalOperator op(1.7, Side::minus, Axis::y, 0.3, 2.0);
    for (const double v : apply_shifted(op, w, f, 3))
        CHECK(v == 0.0);
}

TEST_CASE("matrix-free application equals the assembled matrix") {
    // spec instance: alpha = 1.5, spacing 0.25, 6-point slice
    const std::size_t n = 6;
    const auto w = grunwald_weights(1.5, n + 2);
    Field2D f = random_field(n, n, 11);
    for (Side side : {Side::minus, Side::plus})
        for (Axis axis : {Axis::x, Axis::y}) {
            FractionalOperator op(1.5, side, axis, 0.25, 1.0);
            const auto m = operator_matrix(op, w, 3, n);
            const auto direct = apply_shifted(op, w, f, 3);
            Eigen::VectorXd u(n);
            for (std::size_t p = 1; p <= n; ++p)
                u[static_cast<Eigen::Index>(p - 1)] =
                    axis == Axis::x ? f(p, 3) : f(3, p);
            const Eigen::VectorXd r = m.interior * u;
            for (std::size_t p = 0; p < n; ++p)
                CHECK(direct[p] == Catch::Approx(r[static_cast<Eigen::Index>(p)])
                                       .margin(1e-13));
        }
}

TEST_CASE("boundary couplings are reported as load columns") {
    const std::size_t n = 7;
    const auto w = grunwald_weights(1.4, n + 2);
    Field2D f = random_field(n, n, 23, /*zero_boundary=*/false);
    for (Side side : {Side::minus, Side::plus}) {
        FractionalOperator op(1.4, side, Axis::x, 0.5, 0.8);
        const auto m = operator_matrix(op, w, 2, n);
        const auto direct = apply_shifted(op, w, f, 2);
        Eigen::VectorXd u(n);
        for (std::size_t p = 1; p <= n; ++p)
            u[static_cast<Eigen::Index>(p - 1)] = f(p, 2);
        const Eigen::VectorXd r =
            m.interior * u + f(0, 2) * m.boundary_lo + f(n + 1, 2) * m.boundary_hi;
        for (std::size_t p = 0; p < n; ++p)
            CHECK(direct[p]
                  == Catch::Approx(r[static_cast<Eigen::Index>(p)]).margin(1e-13));
    }
}

TEST_CASE("alpha = 2 assembled matrix is the classical Laplacian stencil") {
    const auto w = grunwald_weights(2.0, 8);
    for (Side side : {Side::minus, Side::plus}) {
        FractionalOperator op(2.0, side, Axis::x, 1.0, 1.0);
        const auto m = operator_matrix(op, w, 1, 3);
        Eigen::MatrixXd expect(3, 3);
        expect << -2, 1, 0, 1, -2, 1, 0, 1, -2;
        CHECK((m.interior - expect).cwiseAbs().maxCoeff() == 0.0);
    }
}

TEST_CASE("constant coefficient gives a Toeplitz matrix") {
    const std::size_t n = 9;
    const auto w = grunwald_weights(1.6, n + 2);
    for (Side side : {Side::minus, Side::plus}) {
        FractionalOperator op(1.6, side, Axis::x, 0.1, 3.0);
        const auto m = operator_matrix(op, w, 1, n);
        for (Eigen::Index r = 1; r < static_cast<Eigen::Index>(n); ++r)
            for (Eigen::Index c = 1; c < static_cast<Eigen::Index>(n); ++c)
                CHECK(m.interior(r, c) == m.interior(r - 1, c - 1));
    }
}

TEST_CASE("Hessenberg structure of the assembled operators") {
    const std::size_t n = 8;
    const auto w = grunwald_weights(1.5, n + 2);
    FractionalOperator minus(1.5, Side::minus, Axis::x, 0.2, 1.0);
    FractionalOperator plus(1.5, Side::plus, Axis::x, 0.2, 1.0);
    const auto mm = operator_matrix(minus, w, 1, n).interior; // upper Hessenberg
    const auto mp = operator_matrix(plus, w, 1, n).interior;  // lower Hessenberg
    for (Eigen::Index r = 0; r < static_cast<Eigen::Index>(n); ++r)
        for (Eigen::Index c = 0; c < static_cast<Eigen::Index>(n); ++c) {
            if (c < r - 1) CHECK(mm(r, c) == 0.0);
            if (c > r + 1) CHECK(mp(r, c) == 0.0);
        }
}

TEST_CASE("application is linear in the field") {
    const std::size_t n = 10;
    const auto w = grunwald_weights(1.8, n + 2);
    FractionalOperator op(1.8, Side::plus, Axis::y, 0.15, 1.3);
    Field2D u = random_field(n, n, 5), v = random_field(n, n, 6);
    const double lambda = 0.37;
    Field2D combo(n, n);
    for (std::size_t j = 0; j < u.points_y(); ++j)
        for (std::size_t i = 0; i < u.points_x(); ++i)
            combo(i, j) = u(i, j) + lambda * v(i, j);
    const auto ru = apply_shifted(op, w, u, 4);
    const auto rv = apply_shifted(op, w, v, 4);
    const auto rc = apply_shifted(op, w, combo, 4);
    for (std::size_t p = 0; p < n; ++p)
        CHECK(rc[p] == Catch::Approx(ru[p] + lambda * rv[p]).margin(1e-13));
}

TEST_CASE("left and right operators are mirror images on reversed fields") {
    const std::size_t n = 8;
    const auto w = grunwald_weights(1.5, n + 2);
    FractionalOperator minus(1.5, Side::minus, Axis::x, 0.2, 1.0);
    FractionalOperator plus(1.5, Side::plus, Axis::x, 0.2, 1.0);
    Field2D f = random_field(n, 3, 17);
    Field2D rev(n, 3);
    for (std::size_t j = 0; j < f.points_y(); ++j)
        for (std::size_t i = 0; i < f.points_x(); ++i)
            rev(i, j) = f(n + 1 - i, j);
    const auto direct = apply_shifted(plus, w, f, 2);
    auto mirrored = apply_shifted(minus, w, rev, 2);
    std::reverse(mirrored.begin(), mirrored.end());
    for (std::size_t p = 0; p < n; ++p)
        CHECK(direct[p] == Catch::Approx(mirrored[p]).margin(1e-13));
}

TEST_CASE("per-cell coefficients scale rows individually") {
    const std::size_t n = 5;
    const auto w = grunwald_weights(1.5, n + 2);
    Field2D coeff(n, n, 0.0);
    for (std::size_t j = 0; j < coeff.points_y(); ++j)
        for (std::size_t i = 0; i < coeff.points_x(); ++i)
            coeff(i, j) = 1.0 + 0.1 * static_cast<double>(i + j);
    FractionalOperator varying(1.5, Side::minus, Axis::x, 0.25,
                               CoefficientField::per_cell(coeff));
    FractionalOperator unit(1.5, Side::minus, Axis::x, 0.25, 1.0);
    Field2D f = random_field(n, n, 31);
    const auto rv = apply_shifted(varying, w, f, 2);
    const auto r1 = apply_shifted(unit, w, f, 2);
    for (std::size_t p = 1; p <= n; ++p)
        CHECK(rv[p - 1] == Catch::Approx(coeff(p, 2) * r1[p - 1]).margin(1e-13));
}

TEST_CASE("invalid operators and mismatched inputs are rejected") {
    CHECK_THROWS_AS(FractionalOperator(0.9, Side::minus, Axis::x, 0.1, 1.0),
                    std::invalid_argument);
    CHECK_THROWS_AS(FractionalOperator(1.5, Side::minus, Axis::x, 0.0, 1.0),
                    std::invalid_argument);
    CHECK_THROWS_AS(FractionalOperator(1.5, Side::minus, Axis::x, 0.1, -1.0),
                    std::invalid_argument);

    Field2D f(6, 6);
    FractionalOperator op(1.5, Side::minus, Axis::x, 0.1, 1.0);
    const auto short_w = grunwald_weights(1.5, 4); // too short for 6 interior points
    CHECK_THROWS_AS(apply_shifted(op, short_w, f, 1), std::invalid_argument);
    const auto wrong_alpha = grunwald_weights(1.4, 16);
    CHECK_THROWS_AS(apply_shifted(op, wrong_alpha, f, 1), std::invalid_argument);
}
