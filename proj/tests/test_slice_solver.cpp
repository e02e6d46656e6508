#include <catch2/catch_amalgamated.hpp>

#include <random>
#include <vector>

#include "fradi/slice_solver.hpp"

using namespace fradi;

namespace {

struct OpPair {
    FractionalOperator minus, plus;
    OpPair(double alpha, Axis axis, double h, double coeff)
        : minus(alpha, Side::minus, axis, h, coeff),
          plus(alpha, Side::plus, axis, h, coeff) {}
};

std::vector<double> random_vector(std::size_t n, unsigned seed) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    std::vector<double> v(n);
    for (double& x : v) x = uni(rng);
    return v;
}

} // namespace

TEST_CASE("dt = 0 degenerates to the identity") {
    const std::size_t n = 6;
    OpPair ops(1.5, Axis::x, 0.2, 1.0);
    const auto w = grunwald_weights(1.5, n + 2);
    const auto sys = build_slice_system(Axis::x, 1, 0.0, 0.5, ops.minus, ops.plus, w, n);
    CHECK((sys.matrix() - Eigen::MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff() == 0.0);
    const auto rhs = random_vector(n, 3);
    const auto u = solve_slice(sys, rhs);
    for (std::size_t k = 0; k < n; ++k)
        CHECK(u[k] == rhs[k]);
}

TEST_CASE("alpha = 2, r = 1/2 yields the classical CN half-step matrix") {
    const std::size_t n = 5;
    const double h = 0.25, a = 0.7, dt = 0.02;
    OpPair ops(2.0, Axis::x, h, a);
    const auto w = grunwald_weights(2.0, n + 2);
    const auto sys = build_slice_system(Axis::x, 2, dt, 0.5, ops.minus, ops.plus, w, n);
    const double c = dt / 2.0 * (a / std::pow(h, 2.0));
    Eigen::MatrixXd expect = Eigen::MatrixXd::Identity(n, n);
    for (Eigen::Index k = 0; k < static_cast<Eigen::Index>(n); ++k) {
        expect(k, k) += 2.0 * c;
        if (k > 0) expect(k, k - 1) -= c;
        if (k + 1 < static_cast<Eigen::Index>(n)) expect(k, k + 1) -= c;
    }
    CHECK((sys.matrix() - expect).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("solve residual stays below 1e-10 relative") {
    const std::size_t n = 40;
    OpPair ops(1.3, Axis::y, 0.05, 2.0);
    const auto w = grunwald_weights(1.3, n + 2);
    const auto sys = build_slice_system(Axis::y, 1, 0.01, 0.3, ops.minus, ops.plus, w, n);
    const auto rhs = random_vector(n, 17);
    const auto u = solve_slice(sys, rhs);
    Eigen::Map<const Eigen::VectorXd> uv(u.data(), static_cast<Eigen::Index>(n));
    Eigen::Map<const Eigen::VectorXd> bv(rhs.data(), static_cast<Eigen::Index>(n));
    const double res = (sys.matrix() * uv - bv).cwiseAbs().maxCoeff();
    CHECK(res <= 1e-10 * bv.cwiseAbs().maxCoeff());
}

TEST_CASE("zero right-hand side gives the zero solution") {
    const std::size_t n = 8;
    OpPair ops(1.9, Axis::x, 0.1, 1.0);
    const auto w = grunwald_weights(1.9, n + 2);
    const auto sys = build_slice_system(Axis::x, 1, 0.05, 0.5, ops.minus, ops.plus, w, n);
    for (const double v : solve_slice(sys, std::vector<double>(n, 0.0)))
        CHECK(v == 0.0);
}

TEST_CASE("round-trip recovery across fractional orders") {
    const std::size_t n = 25;
    for (double alpha : {1.2, 1.5, 2.0}) {
        OpPair ops(alpha, Axis::x, 0.08, 1.5);
        const auto w = grunwald_weights(alpha, n + 2);
        const auto sys =
            build_slice_system(Axis::x, 1, 0.02, 0.5, ops.minus, ops.plus, w, n);
        const auto truth = random_vector(n, 29);
        Eigen::Map<const Eigen::VectorXd> tv(truth.data(), static_cast<Eigen::Index>(n));
        const Eigen::VectorXd rhs = sys.matrix() * tv;
        const auto u = solve_slice(sys, std::vector<double>(rhs.data(),
                                                            rhs.data() + rhs.size()));
        for (std::size_t k = 0; k < n; ++k)
            CHECK(u[k] == Catch::Approx(truth[k]).epsilon(1e-10));
    }
}

TEST_CASE("factorization reproduces the matrix") {
    const std::size_t n = 12;
    OpPair ops(1.6, Axis::y, 0.1, 1.0);
    const auto w = grunwald_weights(1.6, n + 2);
    const auto sys = build_slice_system(Axis::y, 4, 0.1, 0.8, ops.minus, ops.plus, w, n);
    const Eigen::MatrixXd rebuilt = sys.factorization().reconstructedMatrix();
    const double scale = sys.matrix().cwiseAbs().maxCoeff();
    CHECK((rebuilt - sys.matrix()).cwiseAbs().maxCoeff() <= 1e-12 * scale);
}

TEST_CASE("slices with identical coefficients may share one factorization") {
    const std::size_t n = 10;
    OpPair ops(1.5, Axis::x, 0.1, 1.0);
    const auto w = grunwald_weights(1.5, n + 2);
    // constant coefficients: systems built for different slices are identical
    const auto sys_a = build_slice_system(Axis::x, 1, 0.05, 0.5, ops.minus, ops.plus, w, n);
    const auto sys_b = build_slice_system(Axis::x, 7, 0.05, 0.5, ops.minus, ops.plus, w, n);
    CHECK((sys_a.matrix() - sys_b.matrix()).cwiseAbs().maxCoeff() == 0.0);
    const auto rhs = random_vector(n, 41);
    const auto ua = solve_slice(sys_a, rhs);
    const auto ub = solve_slice(sys_b, rhs);
    for (std::size_t k = 0; k < n; ++k)
        CHECK(ua[k] == ub[k]); // bit-identical
}

TEST_CASE("boundary values are folded through the load columns") {
    const std::size_t n = 9;
    OpPair ops(1.7, Axis::x, 0.1, 1.0);
    const auto w = grunwald_weights(1.7, n + 2);
    const auto sys = build_slice_system(Axis::x, 1, 0.04, 0.5, ops.minus, ops.plus, w, n);
    const auto rhs = random_vector(n, 43);
    const double u_lo = 0.8, u_hi = -0.3;
    const auto u = solve_slice(sys, rhs, u_lo, u_hi);
    Eigen::Map<const Eigen::VectorXd> uv(u.data(), static_cast<Eigen::Index>(n));
    Eigen::Map<const Eigen::VectorXd> bv(rhs.data(), static_cast<Eigen::Index>(n));
    const Eigen::VectorXd res = sys.matrix() * uv - bv - u_lo * sys.boundary_lo()
                                - u_hi * sys.boundary_hi();
    CHECK(res.cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("dimension mismatches and invalid weights are rejected") {
    const std::size_t n = 6;
    OpPair ops(1.5, Axis::x, 0.2, 1.0);
    const auto w = grunwald_weights(1.5, n + 2);
    const auto sys = build_slice_system(Axis::x, 1, 0.01, 0.5, ops.minus, ops.plus, w, n);
    CHECK_THROWS_AS(solve_slice(sys, std::vector<double>(n + 1, 0.0)),
                    std::invalid_argument);
    CHECK_THROWS_AS(build_slice_system(Axis::x, 1, -0.1, 0.5, ops.minus, ops.plus, w, n),
                    std::invalid_argument);
    CHECK_THROWS_AS(build_slice_system(Axis::x, 1, 0.01, 1.5, ops.minus, ops.plus, w, n),
                    std::invalid_argument);
    CHECK_THROWS_AS(build_slice_system(Axis::y, 1, 0.01, 0.5, ops.minus, ops.plus, w, n),
                    std::invalid_argument);
}
