#pragma once

#include <Eigen/Dense>

#include <array>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "fradi/errors.hpp"
#include "fradi/field.hpp"
#include "fradi/fractional_operator.hpp"
#include "fradi/grunwald.hpp"
#include "fradi/parallel.hpp"
#include "fradi/siv_model.hpp"
#include "fradi/slice_solver.hpp"

namespace fradi {

/// Discretization parameters of the two-sided fractional scheme.
/// nx, ny count interior points; the full grid adds one Dirichlet point
/// on each side, so dx = (x_high - x_low) / (nx + 1).
struct SchemeConfig {
    double alpha1 = 2.0;  // order in x, (1, 2]
    double alpha2 = 2.0;  // order in y
    double r1 = 0.5;      // two-sidedness weight in x, [0, 1]
    double r2 = 0.5;
    double dt = 0.0;
    std::size_t nx = 0, ny = 0;
    double x_low = 0.0, x_high = 1.0;
    double y_low = 0.0, y_high = 1.0;

    double dx() const { return (x_high - x_low) / static_cast<double>(nx + 1); }
    double dy() const { return (y_high - y_low) / static_cast<double>(ny + 1); }

    void validate() const {
        if (!(alpha1 > 1.0 && alpha1 <= 2.0) || !(alpha2 > 1.0 && alpha2 <= 2.0))
            throw std::invalid_argument("SchemeConfig: orders must lie in (1, 2]");
        if (!(r1 >= 0.0 && r1 <= 1.0) || !(r2 >= 0.0 && r2 <= 1.0))
            throw std::invalid_argument("SchemeConfig: weights must lie in [0, 1]");
        if (!(dt > 0.0))
            throw std::invalid_argument("SchemeConfig: dt must be > 0");
        if (nx == 0 || ny == 0)
            throw std::invalid_argument("SchemeConfig: empty interior grid");
        if (!(x_high > x_low) || !(y_high > y_low))
            throw std::invalid_argument("SchemeConfig: domain bounds out of order");
    }
};

/// Boundary values along the two x-edges of the grid (i = 0 and i = nx+1),
/// one entry per j = 0..ny+1.
struct EdgeValues {
    std::vector<double> lo, hi;
};

inline EdgeValues x_edges(const Field2D& f) {
    EdgeValues e;
    e.lo.resize(f.points_y());
    e.hi.resize(f.points_y());
    for (std::size_t j = 0; j < f.points_y(); ++j) {
        e.lo[j] = f(0, j);
        e.hi[j] = f(f.nx() + 1, j);
    }
    return e;
}

/// Cached factorizations and scratch fields for one step configuration.
///
/// Holds, per compartment and direction, the factorized implicit system
/// I - (dt/2) L and the assembled explicit matrix (dt/2) L used on the
/// right-hand sides. Coefficients coming from SivParams are spatially
/// constant, so one factorization is shared by every slice of a sweep.
/// Invalidation is explicit: call rebuild() after changing dt, orders,
/// weights or coefficients. A single step() must not run concurrently on
/// the same workspace; distinct slice solves inside a sweep may.
class AdiWorkspace {
public:
    AdiWorkspace(const SchemeConfig& cfg, const SivParams& params, int threads = 1)
        : threads_(threads) {
        rebuild(cfg, params);
    }

    void rebuild(const SchemeConfig& cfg, const SivParams& params) {
        cfg.validate();
        params.validate();
        cfg_ = cfg;
        weights_x_ = grunwald_weights(cfg.alpha1, std::max(cfg.nx, cfg.ny) + 3);
        weights_y_ = (cfg.alpha2 == cfg.alpha1)
                         ? weights_x_
                         : grunwald_weights(cfg.alpha2, std::max(cfg.nx, cfg.ny) + 3);
        implicit_x_.clear();
        implicit_y_.clear();
        explicit_x_.clear();
        explicit_y_.clear();
        for (Compartment c : all_compartments) {
            const auto k = static_cast<std::size_t>(c);
            FractionalOperator xm(cfg.alpha1, Side::minus, Axis::x, cfg.dx(), params.diff_x[k]);
            FractionalOperator xp(cfg.alpha1, Side::plus, Axis::x, cfg.dx(), params.diff_x[k]);
            FractionalOperator ym(cfg.alpha2, Side::minus, Axis::y, cfg.dy(), params.diff_y[k]);
            FractionalOperator yp(cfg.alpha2, Side::plus, Axis::y, cfg.dy(), params.diff_y[k]);
            implicit_x_.push_back(build_slice_system(Axis::x, 1, cfg.dt, cfg.r1, xm, xp,
                                                     weights_x_, cfg.nx));
            implicit_y_.push_back(build_slice_system(Axis::y, 1, cfg.dt, cfg.r2, ym, yp,
                                                     weights_y_, cfg.ny));
            explicit_x_.push_back(combined_matrix(xm, xp, weights_x_, 1, cfg.nx, cfg.r1,
                                                  cfg.dt / 2.0));
            explicit_y_.push_back(combined_matrix(ym, yp, weights_y_, 1, cfg.ny, cfg.r2,
                                                  cfg.dt / 2.0));
        }
        for (auto& f : star_)
            f = Field2D(cfg.nx, cfg.ny);
    }

    const SchemeConfig& config() const { return cfg_; }
    int threads() const { return threads_; }
    void set_threads(int t) { threads_ = t; }

    const GrunwaldWeights& weights(Axis a) const {
        return a == Axis::x ? weights_x_ : weights_y_;
    }
    const SliceSystem& implicit_system(Compartment c, Axis a) const {
        const auto k = static_cast<std::size_t>(c);
        return a == Axis::x ? implicit_x_[k] : implicit_y_[k];
    }
    /// (dt/2)-scaled explicit operator, interior matrix plus load columns.
    const OperatorMatrix& explicit_op(Compartment c, Axis a) const {
        const auto k = static_cast<std::size_t>(c);
        return a == Axis::x ? explicit_x_[k] : explicit_y_[k];
    }
    std::array<Field2D, 3>& scratch_star() { return star_; }

private:
    SchemeConfig cfg_;
    int threads_ = 1;
    GrunwaldWeights weights_x_, weights_y_;
    std::vector<SliceSystem> implicit_x_, implicit_y_;
    std::vector<OperatorMatrix> explicit_x_, explicit_y_;
    std::array<Field2D, 3> star_;
};

/// Reaction terms evaluated at the explicit-Euler half-step predictor
/// X^{n+1/2} = X^n + (dt/2) g(X^n), pointwise over the interior.
inline std::array<Field2D, 3> half_step_reaction(const SivParams& p,
                                                 const SivState& state, double dt) {
    if (!state.consistent())
        throw std::invalid_argument("half_step_reaction: compartment grids do not match");
    const std::size_t nx = state.nx(), ny = state.ny();
    std::array<Field2D, 3> out{Field2D(nx, ny), Field2D(nx, ny), Field2D(nx, ny)};
    const double h = dt / 2.0;
    for (std::size_t j = 1; j <= ny; ++j)
        for (std::size_t i = 1; i <= nx; ++i) {
            const double s0 = state.s(i, j), i0 = state.i(i, j), v0 = state.v(i, j);
            const ReactionRates g0 = reaction_terms(p, s0, i0, v0);
            const ReactionRates g = reaction_terms(p, s0 + h * g0.s, i0 + h * g0.i,
                                                   v0 + h * g0.v);
            out[0](i, j) = g.s;
            out[1](i, j) = g.i;
            out[2](i, j) = g.v;
        }
    return out;
}

/// Boundary values of the intermediate field X* on the two x-edges,
///   2 X* = (1 - (dt/2) Ly) X^{n+1} + (1 + (dt/2) Ly) X^n,
/// evaluated from the prescribed Dirichlet data at both time levels.
/// Under homogeneous conditions this is identically zero.
inline EdgeValues intermediate_boundary(const AdiWorkspace& ws, const SchemeConfig& cfg,
                                        Compartment c, const SivState& state_n,
                                        const EdgeValues& edges_np1) {
    const Field2D& f = state_n.field(c);
    if (edges_np1.lo.size() != f.points_y() || edges_np1.hi.size() != f.points_y())
        throw std::invalid_argument("intermediate_boundary: edge data length mismatch");
    const EdgeValues edges_n = x_edges(f);
    const OperatorMatrix& my = ws.explicit_op(c, Axis::y);
    const auto n = static_cast<Eigen::Index>(cfg.ny);

    EdgeValues out;
    auto combine = [&](const std::vector<double>& en, const std::vector<double>& enp1) {
        Eigen::Map<const Eigen::VectorXd> vn(en.data() + 1, n);
        Eigen::Map<const Eigen::VectorXd> vp(enp1.data() + 1, n);
        Eigen::VectorXd ly_n = my.interior * vn + en.front() * my.boundary_lo
                               + en.back() * my.boundary_hi;
        Eigen::VectorXd ly_p = my.interior * vp + enp1.front() * my.boundary_lo
                               + enp1.back() * my.boundary_hi;
        std::vector<double> star(en.size());
        for (Eigen::Index j = 0; j < n; ++j)
            star[static_cast<std::size_t>(j) + 1] =
                0.5 * ((vp[j] - ly_p[j]) + (vn[j] + ly_n[j]));
        star.front() = 0.5 * (en.front() + enp1.front());
        star.back() = 0.5 * (en.back() + enp1.back());
        return star;
    };
    out.lo = combine(edges_n.lo, edges_np1.lo);
    out.hi = combine(edges_n.hi, edges_np1.hi);
    return out;
}

namespace detail {

/// (dt/2) L applied along `axis` at every interior point, using the
/// field's stored rim values where the stencils reach the boundary.
inline void explicit_apply(const AdiWorkspace& ws, Compartment c, Axis axis,
                           const Field2D& f, Field2D& out) {
    const std::size_t nx = f.nx(), ny = f.ny();
    const OperatorMatrix& m = ws.explicit_op(c, axis);
    if (axis == Axis::y) {
        parallel_for(nx, ws.threads(), [&](std::size_t k) {
            const std::size_t i = k + 1;
            Eigen::VectorXd col(static_cast<Eigen::Index>(ny));
            for (std::size_t j = 1; j <= ny; ++j)
                col[static_cast<Eigen::Index>(j - 1)] = f(i, j);
            Eigen::VectorXd r = m.interior * col + f(i, 0) * m.boundary_lo
                                + f(i, ny + 1) * m.boundary_hi;
            for (std::size_t j = 1; j <= ny; ++j)
                out(i, j) = r[static_cast<Eigen::Index>(j - 1)];
        });
    } else {
        parallel_for(ny, ws.threads(), [&](std::size_t k) {
            const std::size_t j = k + 1;
            Eigen::Map<const Eigen::VectorXd> row(f.row(j).data() + 1,
                                                  static_cast<Eigen::Index>(nx));
            Eigen::VectorXd r = m.interior * row + f(0, j) * m.boundary_lo
                                + f(nx + 1, j) * m.boundary_hi;
            for (std::size_t i = 1; i <= nx; ++i)
                out(i, j) = r[static_cast<Eigen::Index>(i - 1)];
        });
    }
}

} // namespace detail

/// ADI split I: for every horizontal slice y = y_j solves
///   (1 - (dt/2) Lx) X* = X^n + (dt/2) Ly X^n + (dt/2) g_X
/// in the x direction. The intermediates are written into the workspace
/// scratch fields; they carry the consistency boundary values on their
/// x-edges and the prescribed Dirichlet rim elsewhere. Dirichlet data is
/// taken as time-independent (the values stored on state_n's rim).
inline const std::array<Field2D, 3>& sweep_x(AdiWorkspace& ws, const SchemeConfig& cfg,
                                             const SivState& state_n,
                                             const std::array<Field2D, 3>& reaction_half) {
    if (state_n.nx() != cfg.nx || state_n.ny() != cfg.ny)
        throw std::invalid_argument("sweep_x: state does not match configuration");
    const std::size_t nx = cfg.nx, ny = cfg.ny;
    const double c2 = cfg.dt / 2.0;
    std::array<Field2D, 3>& star = ws.scratch_star();
    Field2D expl(nx, ny);

    for (Compartment c : all_compartments) {
        const auto k = static_cast<std::size_t>(c);
        const Field2D& f = state_n.field(c);
        const EdgeValues star_edges =
            intermediate_boundary(ws, cfg, c, state_n, x_edges(f));
        detail::explicit_apply(ws, c, Axis::y, f, expl);
        const SliceSystem& sys = ws.implicit_system(c, Axis::x);
        Field2D& out = star[k];
        // rim: prescribed values on the y-edges, consistency values on the x-edges
        for (std::size_t i = 0; i < f.points_x(); ++i) {
            out(i, 0) = f(i, 0);
            out(i, ny + 1) = f(i, ny + 1);
        }
        for (std::size_t j = 0; j < f.points_y(); ++j) {
            out(0, j) = star_edges.lo[j];
            out(nx + 1, j) = star_edges.hi[j];
        }
        parallel_for(ny, ws.threads(), [&](std::size_t q) {
            const std::size_t j = q + 1;
            std::vector<double> rhs(nx);
            for (std::size_t i = 1; i <= nx; ++i)
                rhs[i - 1] = f(i, j) + expl(i, j) + c2 * reaction_half[k](i, j);
            const std::vector<double> u =
                solve_slice(sys, rhs, star_edges.lo[j], star_edges.hi[j]);
            for (std::size_t i = 1; i <= nx; ++i)
                out(i, j) = u[i - 1];
        });
    }
    return star;
}

/// ADI split II: for every vertical slice x = x_i solves
///   (1 - (dt/2) Ly) X^{n+1} = X* + (dt/2) Lx X* + (dt/2) g_X
/// in the y direction, then reimposes the prescribed Dirichlet rim
/// (again taken from state_n, time-independent).
inline SivState sweep_y(AdiWorkspace& ws, const SchemeConfig& cfg,
                        const std::array<Field2D, 3>& intermediates,
                        const std::array<Field2D, 3>& reaction_half,
                        const SivState& state_n) {
    const std::size_t nx = cfg.nx, ny = cfg.ny;
    const double c2 = cfg.dt / 2.0;
    SivState next(nx, ny);
    Field2D expl(nx, ny);

    for (Compartment c : all_compartments) {
        const auto k = static_cast<std::size_t>(c);
        const Field2D& fstar = intermediates[k];
        const Field2D& fn = state_n.field(c);
        detail::explicit_apply(ws, c, Axis::x, fstar, expl);
        const SliceSystem& sys = ws.implicit_system(c, Axis::y);
        Field2D& out = next.field(c);
        // prescribed Dirichlet rim at t_{n+1}
        for (std::size_t i = 0; i < fn.points_x(); ++i) {
            out(i, 0) = fn(i, 0);
            out(i, ny + 1) = fn(i, ny + 1);
        }
        for (std::size_t j = 0; j < fn.points_y(); ++j) {
            out(0, j) = fn(0, j);
            out(nx + 1, j) = fn(nx + 1, j);
        }
        parallel_for(nx, ws.threads(), [&](std::size_t q) {
            const std::size_t i = q + 1;
            std::vector<double> rhs(ny);
            for (std::size_t j = 1; j <= ny; ++j)
                rhs[j - 1] = fstar(i, j) + expl(i, j) + c2 * reaction_half[k](i, j);
            const std::vector<double> u = solve_slice(sys, rhs, fn(i, 0), fn(i, ny + 1));
            for (std::size_t j = 1; j <= ny; ++j)
                out(i, j) = u[j - 1];
        });
    }
    return next;
}

/// One Crank-Nicolson Peaceman-Rachford step:
/// half-step reaction predictor, x-implicit sweep to the intermediates,
/// then y-implicit sweep back to the full state at t_{n+1}.
inline SivState step(AdiWorkspace& ws, const SchemeConfig& cfg, const SivParams& p,
                     const SivState& state_n) {
    const std::array<Field2D, 3> rh = half_step_reaction(p, state_n, cfg.dt);
    const std::array<Field2D, 3>& star = sweep_x(ws, cfg, state_n, rh);
    return sweep_y(ws, cfg, star, rh, state_n);
}

} // namespace fradi
