#pragma once

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>

#include "fradi/adi_stepper.hpp"
#include "fradi/errors.hpp"
#include "fradi/field.hpp"
#include "fradi/fractional_operator.hpp"
#include "fradi/siv_model.hpp"

namespace fradi {

/// Reference solvers kept deliberately dense and single-threaded; they
/// exist for verification at desk scale, not performance.

inline constexpr std::size_t kGlobalSystemGuard = 4096;

/// Unfactorized Crank-Nicolson system I - (dt/2)(Lx + Ly) for one
/// compartment over all interior points, ordered x-fastest:
/// flat(i, j) = (j-1)*nx + (i-1).
class GlobalSystem {
public:
    GlobalSystem(const SchemeConfig& cfg, const SivParams& p, Compartment c)
        : nx_(cfg.nx), ny_(cfg.ny) {
        if (nx_ * ny_ > kGlobalSystemGuard)
            throw std::invalid_argument("GlobalSystem: grid exceeds the dense-assembly guard");
        const auto k = static_cast<std::size_t>(c);
        const GrunwaldWeights wx = grunwald_weights(cfg.alpha1, std::max(nx_, ny_) + 3);
        const GrunwaldWeights wy = grunwald_weights(cfg.alpha2, std::max(nx_, ny_) + 3);
        FractionalOperator xm(cfg.alpha1, Side::minus, Axis::x, cfg.dx(), p.diff_x[k]);
        FractionalOperator xp(cfg.alpha1, Side::plus, Axis::x, cfg.dx(), p.diff_x[k]);
        FractionalOperator ym(cfg.alpha2, Side::minus, Axis::y, cfg.dy(), p.diff_y[k]);
        FractionalOperator yp(cfg.alpha2, Side::plus, Axis::y, cfg.dy(), p.diff_y[k]);
        opx_ = combined_matrix(xm, xp, wx, 1, nx_, cfg.r1);
        opy_ = combined_matrix(ym, yp, wy, 1, ny_, cfg.r2);

        const auto n = static_cast<Eigen::Index>(nx_ * ny_);
        combined_ = Eigen::MatrixXd::Zero(n, n);
        for (std::size_t j = 1; j <= ny_; ++j) // x couplings, block diagonal
            for (std::size_t a = 1; a <= nx_; ++a)
                for (std::size_t b = 1; b <= nx_; ++b)
                    combined_(flat(a, j), flat(b, j)) +=
                        opx_.interior(static_cast<Eigen::Index>(a - 1),
                                      static_cast<Eigen::Index>(b - 1));
        for (std::size_t i = 1; i <= nx_; ++i) // y couplings, strided
            for (std::size_t a = 1; a <= ny_; ++a)
                for (std::size_t b = 1; b <= ny_; ++b)
                    combined_(flat(i, a), flat(i, b)) +=
                        opy_.interior(static_cast<Eigen::Index>(a - 1),
                                      static_cast<Eigen::Index>(b - 1));
        matrix_ = Eigen::MatrixXd::Identity(n, n) - (cfg.dt / 2.0) * combined_;
    }

    /// I - (dt/2)(Lx + Ly) over interior points.
    const Eigen::MatrixXd& matrix() const { return matrix_; }
    /// Lx + Ly, unscaled.
    const Eigen::MatrixXd& combined_operator() const { return combined_; }

    Eigen::Index flat(std::size_t i, std::size_t j) const {
        return static_cast<Eigen::Index>((j - 1) * nx_ + (i - 1));
    }

    Eigen::VectorXd flatten_interior(const Field2D& f) const {
        Eigen::VectorXd u(static_cast<Eigen::Index>(nx_ * ny_));
        for (std::size_t j = 1; j <= ny_; ++j)
            for (std::size_t i = 1; i <= nx_; ++i)
                u[flat(i, j)] = f(i, j);
        return u;
    }

    /// Contribution of the field's rim values through both operators,
    /// unscaled (zero under homogeneous Dirichlet).
    Eigen::VectorXd boundary_load(const Field2D& f) const {
        Eigen::VectorXd load = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(nx_ * ny_));
        for (std::size_t j = 1; j <= ny_; ++j)
            for (std::size_t i = 1; i <= nx_; ++i) {
                const auto r = static_cast<Eigen::Index>(i - 1);
                load[flat(i, j)] += opx_.boundary_lo[r] * f(0, j)
                                    + opx_.boundary_hi[r] * f(nx_ + 1, j);
            }
        for (std::size_t i = 1; i <= nx_; ++i)
            for (std::size_t j = 1; j <= ny_; ++j) {
                const auto r = static_cast<Eigen::Index>(j - 1);
                load[flat(i, j)] += opy_.boundary_lo[r] * f(i, 0)
                                    + opy_.boundary_hi[r] * f(i, ny_ + 1);
            }
        return load;
    }

private:
    std::size_t nx_, ny_;
    OperatorMatrix opx_, opy_;
    Eigen::MatrixXd combined_, matrix_;
};

/// One full-matrix Crank-Nicolson step (no ADI splitting) with the same
/// half-step reaction predictor as the ADI stepper. Dirichlet data is
/// time-independent, read from the state's rim.
inline SivState unsplit_cn_step(const SivParams& p, const SchemeConfig& cfg,
                                const SivState& state_n) {
    if (cfg.nx * cfg.ny > kGlobalSystemGuard)
        throw std::invalid_argument("unsplit_cn_step: grid exceeds the dense-assembly guard");
    const std::array<Field2D, 3> rh = half_step_reaction(p, state_n, cfg.dt);
    const double c = cfg.dt / 2.0;

    SivState next = state_n;
    for (Compartment comp : all_compartments) {
        const auto k = static_cast<std::size_t>(comp);
        const Field2D& f = state_n.field(comp);
        GlobalSystem sys(cfg, p, comp);
        const Eigen::VectorXd u0 = sys.flatten_interior(f);
        const Eigen::VectorXd g = sys.flatten_interior(rh[k]);
        Eigen::VectorXd rhs = u0 + c * (sys.combined_operator() * u0)
                              + 2.0 * c * sys.boundary_load(f) + cfg.dt * g;
        Eigen::VectorXd u1 = sys.matrix().partialPivLu().solve(rhs);
        Field2D& out = next.field(comp);
        for (std::size_t j = 1; j <= cfg.ny; ++j)
            for (std::size_t i = 1; i <= cfg.nx; ++i)
                out(i, j) = u1[sys.flat(i, j)];
    }
    return next;
}

/// Forward-Euler time integration with the same spatial operators, the
/// convergence target for time-refinement studies. Explicit stability
/// requires roughly dt_fine <= h^alpha / (4 max coeff); a blow-up past
/// |u| = 1e6 aborts with a diagnostic.
inline SivState explicit_reference(const SivParams& p, const SchemeConfig& cfg,
                                   const SivState& state_0, double t_end,
                                   double dt_fine) {
    if (!(dt_fine > 0.0))
        throw std::invalid_argument("explicit_reference: dt_fine must be > 0");
    const std::size_t nx = cfg.nx, ny = cfg.ny;
    const GrunwaldWeights wx = grunwald_weights(cfg.alpha1, std::max(nx, ny) + 3);
    const GrunwaldWeights wy = grunwald_weights(cfg.alpha2, std::max(nx, ny) + 3);
    std::array<OperatorMatrix, 3> mx, my;
    for (Compartment c : all_compartments) {
        const auto k = static_cast<std::size_t>(c);
        FractionalOperator xm(cfg.alpha1, Side::minus, Axis::x, cfg.dx(), p.diff_x[k]);
        FractionalOperator xp(cfg.alpha1, Side::plus, Axis::x, cfg.dx(), p.diff_x[k]);
        FractionalOperator ym(cfg.alpha2, Side::minus, Axis::y, cfg.dy(), p.diff_y[k]);
        FractionalOperator yp(cfg.alpha2, Side::plus, Axis::y, cfg.dy(), p.diff_y[k]);
        mx[k] = combined_matrix(xm, xp, wx, 1, nx, cfg.r1);
        my[k] = combined_matrix(ym, yp, wy, 1, ny, cfg.r2);
    }

    const auto nsteps = static_cast<std::size_t>(std::llround(t_end / dt_fine));
    SivState state = state_0;
    SivState next = state_0;
    for (std::size_t n = 0; n < nsteps; ++n) {
        for (Compartment c : all_compartments) {
            const auto k = static_cast<std::size_t>(c);
            const Field2D& f = state.field(c);
            Field2D& out = next.field(c);
            // x operator per row
            Eigen::MatrixXd lap(static_cast<Eigen::Index>(nx),
                                static_cast<Eigen::Index>(ny));
            for (std::size_t j = 1; j <= ny; ++j) {
                Eigen::Map<const Eigen::VectorXd> row(f.row(j).data() + 1,
                                                      static_cast<Eigen::Index>(nx));
                lap.col(static_cast<Eigen::Index>(j - 1)) =
                    mx[k].interior * row + f(0, j) * mx[k].boundary_lo
                    + f(nx + 1, j) * mx[k].boundary_hi;
            }
            // y operator per column
            for (std::size_t i = 1; i <= nx; ++i) {
                Eigen::VectorXd col(static_cast<Eigen::Index>(ny));
                for (std::size_t j = 1; j <= ny; ++j)
                    col[static_cast<Eigen::Index>(j - 1)] = f(i, j);
                Eigen::VectorXd r = my[k].interior * col + f(i, 0) * my[k].boundary_lo
                                    + f(i, ny + 1) * my[k].boundary_hi;
                lap.row(static_cast<Eigen::Index>(i - 1)) += r.transpose();
            }
            for (std::size_t j = 1; j <= ny; ++j)
                for (std::size_t i = 1; i <= nx; ++i) {
                    const ReactionRates g =
                        reaction_terms(p, state.s(i, j), state.i(i, j), state.v(i, j));
                    const double gx = (c == Compartment::S)   ? g.s
                                      : (c == Compartment::I) ? g.i
                                                              : g.v;
                    out(i, j) = f(i, j)
                                + dt_fine * (lap(static_cast<Eigen::Index>(i - 1),
                                                 static_cast<Eigen::Index>(j - 1))
                                             + gx);
                }
        }
        std::swap(state, next);
        const double m = std::max({state.s.max_abs(), state.i.max_abs(), state.v.max_abs()});
        if (m > 1e6)
            throw SolverError("explicit_reference: instability detected at step "
                              + std::to_string(n + 1) + " (t = "
                              + std::to_string((static_cast<double>(n) + 1.0) * dt_fine)
                              + "), field magnitude " + std::to_string(m));
    }
    return state;
}

} // namespace fradi
