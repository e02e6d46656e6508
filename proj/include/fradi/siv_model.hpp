#pragma once

#include <array>
#include <cstddef>
#include <stdexcept>

#include "fradi/field.hpp"

namespace fradi {

enum class Compartment : std::size_t { S = 0, I = 1, V = 2 };

inline constexpr std::array<Compartment, 3> all_compartments{
    Compartment::S, Compartment::I, Compartment::V};

inline const char* compartment_name(Compartment c) {
    switch (c) {
        case Compartment::S: return "S";
        case Compartment::I: return "I";
        default: return "V";
    }
}

/// Epidemic rate constants and per-compartment diffusion coefficients.
///
/// mu    host birth/death rate        [1/day]
/// beta  vector-to-host infection rate [1/day]
/// gamma host recovery rate           [1/day]
/// theta host-to-vector infection rate [1/day]
/// nu    vector birth/death rate      [1/day]
/// diff_x/diff_y hold a^X resp. b^X for X in {S, I, V}  [length^alpha/day]
struct SivParams {
    double mu = 0.0;
    double beta = 0.0;
    double gamma = 0.0;
    double theta = 0.0;
    double nu = 0.0;
    std::array<double, 3> diff_x{0.0, 0.0, 0.0};
    std::array<double, 3> diff_y{0.0, 0.0, 0.0};

    void validate() const {
        for (double v : {mu, beta, gamma, theta, nu})
            if (v < 0.0) throw std::invalid_argument("SivParams: rates must be >= 0");
        for (std::size_t k = 0; k < 3; ++k)
            if (diff_x[k] < 0.0 || diff_y[k] < 0.0)
                throw std::invalid_argument("SivParams: diffusion coefficients must be >= 0");
    }
};

struct ReactionRates {
    double s, i, v;
};

/// Pointwise reaction terms of the SIV system:
///   gS = mu (1 - s) - beta s v
///   gI = beta s v - (mu + gamma) i
///   gV = theta (1 - v) i - nu v
/// Also the right-hand side of the spatially homogeneous ODE reference.
inline ReactionRates reaction_terms(const SivParams& p, double s, double i, double v) {
    return {p.mu * (1.0 - s) - p.beta * s * v,
            p.beta * s * v - (p.mu + p.gamma) * i,
            p.theta * (1.0 - v) * i - p.nu * v};
}

/// The three compartment fields on one shared grid.
struct SivState {
    Field2D s, i, v;

    SivState() = default;
    SivState(std::size_t nx, std::size_t ny) : s(nx, ny), i(nx, ny), v(nx, ny) {}

    Field2D& field(Compartment c) {
        switch (c) {
            case Compartment::S: return s;
            case Compartment::I: return i;
            default: return v;
        }
    }
    const Field2D& field(Compartment c) const {
        switch (c) {
            case Compartment::S: return s;
            case Compartment::I: return i;
            default: return v;
        }
    }

    bool consistent() const { return s.same_shape(i) && s.same_shape(v); }
    std::size_t nx() const { return s.nx(); }
    std::size_t ny() const { return s.ny(); }
};

/// Reaction terms applied pointwise over the interior; boundary points
/// carry zero (they are Dirichlet-fixed, not evolved by the reaction).
inline std::array<Field2D, 3> reaction_field(const SivParams& p, const SivState& state) {
    if (!state.consistent())
        throw std::invalid_argument("reaction_field: compartment grids do not match");
    const std::size_t nx = state.nx(), ny = state.ny();
    std::array<Field2D, 3> out{Field2D(nx, ny), Field2D(nx, ny), Field2D(nx, ny)};
    for (std::size_t j = 1; j <= ny; ++j)
        for (std::size_t i = 1; i <= nx; ++i) {
            const ReactionRates g = reaction_terms(p, state.s(i, j), state.i(i, j),
                                                   state.v(i, j));
            out[0](i, j) = g.s;
            out[1](i, j) = g.i;
            out[2](i, j) = g.v;
        }
    return out;
}

} // namespace fradi
