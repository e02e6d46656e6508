#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "fradi/adi_stepper.hpp"
#include "fradi/errors.hpp"
#include "fradi/siv_model.hpp"
#include "fradi/unsplit_oracle.hpp"

namespace fradi {

/// A complete simulation request: scheme, rates, horizon, outputs.
struct Scenario {
    enum class Mode { fractional, classical };
    enum class Init { paper, uniform };

    SchemeConfig scheme;
    SivParams params;
    double t_end = 0.0;
    std::vector<double> snapshot_times;
    std::filesystem::path output_dir = "out";
    Mode mode = Mode::fractional;
    Init init = Init::paper;
    double init_s = 1.0, init_i = 0.0, init_v = 0.0;
    double front_threshold = 1e-4;
    int threads = 1;
    bool params_are_defaults = false; // demo values, not taken from any source

    void validate() const {
        scheme.validate();
        params.validate();
        if (!(t_end >= 0.0))
            throw ConfigError("scenario: t_end must be >= 0");
        for (std::size_t k = 0; k < snapshot_times.size(); ++k) {
            if (snapshot_times[k] < 0.0 || snapshot_times[k] > t_end)
                throw ConfigError("scenario: snapshot times must lie in [0, t_end]");
            if (k > 0 && !(snapshot_times[k] > snapshot_times[k - 1]))
                throw ConfigError("scenario: snapshot times must be strictly increasing");
        }
        if (!(front_threshold > 0.0))
            throw ConfigError("scenario: front_threshold must be > 0");
        if (threads < 1)
            throw ConfigError("scenario: threads must be >= 1");
    }
};

struct SnapshotMetrics {
    double total_mass = 0.0;   // sum * dx * dy over the full grid
    double max_value = 0.0;
    double front_radius = 0.0; // farthest cell >= threshold from the grid midpoint
};

/// One written output field with its derived metrics.
struct SnapshotRecord {
    double time = 0.0;
    Compartment compartment = Compartment::S;
    Field2D grid; // full field including boundary
    SnapshotMetrics metrics;
    std::filesystem::path file;
};

/// Midpoint grid index used for seeding and the front-radius metric:
/// floor(N/2) per direction, N = nx + 1 (deterministic on even grids).
inline std::size_t midpoint_index(std::size_t n_interior) {
    return (n_interior + 1) / 2;
}

/// The built-in initial conditions: I = 0.1 at the grid midpoint and 0
/// elsewhere, S = 0.9 at the midpoint and 1 elsewhere, V = 0 everywhere,
/// boundary rim all zero.
inline SivState paper_initial_conditions(const SchemeConfig& cfg) {
    if (cfg.nx < 3 || cfg.ny < 3)
        throw ConfigError("paper_initial_conditions: grid too small (need nx, ny >= 3)");
    SivState state(cfg.nx, cfg.ny);
    for (std::size_t j = 1; j <= cfg.ny; ++j)
        for (std::size_t i = 1; i <= cfg.nx; ++i)
            state.s(i, j) = 1.0;
    const std::size_t mi = midpoint_index(cfg.nx);
    const std::size_t mj = midpoint_index(cfg.ny);
    state.s(mi, mj) = 0.9;
    state.i(mi, mj) = 0.1;
    return state;
}

inline SnapshotMetrics compute_metrics(const Field2D& f, const SchemeConfig& cfg,
                                       double threshold) {
    SnapshotMetrics m;
    double sum = 0.0;
    for (double v : f.data()) {
        sum += v;
        m.max_value = std::max(m.max_value, v);
    }
    m.total_mass = sum * cfg.dx() * cfg.dy();
    const double xm = cfg.x_low + static_cast<double>(midpoint_index(cfg.nx)) * cfg.dx();
    const double ym = cfg.y_low + static_cast<double>(midpoint_index(cfg.ny)) * cfg.dy();
    for (std::size_t j = 0; j < f.points_y(); ++j)
        for (std::size_t i = 0; i < f.points_x(); ++i)
            if (f(i, j) >= threshold) {
                const double x = cfg.x_low + static_cast<double>(i) * cfg.dx();
                const double y = cfg.y_low + static_cast<double>(j) * cfg.dy();
                m.front_radius = std::max(m.front_radius,
                                          std::hypot(x - xm, y - ym));
            }
    return m;
}

// ---------------------------------------------------------------------
// snapshot files: header line "nx ny xL xH yL yH time", then ny rows of
// nx space-separated values with 17 significant digits (lossless for
// binary64). nx, ny count the written points per row/column, i.e. the
// full grid including boundary.
// ---------------------------------------------------------------------

inline std::string snapshot_filename(double time, Compartment c) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "snapshot_%s_t%.6f.txt", compartment_name(c), time);
    return buf;
}

inline void write_snapshot(const std::filesystem::path& path, const Field2D& f,
                           const SchemeConfig& cfg, double time) {
    std::ofstream out(path);
    if (!out)
        throw ConfigError("write_snapshot: cannot open " + path.string());
    char buf[512];
    std::snprintf(buf, sizeof(buf), "%zu %zu %.17g %.17g %.17g %.17g %.17g\n",
                  f.points_x(), f.points_y(), cfg.x_low, cfg.x_high, cfg.y_low,
                  cfg.y_high, time);
    out << buf;
    for (std::size_t j = 0; j < f.points_y(); ++j) {
        for (std::size_t i = 0; i < f.points_x(); ++i) {
            std::snprintf(buf, sizeof(buf), "%.17g", f(i, j));
            out << buf << (i + 1 < f.points_x() ? ' ' : '\n');
        }
    }
    if (!out)
        throw ConfigError("write_snapshot: failed writing " + path.string());
}

struct LoadedSnapshot {
    Field2D grid;
    double x_low, x_high, y_low, y_high;
    double time;
};

inline LoadedSnapshot read_snapshot(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in)
        throw ConfigError("read_snapshot: cannot open " + path.string());
    std::size_t px = 0, py = 0;
    LoadedSnapshot snap{};
    in >> px >> py >> snap.x_low >> snap.x_high >> snap.y_low >> snap.y_high >> snap.time;
    if (!in || px < 2 || py < 2)
        throw ConfigError("read_snapshot: malformed header in " + path.string());
    snap.grid = Field2D(px - 2, py - 2);
    for (std::size_t j = 0; j < py; ++j)
        for (std::size_t i = 0; i < px; ++i)
            if (!(in >> snap.grid(i, j)))
                throw ConfigError("read_snapshot: truncated data in " + path.string());
    return snap;
}

// ---------------------------------------------------------------------
// scenario files: flat "key = value" lines, '#' starts a comment,
// comma-separated arrays. See cli_key_help() for the key list.
// ---------------------------------------------------------------------

namespace detail {

inline double parse_double(const std::string& key, const std::string& value) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(value, &pos);
        while (pos < value.size() && std::isspace(static_cast<unsigned char>(value[pos])))
            ++pos;
        if (pos != value.size())
            throw ConfigError("");
        return v;
    } catch (const std::exception&) {
        throw ConfigError("scenario: key '" + key + "' has non-numeric value '" + value + "'");
    }
}

inline std::size_t parse_size(const std::string& key, const std::string& value) {
    const double v = parse_double(key, value);
    if (v < 0 || v != std::floor(v))
        throw ConfigError("scenario: key '" + key + "' must be a non-negative integer");
    return static_cast<std::size_t>(v);
}

} // namespace detail

inline Scenario parse_scenario(std::istream& in) {
    std::map<std::string, std::string> kv;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos)
            line.erase(hash);
        const auto strip = [](std::string s) {
            const auto b = s.find_first_not_of(" \t\r");
            const auto e = s.find_last_not_of(" \t\r");
            return b == std::string::npos ? std::string{} : s.substr(b, e - b + 1);
        };
        if (strip(line).empty())
            continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("scenario: line " + std::to_string(lineno)
                              + " is not of the form 'key = value'");
        const std::string key = strip(line.substr(0, eq));
        const std::string value = strip(line.substr(eq + 1));
        if (key.empty())
            throw ConfigError("scenario: empty key on line " + std::to_string(lineno));
        if (!kv.emplace(key, value).second)
            throw ConfigError("scenario: duplicate key '" + key + "'");
    }

    Scenario sc;
    auto take = [&](const char* key) -> std::optional<std::string> {
        auto it = kv.find(key);
        if (it == kv.end())
            return std::nullopt;
        std::string v = it->second;
        kv.erase(it);
        return v;
    };
    auto need = [&](const char* key) {
        auto v = take(key);
        if (!v)
            throw ConfigError(std::string("scenario: missing required key '") + key + "'");
        return *v;
    };
    auto opt_double = [&](const char* key, double dflt) {
        auto v = take(key);
        return v ? detail::parse_double(key, *v) : dflt;
    };

    sc.scheme.nx = detail::parse_size("nx", need("nx"));
    sc.scheme.ny = detail::parse_size("ny", need("ny"));
    sc.scheme.dt = detail::parse_double("dt", need("dt"));
    sc.t_end = detail::parse_double("t_end", need("t_end"));
    sc.scheme.alpha1 = opt_double("alpha1", 2.0);
    sc.scheme.alpha2 = opt_double("alpha2", 2.0);
    sc.scheme.r1 = opt_double("r1", 0.5);
    sc.scheme.r2 = opt_double("r2", 0.5);
    sc.scheme.x_low = opt_double("x_low", 0.0);
    sc.scheme.x_high = opt_double("x_high", 1.0);
    sc.scheme.y_low = opt_double("y_low", 0.0);
    sc.scheme.y_high = opt_double("y_high", 1.0);
    sc.params.mu = opt_double("mu", 0.0);
    sc.params.beta = opt_double("beta", 0.0);
    sc.params.gamma = opt_double("gamma", 0.0);
    sc.params.theta = opt_double("theta", 0.0);
    sc.params.nu = opt_double("nu", 0.0);
    sc.params.diff_x = {opt_double("diff_s_x", 0.0), opt_double("diff_i_x", 0.0),
                        opt_double("diff_v_x", 0.0)};
    sc.params.diff_y = {opt_double("diff_s_y", 0.0), opt_double("diff_i_y", 0.0),
                        opt_double("diff_v_y", 0.0)};
    sc.front_threshold = opt_double("front_threshold", 1e-4);
    sc.init_s = opt_double("init_s", 1.0);
    sc.init_i = opt_double("init_i", 0.0);
    sc.init_v = opt_double("init_v", 0.0);
    if (auto v = take("threads"))
        sc.threads = static_cast<int>(detail::parse_size("threads", *v));
    if (auto v = take("output_dir"))
        sc.output_dir = *v;
    if (auto v = take("mode")) {
        if (*v == "fractional")
            sc.mode = Scenario::Mode::fractional;
        else if (*v == "classical")
            sc.mode = Scenario::Mode::classical;
        else
            throw ConfigError("scenario: mode must be 'fractional' or 'classical'");
    }
    if (auto v = take("init")) {
        if (*v == "paper")
            sc.init = Scenario::Init::paper;
        else if (*v == "uniform")
            sc.init = Scenario::Init::uniform;
        else
            throw ConfigError("scenario: init must be 'paper' or 'uniform'");
    }
    if (auto v = take("snapshot_times")) {
        std::stringstream ss(*v);
        std::string item;
        while (std::getline(ss, item, ','))
            sc.snapshot_times.push_back(detail::parse_double("snapshot_times", item));
    }
    if (auto v = take("params_are_defaults"))
        sc.params_are_defaults = (*v == "true" || *v == "1");

    if (!kv.empty())
        throw ConfigError("scenario: unknown key '" + kv.begin()->first + "'");

    if (sc.mode == Scenario::Mode::classical) {
        sc.scheme.alpha1 = 2.0;
        sc.scheme.alpha2 = 2.0;
    }
    if (sc.snapshot_times.empty())
        sc.snapshot_times.push_back(sc.t_end);
    try {
        sc.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    return sc;
}

inline Scenario parse_scenario_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in)
        throw ConfigError("scenario: cannot open " + path.string());
    return parse_scenario(in);
}

inline SivState initial_state(const Scenario& sc) {
    if (sc.init == Scenario::Init::paper)
        return paper_initial_conditions(sc.scheme);
    SivState state(sc.scheme.nx, sc.scheme.ny);
    for (std::size_t j = 1; j <= sc.scheme.ny; ++j)
        for (std::size_t i = 1; i <= sc.scheme.nx; ++i) {
            state.s(i, j) = sc.init_s;
            state.i(i, j) = sc.init_i;
            state.v(i, j) = sc.init_v;
        }
    return state;
}

namespace detail {

inline void write_manifest(const Scenario& sc, const std::vector<SnapshotRecord>& records,
                           std::size_t total_steps, const std::string& solver) {
    nlohmann::json j;
    j["solver"] = solver;
    j["scheme"] = {{"alpha1", sc.scheme.alpha1}, {"alpha2", sc.scheme.alpha2},
                   {"r1", sc.scheme.r1},         {"r2", sc.scheme.r2},
                   {"dt", sc.scheme.dt},         {"nx", sc.scheme.nx},
                   {"ny", sc.scheme.ny},
                   {"domain", {sc.scheme.x_low, sc.scheme.x_high, sc.scheme.y_low,
                               sc.scheme.y_high}}};
    j["params"] = {{"mu", sc.params.mu},       {"beta", sc.params.beta},
                   {"gamma", sc.params.gamma}, {"theta", sc.params.theta},
                   {"nu", sc.params.nu},       {"diff_x", sc.params.diff_x},
                   {"diff_y", sc.params.diff_y}};
    j["params_provenance"] = sc.params_are_defaults
                                 ? "implementer-chosen defaults"
                                 : "scenario file";
    j["mode"] = sc.mode == Scenario::Mode::classical ? "classical" : "fractional";
    j["t_end"] = sc.t_end;
    j["total_steps"] = total_steps;
    j["front_threshold"] = sc.front_threshold;
    j["snapshots"] = nlohmann::json::array();
    for (const auto& r : records)
        j["snapshots"].push_back({{"time", r.time},
                                  {"compartment", compartment_name(r.compartment)},
                                  {"file", r.file.filename().string()},
                                  {"total_mass", r.metrics.total_mass},
                                  {"max_value", r.metrics.max_value},
                                  {"front_radius", r.metrics.front_radius}});
    std::ofstream out(sc.output_dir / "manifest.json");
    if (!out)
        throw ConfigError("run: cannot write manifest in " + sc.output_dir.string());
    out << j.dump(2) << '\n';
}

template <typename StepFn>
std::vector<SnapshotRecord> run_loop(const Scenario& sc, SivState state, StepFn&& do_step,
                                     const std::string& solver) {
    std::filesystem::create_directories(sc.output_dir);
    const std::size_t total_steps =
        static_cast<std::size_t>(std::llround(sc.t_end / sc.scheme.dt));
    // nearest-step alignment of the requested snapshot times
    std::vector<std::size_t> snap_steps;
    for (double t : sc.snapshot_times)
        snap_steps.push_back(std::min<std::size_t>(
            total_steps, static_cast<std::size_t>(std::llround(t / sc.scheme.dt))));

    std::vector<SnapshotRecord> records;
    auto emit = [&](std::size_t step_index, double requested_time) {
        const double t = requested_time; // label snapshots with the requested time
        (void)step_index;
        for (Compartment c : all_compartments) {
            SnapshotRecord rec;
            rec.time = t;
            rec.compartment = c;
            rec.grid = state.field(c);
            rec.metrics = compute_metrics(rec.grid, sc.scheme, sc.front_threshold);
            rec.file = sc.output_dir / snapshot_filename(t, c);
            write_snapshot(rec.file, rec.grid, sc.scheme, t);
            records.push_back(std::move(rec));
        }
    };

    std::size_t next_snap = 0;
    while (next_snap < snap_steps.size() && snap_steps[next_snap] == 0)
        emit(0, sc.snapshot_times[next_snap++]);
    for (std::size_t n = 1; n <= total_steps; ++n) {
        try {
            state = do_step(state);
        } catch (const SolverError& e) {
            throw SolverError("run: step " + std::to_string(n) + " failed: " + e.what());
        }
        while (next_snap < snap_steps.size() && snap_steps[next_snap] == n)
            emit(n, sc.snapshot_times[next_snap++]);
    }
    write_manifest(sc, records, total_steps, solver);
    return records;
}

} // namespace detail

/// Runs the ADI solver over [0, t_end], writing one snapshot file per
/// (time, compartment) plus a manifest, and returns the records.
inline std::vector<SnapshotRecord> run(const Scenario& sc) {
    sc.validate();
    AdiWorkspace ws(sc.scheme, sc.params, sc.threads);
    return detail::run_loop(
        sc, initial_state(sc),
        [&](const SivState& s) { return step(ws, sc.scheme, sc.params, s); },
        "adi");
}

/// Runs the dense unsplit Crank-Nicolson reference solver instead of the
/// ADI scheme (grid sizes guarded by the dense-assembly limit).
inline std::vector<SnapshotRecord> run_oracle(const Scenario& sc) {
    sc.validate();
    if (sc.scheme.nx * sc.scheme.ny > kGlobalSystemGuard)
        throw ConfigError("oracle: grid exceeds the dense-assembly guard ("
                          + std::to_string(kGlobalSystemGuard) + " interior points)");
    return detail::run_loop(
        sc, initial_state(sc),
        [&](const SivState& s) { return unsplit_cn_step(sc.params, sc.scheme, s); },
        "unsplit-cn");
}

} // namespace fradi
