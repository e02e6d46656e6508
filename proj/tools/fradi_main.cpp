#include <CLI11.hpp>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <string>

#include <nlohmann/json.hpp>

#include "fradi/fradi.hpp"

namespace {

constexpr const char* kKeyHelp = R"(Scenario files are flat "key = value" text; '#' starts a comment.

Required keys:
  nx, ny            interior grid points per direction
  dt                time step [days]
  t_end             simulation horizon [days]

Scheme (defaults in parentheses):
  alpha1, alpha2    fractional orders in x and y, in (1,2]   (2.0)
  r1, r2            two-sidedness weights in [0,1]           (0.5)
  x_low, x_high     domain bounds in x                       (0, 1)
  y_low, y_high     domain bounds in y                       (0, 1)

Epidemic rates (all default 0):
  mu, beta, gamma, theta, nu

Diffusion coefficients (all default 0):
  diff_s_x, diff_s_y, diff_i_x, diff_i_y, diff_v_x, diff_v_y

Run control:
  snapshot_times    comma-separated output times in [0, t_end]  (t_end)
  output_dir        snapshot directory                          (out)
  mode              fractional | classical; classical forces alpha = 2
  init              paper | uniform                             (paper)
  init_s, init_i, init_v   uniform initial values               (1, 0, 0)
  front_threshold   front-radius level for the I field          (1e-4)
  threads           slice-solve worker count                    (1)
  params_are_defaults   true marks demo parameters in the manifest
)";

int thread_override(const fradi::Scenario& sc, int cli_threads) {
    if (cli_threads > 0)
        return cli_threads;
    if (const char* env = std::getenv("FRADI_THREADS")) {
        const int v = std::atoi(env);
        if (v > 0)
            return v;
    }
    return sc.threads;
}

int run_command(const std::string& file, const std::string& out_dir, bool classical,
                int threads, bool oracle) {
    fradi::Scenario sc = fradi::parse_scenario_file(file);
    if (!out_dir.empty())
        sc.output_dir = out_dir;
    if (classical) {
        sc.mode = fradi::Scenario::Mode::classical;
        sc.scheme.alpha1 = 2.0;
        sc.scheme.alpha2 = 2.0;
    }
    sc.threads = thread_override(sc, threads);
    const auto records = oracle ? fradi::run_oracle(sc) : fradi::run(sc);
    std::printf("wrote %zu snapshots to %s\n", records.size(),
                sc.output_dir.string().c_str());
    return 0;
}

int compare_command(const std::string& run_a, const std::string& run_b,
                    const std::string& metric) {
    auto load_metric = [&](const std::string& dir) {
        std::ifstream in(dir + "/manifest.json");
        if (!in)
            throw fradi::ConfigError("compare: cannot open " + dir + "/manifest.json");
        nlohmann::json j;
        in >> j;
        std::map<double, double> by_time;
        for (const auto& s : j.at("snapshots"))
            if (s.at("compartment") == "I")
                by_time[s.at("time").get<double>()] = s.at(metric).get<double>();
        return by_time;
    };
    const auto a = load_metric(run_a);
    const auto b = load_metric(run_b);
    std::printf("# metric=%s compartment=I\n# time  %s  %s\n", metric.c_str(),
                run_a.c_str(), run_b.c_str());
    for (const auto& [t, va] : a) {
        const auto it = b.find(t);
        if (it == b.end())
            continue;
        std::printf("%-10.6g %.10g %.10g\n", t, va, it->second);
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Coupled two-sided space-fractional SIV reaction-diffusion solver"};
    app.require_subcommand(1);
    app.footer(kKeyHelp);

    std::string scenario_file, out_dir;
    bool classical = false;
    int threads = 0;
    auto* run_cmd = app.add_subcommand("run", "Integrate a scenario with the ADI solver");
    run_cmd->add_option("scenario", scenario_file, "scenario file")->required();
    run_cmd->add_option("--out", out_dir, "output directory (overrides output_dir)");
    run_cmd->add_flag("--classical", classical, "force alpha1 = alpha2 = 2");
    run_cmd->add_option("--threads", threads,
                        "slice-solve workers (overrides FRADI_THREADS and the file)");

    std::string oracle_file, oracle_out;
    auto* oracle_cmd = app.add_subcommand(
        "oracle", "Integrate a scenario with the dense unsplit reference solver");
    oracle_cmd->add_option("scenario", oracle_file, "scenario file")->required();
    oracle_cmd->add_option("--out", oracle_out, "output directory");

    std::string run_a, run_b, metric = "front_radius";
    auto* cmp_cmd = app.add_subcommand("compare", "Tabulate a metric of two runs");
    cmp_cmd->add_option("runA", run_a, "first run directory")->required();
    cmp_cmd->add_option("runB", run_b, "second run directory")->required();
    cmp_cmd->add_option("--metric", metric, "front_radius | total_mass | max_value")
        ->check(CLI::IsMember({"front_radius", "total_mass", "max_value"}));

    CLI11_PARSE(app, argc, argv);

    try {
        if (run_cmd->parsed())
            return run_command(scenario_file, out_dir, classical, threads, false);
        if (oracle_cmd->parsed())
            return run_command(oracle_file, oracle_out, false, 0, true);
        return compare_command(run_a, run_b, metric);
    } catch (const fradi::ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 1;
    } catch (const fradi::SolverError& e) {
        std::fprintf(stderr, "solver failure: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}
